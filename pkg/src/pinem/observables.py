"""Quantitative outputs: energy transfer, spectra and widths, fringe spacings,
bunching, regime labels and drift-length searches."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.signal import find_peaks

from .bessel import sideband_coefficients
from .errors import CoverageError, ParameterError, ResolutionError
from .pipeline import simulate
from .propagation import POST, DriftSpec, PositionDensity, apply_drift, to_position
from .search import scan_maximize, scan_minimize
from .units import C_LIGHT, HBAR, BeamParameters, LaserParameters, decay_parameter
from .wavepacket import (
    MomentumGrid,
    MomentumState,
    Spectrum,
    apinem_spacing,
    auto_grid,
    bessel_truncation,
    gaussian_state,
    interpolate_momentum,
)

GAMMA0_HI = 2.0
GAMMA0_LO = 0.5


# --- energy transfer --------------------------------------------------------


def energy_transfer_analytic(g_mag, phi0, gamma0, photon_energy):
    """``2|g| hbar omega cos(phi0) exp(-gamma0^2 / 2)``."""
    if np.any(np.asarray(g_mag) < 0):
        raise ParameterError("g_mag must be non-negative")
    return 2.0 * g_mag * photon_energy * np.cos(phi0) * np.exp(-0.5 * np.asarray(gamma0) ** 2)


def _momentum_moments(obj) -> tuple[float, float, BeamParameters]:
    if isinstance(obj, MomentumState):
        w = obj.density * obj.grid.dp
        q = obj.grid.offsets
        return float(np.sum(w * q)), float(np.sum(w * q * q)), obj.beam
    if isinstance(obj, Spectrum):
        if obj.beam is None:
            raise ParameterError("spectrum carries no beam; cannot convert to momentum")
        beam = obj.beam
        if obj.axis_kind == "momentum":
            q = obj.axis
        else:
            q = beam.m_star * (np.sqrt(beam.v0**2 + 2.0 * obj.axis / beam.m_star) - beam.v0)
        total = np.trapezoid(obj.density, obj.axis)
        m1 = np.trapezoid(obj.density * q, obj.axis) / total
        m2 = np.trapezoid(obj.density * q * q, obj.axis) / total
        return float(m1), float(m2), beam
    raise TypeError(f"cannot take momentum moments of {type(obj).__name__}")


def energy_transfer_numeric(state, recoil: bool = False) -> float:
    """Mean kinetic-energy gain ``v0 <p - p0>`` of a state or spectrum (eV).

    With ``recoil=True`` the quadratic term ``<(p - p0)^2> / 2m*`` is added,
    measured against the initial Gaussian's ``sigma_p^2 / 2m*`` so that an
    untouched packet still reads zero.
    """
    m1, m2, beam = _momentum_moments(state)
    out = beam.v0 * m1
    if recoil:
        out += (m2 - beam.sigma_p**2) / (2.0 * beam.m_star)
    return float(out)


# --- spectra ----------------------------------------------------------------


def energy_axis(q: np.ndarray, beam: BeamParameters) -> np.ndarray:
    """``E - E0`` for momentum offsets ``q`` with the quadratic dispersion kept."""
    return beam.v0 * q + q * q / (2.0 * beam.m_star)


def momentum_spectrum(state: MomentumState) -> Spectrum:
    return Spectrum(state.grid.offsets, state.density.copy(), "momentum", beam=state.beam)


def to_energy(spec: Spectrum) -> Spectrum:
    if spec.axis_kind == "energy":
        return spec
    if spec.beam is None:
        raise ParameterError("spectrum carries no beam; cannot convert to energy")
    beam = spec.beam
    E = energy_axis(spec.axis, beam)
    dens = spec.density / (beam.v0 + spec.axis / beam.m_star)
    return Spectrum(E, dens, "energy", beam=beam)


def energy_spectrum(state: MomentumState) -> Spectrum:
    """EELS: probability per eV against ``E - E0``."""
    return to_energy(momentum_spectrum(state))


def spectral_width(spec: Spectrum) -> float:
    """RMS energy spread (eV)."""
    spec = to_energy(spec)
    total = np.trapezoid(spec.density, spec.axis)
    mean = np.trapezoid(spec.density * spec.axis, spec.axis) / total
    var = np.trapezoid(spec.density * (spec.axis - mean) ** 2, spec.axis) / total
    return float(math.sqrt(var))


def state_width(state: MomentumState) -> float:
    """RMS energy spread of a state by direct quadrature on its momentum grid."""
    w = state.density * state.grid.dp
    E = energy_axis(state.grid.offsets, state.beam)
    mean = np.sum(w * E)
    return float(math.sqrt(np.sum(w * (E - mean) ** 2)))


def fwhm(spec: Spectrum) -> float:
    """Full width at half maximum of the global peak, with linear edge interpolation."""
    spec = to_energy(spec)
    x, y = spec.axis, spec.density
    i = int(np.argmax(y))
    half = 0.5 * y[i]
    left = i
    while left > 0 and y[left - 1] >= half:
        left -= 1
    right = i
    while right < y.size - 1 and y[right + 1] >= half:
        right += 1

    def cross(j0, j1):
        if j0 < 0 or j0 >= y.size:
            return x[j1]
        return x[j0] + (half - y[j0]) * (x[j1] - x[j0]) / (y[j1] - y[j0])

    return float(cross(right + 1, right) - cross(left - 1, left))


def peak_position(spec: Spectrum) -> float:
    """Location of the global maximum, refined by a parabola through three samples."""
    i = int(np.argmax(spec.density))
    if 0 < i < spec.density.size - 1:
        y0, y1, y2 = spec.density[i - 1 : i + 2]
        denom = y0 - 2 * y1 + y2
        frac = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        return float(spec.axis[i] + frac * (spec.axis[i + 1] - spec.axis[i]))
    return float(spec.axis[i])


def density_l2_distance(a: Spectrum, b: Spectrum) -> float:
    """Relative L2 distance ``||a - b|| / ||b||`` of two densities on the same axis."""
    if a.axis.shape != b.axis.shape or not np.allclose(a.axis, b.axis, rtol=0, atol=1e-15):
        raise ParameterError("spectra are on different axes")
    diff = np.trapezoid((a.density - b.density) ** 2, a.axis)
    ref = np.trapezoid(b.density**2, b.axis)
    return float(math.sqrt(diff / ref))


def state_l2_distance(a: MomentumState, b: MomentumState) -> float:
    """``sqrt(sum |a - b|^2 dp)`` between two states on the same grid."""
    if a.grid != b.grid:
        raise ParameterError("states are on different grids")
    return float(math.sqrt(np.sum(np.abs(a.amplitudes - b.amplitudes) ** 2) * a.grid.dp))


def lpa_reference_density(beam: BeamParameters, laser: LaserParameters, grid: MomentumGrid) -> Spectrum:
    """Point-particle limit: the initial Gaussian rigidly shifted by ``2|g| dp cos(phi0)``."""
    shift = 2.0 * laser.g_mag * laser.delta_p(beam) * math.cos(laser.phi0)
    reach = abs(shift) + 8.0 * beam.sigma_p
    if reach > grid.half_width:
        raise CoverageError(f"shifted Gaussian reaches {reach:.4g}, beyond half width {grid.half_width:.4g}")
    q = grid.offsets
    dens = np.exp(-((q - shift) ** 2) / (2.0 * beam.sigma_p**2)) / math.sqrt(2.0 * math.pi * beam.sigma_p**2)
    dens /= dens.sum() * grid.dp
    return Spectrum(q, dens, "momentum", beam=beam)


def sideband_weights(state: MomentumState, laser: LaserParameters, orders) -> np.ndarray:
    """Probability in the windows ``[n dp - dp/2, n dp + dp/2)`` around each order."""
    dq = laser.delta_p(state.beam)
    q = state.grid.offsets
    w = state.density * state.grid.dp
    out = []
    for n in orders:
        sel = (q >= (n - 0.5) * dq) & (q < (n + 0.5) * dq)
        out.append(w[sel].sum())
    return np.array(out)


# --- spacing laws -----------------------------------------------------------


def sideband_spacing_pinem(beam: BeamParameters, laser: LaserParameters) -> float:
    """``2 pi hbar / (beta lambda)``, identical to ``hbar omega / v0``."""
    return 2.0 * math.pi * HBAR / (beam.beta * laser.wavelength)


def sideband_spacing_apinem(beam: BeamParameters, laser: LaserParameters, L0: float) -> float:
    """``beta lambda m* v0 / L0`` for a pre-interaction drift ``L0`` (nm)."""
    return apinem_spacing(beam, laser, L0)


@dataclass(frozen=True)
class FringeMeasurement:
    spacing: float
    peaks: np.ndarray
    gaps: np.ndarray


def sideband_envelope(beam: BeamParameters, laser: LaserParameters, q) -> np.ndarray:
    """Dephased sideband mixture of the initial Gaussian, ``sum_n J_n^2 G(q - n dp)``."""
    q = np.asarray(q, dtype=float)
    g = laser.g_mag
    n_max = bessel_truncation(g, 1e-16) if g > 0 else 0
    orders, coeffs = sideband_coefficients(2.0 * g, n_max)
    dq = laser.delta_p(beam)
    s2 = beam.sigma_p**2
    out = np.zeros_like(q)
    for n, c in zip(orders, coeffs):
        out += c * c * np.exp(-((q - n * dq) ** 2) / (2.0 * s2))
    return out / math.sqrt(2.0 * math.pi * s2)


def measure_fringe_spacing(
    state: MomentumState,
    laser: LaserParameters,
    central_fraction: float = 0.6,
    prominence: float = 0.3,
) -> FringeMeasurement:
    """Median fringe period (eV fs/nm) in the momentum density of ``state``.

    ``state`` must come from a Gaussian packet that went through one
    interaction with ``laser``.  Its density is divided by the dephased sideband
    mixture, which removes the Gaussian envelope that otherwise drags the peaks
    toward the centre.  Peaks are taken from the central ``central_fraction`` of
    the span where the envelope exceeds 1e-3 of its maximum, filtered by
    relative prominence, then refined on the band-limited interpolant.
    """
    grid = state.grid
    q = grid.offsets
    env = sideband_envelope(state.beam, laser, q)
    support = q[env >= 1e-3 * env.max()]
    centre = 0.5 * (support[0] + support[-1])
    half = 0.5 * central_fraction * (support[-1] - support[0])
    win = np.abs(q - centre) <= half
    ratio = np.zeros_like(q)
    ratio[win] = state.density[win] / env[win]
    span = ratio[win].max() - ratio[win].min()
    idx, _ = find_peaks(ratio, prominence=prominence * span)
    idx = idx[win[idx]]
    if idx.size < 2:
        raise CoverageError("fewer than two fringes inside the central window")

    psi = state.position_amplitudes()

    def neg_ratio(x):
        amp = interpolate_momentum(psi, grid, x)[0]
        return -(abs(amp) ** 2) / sideband_envelope(state.beam, laser, x)

    refined = []
    for i in idx:
        res = minimize_scalar(
            neg_ratio,
            bounds=(q[i] - grid.dp, q[i] + grid.dp),
            method="bounded",
            options={"xatol": 1e-10 * grid.dp},
        )
        refined.append(res.x)
    peaks = np.array(refined)
    gaps = np.diff(peaks)
    return FringeMeasurement(float(np.median(gaps)), peaks, gaps)


# --- bunching ---------------------------------------------------------------


def bunching_factor(density: PositionDensity, laser: LaserParameters) -> float:
    """First-harmonic bunching ``|<exp(2 pi i zeta / beta lambda)>|`` in [0, 1]."""
    period = density.v0 / C_LIGHT * laser.wavelength
    step = abs(density.zeta[1] - density.zeta[0])
    if step > 0.25 * period:
        raise ResolutionError(f"position step {step:.4g} nm does not resolve the {period:.4g} nm period")
    span = density.zeta[-1] - density.zeta[0]
    if span < 10.0 * period:
        raise CoverageError(f"density covers {span / period:.3g} optical periods, need 10")
    rho = density.density
    val = np.sum(rho * np.exp(2j * math.pi * density.zeta / period)) / np.sum(rho)
    return float(abs(val))


# --- regimes ----------------------------------------------------------------


@dataclass(frozen=True)
class RegimeLabel:
    label: str
    gamma0: float


def classify_regime(beam: BeamParameters, laser: LaserParameters) -> RegimeLabel:
    """Advisory label from the decay parameter; never used in computation."""
    g0 = decay_parameter(beam, laser)
    if g0 > GAMMA0_HI:
        label = "PINEM"
    elif g0 < GAMMA0_LO:
        label = "LPA"
    else:
        label = "transition"
    return RegimeLabel(label, g0)


# --- searches ---------------------------------------------------------------


@dataclass(frozen=True)
class FocusResult:
    L0_opt: float  # nm
    width_at_opt: float
    width_initial: float
    focusing_ratio: float


def focus_objective(beam, laser, grid):
    def width_at(L0):
        return state_width(simulate(beam, laser, L0=L0, grid=grid).after_interaction)

    return width_at


def find_optimal_focus(
    beam: BeamParameters,
    laser: LaserParameters,
    L0_range: tuple[float, float],
    grid: MomentumGrid | None = None,
    rel_tol: float = 1e-3,
) -> FocusResult:
    """Pre-interaction drift (nm) that minimises the RMS energy width."""
    lo, hi = L0_range
    if not 0.0 <= lo < hi:
        raise ParameterError(f"invalid L0 range {L0_range!r}")
    if grid is None:
        grid = auto_grid(beam, laser, L0_max=hi)
    width_at = focus_objective(beam, laser, grid)
    res = scan_minimize(width_at, lo, hi, rel_tol=rel_tol)
    w0 = state_width(gaussian_state(beam, grid))
    return FocusResult(res.x, res.value, w0, w0 / res.value)


@dataclass(frozen=True)
class BunchingResult:
    LD_opt: float  # nm
    factor: float
    degenerate: bool


def find_optimal_bunching(
    beam: BeamParameters,
    laser: LaserParameters,
    LD_range: tuple[float, float],
    L0: float = 0.0,
    grid: MomentumGrid | None = None,
    rel_tol: float = 1e-3,
) -> BunchingResult:
    """Post-interaction drift (nm) that maximises the first-harmonic bunching."""
    lo, hi = LD_range
    if not 0.0 <= lo < hi:
        raise ParameterError(f"invalid LD range {LD_range!r}")
    if grid is None:
        grid = auto_grid(beam, laser, L0_max=L0, LD_max=hi)
    after = simulate(beam, laser, L0=L0, grid=grid).after_interaction

    def factor_at(LD):
        return bunching_factor(to_position(apply_drift(after, DriftSpec(LD, POST))), laser)

    res = scan_maximize(factor_at, lo, hi, rel_tol=rel_tol, flat_tol=1e-3)
    return BunchingResult(res.x, res.value, res.degenerate)

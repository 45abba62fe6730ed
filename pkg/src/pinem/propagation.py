"""Free drift, comoving-frame densities and Wigner maps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CostError, CoverageError, ParameterError, ResolutionError
from .units import HBAR, drift_time
from .wavepacket import MomentumState, check_position_coverage, edge_mass

PRE = "pre_interaction"
POST = "post_interaction"

WIGNER_MAX_RESOLUTION = 2**11


@dataclass(frozen=True)
class DriftSpec:
    length: float  # nm
    placement: str = PRE

    def __post_init__(self):
        if not self.length >= 0.0:
            raise ParameterError(f"drift length must be non-negative, got {self.length!r}")
        if self.placement not in (PRE, POST):
            raise ParameterError(f"unknown drift placement {self.placement!r}")


def dispersion_phase(q: np.ndarray, t: float, m_star: float) -> np.ndarray:
    """Comoving-frame drift factor ``exp(-i q^2 t / (2 m* hbar))``."""
    return np.exp(-1j * q * q * t / (2.0 * m_star * HBAR))


def apply_drift(state: MomentumState, drift: DriftSpec) -> MomentumState:
    """Propagate freely over ``drift.length``.

    The full free phase is ``exp(-i [v0 q + q^2 / 2m*] t / hbar)``.  The linear
    part only translates the packet by ``v0 t`` and is absorbed by working in
    the comoving frame ``zeta = z - v0 t``, so only the dispersive quadratic part
    touches the amplitudes.  The momentum density is unchanged.
    """
    if drift.length == 0.0:
        return state
    t = drift_time(drift.length, state.beam)
    amps = state.amplitudes * dispersion_phase(state.grid.offsets, t, state.beam.m_star)
    if drift.placement == PRE:
        return state.with_amplitudes(amps, accumulated_pre_drift=state.accumulated_pre_drift + t)
    return state.with_amplitudes(amps, accumulated_post_drift=state.accumulated_post_drift + t)


@dataclass(frozen=True)
class PositionDensity:
    """Probability density over the comoving coordinate.

    ``zeta`` is in nm (positive = ahead of the reference electron);
    ``tau = -zeta / v0`` is the arrival-time offset in fs.
    """

    zeta: np.ndarray
    density: np.ndarray  # per nm
    drift_length: float
    v0: float

    @property
    def tau(self) -> np.ndarray:
        return -self.zeta / self.v0

    @property
    def density_tau(self) -> np.ndarray:
        return self.density * self.v0

    @property
    def total(self) -> float:
        return float(self.density.sum() * abs(self.zeta[1] - self.zeta[0]))

    def to_csv(self, path) -> None:
        order = np.argsort(self.tau)
        with open(path, "w") as fh:
            fh.write("tau_fs,density\n")
            for t, d in zip(self.tau[order], self.density_tau[order]):
                fh.write(f"{float(t)!r},{float(d)!r}\n")


def to_position(state: MomentumState) -> PositionDensity:
    """``|psi(zeta)|^2`` on the conjugate grid of the momentum samples."""
    psi = state.position_amplitudes()
    dens = np.abs(psi) ** 2
    if edge_mass(dens) > 1.0e-10:
        raise CoverageError(
            "position density reaches the window edge; refine the momentum grid"
        )
    return PositionDensity(
        zeta=state.grid.zeta,
        density=dens,
        drift_length=state.accumulated_post_drift * state.beam.v0,
        v0=state.beam.v0,
    )


@dataclass(frozen=True)
class WignerMap:
    z_axis: np.ndarray  # nm, comoving
    p_axis: np.ndarray  # momentum offset p - p0
    values: np.ndarray  # shape (len(z_axis), len(p_axis))
    imag_residue: float

    @property
    def dz(self) -> float:
        return float(self.z_axis[1] - self.z_axis[0])

    @property
    def dp(self) -> float:
        return float(self.p_axis[1] - self.p_axis[0])

    def momentum_marginal(self) -> np.ndarray:
        return self.values.sum(axis=0) * self.dz

    def position_marginal(self) -> np.ndarray:
        return self.values.sum(axis=1) * self.dp

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("z_nm,p,value\n")
            for i, z in enumerate(self.z_axis):
                for j, p in enumerate(self.p_axis):
                    fh.write(f"{float(z)!r},{float(p)!r},{float(self.values[i, j])!r}\n")


def _support(x: np.ndarray, dens: np.ndarray, tol: float = 1e-14) -> tuple[float, float]:
    cdf = np.cumsum(dens)
    cdf = cdf / cdf[-1]
    lo = int(np.searchsorted(cdf, tol))
    hi = int(np.searchsorted(cdf, 1.0 - tol))
    return float(x[lo]), float(x[min(hi, x.size - 1)])


def wigner(
    state: MomentumState,
    z_window: float | None = None,
    resolution: int = 1024,
) -> WignerMap:
    """Wigner function on a ``resolution x resolution`` grid.

    ``W(z, p) = (1 / pi hbar) integral psi*(z + y) psi(z - y) exp(2 i p y / hbar) dy``

    The position amplitude is resampled by band-limited interpolation onto
    ``resolution`` points spanning ``z_window`` (centred on the packet) with
    ``y`` on the same step, so the p-marginal is exact and the z-marginal is
    exact whenever the packet fits inside the window and the momentum band fits
    inside ``pi hbar / dz``.  The window is rectangular; the coverage checks
    below stand in for apodisation.
    """
    if resolution > WIGNER_MAX_RESOLUTION:
        raise CostError(f"resolution {resolution} exceeds the guard of {WIGNER_MAX_RESOLUTION}")
    if resolution < 16 or resolution % 2:
        raise ParameterError("resolution must be an even number >= 16")
    check_position_coverage(state)

    grid = state.grid
    q = grid.offsets
    zeta = grid.zeta
    psi_full = state.position_amplitudes()
    z_lo, z_hi = _support(zeta, np.abs(psi_full) ** 2)
    q_lo, q_hi = _support(q, state.density)
    z_c = 0.5 * (z_lo + z_hi)
    q_c = 0.5 * (q_lo + q_hi)
    if z_window is None:
        z_window = 1.1 * (z_hi - z_lo) + 4 * grid.dzeta
    M = resolution
    h = z_window / M
    band = (q_hi - q_lo) + 4 * grid.dp
    if band >= math.pi * HBAR / h:
        need = 1 << math.ceil(math.log2(z_window * band / (math.pi * HBAR)))
        raise ResolutionError(
            f"momentum band {band:.4g} needs at least {need} points across a "
            f"{z_window:.4g} nm window",
            required_samples=need,
        )

    x = z_c + (np.arange(M) - M // 2) * h
    inside = (zeta >= x[0] - 0.5 * h) & (zeta <= x[-1] + 0.5 * h)
    leak = 1.0 - float(np.sum(np.abs(psi_full[inside]) ** 2) / np.sum(np.abs(psi_full) ** 2))
    if leak > 1.0e-10:
        raise CoverageError(f"packet extends beyond the {z_window:.4g} nm Wigner window")

    # psi(x_j) from the momentum band by direct band-limited summation,
    # demodulated by the band centre; the summation band reaches amplitudes of
    # 1e-15 so its cut does not ripple into the map
    s_lo, s_hi = _support(q, state.density, tol=1e-30)
    band_mask = (q >= s_lo - 2 * grid.dp) & (q <= s_hi + 2 * grid.dp)
    qb = q[band_mask] - q_c
    phib = state.amplitudes[band_mask]
    kernel = np.exp(1j * np.outer(x, qb) / HBAR)
    psi = kernel @ phib * grid.dp / math.sqrt(2.0 * math.pi * HBAR)

    # products psi*(x_j + k h) psi(x_j - k h), k in [-M/2, M/2)
    k = np.arange(M) - M // 2
    j = np.arange(M)[:, None]
    jp = j + k[None, :]
    jm = j - k[None, :]
    valid = (jp >= 0) & (jp < M) & (jm >= 0) & (jm < M)
    valid[:, 0] = False  # k = -M/2 has no Hermitian partner
    prod = np.zeros((M, M), dtype=complex)
    prod[valid] = np.conj(psi[jp[valid]]) * psi[jm[valid]]

    # sum_k prod[j, k] exp(2 i p_m k h / hbar), p_m = (m - M/2) pi hbar / (M h)
    spec = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(prod, axes=1), axis=1), axes=1) * M
    values = spec * h / (math.pi * HBAR)
    p_axis = q_c + (np.arange(M) - M // 2) * math.pi * HBAR / (M * h)
    residue = float(np.max(np.abs(values.imag)))
    return WignerMap(z_axis=x, p_axis=p_axis, values=values.real.copy(), imag_residue=residue)


def position_amplitude_at(state: MomentumState, z: np.ndarray) -> np.ndarray:
    """Band-limited evaluation of ``psi`` at arbitrary comoving positions."""
    q = state.grid.offsets
    keep = state.density > 1e-30 * state.density.max()
    kern = np.exp(1j * np.outer(np.atleast_1d(z), q[keep]) / HBAR)
    return kern @ state.amplitudes[keep] * state.grid.dp / math.sqrt(2.0 * math.pi * HBAR)

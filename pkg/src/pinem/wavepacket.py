"""Momentum-grid representation of the electron state.

The state is stored as complex amplitudes ``phi(q)`` on a uniform grid of
momentum offsets ``q = p - p0``.  Position space (comoving coordinate ``zeta``)
is always derived by FFT, with the continuum convention

    psi(zeta) = (2 pi hbar)^(-1/2) * integral phi(q) exp(i q zeta / hbar) dq.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bessel import tail_weights
from .errors import CoverageError, ParameterError, ResolutionError
from .units import HBAR, BeamParameters, LaserParameters, drift_time

MIN_SAMPLES = 2**10
MAX_SAMPLES = 2**22
COVERAGE_SIGMAS = 8.0


@dataclass(frozen=True)
class GridOptions:
    """Safety margins used by :func:`auto_grid`."""

    sigma_margin: float = 8.0
    sideband_margin: int = 4
    feature_oversample: int = 16
    coverage_tol: float = 1.0e-12
    min_samples: int = MIN_SAMPLES
    max_samples: int = MAX_SAMPLES


@dataclass(frozen=True)
class MomentumGrid:
    p_center: float
    half_width: float
    n_samples: int

    def __post_init__(self):
        n = self.n_samples
        if n < MIN_SAMPLES or n & (n - 1):
            raise ParameterError(f"n_samples must be a power of two >= {MIN_SAMPLES}, got {n}")
        if not self.half_width > 0.0:
            raise ParameterError("half_width must be positive")

    @property
    def dp(self) -> float:
        return 2.0 * self.half_width / self.n_samples

    @property
    def offsets(self) -> np.ndarray:
        """Momentum offsets ``p - p0``; index ``n/2`` is exactly zero."""
        return (np.arange(self.n_samples) - self.n_samples // 2) * self.dp

    @property
    def dzeta(self) -> float:
        return 2.0 * math.pi * HBAR / (self.n_samples * self.dp)

    @property
    def zeta(self) -> np.ndarray:
        """Conjugate comoving coordinate (nm)."""
        return (np.arange(self.n_samples) - self.n_samples // 2) * self.dzeta

    @property
    def position_window(self) -> float:
        return self.n_samples * self.dzeta

    def refined(self, factor: int = 2) -> "MomentumGrid":
        """Same momentum span with ``factor`` times the samples."""
        return MomentumGrid(self.p_center, self.half_width, self.n_samples * factor)


@dataclass(frozen=True)
class MomentumState:
    grid: MomentumGrid
    amplitudes: np.ndarray
    beam: BeamParameters
    accumulated_pre_drift: float = 0.0
    accumulated_post_drift: float = 0.0
    interacted: bool = False
    dropped_weight: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n_samples,):
            raise ParameterError("amplitude array does not match the grid")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm(self) -> float:
        return float(self.density.sum() * self.grid.dp)

    def with_amplitudes(self, amplitudes, **changes) -> "MomentumState":
        return replace(self, amplitudes=amplitudes, **changes)

    def position_amplitudes(self) -> np.ndarray:
        return momentum_to_position(self.amplitudes, self.grid)

    def amplitude_at(self, q) -> np.ndarray:
        """Band-limited interpolation of ``phi`` at arbitrary offsets ``q``."""
        return interpolate_momentum(self.position_amplitudes(), self.grid, q)


@dataclass(frozen=True)
class Spectrum:
    """A normalised one-dimensional distribution over momentum or energy offsets.

    ``axis_kind`` is ``"momentum"`` (``p - p0`` in eV fs/nm) or ``"energy"``
    (``E - E0`` in eV, full quadratic dispersion).
    """

    axis: np.ndarray
    density: np.ndarray
    axis_kind: str
    beam: BeamParameters | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.axis_kind not in ("momentum", "energy"):
            raise ParameterError(f"unknown axis kind {self.axis_kind!r}")

    @property
    def total(self) -> float:
        return float(np.trapezoid(self.density, self.axis))

    def mean(self) -> float:
        return float(np.trapezoid(self.density * self.axis, self.axis) / self.total)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("axis_kind,axis,density\n")
            for a, d in zip(self.axis, self.density):
                fh.write(f"{self.axis_kind},{float(a)!r},{float(d)!r}\n")

    @classmethod
    def from_csv(cls, path) -> "Spectrum":
        kinds, axis, dens = [], [], []
        with open(path) as fh:
            header = fh.readline().strip()
            if header != "axis_kind,axis,density":
                raise ParameterError(f"unexpected spectrum header {header!r}")
            for line in fh:
                k, a, d = line.strip().split(",")
                kinds.append(k)
                axis.append(float(a))
                dens.append(float(d))
        if len(set(kinds)) != 1:
            raise ParameterError("mixed axis kinds in spectrum file")
        return cls(np.array(axis), np.array(dens), kinds[0])


# --- transforms -------------------------------------------------------------


def momentum_to_position(phi: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    scale = grid.dp * grid.n_samples / math.sqrt(2.0 * math.pi * HBAR)
    return scale * np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(phi)))


def position_to_momentum(psi: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    scale = grid.dzeta / math.sqrt(2.0 * math.pi * HBAR)
    return scale * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(psi)))


def shift_momentum(phi: np.ndarray, grid: MomentumGrid, shift: float) -> np.ndarray:
    """Return ``phi(q - shift)`` using a position-space phase ramp.

    Exact for any real ``shift`` as long as the state is localised inside the
    position window, which :func:`check_position_coverage` enforces.
    """
    if shift == 0.0:
        return np.array(phi, dtype=complex)
    psi = momentum_to_position(phi, grid)
    return position_to_momentum(psi * np.exp(1j * shift * grid.zeta / HBAR), grid)


def interpolate_momentum(psi: np.ndarray, grid: MomentumGrid, q) -> np.ndarray:
    """Evaluate the momentum amplitude at arbitrary ``q`` from position samples."""
    q = np.atleast_1d(np.asarray(q, dtype=float))
    zeta = grid.zeta
    keep = np.abs(psi) > 1e-18 * np.abs(psi).max()
    z = zeta[keep]
    vals = psi[keep]
    scale = grid.dzeta / math.sqrt(2.0 * math.pi * HBAR)
    out = np.empty(q.shape, dtype=complex)
    for i, qi in enumerate(q):
        out[i] = scale * np.dot(vals, np.exp(-1j * qi * z / HBAR))
    return out


def edge_mass(density: np.ndarray, fraction: float = 1.0 / 32.0) -> float:
    """Fraction of the total mass lying in the outer ``fraction`` of each end."""
    n = density.size
    k = max(1, int(n * fraction))
    total = density.sum()
    if total == 0.0:
        return 0.0
    return float((density[:k].sum() + density[-k:].sum()) / total)


def check_position_coverage(state: MomentumState, tol: float = 1.0e-12) -> None:
    """Raise :class:`CoverageError` if the state wraps around the position window."""
    psi = state.position_amplitudes()
    leak = edge_mass(np.abs(psi) ** 2)
    if leak > tol:
        raise CoverageError(
            f"state reaches the edge of the {state.grid.position_window:.4g} nm position window "
            f"(edge mass {leak:.2e}); use a finer momentum grid"
        )


def occupied_range(state: MomentumState, tol: float = 1.0e-14) -> tuple[float, float]:
    """Momentum interval outside which each tail holds less than ``tol`` of the mass."""
    dens = state.density
    cdf = np.cumsum(dens)
    cdf /= cdf[-1]
    q = state.grid.offsets
    lo = int(np.searchsorted(cdf, tol))
    hi = int(np.searchsorted(cdf, 1.0 - tol))
    return float(q[max(lo, 0)]), float(q[min(hi, q.size - 1)])


# --- construction -----------------------------------------------------------


def bessel_truncation(g_mag: float, tol: float) -> int:
    """Smallest ``N`` with ``sum_{|n|<=N} J_n(2|g|)^2 >= 1 - tol``."""
    if not 0.0 < tol < 1.0:
        raise ParameterError(f"tol must lie in (0, 1), got {tol!r}")
    if g_mag == 0.0:
        return 0
    n_max = int(2.0 * g_mag) + 40
    while True:
        tails = tail_weights(2.0 * g_mag, n_max)
        hits = np.nonzero(tails <= tol)[0]
        if hits.size:
            return int(hits[0])
        n_max *= 2


def gaussian_state(beam: BeamParameters, grid: MomentumGrid) -> MomentumState:
    """Minimum-uncertainty Gaussian centred on ``p0``.

    Amplitudes are ``(2 pi sigma_p^2)^(-1/4) exp(-q^2 / 4 sigma_p^2)``, then
    renormalised on the grid.
    """
    if grid.half_width < COVERAGE_SIGMAS * beam.sigma_p * (1 - 1e-12):
        raise CoverageError(
            f"grid half width {grid.half_width:.4g} covers less than "
            f"{COVERAGE_SIGMAS:g} sigma_p = {COVERAGE_SIGMAS * beam.sigma_p:.4g}"
        )
    q = grid.offsets
    amps = (2.0 * math.pi * beam.sigma_p**2) ** -0.25 * np.exp(-(q**2) / (4.0 * beam.sigma_p**2))
    amps = amps / math.sqrt(np.sum(amps**2) * grid.dp)
    state = MomentumState(grid=grid, amplitudes=amps.astype(complex), beam=beam)
    return state


def apinem_spacing(beam: BeamParameters, laser: LaserParameters, L0: float) -> float:
    """Momentum period of drift-induced spectral fringes, ``beta lambda m* v0 / L0``."""
    if not L0 > 0.0:
        raise ParameterError(f"L0 must be positive, got {L0!r}")
    return beam.beta * laser.wavelength * beam.m_star * beam.v0 / L0


def _next_pow2(n: float) -> int:
    return 1 << max(0, math.ceil(math.log2(max(n, 1.0))))


def auto_grid(
    beam: BeamParameters,
    laser: LaserParameters,
    max_g: float | None = None,
    L0_max: float = 0.0,
    min_feature: float | None = None,
    LD_max: float = 0.0,
    options: GridOptions = GridOptions(),
) -> MomentumGrid:
    """Choose a momentum grid for a drift/interaction/drift pipeline.

    Parameters
    ----------
    max_g : float
        Largest coupling that will be applied (defaults to ``laser.g_mag``).
    L0_max, LD_max : float
        Longest pre- and post-interaction drifts (nm).  They set the position
        window the chirped packet must fit in, and ``L0_max`` sets the expected
        fringe period.
    min_feature : float, optional
        Smallest momentum feature to resolve; by default the smaller of
        ``sigma_p`` and the fringe period at ``L0_max``.
    """
    g = laser.g_mag if max_g is None else max_g
    if g < 0.0:
        raise ParameterError("max_g must be non-negative")
    if L0_max < 0.0 or LD_max < 0.0:
        raise ParameterError("drift lengths must be non-negative")
    dq = laser.delta_p(beam)
    n_side = bessel_truncation(g, options.coverage_tol) if g > 0 else 0
    # the margin is kept even without a field so that the position samples
    # resolve the optical period
    sidebands = (n_side + options.sideband_margin) * dq
    half_width = sidebands + options.sigma_margin * beam.sigma_p

    if min_feature is None:
        min_feature = beam.sigma_p
        if L0_max > 0.0:
            min_feature = min(min_feature, apinem_spacing(beam, laser, L0_max))
    dp_max = min_feature / options.feature_oversample

    # the chirped packet, plus sidebands walking apart after the interaction,
    # must fit inside the conjugate position window
    t_total = drift_time(L0_max + LD_max, beam)
    sigma_z = beam.sigma_z0 * math.hypot(1.0, beam.chirp_rate * t_total)
    extent = options.sigma_margin * sigma_z
    if g > 0 and LD_max > 0.0:
        extent += (n_side + options.sideband_margin) * dq * drift_time(LD_max, beam) / beam.m_star
    dp_max = min(dp_max, 2.0 * math.pi * HBAR / (2.0 * extent * 1.25))

    n = max(_next_pow2(2.0 * half_width / dp_max), options.min_samples)
    if n > options.max_samples:
        raise ResolutionError(
            f"grid needs {n} samples, above the cap of {options.max_samples}", required_samples=n
        )
    return MomentumGrid(p_center=beam.p0, half_width=half_width, n_samples=n)

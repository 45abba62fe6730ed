"""Near-field scattering map applied to a momentum state.

Two routes compute the same map:

* :func:`apply_pinem` sums shifted copies ``J_n(2|g|) e^{-i n phi0} phi(q - n dp)``;
* :func:`apply_pinem_mask` multiplies the position amplitude by the unimodular
  phase ``exp(i 2|g| sin(k zeta - phi0))`` with ``k = omega / v0``.

Jacobi-Anger, ``exp(i x sin t) = sum_n J_n(x) exp(i n t)`` with ``t = k zeta - phi0``,
makes them identical; ``exp(i n k zeta)`` shifts momentum by ``+n dp``.  With this
orientation the local momentum kick is ``+2|g| dp cos(k zeta - phi0)``, so a
point-like packet at ``zeta = 0`` gains ``2|g| hbar omega cos(phi0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import sideband_coefficients, tail_weights
from .errors import CoverageError, ParameterError
from .units import HBAR, LaserParameters
from .wavepacket import (
    MomentumState,
    Spectrum,
    bessel_truncation,
    check_position_coverage,
    momentum_to_position,
    occupied_range,
    position_to_momentum,
    shift_momentum,
)

SIDEBAND_SUM = "sideband_sum"
PHASE_MASK = "phase_mask"

# Sidebands whose cumulative weight is below this must still fit on the grid.
COVERAGE_TOL = 1.0e-12


@dataclass(frozen=True)
class InteractionSpec:
    """Coupling, phase and truncation for one interaction.

    ``truncation_tol`` bounds the squared weight of the sideband orders left out
    of the sum.  The amplitude error is roughly its square root, so the default
    is far below the 1e-12 coverage tolerance used for grid sizing.
    """

    laser: LaserParameters
    truncation_tol: float = 1.0e-24
    path: str = SIDEBAND_SUM

    def __post_init__(self):
        if not 0.0 < self.truncation_tol <= 1.0e-3:
            raise ParameterError("truncation_tol must lie in (0, 1e-3]")
        if self.path not in (SIDEBAND_SUM, PHASE_MASK):
            raise ParameterError(f"unknown interaction path {self.path!r}")

    @property
    def g_mag(self) -> float:
        return self.laser.g_mag

    @property
    def phi0(self) -> float:
        return self.laser.phi0


def _check_sideband_coverage(state: MomentumState, spec: InteractionSpec) -> None:
    if spec.g_mag == 0.0:
        return
    n_cov = bessel_truncation(spec.g_mag, COVERAGE_TOL)
    reach = n_cov * spec.laser.delta_p(state.beam)
    lo, hi = occupied_range(state)
    hw = state.grid.half_width
    if hi + reach > hw or lo - reach < -hw:
        raise CoverageError(
            f"sidebands up to order {n_cov} reach {max(hi + reach, reach - lo):.4g}, "
            f"beyond the grid half width {hw:.4g}"
        )
    check_position_coverage(state)


def _finish(state: MomentumState, phi: np.ndarray, dropped: float) -> MomentumState:
    norm = math.sqrt(np.sum(np.abs(phi) ** 2) * state.grid.dp)
    return state.with_amplitudes(
        phi / norm, interacted=True, dropped_weight=state.dropped_weight + dropped
    )


def apply_pinem(state: MomentumState, spec: InteractionSpec) -> MomentumState:
    """Scatter ``state`` into photon sidebands by explicit summation.

    Each order is an exact (non-integer) momentum shift of the input, weighted
    by ``J_n(2|g|) e^{-i n phi0}``.  ``spec.path`` is ignored here; see
    :func:`interact`.
    """
    if spec.g_mag == 0.0:
        return state.with_amplitudes(state.amplitudes, interacted=True)
    _check_sideband_coverage(state, spec)

    x = 2.0 * spec.g_mag
    n_max = bessel_truncation(spec.g_mag, spec.truncation_tol)
    orders, coeffs = sideband_coefficients(x, n_max)
    dq = spec.laser.delta_p(state.beam)
    phi0 = math.fmod(spec.phi0, 2.0 * math.pi)

    grid = state.grid
    psi = momentum_to_position(state.amplitudes, grid)
    out = np.zeros(grid.n_samples, dtype=complex)
    for n, jn in zip(orders, coeffs):
        weight = jn * np.exp(-1j * n * phi0)
        ramp = np.exp(1j * n * dq * grid.zeta / HBAR)
        out += weight * position_to_momentum(psi * ramp, grid)
    dropped = float(tail_weights(x, n_max)[n_max])
    return _finish(state, out, dropped)


def phase_mask(zeta: np.ndarray, spec: InteractionSpec, beam) -> np.ndarray:
    """Unimodular position-space factor ``exp(i 2|g| sin(k zeta - phi0))``."""
    k = spec.laser.wavenumber(beam)
    return np.exp(1j * 2.0 * spec.g_mag * np.sin(k * zeta - spec.phi0))


def apply_pinem_mask(state: MomentumState, spec: InteractionSpec) -> MomentumState:
    """Same map as :func:`apply_pinem`, applied as a phase mask in position space."""
    if spec.g_mag == 0.0:
        return state.with_amplitudes(state.amplitudes, interacted=True)
    _check_sideband_coverage(state, spec)
    grid = state.grid
    psi = momentum_to_position(state.amplitudes, grid)
    psi = psi * phase_mask(grid.zeta, spec, state.beam)
    return _finish(state, position_to_momentum(psi, grid), 0.0)


def weak_field_state(state: MomentumState, spec: InteractionSpec) -> MomentumState:
    """First-order expansion of the map, keeping only single-photon exchange.

    ``(1 - g^2) phi(q) + g e^{-i phi0} phi(q - dp) - g e^{i phi0} phi(q + dp)``,
    renormalised.  Only sensible for ``g`` well below one.
    """
    g = spec.g_mag
    if g == 0.0:
        return state.with_amplitudes(state.amplitudes, interacted=True)
    dq = spec.laser.delta_p(state.beam)
    phi = state.amplitudes
    out = (1.0 - g * g) * phi
    out = out + g * np.exp(-1j * spec.phi0) * shift_momentum(phi, state.grid, dq)
    out = out - g * np.exp(1j * spec.phi0) * shift_momentum(phi, state.grid, -dq)
    return _finish(state, out, 0.0)


def incoherent_spectrum(state: MomentumState, spec: InteractionSpec) -> Spectrum:
    """Momentum density of the fully dephased sideband mixture.

    ``sum_n J_n(2|g|)^2 |phi(q - n dp)|^2`` with no cross terms between orders.
    """
    grid = state.grid
    if spec.g_mag == 0.0:
        dens = state.density
    else:
        _check_sideband_coverage(state, spec)
        x = 2.0 * spec.g_mag
        n_max = bessel_truncation(spec.g_mag, spec.truncation_tol)
        orders, coeffs = sideband_coefficients(x, n_max)
        dq = spec.laser.delta_p(state.beam)
        dens = np.zeros(grid.n_samples)
        for n, jn in zip(orders, coeffs):
            if n == 0:
                shifted = state.amplitudes
            else:
                shifted = shift_momentum(state.amplitudes, grid, n * dq)
            dens += jn * jn * np.abs(shifted) ** 2
    dens = dens / (dens.sum() * grid.dp)
    return Spectrum(axis=grid.offsets, density=dens, axis_kind="momentum", beam=state.beam)


def interact(state: MomentumState, spec: InteractionSpec) -> MomentumState:
    """Dispatch on ``spec.path``."""
    if spec.path == PHASE_MASK:
        return apply_pinem_mask(state, spec)
    return apply_pinem(state, spec)

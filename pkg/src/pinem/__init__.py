"""Momentum-space simulation of free electrons interacting with optical near fields."""

from .errors import (
    CostError,
    CoverageError,
    NumericalError,
    ParameterError,
    PinemError,
    ResolutionError,
    SearchError,
)
from .interaction import InteractionSpec, incoherent_spectrum, interact, weak_field_state
from .observables import (
    classify_regime,
    energy_spectrum,
    energy_transfer_analytic,
    energy_transfer_numeric,
    find_optimal_bunching,
    find_optimal_focus,
    spectral_width,
)
from .pipeline import simulate
from .propagation import DriftSpec, apply_drift, to_position, wigner
from .units import beam_from, laser_from
from .wavepacket import MomentumGrid, MomentumState, Spectrum, auto_grid, gaussian_state

__all__ = [
    "CostError",
    "CoverageError",
    "DriftSpec",
    "InteractionSpec",
    "MomentumGrid",
    "MomentumState",
    "NumericalError",
    "ParameterError",
    "PinemError",
    "ResolutionError",
    "SearchError",
    "Spectrum",
    "apply_drift",
    "auto_grid",
    "beam_from",
    "classify_regime",
    "energy_spectrum",
    "energy_transfer_analytic",
    "energy_transfer_numeric",
    "find_optimal_bunching",
    "find_optimal_focus",
    "gaussian_state",
    "incoherent_spectrum",
    "interact",
    "laser_from",
    "simulate",
    "spectral_width",
    "to_position",
    "weak_field_state",
    "wigner",
]

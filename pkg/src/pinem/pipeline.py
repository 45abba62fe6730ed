"""Gaussian -> pre-drift -> interaction -> post-drift."""

from __future__ import annotations

from dataclasses import dataclass

from .interaction import SIDEBAND_SUM, InteractionSpec, interact
from .propagation import POST, PRE, DriftSpec, apply_drift
from .units import BeamParameters, LaserParameters
from .wavepacket import GridOptions, MomentumGrid, MomentumState, auto_grid, gaussian_state


@dataclass(frozen=True)
class PipelineResult:
    initial: MomentumState
    before_interaction: MomentumState
    after_interaction: MomentumState
    final: MomentumState


def pipeline_grid(
    beam: BeamParameters,
    laser: LaserParameters,
    L0: float = 0.0,
    LD: float = 0.0,
    options: GridOptions = GridOptions(),
) -> MomentumGrid:
    return auto_grid(beam, laser, L0_max=L0, LD_max=LD, options=options)


def simulate(
    beam: BeamParameters,
    laser: LaserParameters,
    L0: float = 0.0,
    LD: float = 0.0,
    grid: MomentumGrid | None = None,
    path: str = SIDEBAND_SUM,
    truncation_tol: float = 1.0e-24,
) -> PipelineResult:
    """Run the full pipeline; drift lengths in nm."""
    if grid is None:
        grid = pipeline_grid(beam, laser, L0, LD)
    initial = gaussian_state(beam, grid)
    before = apply_drift(initial, DriftSpec(L0, PRE))
    after = interact(before, InteractionSpec(laser, truncation_tol=truncation_tol, path=path))
    final = apply_drift(after, DriftSpec(LD, POST))
    return PipelineResult(initial, before, after, final)

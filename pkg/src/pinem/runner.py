"""Single runs and parameter sweeps driven by an :class:`ExperimentConfig`."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import ExperimentConfig, parse_number
from .errors import CoverageError, ParameterError, ResolutionError
from .interaction import InteractionSpec, incoherent_spectrum
from .observables import (
    bunching_factor,
    classify_regime,
    energy_spectrum,
    energy_transfer_analytic,
    energy_transfer_numeric,
    find_optimal_bunching,
    find_optimal_focus,
    fwhm,
    measure_fringe_spacing,
    momentum_spectrum,
    peak_position,
    sideband_spacing_apinem,
    sideband_spacing_pinem,
    state_width,
    to_energy,
)
from .pipeline import simulate
from .propagation import WIGNER_MAX_RESOLUTION, to_position, wigner
from .units import CM_TO_NM, decay_parameter

MAX_SWEEP_POINTS = 10_000

SCALAR_OBSERVABLES = (
    "delta_E",
    "delta_E_analytic",
    "gamma0",
    "width_initial",
    "width_rms",
    "fwhm",
    "peak_shift",
    "bunching",
    "apinem_spacing_measured",
    "apinem_spacing_formula",
    "L0_opt",
    "focusing_ratio",
    "LD_opt",
    "bunching_opt",
)

# profile observables -> name of their own axis column
PROFILE_OBSERVABLES = {
    "spectrum": "E_eV",
    "incoherent_spectrum": "E_eV",
    "position": "tau_fs",
}


class Evaluation:
    """Lazily computed results of one configuration."""

    def __init__(self, config: ExperimentConfig):
        config.validate()
        self.config = config
        self.beam = config.beam()
        self.laser = config.laser()
        self.grid = config.grid()

    @cached_property
    def result(self):
        return simulate(
            self.beam,
            self.laser,
            L0=self.config.L0,
            LD=self.config.LD,
            grid=self.grid,
            path=self.config.interaction_path,
        )

    @cached_property
    def spectrum(self):
        return energy_spectrum(self.result.final)

    @cached_property
    def incoherent_momentum(self):
        return incoherent_spectrum(self.result.before_interaction, InteractionSpec(self.laser))

    @cached_property
    def incoherent(self):
        return to_energy(self.incoherent_momentum)

    @cached_property
    def position(self):
        return to_position(self.result.final)

    @cached_property
    def focus(self):
        c = self.config
        if c.focus_L0_min_cm is None:
            raise ParameterError("L0_opt needs focus_L0_min_cm and focus_L0_max_cm")
        rng = (c.focus_L0_min_cm * CM_TO_NM, c.focus_L0_max_cm * CM_TO_NM)
        return find_optimal_focus(self.beam, self.laser, rng, grid=self.grid)

    @cached_property
    def bunching_search(self):
        c = self.config
        if c.bunching_LD_min_cm is None:
            raise ParameterError("LD_opt needs bunching_LD_min_cm and bunching_LD_max_cm")
        rng = (c.bunching_LD_min_cm * CM_TO_NM, c.bunching_LD_max_cm * CM_TO_NM)
        return find_optimal_bunching(self.beam, self.laser, rng, L0=c.L0, grid=self.grid)

    def wigner_map(self):
        res = self.config.wigner_resolution
        state = self.result.final
        try:
            return wigner(state, resolution=res or 256)
        except ResolutionError as exc:
            if res or not exc.required_samples or exc.required_samples > WIGNER_MAX_RESOLUTION:
                raise
            return wigner(state, resolution=exc.required_samples)

    def scalar(self, name: str) -> float:
        r, laser = self.result, self.laser
        if name == "delta_E":
            return energy_transfer_numeric(r.after_interaction)
        if name == "delta_E_analytic":
            return float(
                energy_transfer_analytic(
                    laser.g_mag, laser.phi0, decay_parameter(self.beam, laser), laser.photon_energy
                )
            )
        if name == "gamma0":
            return decay_parameter(self.beam, laser)
        if name == "width_initial":
            return state_width(r.initial)
        if name == "width_rms":
            return state_width(r.final)
        if name == "fwhm":
            return fwhm(self.spectrum)
        if name == "peak_shift":
            return peak_position(momentum_spectrum(r.final)) - peak_position(momentum_spectrum(r.initial))
        if name == "bunching":
            try:
                return bunching_factor(self.position, laser)
            except CoverageError:
                return math.nan
        if name == "apinem_spacing_measured":
            if self.config.L0 == 0.0 or laser.g_mag == 0.0:
                return math.nan
            try:
                return measure_fringe_spacing(r.after_interaction, laser).spacing
            except CoverageError:
                return math.nan
        if name == "apinem_spacing_formula":
            if self.config.L0 == 0.0:
                return math.nan
            return sideband_spacing_apinem(self.beam, laser, self.config.L0)
        if name == "L0_opt":
            return self.focus.L0_opt / CM_TO_NM
        if name == "focusing_ratio":
            return self.focus.focusing_ratio
        if name == "LD_opt":
            return self.bunching_search.LD_opt / CM_TO_NM
        if name == "bunching_opt":
            return self.bunching_search.factor
        raise ParameterError(f"unknown observable {name!r}")

    def profile(self, name: str) -> tuple[np.ndarray, np.ndarray]:
        if name == "spectrum":
            return self.spectrum.axis, self.spectrum.density
        if name == "incoherent_spectrum":
            return self.incoherent.axis, self.incoherent.density
        if name == "position":
            order = np.argsort(self.position.tau)
            return self.position.tau[order], self.position.density_tau[order]
        raise ParameterError(f"unknown observable {name!r}")

    def summary(self) -> dict:
        c, beam, laser = self.config, self.beam, self.laser
        regime = classify_regime(beam, laser)
        out = {
            "regime": regime.label,
            "gamma0": regime.gamma0,
            "beta": beam.beta,
            "sigma_E": beam.sigma_E,
            "sigma_p": beam.sigma_p,
            "photon_energy": laser.photon_energy,
            "wavelength_nm": laser.wavelength,
            "delta_p": laser.delta_p(beam),
            "g_mag": laser.g_mag,
            "phi0": laser.phi0,
            "L0_cm": c.L0_cm,
            "LD_cm": c.LD_cm,
            "interaction_path": c.interaction_path,
            "n_samples": self.grid.n_samples,
            "half_width": self.grid.half_width,
        }
        for name in ("delta_E", "delta_E_analytic", "width_initial", "width_rms", "fwhm", "peak_shift"):
            out[name] = self.scalar(name)
        out["peak_shift_over_delta_p"] = out["peak_shift"] / laser.delta_p(beam)
        out["spacing_pinem"] = sideband_spacing_pinem(beam, laser)
        if c.L0 > 0.0:
            out["apinem_spacing_formula"] = self.scalar("apinem_spacing_formula")
            out["apinem_spacing_measured"] = self.scalar("apinem_spacing_measured")
        out["bunching"] = self.scalar("bunching")
        out["dropped_weight"] = self.result.after_interaction.dropped_weight
        if c.decoherence:
            out["incoherent_delta_E"] = energy_transfer_numeric(self.incoherent_momentum)
        if c.focus_L0_min_cm is not None:
            out["L0_opt_cm"] = self.scalar("L0_opt")
            out["width_at_opt"] = self.focus.width_at_opt
            out["focusing_ratio"] = self.focus.focusing_ratio
        if c.bunching_LD_min_cm is not None:
            out["LD_opt_cm"] = self.scalar("LD_opt")
            out["bunching_opt"] = self.bunching_search.factor
            out["bunching_degenerate"] = self.bunching_search.degenerate
        return out


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.10g}"
    return str(v)


def format_summary(summary: dict) -> str:
    return "".join(f"{k}={format_value(v)}\n" for k, v in summary.items())


def _write_profile(path, header, x, y):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for a, b in zip(x, y):
            fh.write(f"{float(a)!r},{float(b)!r}\n")


def run_pipeline(config: ExperimentConfig, out_dir: str | None = None, plot: bool | None = None) -> dict:
    """Run one configuration, write its CSVs (and figures) and return the summary.

    Files written to ``out_dir``: ``spectrum.csv`` (final EELS), ``position.csv``
    (comoving density against arrival time), ``summary.txt``, ``config.txt``,
    and on request ``incoherent_spectrum.csv`` and ``wigner.csv``.
    """
    ev = Evaluation(config)
    out_dir = out_dir or config.out_dir
    plot = config.emit_plot if plot is None else plot
    os.makedirs(out_dir, exist_ok=True)

    summary = ev.summary()
    ev.spectrum.to_csv(os.path.join(out_dir, "spectrum.csv"))
    ev.position.to_csv(os.path.join(out_dir, "position.csv"))
    initial = energy_spectrum(ev.result.initial)
    incoherent = None
    if config.decoherence:
        incoherent = ev.incoherent
        incoherent.to_csv(os.path.join(out_dir, "incoherent_spectrum.csv"))
    wmap = None
    if config.wigner:
        wmap = ev.wigner_map()
        wmap.to_csv(os.path.join(out_dir, "wigner.csv"))
        summary["wigner_resolution"] = wmap.z_axis.size
    with open(os.path.join(out_dir, "summary.txt"), "w") as fh:
        fh.write(format_summary(summary))
    with open(os.path.join(out_dir, "config.txt"), "w") as fh:
        fh.write(config.to_text())

    if plot:
        from . import plotting

        plotting.plot_run(out_dir, ev.spectrum, initial, ev.position, incoherent, wmap)
    return summary


# --- sweeps -----------------------------------------------------------------


@dataclass(frozen=True)
class SweepAxis:
    name: str
    values: tuple

    @classmethod
    def parse(cls, text: str) -> "SweepAxis":
        """``name=lo:hi:n`` (inclusive linear grid) or ``name=v1,v2,...``."""
        if "=" not in text:
            raise ParameterError(f"sweep axis must look like name=lo:hi:n, got {text!r}")
        name, rhs = (s.strip() for s in text.split("=", 1))
        if ":" in rhs:
            parts = rhs.split(":")
            if len(parts) != 3:
                raise ParameterError(f"bad axis range {rhs!r}")
            lo, hi = parse_number(parts[0]), parse_number(parts[1])
            n = parse_number(parts[2])
            if n != int(n) or n < 1:
                raise ParameterError(f"bad point count in {rhs!r}")
            if n > 1 and not hi > lo:
                raise ParameterError(f"axis bounds must increase: {rhs!r}")
            values = tuple(float(v) for v in np.linspace(lo, hi, int(n)))
        else:
            values = tuple(parse_number(v) for v in rhs.split(",") if v.strip())
        return cls(name, values)


@dataclass(frozen=True)
class SweepSpec:
    label: str
    axes: tuple
    observables: tuple

    def validate(self, config: ExperimentConfig) -> None:
        if not 1 <= len(self.axes) <= 2:
            raise ParameterError("a sweep needs one or two axes")
        total = 1
        for ax in self.axes:
            if ax.name not in ExperimentConfig.keys() or ax.name in ("interaction_path", "out_dir"):
                raise ParameterError(f"cannot sweep over {ax.name!r}")
            if not ax.values:
                raise ParameterError(f"axis {ax.name!r} has no points")
            total *= len(ax.values)
        if total > MAX_SWEEP_POINTS:
            raise ParameterError(f"sweep has {total} points, limit is {MAX_SWEEP_POINTS}")
        if len({ax.name for ax in self.axes}) != len(self.axes):
            raise ParameterError("sweep axes must differ")
        if not self.observables:
            raise ParameterError("a sweep needs at least one observable")
        for name in self.observables:
            if name not in SCALAR_OBSERVABLES and name not in PROFILE_OBSERVABLES:
                raise ParameterError(f"unknown observable {name!r}")
        for point in self.points():
            config.updated(dict(zip(self.names, point))).validate()

    @property
    def names(self) -> tuple:
        return tuple(ax.name for ax in self.axes)

    def points(self) -> list[tuple]:
        if len(self.axes) == 1:
            return [(v,) for v in self.axes[0].values]
        return [(a, b) for a in self.axes[0].values for b in self.axes[1].values]


def evaluate_point(config: ExperimentConfig, observables) -> dict:
    ev = Evaluation(config)
    out = {}
    for name in observables:
        if name in PROFILE_OBSERVABLES:
            out[name] = ev.profile(name)
        else:
            out[name] = ev.scalar(name)
    return out


def _evaluate_task(args):
    return evaluate_point(*args)


def run_sweep(
    config: ExperimentConfig,
    spec: SweepSpec,
    out_dir: str | None = None,
    jobs: int = 1,
    plot: bool | None = None,
) -> dict:
    """Evaluate ``spec`` over its axes and write one long-form CSV per observable.

    Scalar observables go to ``<label>_<name>.csv`` with columns
    ``<axis1>[,<axis2>],<name>``; profile observables add their own axis column
    before the value.  Rows follow the axis order regardless of ``jobs``.
    Returns ``{observable: path}``.
    """
    spec.validate(config)
    out_dir = out_dir or config.out_dir
    plot = config.emit_plot if plot is None else plot
    os.makedirs(out_dir, exist_ok=True)
    points = spec.points()
    tasks = [(config.updated(dict(zip(spec.names, p))), spec.observables) for p in points]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate_task, tasks))
    else:
        results = [_evaluate_task(t) for t in tasks]

    paths = {}
    for name in spec.observables:
        path = os.path.join(out_dir, f"{spec.label}_{name}.csv")
        with open(path, "w") as fh:
            if name in PROFILE_OBSERVABLES:
                fh.write(",".join(spec.names + (PROFILE_OBSERVABLES[name], name)) + "\n")
                for p, res in zip(points, results):
                    lead = ",".join(repr(float(v)) for v in p)
                    x, y = res[name]
                    for a, b in zip(x, y):
                        fh.write(f"{lead},{float(a)!r},{float(b)!r}\n")
            else:
                fh.write(",".join(spec.names + (name,)) + "\n")
                for p, res in zip(points, results):
                    fh.write(",".join(repr(float(v)) for v in p) + f",{float(res[name])!r}\n")
        paths[name] = path

    if plot:
        from . import plotting

        for name, path in paths.items():
            plotting.plot_sweep(path, spec.names, name, name in PROFILE_OBSERVABLES)
    return paths


def read_sweep_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


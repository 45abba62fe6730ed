"""``pinem`` command line.

Exit codes: 0 success, 2 configuration error, 3 numerical resolution or
coverage failure.
"""

from __future__ import annotations

import functools
import os
import sys

import click

from .config import ExperimentConfig, parse_assignments, read_key_values
from .errors import NumericalError
from .presets import PRESETS, get_preset
from .runner import SweepAxis, SweepSpec, format_summary, run_pipeline, run_sweep

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NumericalError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)
        except (ValueError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)

    return wrapper


def _load(config_path, preset_name, assignments, out, plot) -> tuple[ExperimentConfig, object]:
    if config_path is None and preset_name is None:
        raise click.UsageError("give --config FILE and/or --preset NAME")
    preset = get_preset(preset_name) if preset_name else None
    cfg = preset.config() if preset else ExperimentConfig()
    if config_path is not None:
        # only keys the file sets, so preset values survive
        cfg = cfg.updated(read_key_values(config_path))
    cfg = cfg.updated(parse_assignments(assignments))
    over = {}
    if out is not None:
        over["out_dir"] = out
    if plot:
        over["emit_plot"] = True
    return cfg.updated(over), preset


def _echo_summary(summary: dict, label: str | None = None):
    if label is not None:
        click.echo(f"run={label}")
    click.echo(format_summary(summary), nl=False)


_common = [
    click.option("--config", "config_path", type=click.Path(dir_okay=False), help="key = value config file"),
    click.option("--preset", "preset_name", help="figure preset name (see `pinem presets`)"),
    click.option("--set", "assignments", multiple=True, metavar="KEY=VALUE", help="override one config key"),
    click.option("--out", type=click.Path(file_okay=False), help="output directory"),
    click.option("--plot", is_flag=True, help="render PNG figures next to the CSVs"),
    click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="parallel sweep workers"),
]


def _with_common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@click.group()
def cli():
    """Quantum electron-light interaction simulator."""


@cli.command()
@_with_common
@_guarded
def run(config_path, preset_name, assignments, out, plot, jobs):
    """Run a configuration, or every run and sweep of a preset."""
    cfg, preset = _load(config_path, preset_name, assignments, out, plot)
    if preset is None:
        _echo_summary(run_pipeline(cfg))
        return
    root = cfg.out_dir
    for sweep in preset.sweeps:
        sweep.validate(cfg)
    for label, run_cfg in preset.run_configs(cfg):
        summary = run_pipeline(run_cfg, out_dir=os.path.join(root, label))
        _echo_summary(summary, label)
    for sweep in preset.sweeps:
        paths = run_sweep(cfg, sweep, out_dir=root, jobs=jobs)
        for name, path in paths.items():
            click.echo(f"sweep={sweep.label} observable={name} csv={path}")


@cli.command()
@_with_common
@click.option("--axis", "axes", multiple=True, metavar="NAME=LO:HI:N", help="sweep axis (one or two)")
@click.option("--observable", "observables", multiple=True, help="observable to record (repeatable)")
@click.option("--label", default="sweep", show_default=True, help="prefix of the output CSV names")
@_guarded
def sweep(config_path, preset_name, assignments, out, plot, jobs, axes, observables, label):
    """Evaluate observables over one or two config axes into long-form CSV."""
    cfg, preset = _load(config_path, preset_name, assignments, out, plot)
    if axes:
        specs = [SweepSpec(label, tuple(SweepAxis.parse(a) for a in axes), tuple(observables) or ("delta_E",))]
    elif preset is not None and preset.sweeps:
        specs = list(preset.sweeps)
    else:
        raise click.UsageError("give --axis (or a preset that defines sweeps)")
    for spec in specs:
        spec.validate(cfg)
    for spec in specs:
        for name, path in run_sweep(cfg, spec, jobs=jobs).items():
            click.echo(f"sweep={spec.label} observable={name} csv={path}")


@cli.command()
def presets():
    """List figure presets with the values they encode."""
    for name, p in PRESETS.items():
        click.echo(f"{name}: {p.citation}")
        if p.note:
            click.echo(f"    note: {p.note}")


def main(argv=None):
    cli.main(args=argv, prog_name="pinem")


if __name__ == "__main__":
    main()

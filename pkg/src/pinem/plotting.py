"""Figures rendered next to the CSV outputs.  CSVs are the record; these are
for looking at."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .runner import PROFILE_OBSERVABLES, read_sweep_csv  # noqa: E402

_LABELS = {
    "E_eV": "E - E0 (eV)",
    "tau_fs": "t - z/v0 (fs)",
    "g_mag": "|g|",
    "gamma0": "Gamma0",
    "sigma_E": "sigma_E (eV)",
    "phi0": "phi0 (rad)",
    "L0_cm": "L0 (cm)",
    "LD_cm": "LD (cm)",
}


def _label(name):
    return _LABELS.get(name, name)


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _crop(x, y, frac=1e-6):
    keep = np.nonzero(y >= frac * y.max())[0]
    if keep.size == 0:
        return x, y
    sl = slice(max(keep[0] - 1, 0), keep[-1] + 2)
    return x[sl], y[sl]


def plot_run(out_dir, spectrum, initial, position, incoherent=None, wmap=None):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(*_crop(initial.axis, initial.density), lw=1, color="0.6", label="initial")
    ax.plot(*_crop(spectrum.axis, spectrum.density), lw=1.2, label="final")
    if incoherent is not None:
        ax.plot(*_crop(incoherent.axis, incoherent.density), lw=1, ls="--", label="dephased")
    ax.set_xlabel(_label("E_eV"))
    ax.set_ylabel("probability / eV")
    ax.legend(frameon=False)
    _save(fig, os.path.join(out_dir, "spectrum.png"))

    order = np.argsort(position.tau)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(*_crop(position.tau[order], position.density_tau[order]), lw=1)
    ax.set_xlabel(_label("tau_fs"))
    ax.set_ylabel("probability / fs")
    _save(fig, os.path.join(out_dir, "position.png"))

    if wmap is not None:
        fig, ax = plt.subplots(figsize=(5, 4))
        vmax = np.abs(wmap.values).max()
        mesh = ax.pcolormesh(
            wmap.z_axis, wmap.p_axis, wmap.values.T, cmap="RdBu_r", vmin=-vmax, vmax=vmax, shading="auto"
        )
        fig.colorbar(mesh, ax=ax)
        ax.set_xlabel("zeta (nm)")
        ax.set_ylabel("p - p0 (eV fs/nm)")
        _save(fig, os.path.join(out_dir, "wigner.png"))


def _profile_image(rows, n_axis=400):
    """Resample per-point profiles onto one common axis for an image plot."""
    params = np.unique(rows[:, 0])
    blocks = [rows[rows[:, 0] == p] for p in params]
    lo = min(_crop(b[:, 1], b[:, 2])[0][0] for b in blocks)
    hi = max(_crop(b[:, 1], b[:, 2])[0][-1] for b in blocks)
    axis = np.linspace(lo, hi, n_axis)
    img = np.array([np.interp(axis, b[:, 1], b[:, 2], left=0.0, right=0.0) for b in blocks])
    peak = img.max(axis=1, keepdims=True)
    return params, axis, img / np.where(peak > 0, peak, 1.0)


def plot_sweep(csv_path, axis_names, observable, is_profile):
    header, data = read_sweep_csv(csv_path)
    png = os.path.splitext(csv_path)[0] + ".png"
    if is_profile:
        prof_axis = PROFILE_OBSERVABLES[observable]
        outer = [data] if len(axis_names) == 1 else [data[data[:, 0] == v][:, 1:] for v in np.unique(data[:, 0])]
        fig, axes = plt.subplots(1, len(outer), figsize=(4 * len(outer), 3.5), squeeze=False)
        for k, (ax, rows) in enumerate(zip(axes[0], outer)):
            params, axis, img = _profile_image(rows)
            ax.pcolormesh(params, axis, img.T, shading="auto", cmap="viridis")
            ax.set_xlabel(_label(axis_names[-1]))
            ax.set_ylabel(_label(prof_axis))
            if len(outer) > 1:
                ax.set_title(f"{_label(axis_names[0])} = {np.unique(data[:, 0])[k]:.3g}")
        _save(fig, png)
        return

    fig, ax = plt.subplots(figsize=(5, 3.5))
    if len(axis_names) == 1:
        ax.plot(data[:, 0], data[:, 1], "o-", ms=3)
        ax.set_xlabel(_label(axis_names[0]))
        ax.set_ylabel(observable)
    else:
        xs, ys = np.unique(data[:, 0]), np.unique(data[:, 1])
        grid = data[:, 2].reshape(xs.size, ys.size)
        mesh = ax.pcolormesh(xs, ys, grid.T, shading="auto", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label=observable)
        ax.set_xlabel(_label(axis_names[0]))
        ax.set_ylabel(_label(axis_names[1]))
    _save(fig, png)

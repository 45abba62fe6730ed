"""One-dimensional extremum search: coarse pre-scan, then golden-section refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SearchError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchResult:
    x: float
    value: float
    degenerate: bool = False
    evaluations: int = 0


def golden_section(f, a: float, b: float, rel_tol: float = 1e-3, max_iter: int = 200):
    """Minimise a unimodal ``f`` on ``[a, b]``.

    Stops when the bracket is narrower than ``rel_tol`` times its midpoint.
    Returns ``(x, f(x), n_evaluations)``.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    for _ in range(max_iter):
        if abs(b - a) <= rel_tol * abs(0.5 * (a + b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    if fc < fd:
        return c, fc, evals
    return d, fd, evals


def scan_minimize(
    f,
    lo: float,
    hi: float,
    n_scan: int = 32,
    rel_tol: float = 1e-3,
    flat_tol: float | None = None,
) -> SearchResult:
    """Locate the minimum of ``f`` on ``[lo, hi]``.

    ``n_scan`` equally spaced samples pick the best cell, which must be
    interior; golden-section search then refines inside the two neighbouring
    cells.  If the spread of sampled values is below ``flat_tol`` the objective
    is reported as degenerate and the best sample returned as is.
    """
    if not hi > lo:
        raise SearchError(f"empty search interval [{lo}, {hi}]")
    xs = np.linspace(lo, hi, n_scan)
    ys = np.array([f(x) for x in xs])
    i = int(np.argmin(ys))
    if flat_tol is not None and ys.max() - ys.min() < flat_tol:
        return SearchResult(float(xs[i]), float(ys[i]), degenerate=True, evaluations=n_scan)
    if i == 0 or i == n_scan - 1:
        raise SearchError(
            f"extremum at the boundary x={xs[i]:.6g} of [{lo:.6g}, {hi:.6g}]; widen the range"
        )
    x, fx, evals = golden_section(f, xs[i - 1], xs[i + 1], rel_tol=rel_tol)
    if ys[i] < fx:
        x, fx = xs[i], ys[i]
    return SearchResult(float(x), float(fx), evaluations=n_scan + evals)


def scan_maximize(f, lo, hi, n_scan=32, rel_tol=1e-3, flat_tol=None) -> SearchResult:
    res = scan_minimize(lambda x: -f(x), lo, hi, n_scan=n_scan, rel_tol=rel_tol, flat_tol=flat_tol)
    return SearchResult(res.x, -res.value, res.degenerate, res.evaluations)

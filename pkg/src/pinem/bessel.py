"""Integer-order Bessel functions of the first kind by backward recurrence.

The sideband sum needs the whole ladder ``J_0(x) ... J_N(x)`` at a single
argument, which is exactly what Miller's algorithm produces in one sweep.
"""

from __future__ import annotations

import math

import numpy as np

_RESCALE = 1.0e250
# below this the recurrence factor 2k/x overflows between rescalings; the
# power series converges in a handful of terms instead
_SERIES_MAX = 1.0e-3


def _series_ladder(x: float, n_max: int) -> np.ndarray:
    out = np.zeros(n_max + 1)
    h = 0.5 * x
    for n in range(n_max + 1):
        lead = n * (math.log(x) - math.log(2.0)) - math.lgamma(n + 1) if n else 0.0
        if lead < -745.0:
            break
        term = math.exp(lead)
        total = term
        for k in range(1, 8):
            term *= -h * h / (k * (n + k))
            total += term
        out[n] = total
    return out


def _start_order(x: float, n_max: int) -> int:
    # Start well above both the requested order and the turning point n ~ x.
    m = max(n_max, int(x)) + 30 + int(math.sqrt(40.0 * max(n_max, int(x), 1)))
    return m + (m % 2)


def bessel_ladder(x: float, n_max: int) -> np.ndarray:
    """Return ``[J_0(x), J_1(x), ..., J_n_max(x)]`` for real ``x``.

    Uses the recurrence ``J_{k-1} = (2k/x) J_k - J_{k+1}`` started from zero far
    above ``n_max`` and normalised by ``J_0 + 2 sum_k J_2k = 1``.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    out = np.zeros(n_max + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    sign = 1.0
    if x < 0.0:
        # J_n(-x) = (-1)^n J_n(x)
        sign = -1.0
        x = -x
    if x < _SERIES_MAX:
        out = _series_ladder(x, n_max)
        if sign < 0.0:
            out[1::2] *= -1.0
        return out

    m = _start_order(x, n_max)
    vals = np.zeros(m + 2)
    j_next, j_cur = 0.0, 1.0e-300
    vals[m] = j_cur
    for k in range(m, 0, -1):
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        vals[k - 1] = j_cur
        if abs(j_cur) > _RESCALE:
            vals[k - 1 :] /= _RESCALE
            j_next /= _RESCALE
            j_cur /= _RESCALE

    norm = vals[0] + 2.0 * vals[2 : m + 1 : 2].sum()
    out[:] = vals[: n_max + 1] / norm
    if sign < 0.0:
        out[1::2] *= -1.0
    return out


def bessel_jn(n: int, x: float) -> float:
    """Single value ``J_n(x)`` for integer ``n`` of either sign."""
    k = abs(n)
    val = bessel_ladder(x, k)[k]
    if n < 0 and k % 2:
        val = -val
    return float(val)


def sideband_coefficients(x: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Orders ``-n_max..n_max`` and the matching ``J_n(x)`` values."""
    pos = bessel_ladder(x, n_max)
    orders = np.arange(-n_max, n_max + 1)
    vals = np.empty(2 * n_max + 1)
    vals[n_max:] = pos
    neg = pos[1:][::-1].copy()
    neg[(np.arange(n_max, 0, -1) % 2) == 1] *= -1.0
    vals[:n_max] = neg
    return orders, vals


def tail_weights(x: float, n_max: int) -> np.ndarray:
    """``T[N] = sum_{|n| > N} J_n(x)^2`` for ``N = 0..n_max``.

    Summed from the top so tails far below machine epsilon relative to one
    are still resolved.
    """
    ladder = bessel_ladder(x, n_max + 60 + int(abs(x)))
    sq = ladder**2
    # cumulative sum of sq[k] for k > N, from the top down
    rev = np.cumsum(sq[::-1])[::-1]
    tails = np.zeros(n_max + 1)
    tails[:] = 2.0 * np.append(rev[1:], 0.0)[: n_max + 1]
    return tails

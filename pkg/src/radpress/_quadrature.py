"""Composite Gauss-Legendre quadrature and Richardson extrapolation helpers.

All routines use fixed panel decompositions and ordered reductions, so
results are bit-reproducible for identical inputs.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=16)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(breakpoints: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights of a composite rule on ``breakpoints``."""
    x, w = gauss_legendre(order)
    lo = breakpoints[:-1]
    hi = breakpoints[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate(f, breakpoints: np.ndarray, order: int = 10, chunk: int = 200_000) -> float:
    """Integrate a vectorized ``f`` over the panels defined by ``breakpoints``.

    Large panel sets are processed in fixed-size chunks and summed in order.
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    npanel = len(breakpoints) - 1
    per_chunk = max(1, chunk // order)
    total = 0.0
    for start in range(0, npanel, per_chunk):
        bp = breakpoints[start:start + per_chunk + 1]
        nodes, weights = panel_nodes(bp, order)
        total += float(np.sum(f(nodes) * weights))
    return total


def graded_breakpoints(lo: float, hi: float, pole: float, eps: float, hmax: float,
                       growth: float = 0.5) -> np.ndarray:
    """Breakpoints on [lo, hi] refined geometrically towards ``pole``.

    Panel lengths are ``max(eps/4, growth*distance_to_pole)`` capped at
    ``hmax``.  A pole inside the interval becomes a breakpoint; a pole
    outside it still grades the panels nearest to it.
    """
    if not hi > lo:
        raise ValueError("empty interval")
    first = eps / 4.0

    def walk(origin: float, direction: int, limit: float, offset: float) -> list[float]:
        out = []
        u = origin
        while True:
            step = min(hmax, max(first, growth * (abs(u - origin) + offset)))
            u = u + direction * step
            if (direction > 0 and u >= limit) or (direction < 0 and u <= limit):
                out.append(limit)
                return out
            out.append(u)

    pts = [lo, hi]
    if lo < pole < hi:
        pts.append(pole)
        pts += walk(pole, -1, lo, 0.0)
        pts += walk(pole, +1, hi, 0.0)
    elif pole <= lo:
        pts += walk(lo, +1, hi, lo - pole)
    else:
        pts += walk(hi, -1, lo, pole - hi)
    return np.unique(np.asarray(pts, dtype=float))


def uniform_breakpoints(lo: float, hi: float, hmax: float) -> np.ndarray:
    n = max(1, int(np.ceil((hi - lo) / hmax)))
    return np.linspace(lo, hi, n + 1)


def richardson(values, ratio: float = 2.0) -> tuple[float, float]:
    """Neville-style Richardson table for a sequence with step ratio ``ratio``.

    ``values[k]`` is the estimate at step ``h0 / ratio**k``; the error is
    assumed to be a power series ``c1 h + c2 h^2 + ...``.  Returns the most
    extrapolated value and the difference between the last two diagonal
    entries, used as an error estimate.
    """
    table = [[float(v)] for v in values]
    for k in range(1, len(table)):
        for j in range(1, k + 1):
            fac = ratio ** j
            table[k].append((fac * table[k][j - 1] - table[k - 1][j - 1]) / (fac - 1.0))
    best = table[-1][-1]
    if len(table) > 1:
        err = abs(best - table[-2][-1])
    else:
        err = float("inf")
    return best, err

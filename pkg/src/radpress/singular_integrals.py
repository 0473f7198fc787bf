"""Regularized singular time integrals of the stress-tensor cross term.

Three routes to the same numbers live here:

* :func:`j_closed_form` -- the large-tau closed form of the double time
  integral ``J`` of the cross-term kernel ``(u^2 + a) / (u^2 - b^2)^3``
  against ``cos(w t1) cos(w t2)``;
* :func:`residue_term` / :func:`j_from_residues` -- the four third-order-pole
  contour contributions that assemble into the closed form;
* :func:`j_numeric_oracle` -- direct quadrature of the finite-tau double
  integral with the poles treated by an averaged ``b -> b +/- i eps``
  displacement, extrapolated to ``eps -> 0``.

:func:`regularized_quartic_integral` implements the integration-by-parts
definition of double integrals against ``1/(t - t')^4`` through the
logarithmic kernel, and :func:`contour_quartic_integral` is its independent
``i eps`` counterpart.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quadrature import graded_breakpoints, integrate, panel_nodes, richardson
from .errors import AccuracyError, DegenerateSeparationError, RegularizationError

__all__ = [
    "SeparationParams",
    "KernelSample",
    "QuadratureControl",
    "j_closed_form",
    "j_rate_shape",
    "residue_term",
    "j_from_residues",
    "j_numeric_oracle",
    "j_secular_rate",
    "regularized_quartic_integral",
    "contour_quartic_integral",
]


@dataclass(frozen=True)
class SeparationParams:
    """Transverse geometry of a pair of points on the mirror.

    ``a = (z1 - z2)^2 - (y1 - y2)^2`` and ``b^2 = (y1 - y2)^2 + (z1 - z2)^2``.
    """

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("separation parameters must be finite")
        if self.b < 0:
            raise ValueError(f"b must be non-negative, got {self.b}")
        if abs(self.a) > self.b ** 2 * (1 + 1e-12) + 1e-300:
            raise ValueError(f"|a| = {abs(self.a)} exceeds b^2 = {self.b ** 2}")

    @classmethod
    def from_points(cls, y1: float, z1: float, y2: float, z2: float) -> "SeparationParams":
        dy2 = (y1 - y2) ** 2
        dz2 = (z1 - z2) ** 2
        return cls(a=dz2 - dy2, b=math.sqrt(dy2 + dz2))


@dataclass(frozen=True)
class KernelSample:
    """A smooth envelope ``F(t, t')`` sampled on a uniform square grid."""

    t: np.ndarray
    values: np.ndarray
    boundary_tol: float = 1e-8

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.size < 8:
            raise ValueError("t must be a 1-D grid with at least 8 nodes")
        if values.shape != (t.size, t.size):
            raise ValueError(f"values must have shape {(t.size, t.size)}, got {values.shape}")
        steps = np.diff(t)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            raise ValueError("grid must be uniform")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", values)

    @property
    def spacing(self) -> float:
        return float(self.t[1] - self.t[0])

    def boundary_residual(self) -> float:
        """Largest |F| on the two outermost grid lines, relative to max |F|."""
        v = self.values
        scale = float(np.max(np.abs(v)))
        if scale == 0.0:
            return 0.0
        rim = np.concatenate([v[:2].ravel(), v[-2:].ravel(), v[:, :2].ravel(), v[:, -2:].ravel()])
        return float(np.max(np.abs(rim))) / scale


@dataclass(frozen=True)
class QuadratureControl:
    """Knobs for the pole-aware composite quadrature.

    ``panels_per_period`` sets the maximum panel length ``(2 pi / w) / n``;
    ``eps_fraction`` scales the first pole displacement relative to
    ``min(b, 1/w)`` and ``eps_levels`` is the number of halvings fed into the
    Richardson table.
    """

    order: int = 10
    panels_per_period: int = 20
    eps_fraction: float = 0.1
    eps_levels: int = 6
    rtol: float = 1e-6

    def check(self) -> None:
        if self.order * self.panels_per_period < 20:
            raise AccuracyError(
                f"grid too coarse: {self.order * self.panels_per_period} nodes per period "
                "(need >= 20 to resolve the oscillation)"
            )
        if self.eps_levels < 2:
            raise AccuracyError("need at least two eps levels for extrapolation")


def _require_b(sep: SeparationParams) -> None:
    if sep.b == 0.0:
        raise DegenerateSeparationError(
            "b = 0: coincident transverse points; integrate over the area first"
        )


def j_closed_form(sep: SeparationParams, omega: float, tau: float) -> float:
    """Large-tau value of the double time integral ``J`` (linear in tau)."""
    _require_b(sep)
    a, b, w = sep.a, sep.b, omega
    bracket = (b * b * (b * b + a) * w * w + b * b - 3 * a) * math.sin(b * w) \
        + w * b * (3 * a - b * b) * math.cos(b * w)
    return 2 * math.pi * tau / (32 * b ** 5) * bracket


def j_rate_shape(x, c):
    """Dimensionless ``g(x, c)`` with ``J / tau = (2 pi / 32) w^3 g(b w, a / b^2)``.

    Vectorized; a short Taylor series replaces the cancelling closed form
    for ``x < 0.05`` so ``b -> 0`` stays finite (``g -> 4/3``).
    """
    x, c = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(c, dtype=float))
    out = np.empty(x.shape)
    small = x < 0.05
    xs, cs = x[small], c[small]
    x2 = xs * xs
    out[small] = (4 / 3 - x2 * (cs / 15 + 1 / 5) + x2 * x2 * (cs / 210 + 1 / 105)
                  - x2 ** 3 * (cs / 7560 + 1 / 4536))
    xl, cl = x[~small], c[~small]
    out[~small] = (((1 + cl) * xl ** 2 + 1 - 3 * cl) * np.sin(xl)
                   + xl * (3 * cl - 1) * np.cos(xl)) / xl ** 3
    return out


def _second_derivative(u: float, a: float, k: float, c: float) -> complex:
    """d^2/du^2 of (u^2 + a) e^{i k u} (u + c)^{-3}."""
    n0, n1, n2 = u * u + a, 2 * u, 2.0
    e0 = complex(math.cos(k * u), math.sin(k * u))
    e1, e2 = 1j * k * e0, -k * k * e0
    s = u + c
    d0, d1, d2 = s ** -3, -3 * s ** -4, 12 * s ** -5
    return (n2 * e0 * d0 + n0 * e2 * d0 + n0 * e0 * d2
            + 2 * (n1 * e1 * d0 + n1 * e0 * d1 + n0 * e1 * d1))


def residue_term(pole_sign: str, exponent_sign: str, sep: SeparationParams,
                 omega: float) -> complex:
    """One contour contribution to ``int (u^2+a)/(u^2-b^2)^3 e^{+-iwu} du``.

    ``pole_sign`` is the sign of the imaginary displacement of ``b``;
    ``exponent_sign`` the sign in ``e^{+-i w u}``.  The contour closes in the
    half plane where the exponential decays and picks up the one
    third-order pole lying there:

    ========  ========  ==========  ==================================
    Im b      exponent  pole        value
    ========  ========  ==========  ==================================
    ``+``     ``+``     ``u = b``   ``+pi i [(u^2+a)e^{iwu}/(u+b)^3]''``
    ``+``     ``-``     ``u = -b``  ``-pi i [(u^2+a)e^{-iwu}/(u-b)^3]''``
    ``-``     ``-``     ``u = b``   ``-pi i [(u^2+a)e^{-iwu}/(u+b)^3]''``
    ``-``     ``+``     ``u = -b``  ``+pi i [(u^2+a)e^{iwu}/(u-b)^3]''``
    ========  ========  ==========  ==================================
    """
    _require_b(sep)
    if pole_sign not in "+-" or exponent_sign not in "+-" or len(pole_sign + exponent_sign) != 2:
        raise ValueError("signs must be '+' or '-'")
    a, b = sep.a, sep.b
    k = omega if exponent_sign == "+" else -omega
    upper_pole = b if pole_sign == "+" else -b
    # e^{+iwu} closes upward, e^{-iwu} downward (clockwise, hence the minus)
    at = upper_pole if exponent_sign == "+" else -upper_pole
    orientation = 1 if exponent_sign == "+" else -1
    partner = at  # the other factor of u^2 - b^2 is (u + at)
    return orientation * math.pi * 1j * _second_derivative(at, a, k, partner)


def j_from_residues(sep: SeparationParams, omega: float, tau: float) -> float:
    """Assemble ``J = (tau/4)(J+ + J-)``, ``J+- = (I+-1 + I+-2)/2``."""
    total = sum(residue_term(p, e, sep, omega) for p in "+-" for e in "+-")
    return (tau / 8.0 * total).real


def _time_weight(u: np.ndarray, omega: float, tau: float, phase: float = 0.0) -> np.ndarray:
    """Weight left after integrating cos(w t1 + phi) cos(w t2 + phi) along u = t1 - t2."""
    rest = tau - u
    return rest * np.cos(omega * u) + math.cos(omega * tau + 2 * phase) * rest * np.sinc(omega * rest / math.pi)


def _displaced_integral(sep: SeparationParams, omega: float, tau: float, eps: float,
                        breakpoints: np.ndarray, order: int, phase: float = 0.0) -> float:
    beta2 = complex(sep.b, eps) ** 2
    a = sep.a

    def f(u):
        kernel = (u * u + a) / (u * u - beta2) ** 3
        return kernel.real * _time_weight(u, omega, tau, phase)

    # Re(K_eps) is the average of the +eps and -eps displacements
    return integrate(f, breakpoints, order)


def j_numeric_oracle(sep: SeparationParams, omega: float, tau: float,
                     grid: QuadratureControl | None = None, phase: float = 0.0) -> float:
    """Finite-tau double integral ``J`` by direct quadrature.

    The square ``[0, tau]^2`` is reduced to a single integral over
    ``u = t1 - t2``.  The third-order pole at ``u = b`` is handled by
    averaging the displacements ``b -> b +- i eps`` (the real part of either)
    and Richardson-extrapolating ``eps -> 0``.  The result includes the
    ``O(1)`` end-point pieces that the closed form drops.  ``phase`` shifts
    both field factors, ``cos(w t + phase)``; only the end-point pieces feel it.
    """
    _require_b(sep)
    grid = grid or QuadratureControl()
    grid.check()
    if tau <= 0:
        raise ValueError("tau must be positive")
    scale = sep.b if omega == 0 else min(sep.b, 1.0 / omega)
    eps0 = grid.eps_fraction * scale
    eps_list = [eps0 / 2 ** k for k in range(grid.eps_levels)]
    hmax = (2 * math.pi / omega) / grid.panels_per_period if omega > 0 else math.inf
    hmax = min(hmax, max(tau, sep.b))
    bp = graded_breakpoints(0.0, tau, sep.b, eps_list[-1], hmax)
    values = [_displaced_integral(sep, omega, tau, e, bp, grid.order, phase) for e in eps_list]
    best, err = richardson(values)
    mag = max(abs(best), abs(values[0]) * 1e-6, 1e-300)
    if err > max(grid.rtol * mag, 1e-6 * tau / sep.b ** 3):
        raise AccuracyError(
            f"eps extrapolation did not settle: estimate {best:.6g}, "
            f"last correction {err:.3g}; increase eps_levels or order"
        )
    return best


def j_secular_rate(sep: SeparationParams, omega: float, tau: float,
                   grid: QuadratureControl | None = None, phase: float = 0.0) -> float:
    """Growth rate ``dJ/dtau`` of the numeric double integral.

    The end-point pieces of ``J(tau)`` are constant plus terms periodic in
    tau with period ``pi/w``, so the difference over one such period isolates
    the linear growth.  For ``w = 0`` the difference ``J(2 tau) - J(tau)`` is
    used instead.
    """
    if omega > 0:
        step = math.pi / omega
    else:
        step = tau
    j1 = j_numeric_oracle(sep, omega, tau, grid, phase)
    j2 = j_numeric_oracle(sep, omega, tau + step, grid, phase)
    return (j2 - j1) / step


def _log_hat_weights(n: int, h: float) -> np.ndarray:
    """Exact weights of ``int ln((t_i - s)^2) phi_j(s) ds`` for hat functions.

    Returns an ``(n, n)`` matrix; the first and last columns use half hats.
    """

    def p(x):
        ax = np.abs(x)
        lx = np.log(np.where(ax > 0, ax, 1.0))
        return x * lx - x

    def q(x):
        ax = np.abs(x)
        lx = np.log(np.where(ax > 0, ax, 1.0))
        return 0.5 * x * x * lx - 0.25 * x * x

    d = np.arange(-(n - 1), n, dtype=float)
    # in units of h: left half-hat on [-1, 0], right half-hat on [0, 1] (s measured from t_j)
    left = (1 + d) * (p(d + 1) - p(d)) - (q(d + 1) - q(d))
    right = (1 - d) * (p(d) - p(d - 1)) + (q(d) - q(d - 1))
    idx = np.arange(n)
    diff = idx[:, None] - idx[None, :] + n - 1
    # ln(x^2) = 2 ln h + 2 ln|x/h|; each half hat has mass h/2
    w = h * np.log(h) * 2 + 2 * h * (left + right)[diff]
    w[:, 0] = h * np.log(h) + 2 * h * right[diff[:, 0]]
    w[:, -1] = h * np.log(h) + 2 * h * left[diff[:, -1]]
    return w


def _second_difference(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourth-order central second difference with zero extension past the grid."""
    v = np.moveaxis(values, axis, 0)
    pad = np.zeros((2,) + v.shape[1:])
    v = np.concatenate([pad, v, pad], axis=0)
    out = (-v[4:] + 16 * v[3:-1] - 30 * v[2:-2] + 16 * v[1:-3] - v[:-4]) / (12 * h * h)
    return np.moveaxis(out, 0, axis)


def regularized_quartic_integral(F: KernelSample) -> float:
    """``int int F(t,t') / (t-t')^4`` defined through the logarithmic kernel.

    Evaluates ``-(1/12) int int ln((t-t')^2) d_t^2 d_t'^2 F dt dt'``: the mixed
    fourth derivative is taken by finite differences, the inner integral
    against the log kernel by exact product integration on piecewise-linear
    interpolants and the outer one by the trapezoidal rule.  Accuracy is
    second order in the grid spacing.
    """
    residual = F.boundary_residual()
    if residual > F.boundary_tol:
        raise RegularizationError(
            f"envelope does not vanish at the boundary (relative rim value {residual:.3g})"
        )
    h = F.spacing
    g = _second_difference(_second_difference(F.values, h, 0), h, 1)
    w = _log_hat_weights(F.t.size, h)
    inner = np.einsum("ij,ij->i", w, g)
    outer = np.full(F.t.size, h)
    outer[0] = outer[-1] = 0.5 * h
    return float(-np.dot(outer, inner) / 12.0)


def _autocorrelation(g, lo: float, hi: float, u: np.ndarray, order: int = 16,
                     panels: int = 64) -> np.ndarray:
    """``A(u) = int g(t) g(t - u) dt`` for an envelope supported on [lo, hi]."""
    nodes, weights = panel_nodes(np.linspace(lo, hi, panels + 1), order)
    out = np.empty_like(u)
    gt = g(nodes)
    for start in range(0, u.size, 512):
        uu = u[start:start + 512]
        out[start:start + 512] = (g(nodes[None, :] - uu[:, None]) * gt[None, :]) @ weights
    return out


def contour_quartic_integral(g, support: tuple[float, float], eps_fraction: float = 0.02,
                             eps_levels: int = 6, order: int = 12) -> float:
    """``int int g(t) g(t') / (t - t')^4`` by ``i eps`` displacement.

    Reduces to ``int A(u) / (u - i eps)^4 du`` with ``A`` the autocorrelation
    of ``g`` and Richardson-extrapolates ``eps -> 0``.  For a real envelope
    the displaced integral is real, and equals the average of the two
    half-plane prescriptions.
    """
    lo, hi = support
    width = hi - lo
    eps0 = eps_fraction * width
    eps_list = [eps0 / 2 ** k for k in range(eps_levels)]
    bp = graded_breakpoints(0.0, width, 0.0, eps_list[-1], width / 64)
    nodes, weights = panel_nodes(bp, order)
    acf = _autocorrelation(g, lo, hi, nodes)
    values = []
    for e in eps_list:
        # even A: integral over (-W, W) is twice the real part over (0, W)
        kern = (1.0 / (nodes - 1j * e) ** 4).real
        values.append(2.0 * float(np.sum(acf * kern * weights)))
    best, _ = richardson(values)
    return best


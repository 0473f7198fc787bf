"""Single-mirror momentum, velocity and position dispersions.

Two independent routes give the velocity dispersion of a free mirror hit by
a coherent beam: photon counting (Poisson statistics of ``n`` photons each
transferring ``2 w``) and the coordinate-space stress-tensor cross term,
integrated over a window ``tau`` and twice over the illuminated disk.
Natural units throughout (hbar = c = 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._quadrature import integrate, panel_nodes, richardson, uniform_breakpoints
from .errors import AccuracyError, DomainError, RegimeError
from .field_modes import Wavepacket, overlap_integral_at_mirror
from .singular_integrals import QuadratureControl, j_rate_shape
from .states import BeamSpec, LightState, MirrorSpec

__all__ = [
    "LightState",
    "MirrorSpec",
    "BeamSpec",
    "VarianceTerms",
    "PositionDispersion",
    "delta_p2_photon_counting",
    "delta_p2_from_beam",
    "delta_p2_wavepacket",
    "delta_v2_coherent",
    "delta_v2_stress_tensor",
    "spatial_integral_I",
    "spatial_integral_limit",
    "single_point_area_integral",
    "radial_reduction",
    "abel_radial_integral",
    "number_state_terms",
    "dropped_oscillatory_ratio",
    "variance_decomposition",
    "delta_x2",
]

MIN_OMEGA_R = 50.0
MIN_OMEGA_TAU = 1e3
ANGULAR_NODES = 8  # g is linear in cos(2 theta), so 8 trapezoid nodes are exact


@dataclass(frozen=True)
class VarianceTerms:
    normal_ordered: float
    cross: float
    vacuum_included: bool = False

    @property
    def total(self) -> float:
        return self.normal_ordered + self.cross


@dataclass(frozen=True)
class PositionDispersion:
    """Exact ``<dx^2>`` from the ODE plus the order-of-magnitude ``dx_rp``."""

    delta_x2: float
    delta_x_rp: float
    conventions: dict = field(default_factory=lambda: {
        "delta_x2": "exact: K tau^3 / 3 from zero initial data",
        "delta_x_rp": "order of magnitude: b sqrt(w P) tau^(3/2) / m",
    })


# -- photon counting -----------------------------------------------------------

def delta_p2_photon_counting(state: LightState, tau: float | None = None) -> float:
    """``4 w^2 <n>`` for a coherent state; ``tau`` is accepted for symmetry only."""
    if state.kind != "coherent":
        raise ValueError("number states carry no counting noise; use number_state_terms")
    return 4.0 * state.omega ** 2 * state.mean_photons


def delta_p2_from_beam(beam: BeamSpec, tau: float) -> float:
    """``4 w A rho tau``: the photon-counting result with ``<n> = P tau / w``."""
    return 4.0 * beam.omega * beam.area * beam.rho * tau


def delta_v2_coherent(beam: BeamSpec, mirror: MirrorSpec, tau: float) -> float:
    if tau <= 0:
        raise ValueError("tau must be positive")
    return 4.0 * beam.omega * beam.area * beam.rho * tau / mirror.mass ** 2


def delta_p2_wavepacket(packet: Wavepacket, amplitude: float) -> float:
    """``|z|^2 (int dt da |u_0|^2)^2`` for a single-packet coherent state."""
    return amplitude ** 2 * overlap_integral_at_mirror(packet) ** 2


# -- area integrals ------------------------------------------------------------

def _disk_overlap(s: np.ndarray, R: float) -> np.ndarray:
    """Area of two radius-R disks whose centres are ``s`` apart."""
    s = np.clip(s, 0.0, 2 * R)
    return 2 * R * R * np.arccos(s / (2 * R)) - 0.5 * s * np.sqrt(np.maximum(4 * R * R - s * s, 0.0))


def _radial_breakpoints(lo: float, hi: float, omega: float, quad: QuadratureControl) -> np.ndarray:
    hmax = (hi - lo) / 50
    if omega > 0:
        hmax = min(hmax, 2 * math.pi / omega / quad.panels_per_period)
    bp = uniform_breakpoints(lo, hi, hmax)
    # the overlap has a square-root edge at s = 2R; grade the last panel
    last = bp[-2]
    graded = last + (hi - last) * (1 - 0.5 ** np.arange(1, 20))
    return np.concatenate([bp[:-1], graded, [hi]])


def _angular_mean(omega: float, s: np.ndarray) -> np.ndarray:
    """Mean over separation direction of ``w^3 g(w s, a/b^2)``, with a/b^2 = -cos 2 theta."""
    theta = 2 * math.pi * np.arange(ANGULAR_NODES) / ANGULAR_NODES
    c = -np.cos(2 * theta)
    return omega ** 3 * j_rate_shape(omega * s[:, None], c[None, :]).mean(axis=1)


def spatial_integral_I(omega: float, R: float, quad: QuadratureControl | None = None,
                       chunk: int = 50_000) -> float:
    """Double disk integral ``I = int da1 int da2 w^3 g`` at finite ``R``.

    Uses translation invariance: ``I = int_0^{2R} s O(s) ds int dtheta (...)``,
    with ``O`` the overlap area of two disks.  Tends to ``4 pi w A`` with a
    ``1 - 1/(2 w R)`` edge correction.
    """
    quad = quad or QuadratureControl()
    if omega == 0:
        return 0.0
    if omega * R < 1:
        raise DomainError(f"w R = {omega * R:.3g} < 1: outside the large-spot regime")
    bp = _radial_breakpoints(0.0, 2 * R, omega, quad)
    s, w = panel_nodes(bp, quad.order)
    total = 0.0
    # ordered chunk reduction keeps the sum reproducible
    for lo in range(0, s.size, chunk):
        ss, ww = s[lo:lo + chunk], w[lo:lo + chunk]
        total += float(np.sum(ww * ss * _disk_overlap(ss, R) * _angular_mean(omega, ss))) * 2 * math.pi
    return total


def single_point_area_integral(omega: float, R: float, quad: QuadratureControl | None = None) -> float:
    """``int da w^3 g`` over a radius-R disk around one fixed point, in polar form."""
    quad = quad or QuadratureControl()
    bp = _radial_breakpoints(0.0, R, omega, quad)[:-20]
    bp = np.append(bp, R)
    r, w = panel_nodes(bp, quad.order)
    return float(np.sum(w * r * _angular_mean(omega, r))) * 2 * math.pi


def _radial_integrand(u: np.ndarray) -> np.ndarray:
    """``[(1 + u^2) sin u - u cos u] / u^2`` with a series near zero."""
    u = np.asarray(u, dtype=float)
    out = np.empty(u.shape)
    small = u < 1e-2
    us = u[small]
    out[small] = np.sin(us) + us / 3 - us ** 3 / 30 + us ** 5 / 840
    ul = u[~small]
    out[~small] = np.sin(ul) + (np.sin(ul) - ul * np.cos(ul)) / ul ** 2
    return out


def radial_reduction(omega: float, R: float, quad: QuadratureControl | None = None) -> float:
    """``2 pi int_0^R dr [(1 + w^2 r^2) sin wr - wr cos wr] / r^2``."""
    quad = quad or QuadratureControl()
    bp = uniform_breakpoints(0.0, omega * R, 2 * math.pi / quad.panels_per_period)
    return 2 * math.pi * omega * integrate(_radial_integrand, bp, quad.order)


def abel_radial_integral(alpha0: float = 0.2, levels: int = 7, order: int = 12) -> tuple[float, float]:
    """``int_0^inf [(1+u^2) sin u - u cos u] / u^2 du`` with an ``e^{-alpha u}`` factor.

    The damped integral is analytic in alpha near zero, so a halving
    sequence is Richardson-extrapolated to alpha = 0.  Returns
    ``(value, error estimate)``; the value is 2.
    """
    values = []
    for k in range(levels):
        alpha = alpha0 / 2 ** k
        top = 40.0 / alpha
        bp = uniform_breakpoints(0.0, top, math.pi / 8)
        values.append(integrate(lambda u, a=alpha: np.exp(-a * u) * _radial_integrand(u), bp, order))
    return richardson(values)


def spatial_integral_limit(omega: float, area: float) -> float:
    """Large-spot limit ``2 pi w A x (radial integral) = 4 pi w A``."""
    value, _ = abel_radial_integral()
    return 2 * math.pi * omega * area * value


def delta_v2_stress_tensor(beam: BeamSpec, mirror: MirrorSpec, tau: float,
                           quad: QuadratureControl | None = None,
                           method: str = "quadrature") -> float:
    """Velocity dispersion from the stress-tensor cross term.

    ``(32 C^2 |z|^2 / pi^2 m^2) int da1 int da2 J`` with ``rho = 2 C^2 |z|^2``
    and ``J = (2 pi tau / 32) w^3 g``.  ``method="quadrature"`` does the disk
    integrals numerically and requires ``w R >= 50`` and ``w tau >= 1e3``;
    ``method="asymptotic"`` uses the large-spot limit of the area integral
    and has no regime restriction.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    w, R = beam.omega, mirror.spot_radius
    if method == "asymptotic":
        area_integral = spatial_integral_limit(w, mirror.area)
    elif method == "quadrature":
        if w * R < MIN_OMEGA_R or w * tau < MIN_OMEGA_TAU:
            raise RegimeError(
                f"need w R >= {MIN_OMEGA_R:g} and w tau >= {MIN_OMEGA_TAU:g}; "
                f"got w R = {w * R:.4g}, w tau = {w * tau:.4g}"
            )
        area_integral = spatial_integral_I(w, R, quad)
    else:
        raise ValueError(f"unknown method {method!r}")
    j_area = 2 * math.pi * tau / 32 * area_integral
    return 16.0 * beam.rho / (math.pi ** 2 * mirror.mass ** 2) * j_area


# -- number states and decomposition -------------------------------------------

def dropped_oscillatory_ratio(omega: float, tau: float, area: float = 1.0) -> float:
    """|int_0^tau Re u(t)^2 dt| / int_0^tau |u(t)|^2 dt at the mirror.

    ``u = -2 C e^{-i w t}`` with ``C^2 = w / (2 A tau)``.  These are the
    integrals a rotating-wave filter discards; the ratio is ``O(1/(w tau))``.
    """
    c = math.sqrt(omega / (2 * area * tau))
    bp = uniform_breakpoints(0.0, tau, 2 * math.pi / omega / 20)
    u = lambda t: -2 * c * np.exp(-1j * omega * t)  # noqa: E731
    dropped = integrate(lambda t: (u(t) ** 2).real, bp)
    kept = integrate(lambda t: np.abs(u(t)) ** 2, bp)
    return abs(dropped) / kept


def number_state_terms(n: int, omega: float, validate: bool = False,
                       tau: float | None = None, tol: float = 1e-2):
    """``(normal_ordered, cross, total) = (-4 n w^2, 4 n w^2, 0)`` for ``|n>``.

    With ``validate=True`` the discarded oscillatory integrals are evaluated
    over ``tau`` and an AccuracyError is raised if they exceed ``tol`` of the
    kept terms; the ratio is returned as a fourth element.
    """
    if int(n) != n or n < 0:
        raise ValueError("n must be a non-negative integer")
    kept = 4.0 * n * omega ** 2
    terms = (-kept, kept, 0.0)
    if not validate:
        return terms
    if tau is None or tau <= 0 or omega <= 0:
        raise ValueError("validation needs omega > 0 and tau > 0")
    ratio = dropped_oscillatory_ratio(omega, tau)
    if ratio >= tol:
        raise AccuracyError(f"dropped integrals are {ratio:.3g} of kept terms (tol {tol:g})")
    return terms + (ratio,)


def variance_decomposition(state: LightState) -> VarianceTerms:
    """Split ``<dp^2>`` into normal-ordered and cross parts; the vacuum part is excluded."""
    if state.kind == "coherent":
        # coherent states factorize the normal-ordered product: no variance from it
        return VarianceTerms(0.0, 4.0 * state.omega ** 2 * state.mean_photons)
    if state.kind == "number":
        no, cross, _ = number_state_terms(state.n, state.omega)
        return VarianceTerms(no, cross)
    raise ValueError(f"unsupported state kind {state.kind!r}")


# -- position ------------------------------------------------------------------

def delta_x2(beam: BeamSpec, mirror: MirrorSpec, tau: float, bounces: int = 1) -> PositionDispersion:
    """Position dispersion after ``tau`` for ``<dv^2> = K tau``.

    ``K = 4 w A rho b^2 / m^2`` (``b`` bounces).  Solving
    ``d^2 <dx^2>/dtau^2 = 2 K tau`` from rest gives ``K tau^3 / 3``.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    k = bounces ** 2 * delta_v2_coherent(beam, mirror, 1.0)
    dx_rp = bounces * math.sqrt(beam.omega * beam.power) * tau ** 1.5 / mirror.mass
    return PositionDispersion(k * tau ** 3 / 3.0, dx_rp)

"""Mode functions, vacuum two-point functions and wavepacket overlaps.

Coordinate conventions: the standing-wave mode :func:`mode_B` has its mirror
at ``x = 0``; the image construction in :func:`vacuum_two_point` reflects in
the plane ``z = 0``.  Both are kept as-is and each function states which
coordinate it uses.  Natural units (hbar = c = 1, Lorentz-Heaviside).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quadrature import integrate, uniform_breakpoints
from .errors import ContractError, SingularSeparationError
from .states import BoxMode, LightState

__all__ = [
    "SpacetimePoint",
    "Wavepacket",
    "mode_B",
    "vacuum_two_point",
    "normal_ordered_BB",
    "cross_term_Txx",
    "overlap_pieces",
    "overlap_integral_at_mirror",
]

LIGHT_CONE_TOL = 1e-9


@dataclass(frozen=True)
class SpacetimePoint:
    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0


def mode_B(mode: BoxMode, p: SpacetimePoint) -> complex:
    """B_z mode function ``-2 C cos(w x) exp(-i w t)`` (mirror at x = 0)."""
    w = mode.omega
    return -2.0 * mode.normalization * math.cos(w * p.x) * complex(math.cos(w * p.t), -math.sin(w * p.t))


def _empty_space(dt: float, dx: float, dy: float, dz: float) -> float:
    r2 = dx * dx + dy * dy + dz * dz
    interval = dt * dt - r2
    scale = dt * dt + r2
    if scale == 0.0 or abs(interval) < LIGHT_CONE_TOL * scale:
        raise SingularSeparationError(
            f"points are null separated (interval {interval:.3g}, scale {scale:.3g})"
        )
    return (dt * dt + r2 - 2 * dz * dz) / (math.pi ** 2 * interval ** 3)


def vacuum_two_point(p1: SpacetimePoint, p2: SpacetimePoint, with_mirror: bool = False) -> float:
    """Vacuum <B_z B_z> in empty space, plus the z -> -z image term if requested."""
    dt, dx, dy = p1.t - p2.t, p1.x - p2.x, p1.y - p2.y
    value = _empty_space(dt, dx, dy, p1.z - p2.z)
    if with_mirror:
        value += _empty_space(dt, dx, dy, p1.z + p2.z)
    return value


def normal_ordered_BB(state: LightState, p1: SpacetimePoint, p2: SpacetimePoint,
                      volume: float = 1.0) -> float:
    """<z| :B_z(p1) B_z(p2): |z> for a coherent box mode.

    Equals ``16 C^2 |z|^2 cos(w t1 + phi) cos(w t2 + phi) cos(w x1) cos(w x2)``.
    """
    if state.kind != "coherent":
        raise ValueError("normal_ordered_BB expects a coherent state")
    w, phi = state.omega, state.phase
    c2 = BoxMode(w, volume).normalization ** 2
    return (16.0 * c2 * state.amplitude ** 2
            * math.cos(w * p1.t + phi) * math.cos(w * p2.t + phi)
            * math.cos(w * p1.x) * math.cos(w * p2.x))


def cross_term_Txx(state: LightState, p1: SpacetimePoint, p2: SpacetimePoint,
                   volume: float = 1.0) -> float:
    """Cross term of <T_xx T_xx>: normal-ordered <BB> times the mirrored vacuum <BB>."""
    return normal_ordered_BB(state, p1, p2, volume) * vacuum_two_point(p1, p2, with_mirror=True)


@dataclass(frozen=True)
class Wavepacket:
    """Gaussian-spectrum packet hitting a perfect mirror at x = 0.

    The incident piece is ``f(t - x)`` with
    ``f(s) = N exp(-sigma^2 s^2 / 2) exp(-i w0 s)``, uniform over a transverse
    area ``area``; the reflected piece is ``f(t + x)`` (no phase change for
    B_z).  ``N`` is fixed by ``int |u_I|^2 d^3x = w0 / 2``; ``scale``
    multiplies the amplitude and exists to represent unnormalized packets.
    """

    center_frequency: float
    bandwidth: float
    area: float = 1.0
    reflected: bool = True
    scale: float = 1.0

    def __post_init__(self):
        if self.center_frequency <= 0 or self.bandwidth <= 0 or self.area <= 0:
            raise ValueError("frequency, bandwidth and area must be positive")
        if self.bandwidth / self.center_frequency > 0.1:
            raise ValueError(
                f"packet not sharply peaked: sigma/w0 = {self.bandwidth / self.center_frequency:.3g} > 0.1"
            )

    @property
    def amplitude(self) -> float:
        w0, s = self.center_frequency, self.bandwidth
        return self.scale * math.sqrt(w0 * s / (2.0 * self.area * math.sqrt(math.pi)))

    @property
    def half_width(self) -> float:
        """Truncation half-width 8/sigma in time (or space)."""
        return 8.0 / self.bandwidth

    def profile(self, s):
        s = np.asarray(s, dtype=float)
        return self.amplitude * np.exp(-0.5 * (self.bandwidth * s) ** 2) * np.exp(-1j * self.center_frequency * s)

    def incident(self, t, x):
        return self.profile(np.asarray(t) - np.asarray(x))

    def reflected_part(self, t, x):
        if not self.reflected:
            return np.zeros(np.broadcast(np.asarray(t), np.asarray(x)).shape, dtype=complex)
        return self.profile(np.asarray(t) + np.asarray(x))

    def _panels(self) -> np.ndarray:
        hmax = (2 * math.pi / self.center_frequency) / 20
        return uniform_breakpoints(-self.half_width, self.half_width, hmax)

    def norm(self) -> float:
        """Numerical ``int |u_I|^2 d^3x`` at t = 0."""
        return self.area * integrate(lambda x: np.abs(self.incident(0.0, x)) ** 2, self._panels())


def overlap_pieces(packet: Wavepacket) -> dict[str, float]:
    """Time-area integrals on the mirror of the four pieces of ``|u_I + u_R|^2``."""
    norm = packet.norm()
    target = 0.5 * packet.center_frequency
    if abs(norm - target) > 1e-6 * target:
        raise ContractError(f"packet norm {norm:.9g} differs from w0/2 = {target:.9g}")
    bp = packet._panels()
    inc = lambda t: packet.incident(t, 0.0)  # noqa: E731
    ref = lambda t: packet.reflected_part(t, 0.0)  # noqa: E731
    A = packet.area
    return {
        "incident": A * integrate(lambda t: np.abs(inc(t)) ** 2, bp),
        "reflected": A * integrate(lambda t: np.abs(ref(t)) ** 2, bp),
        "incident_reflected": A * integrate(lambda t: (inc(t) * np.conj(ref(t))).real, bp),
        "reflected_incident": A * integrate(lambda t: (np.conj(inc(t)) * ref(t)).real, bp),
    }


def overlap_integral_at_mirror(packet: Wavepacket) -> float:
    """``int dt da |u_0|^2`` on the mirror; equals 2 w0 for a normalized packet."""
    return sum(overlap_pieces(packet).values())

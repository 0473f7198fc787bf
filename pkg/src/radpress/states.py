"""Single-mode light states and the mirror/beam geometry they act on."""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["LightState", "MirrorSpec", "BeamSpec", "BoxMode"]


@dataclass(frozen=True)
class BoxMode:
    """Standing-wave mode normalized in a box of volume ``volume``."""

    omega: float
    volume: float = 1.0

    def __post_init__(self):
        if self.omega < 0 or self.volume <= 0:
            raise ValueError("need omega >= 0 and volume > 0")

    @property
    def normalization(self) -> float:
        """C = sqrt(omega / 2V)."""
        return math.sqrt(self.omega / (2.0 * self.volume))


@dataclass(frozen=True)
class LightState:
    """Coherent state ``|z>`` (``amplitude = |z|``) or number state ``|n>``.

    ``phase`` follows ``z = |z| exp(-i phase)``; it is ignored for number states.
    """

    kind: str
    omega: float
    amplitude: float = 0.0
    n: int = 0
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in ("coherent", "number"):
            raise ValueError(f"unsupported state kind {self.kind!r}")
        if self.omega < 0:
            raise ValueError("omega must be non-negative")
        if self.amplitude < 0:
            raise ValueError("amplitude |z| must be non-negative")
        if self.kind == "number":
            if int(self.n) != self.n or self.n < 0:
                raise ValueError("n must be a non-negative integer")
            object.__setattr__(self, "n", int(self.n))

    @classmethod
    def coherent(cls, omega: float, amplitude: float, phase: float = 0.0) -> "LightState":
        return cls("coherent", omega, amplitude=amplitude, phase=phase)

    @classmethod
    def number(cls, omega: float, n: int) -> "LightState":
        return cls("number", omega, n=n)

    @property
    def mean_photons(self) -> float:
        if self.kind == "coherent":
            return self.amplitude ** 2
        return float(self.n)


@dataclass(frozen=True)
class MirrorSpec:
    """Perfectly reflecting free mirror illuminated over a disk of radius R."""

    mass: float
    spot_radius: float

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.spot_radius <= 0:
            raise ValueError("spot radius must be positive")

    @property
    def area(self) -> float:
        return math.pi * self.spot_radius ** 2


@dataclass(frozen=True)
class BeamSpec:
    """Monochromatic beam of energy density ``rho`` over cross-section ``area``."""

    omega: float
    rho: float
    area: float

    def __post_init__(self):
        if self.omega < 0 or self.rho < 0 or self.area <= 0:
            raise ValueError("need omega >= 0, rho >= 0, area > 0")

    @property
    def power(self) -> float:
        return self.area * self.rho

    @classmethod
    def from_box(cls, mode: BoxMode, amplitude: float, area: float) -> "BeamSpec":
        """Beam carried by a coherent box mode: rho = w|z|^2/V = 2 C^2 |z|^2."""
        return cls(mode.omega, mode.omega * amplitude ** 2 / mode.volume, area)

    @classmethod
    def for_mirror(cls, omega: float, rho: float, mirror: MirrorSpec) -> "BeamSpec":
        return cls(omega, rho, mirror.area)

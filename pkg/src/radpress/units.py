"""SI <-> natural-unit bridge (hbar = c = 1, base time ``t0`` seconds).

A natural-unit number times ``factor(kind)`` gives the SI value.  Only the
CLI layer converts; the library works in natural units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants

__all__ = ["UnitContext", "KINDS"]

HBAR = constants.hbar
C = constants.c

# kind -> (power of hbar, power of c, power of t0) in the SI factor
KINDS = {
    "time": (0, 0, 1),
    "length": (0, 1, 1),
    "angular_frequency": (0, 0, -1),
    "energy": (1, 0, -1),
    "mass": (1, -2, -1),
    "momentum": (1, -1, -1),
    "velocity": (0, 1, 0),
    "power": (1, 0, -2),
    "area": (0, 2, 2),
    "energy_density": (1, -3, -4),
    "dimensionless": (0, 0, 0),
}


@dataclass(frozen=True)
class UnitContext:
    t0: float = 1.0  # seconds per natural time unit

    def __post_init__(self):
        if not self.t0 > 0:
            raise ValueError("t0 must be positive")

    def factor(self, kind: str) -> float:
        """SI value of one natural unit of ``kind``; ``kind^2`` squares it."""
        power = 1
        if kind.endswith("^2"):
            kind, power = kind[:-2], 2
        try:
            ph, pc, pt = KINDS[kind]
        except KeyError:
            raise ValueError(f"unknown quantity kind {kind!r}") from None
        return (HBAR ** ph * C ** pc * self.t0 ** pt) ** power

    def to_si(self, value: float, kind: str) -> float:
        return value * self.factor(kind)

    def to_natural(self, value: float, kind: str) -> float:
        return value / self.factor(kind)

    def omega_from_wavelength(self, wavelength_si: float) -> float:
        """Natural angular frequency for an SI vacuum wavelength, ``w = 2 pi c / lambda``."""
        if not wavelength_si > 0:
            raise ValueError("wavelength must be positive")
        return self.to_natural(2 * math.pi * C / wavelength_si, "angular_frequency")

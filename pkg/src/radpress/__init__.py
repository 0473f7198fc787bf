"""Radiation-pressure fluctuations on mirrors from coherent and number-state light.

Submodules:

* ``singular_integrals`` -- regularized double time integrals of the cross term
* ``field_modes`` -- mode functions, vacuum two-point functions, wavepackets
* ``mirror_fluctuations`` -- single-mirror dispersions by both routes
* ``interferometer`` -- beam splitters, delay lines, cavities, noise budgets
* ``mc_oracle`` -- seeded photon-counting Monte Carlo
* ``units``, ``cli`` -- SI bridge and command-line front end
"""
from .errors import (
    AccuracyError,
    ContractError,
    DegenerateSeparationError,
    DomainError,
    InvalidCavityError,
    RadPressError,
    ReciprocityError,
    RegimeError,
    RegularizationError,
    SearchError,
    SingularSeparationError,
)
from .states import BeamSpec, BoxMode, LightState, MirrorSpec

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "ContractError", "DegenerateSeparationError", "DomainError",
    "InvalidCavityError", "RadPressError", "ReciprocityError", "RegimeError",
    "RegularizationError", "SearchError", "SingularSeparationError",
    "BeamSpec", "BoxMode", "LightState", "MirrorSpec",
]

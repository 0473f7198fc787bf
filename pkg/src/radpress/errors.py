"""Exception types raised across the package."""


class RadPressError(ValueError):
    """Base class for all domain errors."""


class DegenerateSeparationError(RadPressError):
    """Coincident transverse points (b = 0) where a closed form is singular."""


class AccuracyError(RadPressError):
    """A quadrature or extrapolation could not reach the requested accuracy."""


class RegularizationError(RadPressError):
    """An envelope does not vanish at the integration boundary."""


class SingularSeparationError(RadPressError):
    """Points are (numerically) null separated; pointwise value is undefined."""


class RegimeError(RadPressError):
    """Inputs lie outside the asymptotic regime an approximation relies on."""


class ContractError(RadPressError):
    """An input object violates a documented normalization or invariant."""


class ReciprocityError(RadPressError):
    """Beam-splitter amplitudes violate the loss-free reciprocity relations."""


class InvalidCavityError(RadPressError):
    """Cavity input mirror with |R| >= 1."""


class SearchError(RadPressError):
    """A one-dimensional minimization failed to bracket its minimum."""


class DomainError(RadPressError):
    """A physical input is outside its allowed domain (e.g. non-positive)."""

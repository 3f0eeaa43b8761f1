"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for all engine errors."""


class DomainError(GeometryError):
    """A parameter point or finite-difference stencil left the declared chart domain."""


class NonFiniteError(GeometryError):
    """An immersion evaluation produced NaN or infinity (singular parametrization point)."""


class DegeneratePointError(GeometryError):
    """The induced metric is singular / the differential is rank deficient."""


class SolitonFieldVanishesError(GeometryError):
    """The soliton field (tangential position component) is zero on the whole sample set."""


class CodimensionError(GeometryError):
    """An operation was called on a sample set with the wrong codimension."""


class IndeterminateVerdictError(GeometryError):
    """A numerical verdict fell in the dead band between the pass and fail thresholds."""


class ConfigError(GeometryError):
    """A run configuration file could not be parsed or validated."""

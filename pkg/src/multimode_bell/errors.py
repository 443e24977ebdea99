"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class SingularGeometryError(DomainError):
    """Polarizer orientation (nearly) parallel to the propagation direction."""


class NormalizationError(DomainError):
    """A state or measured density has zero total weight."""


class ConfigurationError(ValueError):
    """Malformed configuration: unknown keys, missing fields, undefined modes."""

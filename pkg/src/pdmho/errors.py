"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class NotNormalizableError(DomainError):
    """The requested state violates the boundary conditions at the walls."""

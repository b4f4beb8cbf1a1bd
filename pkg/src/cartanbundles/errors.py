"""Exception hierarchy shared by all modules."""


class CartanError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(CartanError, ValueError):
    pass


class DomainError(CartanError, ValueError):
    """A value lies outside the domain where an operation is defined."""


class ClosureViolationError(CartanError):
    """A matrix expected to lie in a Lie algebra's span does not."""


class InvalidTangentError(CartanError, ValueError):
    pass


class NotReductiveError(CartanError):
    pass


class UnsupportedModelError(CartanError):
    pass


class StencilError(CartanError):
    """A finite-difference stencil leaves the chart."""


class ComposabilityError(CartanError, ValueError):
    pass


class DegenerateFormError(CartanError):
    pass


class RefusedConstructionError(CartanError):
    pass


class CatalogError(CartanError, KeyError):
    pass


class ConfigurationError(CartanError):
    pass


class SpecError(CartanError, ValueError):
    """A geometry spec file is malformed."""

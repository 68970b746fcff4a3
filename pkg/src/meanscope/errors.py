"""Exception hierarchy shared across the package."""


class MeanscopeError(Exception):
    """Base class for all errors raised by meanscope."""


class InputError(MeanscopeError, ValueError):
    """Malformed input: wrong shape, non-finite entries, bad parameter range."""


class DomainError(MeanscopeError, ValueError):
    """A spectrum falls outside the domain of a scalar function."""


class SingularError(MeanscopeError, ArithmeticError):
    """Inversion of a (numerically) singular matrix was requested."""


class ValidationError(MeanscopeError, ValueError):
    """A user-supplied object fails its contract (e.g. f(1) != 1)."""


class DegenerateBoundsError(MeanscopeError, ValueError):
    """Spectral bounds collapse the ratio interval to a point."""


class DegenerateSlopeError(MeanscopeError, ValueError):
    """The chord slope of the representing function vanishes."""


class HypothesisError(MeanscopeError, ValueError):
    """An inequality was requested on an instance violating its hypotheses."""

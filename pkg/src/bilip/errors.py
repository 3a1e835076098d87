"""Exception types shared across the toolkit."""


class BilipError(Exception):
    """Base class for all toolkit errors."""


class OriginError(BilipError):
    """Inversion requested at (or numerically under) the origin."""


class PoleError(BilipError):
    """Stereographic projection requested at the pole."""


class DomainError(BilipError):
    """Input outside the domain of the requested transform."""


class HypothesisError(BilipError):
    """A sampled map violates the origin hypothesis required to invert it."""


class EmptyRestriction(BilipError):
    """A shell restriction left fewer than two sample pairs."""


class DegenerateMap(BilipError):
    """Every candidate pair was coincident; no ratio is defined."""


class InsufficientPoints(BilipError):
    """Too few usable points to build a direction set."""


class ParseError(BilipError):
    """A CSV or JSON payload does not match the expected layout."""

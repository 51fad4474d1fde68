"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: InputError -> 1, HypothesisError and
PreconditionError -> 2, VerificationError -> 3.
"""


class AdjidealError(Exception):
    pass


class InputError(AdjidealError):
    """Malformed user input (bad JSON, bad rational, unknown fixture)."""


class DimensionMismatchError(AdjidealError):
    """Exponents or ideals of different ambient dimension were mixed."""


class UndefinedInputError(AdjidealError):
    """Operation undefined for this input (e.g. gcd of the zero ideal)."""


class PreconditionError(AdjidealError):
    """A documented precondition of an operation was violated."""


class HypothesisError(AdjidealError):
    """A standing hypothesis fails (no jump at m=1, empty lc locus, ...)."""


class ResolveFurtherError(AdjidealError):
    """The certificate does not resolve the scene far enough."""


class ConstructionError(AdjidealError):
    """Extension/pushforward construction received inconsistent data."""


class VerificationError(AdjidealError):
    """An internal cross-check (two-path assertion) failed."""

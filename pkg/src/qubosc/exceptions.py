"""Exception types shared across the package."""


class InvalidParameter(ValueError):
    """A physical parameter is out of its allowed range."""


class TruncationError(Exception):
    """The Fock-space truncation cannot hold the requested state.

    Raised when the occupation tail beyond the highest retained level
    exceeds the truncation tolerance (1e-8 of probability mass), or when
    an evolution pushes significant population into the top Fock levels.
    """


class InvariantViolation(RuntimeError):
    """A density-matrix invariant (trace, Hermiticity, positivity) failed."""


class BasisError(ValueError):
    """An operation received a state on the wrong subsystem basis."""

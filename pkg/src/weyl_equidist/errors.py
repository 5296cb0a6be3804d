"""Exception hierarchy.

Every error raised on bad user input derives from :class:`ValidationError`
so the CLI can map it to a single exit code.  :class:`NotElliptic` is kept
separate because it has its own exit code.
"""


class WeylEquidistError(Exception):
    """Base class for all package errors."""


class ValidationError(WeylEquidistError, ValueError):
    """Input is well-formed but violates a mathematical precondition."""


class InvalidCartanType(ValidationError):
    pass


class LatticeDoesNotContainRoots(ValidationError):
    pass


class NonDominantWeight(ValidationError):
    pass


class RankMismatch(ValidationError):
    pass


class ZeroRoot(ValidationError):
    pass


class NotUnimodular(ValidationError):
    pass


class ActionDoesNotPreserveCorootLattice(ValidationError):
    pass


class SupportOutsideRootLattice(ValidationError):
    pass


class InfiniteGroup(ValidationError):
    pass


class GroupTooLarge(WeylEquidistError):
    """A finite group enumeration exceeded its configured cap."""


class NotElliptic(WeylEquidistError):
    """The Galois action has infinite coinvariants on the root lattice."""


class NoIntegerSolution(WeylEquidistError, ArithmeticError):
    pass


class InvariantViolation(WeylEquidistError, AssertionError):
    """A structural identity that must hold by theory failed to hold."""

"""Error types raised by the comet toolkit."""

from __future__ import annotations


class TruncationError(ValueError):
    """A degree lies outside the truncation box or above the word bound."""


class DirectSumError(ArithmeticError):
    """The real-vertex direct sum decomposition fails at a degree."""

    def __init__(self, degree: object, message: str) -> None:
        super().__init__(f"{degree}: {message}")
        self.degree = degree


class LatticeViolation(ArithmeticError):
    """An element expected in the A-lattice is not in it."""


class SingularMatrix(ArithmeticError):
    pass


class AmbiguousPredecessor(ArithmeticError):
    """More than one steep sequence maps onto the same element."""

"""Exceptions raised by the algebra kernel, the proof checks and the scenario loader."""

from __future__ import annotations

from typing import Optional


class AlgebraError(ArithmeticError):
    """Base class for exact-arithmetic failures."""


class VariableMismatchError(AlgebraError, ValueError):
    """Raised when operands live in different ambient variable lists."""


class UnknownVariableError(AlgebraError, KeyError):
    """Raised when a variable name is not part of the ambient list."""


class DivisionByZeroError(AlgebraError, ZeroDivisionError):
    """Raised on division by the zero polynomial or rational function."""


class NonExactDivisionError(AlgebraError):
    """Raised when a divisor does not divide the dividend exactly."""


class DenominatorVanishesError(AlgebraError):
    """Raised when a denominator evaluates to zero at a point."""


class UndefinedSubstitutionError(AlgebraError):
    """Raised when a substitution produces an identically zero denominator."""


class ResultantError(AlgebraError):
    """Raised when a resultant is requested for inputs constant in the variable."""


class ReductionError(AlgebraError):
    """Raised when a map cannot be reduced modulo a prime."""


class DegreeError(AlgebraError):
    """Raised when a relation does not have the degree an operation needs."""


class DegenerateEliminationError(AlgebraError):
    """Raised when every elimination route collapses to the zero polynomial."""


class ParseError(ValueError):
    """Raised on malformed expression text."""

    def __init__(self, message: str, position: Optional[int] = None) -> None:
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class ScenarioError(ValueError):
    """Raised when a scenario document violates the schema."""

    def __init__(self, message: str, path: str = "") -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)

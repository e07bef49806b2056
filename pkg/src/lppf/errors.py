"""Error types shared across the interpreter pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional


class LppfError(Exception):
    """Base class for all interpreter errors."""


@dataclass(frozen=True)
class ParseError:
    origin: str
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.origin}:{self.line}:{self.col}: {self.message}"


class ParseFailure(LppfError):
    """Raised by parse(); carries every diagnostic found in one pass."""

    def __init__(self, errors: List[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


class GroundingError(LppfError):
    """Grounding exceeded the instance cap; names the largest rule."""

    def __init__(self, message: str, rule_text: str = "", estimate: int = 0):
        self.rule_text = rule_text
        self.estimate = estimate
        super().__init__(message)


class EvaluationError(LppfError):
    """Arithmetic failure (division by zero, non-integer operand)."""

    def __init__(self, message: str, span=None):
        self.span = span
        if span is not None:
            message = f"{span}: {message}"
        super().__init__(message)


class Inconsistency(LppfError):
    """Two rules established different values for one function term.

    Carries both derivations so the conflict can be explained.
    """

    def __init__(self, term, value_a, value_b, derivation_a, derivation_b,
                 case_id: Optional[str] = None):
        self.term = term
        self.value_a = value_a
        self.value_b = value_b
        self.derivation_a = derivation_a
        self.derivation_b = derivation_b
        self.case_id = case_id
        from .render import assignment_text

        where = f" (case {case_id})" if case_id is not None else ""
        super().__init__(
            f"inconsistent assignments{where}: "
            f"{assignment_text(term, value_a, compact=True)} via {derivation_a} "
            f"conflicts with {assignment_text(term, value_b, compact=True)} "
            f"via {derivation_b}"
        )


class ExplicitContradiction(Inconsistency):
    """A Boolean function was derived both true and false."""


class ConstraintViolation(LppfError):
    """An integrity constraint body is satisfied in the model."""

    def __init__(self, constraint_text: str):
        self.constraint_text = constraint_text
        super().__init__(f"constraint violated: {constraint_text}")


class NonStratifiedOverflow(LppfError):
    """The ground program is not stratified and too large to enumerate."""


class ExplainError(LppfError):
    """Explanation request for an atom that does not hold."""

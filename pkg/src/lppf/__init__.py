"""lppf — answer set programming with partial functions and explanations."""

from .errors import (
    ConstraintViolation,
    EvaluationError,
    ExplainError,
    ExplicitContradiction,
    GroundingError,
    Inconsistency,
    LppfError,
    NonStratifiedOverflow,
    ParseError,
    ParseFailure,
)
from .explain import (
    ExplanationNode,
    ExplanationSet,
    auto_mode,
    explain,
    explain_selected,
    render_dot,
    render_graph,
    render_text,
    select_targets,
    tree_document,
)
from .ground import GroundProgram, GroundRule, ground, universe_of
from .parse import parse, parse_assignment
from .render import assignment_text, render
from .solve import (
    AnswerSet,
    SolveResult,
    Support,
    answer_block,
    check_stable,
    evaluate,
    literal_satisfied,
    solve,
)
from . import syntax

__version__ = "0.1.0"


def run(source: str, origin: str = "<string>") -> SolveResult:
    """Parse, ground and solve in one step."""
    return solve(ground(parse(source, origin)))

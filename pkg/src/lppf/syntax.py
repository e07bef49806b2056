"""Abstract syntax for lppf programs.

Terms, arithmetic expressions, body literals, rule heads, rules and
directives are immutable dataclasses.  Structural equality deliberately
ignores source spans, so a program re-parsed from its canonical rendering
compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Tuple, Union


@dataclass(frozen=True)
class Span:
    """Source position, kept only for diagnostics."""

    origin: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.origin}:{self.line}:{self.col}"


# --- terms ----------------------------------------------------------------


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Integer:
    value: int


@dataclass(frozen=True)
class Text:
    value: str


@dataclass(frozen=True)
class FunctionTerm:
    functor: str
    args: Tuple["Term", ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Union[Variable, Symbol, Integer, Text, FunctionTerm]

#: Ground results of evaluating a function or expression.
Value = Union[Symbol, Integer, Text]

TRUE = Symbol("true")
FALSE = Symbol("false")


# --- expressions ----------------------------------------------------------


@dataclass(frozen=True)
class BinaryOp:
    op: str  # one of + - * /
    lhs: "Expression"
    rhs: "Expression"


Expression = Union[Term, BinaryOp]

COMPARATORS = ("=", "!=", "<", "<=", ">", ">=")


# --- body literals --------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    """A Boolean function term; ``negated`` marks explicit negation (~)."""

    term: FunctionTerm
    negated: bool = False


@dataclass(frozen=True)
class Comparison:
    op: str
    lhs: Expression
    rhs: Expression


@dataclass(frozen=True)
class BodyLiteral:
    payload: Union[Atom, Comparison]
    default_negated: bool = False


# --- rule heads -----------------------------------------------------------


@dataclass(frozen=True)
class SumAggregate:
    """#sum{ template : conditions } — sums the template function over the
    distinct ground instances whose conditions hold; undefined instances
    contribute nothing and an empty selection sums to 0."""

    template: FunctionTerm
    conditions: Tuple[BodyLiteral, ...] = ()


@dataclass(frozen=True)
class AssertHead:
    term: FunctionTerm


@dataclass(frozen=True)
class DenyHead:
    term: FunctionTerm


@dataclass(frozen=True)
class AssignHead:
    target: FunctionTerm
    value: Expression


@dataclass(frozen=True)
class DefaultHead:
    target: FunctionTerm
    value: Expression


@dataclass(frozen=True)
class AggregateHead:
    target: FunctionTerm
    aggregate: SumAggregate


Head = Union[AssertHead, DenyHead, AssignHead, DefaultHead, AggregateHead]


# --- labels ---------------------------------------------------------------


@dataclass(frozen=True)
class TextLabel:
    text: str


@dataclass(frozen=True)
class TermLabel:
    term: Term


Label = Union[TextLabel, TermLabel]


# --- rules and directives -------------------------------------------------


@dataclass(frozen=True)
class Rule:
    head: Optional[Head]  # None = integrity constraint
    body: Tuple[BodyLiteral, ...] = ()
    label: Optional[Label] = None
    span: Optional[Span] = field(default=None, compare=False)

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def is_fact(self) -> bool:
        """Bodyless, non-default statements are input facts."""
        return not self.body and self.head is not None and not isinstance(
            self.head, DefaultHead
        )


@dataclass(frozen=True)
class LabelDirective:
    """#label L :: f(X). — attaches label L to every rule whose head
    function matches f(X)."""

    label: Term
    pattern: FunctionTerm
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class ExplainDirective:
    """#explain f(X) :- conditions. — selects the instances of f(X) whose
    conditions hold in the answer set as explanation targets."""

    target: FunctionTerm
    conditions: Tuple[BodyLiteral, ...] = ()
    span: Optional[Span] = field(default=None, compare=False)


Directive = Union[LabelDirective, ExplainDirective]


@dataclass(frozen=True)
class Program:
    rules: Tuple[Rule, ...] = ()
    directives: Tuple[Directive, ...] = ()

    def merged(self, other: "Program") -> "Program":
        return Program(self.rules + other.rules, self.directives + other.directives)


# --- walkers ---------------------------------------------------------------


def term_variables(term: Term) -> Iterator[Variable]:
    if isinstance(term, Variable):
        yield term
    elif isinstance(term, FunctionTerm):
        for a in term.args:
            yield from term_variables(a)


def expr_variables(expr: Expression) -> Iterator[Variable]:
    if isinstance(expr, BinaryOp):
        yield from expr_variables(expr.lhs)
        yield from expr_variables(expr.rhs)
    else:
        yield from term_variables(expr)


def literal_variables(lit: BodyLiteral) -> Iterator[Variable]:
    if isinstance(lit.payload, Atom):
        yield from term_variables(lit.payload.term)
    else:
        yield from expr_variables(lit.payload.lhs)
        yield from expr_variables(lit.payload.rhs)


def head_variables(head: Optional[Head]) -> Iterator[Variable]:
    if head is None:
        return
    if isinstance(head, (AssertHead, DenyHead)):
        yield from term_variables(head.term)
    elif isinstance(head, (AssignHead, DefaultHead)):
        yield from term_variables(head.target)
        yield from expr_variables(head.value)
    else:
        yield from term_variables(head.target)
        yield from term_variables(head.aggregate.template)
        for lit in head.aggregate.conditions:
            yield from literal_variables(lit)


def rule_variables(rule: Rule) -> Iterator[Variable]:
    yield from head_variables(rule.head)
    for lit in rule.body:
        yield from literal_variables(lit)
    if isinstance(rule.label, TermLabel):
        yield from term_variables(rule.label.term)


def expr_function_terms(expr: Expression) -> Iterator[FunctionTerm]:
    """Function terms occurring in an expression, outermost first."""
    if isinstance(expr, BinaryOp):
        yield from expr_function_terms(expr.lhs)
        yield from expr_function_terms(expr.rhs)
    elif isinstance(expr, FunctionTerm):
        yield expr
        for a in expr.args:
            yield from expr_function_terms(a)


def literal_function_terms(lit: BodyLiteral) -> Iterator[FunctionTerm]:
    if isinstance(lit.payload, Atom):
        yield lit.payload.term
        for a in lit.payload.term.args:
            yield from expr_function_terms(a)
    else:
        yield from expr_function_terms(lit.payload.lhs)
        yield from expr_function_terms(lit.payload.rhs)


def term_constants(term: Term) -> Iterator[Value]:
    if isinstance(term, (Symbol, Integer, Text)):
        yield term
    elif isinstance(term, FunctionTerm):
        for a in term.args:
            yield from term_constants(a)


def expr_constants(expr: Expression) -> Iterator[Value]:
    if isinstance(expr, BinaryOp):
        yield from expr_constants(expr.lhs)
        yield from expr_constants(expr.rhs)
    else:
        yield from term_constants(expr)


def literal_constants(lit: BodyLiteral) -> Iterator[Value]:
    if isinstance(lit.payload, Atom):
        yield from term_constants(lit.payload.term)
    else:
        yield from expr_constants(lit.payload.lhs)
        yield from expr_constants(lit.payload.rhs)


def rule_constants(rule: Rule) -> Iterator[Value]:
    head = rule.head
    if isinstance(head, (AssertHead, DenyHead)):
        yield from term_constants(head.term)
    elif isinstance(head, (AssignHead, DefaultHead)):
        yield from term_constants(head.target)
        yield from expr_constants(head.value)
    elif isinstance(head, AggregateHead):
        yield from term_constants(head.target)
        yield from term_constants(head.aggregate.template)
        for lit in head.aggregate.conditions:
            yield from literal_constants(lit)
    for lit in rule.body:
        yield from literal_constants(lit)
    if isinstance(rule.label, TermLabel):
        yield from term_constants(rule.label.term)


def program_constants(program: Program) -> Iterator[Value]:
    for rule in program.rules:
        yield from rule_constants(rule)
    for d in program.directives:
        if isinstance(d, LabelDirective):
            yield from term_constants(d.label)
            yield from term_constants(d.pattern)
        else:
            yield from term_constants(d.target)
            for lit in d.conditions:
                yield from literal_constants(lit)


def is_ground(term: Term) -> bool:
    return not any(True for _ in term_variables(term))


def is_plain(term: FunctionTerm) -> bool:
    """True when every argument is already a value (no nesting, no vars)."""
    return all(isinstance(a, (Symbol, Integer, Text)) for a in term.args)


# --- substitution ----------------------------------------------------------

Substitution = dict


def subst_term(term: Term, sub: Substitution) -> Term:
    if isinstance(term, Variable):
        return sub.get(term, term)
    if isinstance(term, FunctionTerm):
        return FunctionTerm(term.functor, tuple(subst_term(a, sub) for a in term.args))
    return term


def subst_expr(expr: Expression, sub: Substitution) -> Expression:
    if isinstance(expr, BinaryOp):
        return BinaryOp(expr.op, subst_expr(expr.lhs, sub), subst_expr(expr.rhs, sub))
    return subst_term(expr, sub)


def subst_literal(lit: BodyLiteral, sub: Substitution) -> BodyLiteral:
    p = lit.payload
    if isinstance(p, Atom):
        new = Atom(subst_term(p.term, sub), p.negated)
    else:
        new = Comparison(p.op, subst_expr(p.lhs, sub), subst_expr(p.rhs, sub))
    return BodyLiteral(new, lit.default_negated)


def subst_head(head: Optional[Head], sub: Substitution) -> Optional[Head]:
    if head is None:
        return None
    if isinstance(head, AssertHead):
        return AssertHead(subst_term(head.term, sub))
    if isinstance(head, DenyHead):
        return DenyHead(subst_term(head.term, sub))
    if isinstance(head, AssignHead):
        return AssignHead(subst_term(head.target, sub), subst_expr(head.value, sub))
    if isinstance(head, DefaultHead):
        return DefaultHead(subst_term(head.target, sub), subst_expr(head.value, sub))
    agg = head.aggregate
    return AggregateHead(
        subst_term(head.target, sub),
        SumAggregate(
            subst_term(agg.template, sub),
            tuple(subst_literal(c, sub) for c in agg.conditions),
        ),
    )


# --- canonical ordering ----------------------------------------------------

_LATE = 1 << 30  # symbols never seen in the source sort after registered ones


def term_sort_key(term: Term, symbol_index: dict):
    """Total order on ground terms: integers numerically, symbols by first
    occurrence in the source program, strings lexicographically, function
    terms by functor name then arguments."""
    if isinstance(term, Integer):
        return (0, term.value)
    if isinstance(term, Symbol):
        return (1, symbol_index.get(term.name, _LATE), term.name)
    if isinstance(term, Text):
        return (2, term.value)
    if isinstance(term, FunctionTerm):
        return (3, term.functor, tuple(term_sort_key(a, symbol_index) for a in term.args))
    return (4, term.name)


def symbol_occurrence_index(program: Program) -> dict:
    """First-occurrence index of every symbol, in source order."""
    index: dict = {}
    for c in program_constants(program):
        if isinstance(c, Symbol) and c.name not in index:
            index[c.name] = len(index)
    return index

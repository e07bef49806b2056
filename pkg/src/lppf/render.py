"""Canonical text rendering for lppf programs.

The canonical form is deterministic: assignment operators and comparators
are written tight (``rule(P):=-2``, ``donor_age(P)>=10``), body literals
are separated by ``", "``, and labels prefix the rule as ``"text" :: `` or
``term :: ``.  Re-parsing a rendering yields a structurally equal program.
"""

from __future__ import annotations

from .syntax import (
    AggregateHead,
    AssertHead,
    AssignHead,
    Atom,
    BinaryOp,
    BodyLiteral,
    DefaultHead,
    DenyHead,
    Directive,
    Expression,
    FunctionTerm,
    Integer,
    LabelDirective,
    Program,
    Rule,
    Symbol,
    Term,
    TermLabel,
    Text,
    TextLabel,
    Variable,
)

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\t": "\\t", "\n": "\\n"}


def quote(text: str) -> str:
    return '"' + "".join(_ESCAPES.get(c, c) for c in text) + '"'


def term_text(term: Term) -> str:
    if isinstance(term, Variable):
        return term.name
    if isinstance(term, Symbol):
        return term.name
    if isinstance(term, Integer):
        return str(term.value)
    if isinstance(term, Text):
        return quote(term.value)
    if not term.args:
        return term.functor
    return term.functor + "(" + ",".join(term_text(a) for a in term.args) + ")"


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def expr_text(expr: Expression, parent_prec: int = 0, right: bool = False) -> str:
    if not isinstance(expr, BinaryOp):
        return term_text(expr)
    prec = _PRECEDENCE[expr.op]
    inner = (
        expr_text(expr.lhs, prec, False)
        + expr.op
        + expr_text(expr.rhs, prec, True)
    )
    # - and / are left-associative, so a right operand at equal precedence
    # keeps its parentheses
    if prec < parent_prec or (right and prec == parent_prec):
        return "(" + inner + ")"
    return inner


def literal_text(lit: BodyLiteral) -> str:
    p = lit.payload
    if isinstance(p, Atom):
        body = ("~" if p.negated else "") + term_text(p.term)
    else:
        body = expr_text(p.lhs) + p.op + expr_text(p.rhs)
    return ("not " if lit.default_negated else "") + body


def body_text(body) -> str:
    return ", ".join(literal_text(l) for l in body)


def head_text(head) -> str:
    if isinstance(head, AssertHead):
        return term_text(head.term)
    if isinstance(head, DenyHead):
        return "~" + term_text(head.term)
    if isinstance(head, AssignHead):
        return term_text(head.target) + ":=" + expr_text(head.value)
    if isinstance(head, DefaultHead):
        return term_text(head.target) + "^=" + expr_text(head.value)
    if isinstance(head, AggregateHead):
        agg = head.aggregate
        inner = term_text(agg.template)
        if agg.conditions:
            inner += " : " + body_text(agg.conditions)
        return term_text(head.target) + ":=#sum{ " + inner + " }"
    raise TypeError(f"not a head: {head!r}")


def rule_text(rule: Rule) -> str:
    prefix = ""
    if isinstance(rule.label, TextLabel):
        prefix = quote(rule.label.text) + " :: "
    elif isinstance(rule.label, TermLabel):
        prefix = term_text(rule.label.term) + " :: "
    if rule.head is None:
        core = ":- " + body_text(rule.body)
    elif rule.body:
        core = head_text(rule.head) + " :- " + body_text(rule.body)
    else:
        core = head_text(rule.head)
    return prefix + core + "."


def directive_text(d: Directive) -> str:
    if isinstance(d, LabelDirective):
        return "#label " + term_text(d.label) + " :: " + term_text(d.pattern) + "."
    if d.conditions:
        return "#explain " + term_text(d.target) + " :- " + body_text(d.conditions) + "."
    return "#explain " + term_text(d.target) + "."


def render(program: Program) -> str:
    """Canonical source text: one statement per line, rules before
    directives."""
    lines = [rule_text(r) for r in program.rules]
    lines += [directive_text(d) for d in program.directives]
    return "".join(line + "\n" for line in lines)


def assignment_text(term: FunctionTerm, value, compact: bool = False) -> str:
    """Display form of one established assignment.

    Boolean functions print bare (``punish(gabriel)``) or explicitly negated
    (``~p(a)``); other values print as ``f(a) = v`` or, compact, ``f(a)=v``.
    """
    from .syntax import FALSE, TRUE

    if value == TRUE:
        return term_text(term)
    if value == FALSE:
        return "~" + term_text(term)
    eq = "=" if compact else " = "
    return term_text(term) + eq + term_text(value)

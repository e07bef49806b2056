"""Grounding: instantiate rule variables over the program's constants.

The universe is the set of constants syntactically present in the program;
no integer intervals are generated, so comparisons act as solve-time checks
rather than generators.  Variable candidates are narrowed by argument
position: a variable occurring as a direct argument of a positive body atom
only ranges over the terms that some head could derive at that position.
``narrow=False`` restores the naive cartesian product (used as an oracle in
tests); ``prune=False`` keeps rules whose positive body atoms name functors
that no head can ever derive.

Rule labels are resolved here: ``%Var`` placeholders in text labels are
replaced by the bound term, ``#label`` directives attach their (substituted)
label term to every matching unlabeled ground rule.  ``%fn(args)``
placeholders are left for the explainer, which resolves them against the
final valuation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .errors import GroundingError
from .render import rule_text, term_text
from .syntax import (
    AggregateHead,
    AssertHead,
    AssignHead,
    Atom,
    BodyLiteral,
    DefaultHead,
    DenyHead,
    ExplainDirective,
    FunctionTerm,
    Head,
    Integer,
    LabelDirective,
    Program,
    Rule,
    Span,
    SumAggregate,
    Symbol,
    TermLabel,
    Text,
    TextLabel,
    Value,
    Variable,
    head_variables,
    literal_variables,
    program_constants,
    subst_head,
    subst_literal,
    subst_term,
    symbol_occurrence_index,
    term_variables,
)

DEFAULT_CAP = 1_000_000


def universe_of(program: Program) -> Tuple[Value, ...]:
    """All symbols, integers and strings occurring in the program, in
    first-occurrence order."""
    seen: Dict[Value, None] = {}
    for c in program_constants(program):
        seen.setdefault(c, None)
    return tuple(seen)


@dataclass(frozen=True)
class GroundRule:
    head: Optional[Head]
    body: Tuple[BodyLiteral, ...]
    label: Optional[object]
    origin_index: int
    sub_index: int
    span: Optional[Span] = field(default=None, compare=False)
    # for aggregate heads: the instantiations of the local variables,
    # each a (ground template, ground conditions) pair
    aggregate_instances: Optional[Tuple[Tuple[FunctionTerm, Tuple[BodyLiteral, ...]], ...]] = None

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def is_fact(self) -> bool:
        return not self.body and self.head is not None and not isinstance(
            self.head, DefaultHead
        )

    @property
    def target(self) -> Optional[FunctionTerm]:
        h = self.head
        if isinstance(h, (AssertHead, DenyHead)):
            return h.term
        if isinstance(h, (AssignHead, DefaultHead, AggregateHead)):
            return h.target
        return None

    def to_rule(self) -> Rule:
        return Rule(self.head, self.body, self.label, self.span)

    def text(self) -> str:
        return rule_text(self.to_rule())


@dataclass(frozen=True)
class GroundExplain:
    target: FunctionTerm
    conditions: Tuple[BodyLiteral, ...]
    directive_index: int


@dataclass
class GroundProgram:
    rules: Tuple[GroundRule, ...]
    universe: Tuple[Value, ...]
    symbol_index: Dict[str, int]
    function_terms: Tuple[FunctionTerm, ...]
    explains: Tuple[GroundExplain, ...]
    source: Program
    diagnostics: List[str] = field(default_factory=list)

    def as_program(self) -> Program:
        return Program(tuple(r.to_rule() for r in self.rules), self.source.directives)


# --- derivability index -----------------------------------------------------

TOP = None  # marker: any universe element possible at this position


class _HeadIndex:
    """Per (functor, arity): which ground terms can each argument position
    take in a derivable instance, split by how the head establishes the
    function (asserted true, denied false, or assigned a computed value)."""

    def __init__(self) -> None:
        self.positions: Dict[Tuple[str, int, str], List[Optional[Set[Value]]]] = {}

    def add(self, term: FunctionTerm, sign: str) -> None:
        key = (term.functor, term.arity, sign)
        slots = self.positions.get(key)
        if slots is None:
            slots = [set() for _ in term.args]
            self.positions[key] = slots
        for i, arg in enumerate(term.args):
            if slots[i] is TOP:
                continue
            if isinstance(arg, (Symbol, Integer, Text)):
                slots[i].add(arg)
            else:  # variable or nested term: statically unknown
                slots[i] = TOP

    def derivable(self, functor: str, arity: int, signs: Sequence[str]) -> bool:
        return any((functor, arity, s) in self.positions for s in signs)

    def candidates(self, functor: str, arity: int, pos: int,
                   signs: Sequence[str]) -> Optional[Set[Value]]:
        """Union over signs; TOP if any matching head leaves the position
        open, empty set if the functor is underivable."""
        out: Set[Value] = set()
        found = False
        for s in signs:
            slots = self.positions.get((functor, arity, s))
            if slots is None:
                continue
            found = True
            if slots[pos] is TOP:
                return TOP
            out |= slots[pos]
        if not found:
            return set()
        return out


def _build_head_index(program: Program) -> _HeadIndex:
    index = _HeadIndex()
    for rule in program.rules:
        h = rule.head
        if isinstance(h, AssertHead):
            index.add(h.term, "true")
        elif isinstance(h, DenyHead):
            index.add(h.term, "false")
        elif isinstance(h, (AssignHead, DefaultHead, AggregateHead)):
            index.add(h.target, "any")
    return index


_SIGNS_FOR = {
    "pos": ("true", "any"),
    "neg": ("false", "any"),
    "defined": ("true", "false", "any"),
}


def _template_bindings(template: FunctionTerm, sign: str = "defined"):
    for i, arg in enumerate(template.args):
        if isinstance(arg, Variable):
            yield arg, template.functor, template.arity, i, sign


def _literal_bindings(lit: BodyLiteral):
    """Yield (variable, functor, arity, position, sign-kind) for narrowing.
    Positive literals bind: atom arguments by the atom's sign, arguments of
    function terms nested in atoms or comparisons by definedness."""
    from .syntax import Atom as _Atom, expr_function_terms

    if lit.default_negated:
        return
    payload = lit.payload
    if isinstance(payload, _Atom):
        sign = "neg" if payload.negated else "pos"
        yield from _template_bindings(payload.term, sign)
        for arg in payload.term.args:
            for inner in expr_function_terms(arg):
                yield from _template_bindings(inner)
    else:
        for side in (payload.lhs, payload.rhs):
            for inner in expr_function_terms(side):
                yield from _template_bindings(inner)


def _candidates_for(variables, binding_occurrences, universe, index, narrow):
    """Candidate list per variable, in universe order."""
    out: Dict[Variable, List[Value]] = {}
    if not narrow:
        for v in variables:
            out[v] = list(universe)
        return out
    narrowed: Dict[Variable, Optional[Set[Value]]] = {v: TOP for v in variables}
    for var, functor, arity, pos, sign in binding_occurrences:
        if var not in narrowed:
            continue
        cands = index.candidates(functor, arity, pos, _SIGNS_FOR[sign])
        if cands is TOP:
            continue
        if narrowed[var] is TOP:
            narrowed[var] = set(cands)
        else:
            narrowed[var] &= cands
    for v in variables:
        allowed = narrowed[v]
        if allowed is TOP:
            out[v] = list(universe)
        else:
            out[v] = [u for u in universe if u in allowed]
    return out


def _match_pattern(pattern: FunctionTerm, target: FunctionTerm) -> Optional[dict]:
    """Unify a head pattern with variables against a ground target."""
    if pattern.functor != target.functor or pattern.arity != target.arity:
        return None
    sub: dict = {}

    def unify(p, t) -> bool:
        if isinstance(p, Variable):
            if p in sub and sub[p] != t:
                return False
            sub[p] = t
            return True
        if isinstance(p, FunctionTerm):
            if not isinstance(t, FunctionTerm) or p.functor != t.functor \
                    or p.arity != t.arity:
                return False
            return all(unify(pa, ta) for pa, ta in zip(p.args, t.args))
        return p == t

    for pa, ta in zip(pattern.args, target.args):
        if not unify(pa, ta):
            return None
    return sub


def interpolate_label(text: str, sub: dict) -> str:
    """Replace %Var placeholders with the bound term's text.  Inside a
    %fn(args) placeholder (resolved later against the valuation) the bound
    variables among the arguments are substituted too."""
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "%" and i + 1 < n and (text[i + 1].isalpha() or text[i + 1] == "_"):
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i + 1:j]
            if name[0].isupper():
                var = Variable(name)
                if var in sub:
                    out.append(term_text(sub[var]))
                    i = j
                    continue
            elif j < n and text[j] == "(":
                close = text.find(")", j)
                if close != -1:
                    args = []
                    for part in text[j + 1:close].split(","):
                        part = part.strip()
                        bound = sub.get(Variable(part)) if part[:1].isupper() else None
                        args.append(term_text(bound) if bound is not None else part)
                    out.append("%" + name + "(" + ",".join(args) + ")")
                    i = close + 1
                    continue
        out.append(c)
        i += 1
    return "".join(out)


def _resolve_label(label, sub: dict):
    if isinstance(label, TextLabel):
        return TextLabel(interpolate_label(label.text, sub))
    if isinstance(label, TermLabel):
        return TermLabel(subst_term(label.term, sub))
    return None


def ground(program: Program, *, narrow: bool = True, prune: bool = True,
           cap: int = DEFAULT_CAP) -> GroundProgram:
    """Instantiate every rule over the universe.

    Raises GroundingError when the estimated instance count exceeds ``cap``,
    naming the largest rule.
    """
    universe = universe_of(program)
    symbol_index = symbol_occurrence_index(program)
    index = _build_head_index(program)
    diagnostics: List[str] = []

    plans = []  # (rule, rule_index, candidates | None-to-skip)
    worst: Tuple[int, str] = (0, "")
    total = 0
    for ri, rule in enumerate(program.rules):
        if prune and _dead_rule(rule, index):
            diagnostics.append(
                f"pruned rule with underivable positive atom: {rule_text(rule)}")
            continue
        variables = sorted(set(rule_variables_for_grounding(rule)), key=lambda v: v.name)
        occurrences = []
        for lit in rule.body:
            occurrences.extend(_literal_bindings(lit))
        cands = _candidates_for(variables, occurrences, universe, index, narrow)
        estimate = 1
        for v in variables:
            estimate *= len(cands[v])
        total += estimate
        if estimate > worst[0]:
            worst = (estimate, rule_text(rule))
        plans.append((rule, ri, variables, cands))
    if total > cap:
        raise GroundingError(
            f"grounding would produce {total} rule instances (cap {cap}); "
            f"largest rule yields {worst[0]}: {worst[1]}",
            rule_text=worst[1], estimate=worst[0])

    rules: List[GroundRule] = []
    for rule, ri, variables, cands in plans:
        for si, combo in enumerate(itertools.product(*(cands[v] for v in variables))):
            sub = dict(zip(variables, combo))
            head = subst_head(rule.head, sub)
            body = tuple(subst_literal(l, sub) for l in rule.body)
            agg_instances = None
            if isinstance(head, AggregateHead):
                agg_instances = _ground_aggregate(
                    head.aggregate, universe, index, narrow)
            rules.append(GroundRule(
                head, body, _resolve_label(rule.label, sub),
                ri, si, rule.span, agg_instances))

    _apply_label_directives(program, rules)
    explains = _ground_explains(program, universe, index, narrow)
    function_terms = _collect_function_terms(rules)
    return GroundProgram(tuple(rules), universe, symbol_index, function_terms,
                         explains, program, diagnostics)


def rule_variables_for_grounding(rule: Rule):
    """Rule-level variables: everything except aggregate locals."""
    head = rule.head
    if isinstance(head, AggregateHead):
        yield from term_variables(head.target)
    else:
        yield from head_variables(head)
    for lit in rule.body:
        yield from literal_variables(lit)
    if isinstance(rule.label, TermLabel):
        yield from term_variables(rule.label.term)
    if isinstance(rule.label, TextLabel):
        # %Var placeholders must be instantiated too, but they are only
        # legal for variables the rule already binds, so nothing extra
        return


def _dead_rule(rule: Rule, index: _HeadIndex) -> bool:
    for lit in rule.body:
        if lit.default_negated or not isinstance(lit.payload, Atom):
            continue
        atom = lit.payload
        signs = _SIGNS_FOR["neg" if atom.negated else "pos"]
        if not index.derivable(atom.term.functor, atom.term.arity, signs):
            return True
    return False


def _ground_aggregate(agg: SumAggregate, universe, index, narrow):
    locals_ = sorted(
        {v for v in term_variables(agg.template)}
        | {v for lit in agg.conditions for v in literal_variables(lit)},
        key=lambda v: v.name)
    occurrences = list(_template_bindings(agg.template))
    for lit in agg.conditions:
        occurrences.extend(_literal_bindings(lit))
    cands = _candidates_for(locals_, occurrences, universe, index, narrow)
    instances = []
    for combo in itertools.product(*(cands[v] for v in locals_)):
        sub = dict(zip(locals_, combo))
        instances.append((
            subst_term(agg.template, sub),
            tuple(subst_literal(l, sub) for l in agg.conditions),
        ))
    return tuple(instances)


def _apply_label_directives(program: Program, rules: List[GroundRule]) -> None:
    directives = [d for d in program.directives if isinstance(d, LabelDirective)]
    if not directives:
        return
    for i, gr in enumerate(rules):
        if gr.label is not None or gr.target is None:
            continue
        for d in directives:
            sub = _match_pattern(d.pattern, gr.target)
            if sub is not None:
                rules[i] = GroundRule(
                    gr.head, gr.body, TermLabel(subst_term(d.label, sub)),
                    gr.origin_index, gr.sub_index, gr.span,
                    gr.aggregate_instances)
                break


def _ground_explains(program: Program, universe, index, narrow):
    out: List[GroundExplain] = []
    for di, d in enumerate(program.directives):
        if not isinstance(d, ExplainDirective):
            continue
        variables = sorted(
            set(term_variables(d.target))
            | {v for lit in d.conditions for v in literal_variables(lit)},
            key=lambda v: v.name)
        occurrences = []
        for lit in d.conditions:
            occurrences.extend(_literal_bindings(lit))
        # the target itself ranges over what its function can derive
        occurrences.extend(_template_bindings(d.target))
        cands = _candidates_for(variables, occurrences, universe, index, narrow)
        for combo in itertools.product(*(cands[v] for v in variables)):
            sub = dict(zip(variables, combo))
            out.append(GroundExplain(
                subst_term(d.target, sub),
                tuple(subst_literal(l, sub) for l in d.conditions),
                di))
    return tuple(out)


def _collect_function_terms(rules) -> Tuple[FunctionTerm, ...]:
    from .syntax import literal_function_terms

    seen: Dict[FunctionTerm, None] = {}
    for gr in rules:
        if gr.target is not None:
            seen.setdefault(gr.target, None)
        for lit in gr.body:
            for ft in literal_function_terms(lit):
                seen.setdefault(ft, None)
        if gr.aggregate_instances:
            for template, conds in gr.aggregate_instances:
                seen.setdefault(template, None)
                for lit in conds:
                    for ft in literal_function_terms(lit):
                        seen.setdefault(ft, None)
    return tuple(seen)

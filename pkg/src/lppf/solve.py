"""Functional answer sets for ground lppf programs.

Semantics, by translation to stable models: an assignment ``f(a):=v :- B``
behaves as ``val(f,a,v) :- B``; a default ``f(a)^=v :- B`` behaves as
``val(f,a,v) :- B, not overridden(f,a,v)`` where ``overridden`` holds when
any other value is established.  Boolean functions are functions into
{true,false}: ``p(a)`` is ``p(a)=true`` and ``~p(a)`` is ``p(a)=false``.
Functionality (one value per term) is enforced as a hard error carrying
both derivations.

Evaluation strategy: the ground dependency graph is split per function term
into a strict node (non-default rules) and a final node (value after
defaults), with negative edges for default negation, for the implicit
override check, and for aggregate contributions (an aggregate is only
evaluated once everything below it is settled).  If no strongly connected
component contains a negative edge the program is stratified and a single
least-fixpoint pass per component yields the unique answer set.  Otherwise
candidate valuations are enumerated (bounded) and filtered through
check_stable, the independent reduct + least-fixpoint oracle.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import (
    ConstraintViolation,
    EvaluationError,
    ExplicitContradiction,
    Inconsistency,
    NonStratifiedOverflow,
)
from .ground import GroundProgram, GroundRule
from .render import assignment_text, term_text
from .syntax import (
    AggregateHead,
    AssertHead,
    AssignHead,
    Atom,
    BinaryOp,
    BodyLiteral,
    DefaultHead,
    DenyHead,
    Expression,
    FALSE,
    FunctionTerm,
    Integer,
    Symbol,
    TRUE,
    Term,
    Text,
    Value,
    is_plain,
    literal_function_terms,
    term_sort_key,
)

ENUMERATION_CAP = 1 << 20
CLOSURE_ATOM_CAP = 4096

Valuation = Dict[FunctionTerm, Value]


# --- evaluation -------------------------------------------------------------


def apply_term(term: FunctionTerm, valuation: Valuation) -> Optional[FunctionTerm]:
    """Resolve nested function arguments to their values; None when any
    nested function is undefined."""
    if is_plain(term):
        return term
    args = []
    for a in term.args:
        if isinstance(a, FunctionTerm):
            v = evaluate(a, valuation)
            if v is None:
                return None
            args.append(v)
        else:
            args.append(a)
    return FunctionTerm(term.functor, tuple(args))


def _div(a: int, b: int, span) -> int:
    if b == 0:
        raise EvaluationError("division by zero", span)
    q = a // b
    if q < 0 and q * b != a:
        q += 1  # truncate toward zero
    return q


def evaluate(expr: Expression, valuation: Valuation, span=None) -> Optional[Value]:
    """Innermost-out evaluation; any undefined subterm yields None."""
    if isinstance(expr, BinaryOp):
        lv = evaluate(expr.lhs, valuation, span)
        rv = evaluate(expr.rhs, valuation, span)
        if lv is None or rv is None:
            return None
        if not isinstance(lv, Integer) or not isinstance(rv, Integer):
            raise EvaluationError(
                f"arithmetic over non-integers: {term_text(lv)} {expr.op} {term_text(rv)}",
                span)
        if expr.op == "+":
            return Integer(lv.value + rv.value)
        if expr.op == "-":
            return Integer(lv.value - rv.value)
        if expr.op == "*":
            return Integer(lv.value * rv.value)
        return Integer(_div(lv.value, rv.value, span))
    if isinstance(expr, FunctionTerm):
        applied = apply_term(expr, valuation)
        if applied is None:
            return None
        return valuation.get(applied)
    if isinstance(expr, (Symbol, Integer, Text)):
        return expr
    raise EvaluationError(f"cannot evaluate non-ground expression {expr!r}", span)


def _compare(op: str, lv: Value, rv: Value, span) -> bool:
    if op == "=":
        return lv == rv
    if op == "!=":
        return lv != rv
    if not isinstance(lv, Integer) or not isinstance(rv, Integer):
        raise EvaluationError(
            f"order comparison over non-integers: {term_text(lv)} {op} {term_text(rv)}",
            span)
    a, b = lv.value, rv.value
    return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]


def literal_satisfied(lit: BodyLiteral, valuation: Valuation, span=None) -> bool:
    """Two-valued satisfaction; literals over undefined functions fail."""
    p = lit.payload
    if isinstance(p, Atom):
        applied = apply_term(p.term, valuation)
        want = FALSE if p.negated else TRUE
        sat = applied is not None and valuation.get(applied) == want
    else:
        lv = evaluate(p.lhs, valuation, span)
        rv = evaluate(p.rhs, valuation, span)
        sat = lv is not None and rv is not None and _compare(p.op, lv, rv, span)
    return not sat if lit.default_negated else sat


def body_satisfied(gr: GroundRule, valuation: Valuation) -> bool:
    return all(literal_satisfied(l, valuation, gr.span) for l in gr.body)


def _aggregate_value(gr: GroundRule, valuation: Valuation):
    """Sum of the defined values of the distinct satisfied template
    instances; empty selection sums to 0."""
    total = 0
    contributors: List[Tuple[FunctionTerm, Value]] = []
    seen = set()
    for template, conds in gr.aggregate_instances or ():
        if not all(literal_satisfied(c, valuation, gr.span) for c in conds):
            continue
        applied = apply_term(template, valuation)
        if applied is None or applied in seen:
            continue
        seen.add(applied)
        v = valuation.get(applied)
        if v is None:
            continue
        if not isinstance(v, Integer):
            raise EvaluationError(
                f"non-integer contribution {assignment_text(applied, v, compact=True)} in #sum",
                gr.span)
        total += v.value
        contributors.append((applied, v))
    return Integer(total), contributors


def head_value(gr: GroundRule, valuation: Valuation):
    """(applied target, value, aggregate contributors) established by a
    firing rule, or None while the target or value is still undefined."""
    h = gr.head
    contributors: List[Tuple[FunctionTerm, Value]] = []
    if isinstance(h, AssertHead):
        target, value = apply_term(h.term, valuation), TRUE
    elif isinstance(h, DenyHead):
        target, value = apply_term(h.term, valuation), FALSE
    elif isinstance(h, AggregateHead):
        target = apply_term(h.target, valuation)
        value, contributors = _aggregate_value(gr, valuation)
    else:
        target = apply_term(h.target, valuation)
        value = evaluate(h.value, valuation, gr.span)
    if target is None or value is None:
        return None
    return target, value, contributors


# --- supports ----------------------------------------------------------------


@dataclass(frozen=True)
class Support:
    """One rule instance that fires for an assignment in the final model,
    with the witnessed values it used."""

    rule: GroundRule
    witnesses: Tuple[Tuple[FunctionTerm, Value], ...]


def _witnesses(gr: GroundRule, valuation: Valuation, contributors, symbol_index):
    seen: Dict[FunctionTerm, Value] = {}

    def note(ft: FunctionTerm):
        applied = apply_term(ft, valuation)
        if applied is not None and applied in valuation:
            seen.setdefault(applied, valuation[applied])

    for lit in gr.body:
        if lit.default_negated:
            continue  # absence of a value is not a witness
        for ft in literal_function_terms(lit):
            note(ft)
    h = gr.head
    if isinstance(h, (AssignHead, DefaultHead)):
        from .syntax import expr_function_terms

        for ft in expr_function_terms(h.value):
            note(ft)
    for applied, v in contributors:
        seen.setdefault(applied, v)
    ordered = sorted(seen.items(), key=lambda kv: term_sort_key(kv[0], symbol_index))
    return tuple(ordered)


def collect_supports(gp: GroundProgram, valuation: Valuation):
    """Every rule instance that fires for each assignment in the final
    model — all alternatives, not just the first derivation."""
    supports: Dict[FunctionTerm, List[Support]] = defaultdict(list)
    for gr in gp.rules:
        if gr.is_constraint or not body_satisfied(gr, valuation):
            continue
        hv = head_value(gr, valuation)
        if hv is None:
            continue
        target, value, contributors = hv
        if valuation.get(target) != value:
            continue  # a default that lost to an explicit assignment
        supports[target].append(
            Support(gr, _witnesses(gr, valuation, contributors, gp.symbol_index)))
    return dict(supports)


# --- results ------------------------------------------------------------------


@dataclass
class AnswerSet:
    valuation: Valuation
    supports: Dict[FunctionTerm, List[Support]]

    def assignments(self, symbol_index) -> List[Tuple[FunctionTerm, Value]]:
        return sorted(self.valuation.items(),
                      key=lambda kv: term_sort_key(kv[0], symbol_index))

    def is_derived(self, term: FunctionTerm) -> bool:
        """Established by at least one rule that is not an input fact."""
        return any(not s.rule.is_fact for s in self.supports.get(term, ()))

    def canonical_text(self, symbol_index) -> str:
        return "".join(assignment_text(t, v, compact=True) + ".\n"
                       for t, v in self.assignments(symbol_index))


@dataclass
class SolveResult:
    answer_sets: List[AnswerSet]
    ground: GroundProgram
    diagnostics: List[str] = field(default_factory=list)


def answer_block(result: SolveResult) -> str:
    """The printable answer-set listing: derived conclusions only, one per
    line, each block preceded by Answer:N."""
    chunks = []
    for i, aset in enumerate(result.answer_sets, start=1):
        lines = [f"Answer:{i}"]
        for t, v in aset.assignments(result.ground.symbol_index):
            if aset.is_derived(t):
                lines.append(assignment_text(t, v, compact=True) + ".")
        chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)


# --- dependency graph ---------------------------------------------------------


class _Graph:
    def __init__(self, gp: GroundProgram):
        self.gp = gp
        self.nodes: List[tuple] = []
        self.node_ids: Dict[tuple, int] = {}
        self.edges: Dict[int, List[Tuple[int, bool]]] = defaultdict(list)  # v -> [(u, negative)]
        self.rule_nodes: Dict[int, int] = {}  # rule index -> node id
        self._build()

    def _node(self, key: tuple) -> int:
        nid = self.node_ids.get(key)
        if nid is None:
            nid = len(self.nodes)
            self.node_ids[key] = nid
            self.nodes.append(key)
        return nid

    def _build(self) -> None:
        gp = self.gp
        targets_by_func: Dict[Tuple[str, int], Dict[FunctionTerm, None]] = defaultdict(dict)
        merged: Dict[Tuple[str, int], bool] = defaultdict(bool)
        for gr in gp.rules:
            t = gr.target
            if t is None:
                continue
            fk = (t.functor, t.arity)
            targets_by_func[fk].setdefault(t, None)
            if not is_plain(t):
                merged[fk] = True
        self.targets_by_func = targets_by_func
        self.merged = merged

        def node_key(side: str, t: FunctionTerm) -> tuple:
            fk = (t.functor, t.arity)
            return (side, t.functor, t.arity, None if merged[fk] else t.args)

        def reader_nodes(u: FunctionTerm) -> List[int]:
            fk = (u.functor, u.arity)
            known = targets_by_func.get(fk)
            if not known:
                return []
            if merged[fk]:
                return [self._node(("f", u.functor, u.arity, None))]
            if is_plain(u):
                if u in known:
                    return [self._node(node_key("f", u))]
                return []
            return [self._node(node_key("f", t)) for t in known]

        defaults_at: Dict[int, List[GroundRule]] = defaultdict(list)
        for ri, gr in enumerate(gp.rules):
            t = gr.target
            if t is None:
                continue  # constraints are checked against the final model
            side = "f" if isinstance(gr.head, DefaultHead) else "s"
            nid = self._node(node_key(side, t))
            self.rule_nodes[ri] = nid
            if isinstance(gr.head, DefaultHead):
                defaults_at[nid].append(gr)

            def depend(ft: FunctionTerm, negative: bool) -> None:
                for src in reader_nodes(ft):
                    self.edges[nid].append((src, negative))

            for lit in gr.body:
                for ft in literal_function_terms(lit):
                    depend(ft, lit.default_negated)
            h = gr.head
            if isinstance(h, (AssignHead, DefaultHead)):
                from .syntax import expr_function_terms

                for ft in expr_function_terms(h.value):
                    depend(ft, False)
            elif isinstance(h, AggregateHead):
                for template, conds in gr.aggregate_instances or ():
                    depend(template, True)
                    for lit in conds:
                        for ft in literal_function_terms(lit):
                            depend(ft, True)

        # strict values feed final values; the link is negative exactly when
        # a default has to know the strict side is settled
        for fk, known in targets_by_func.items():
            keys = [None] if merged[fk] else [t.args for t in known]
            for args in keys:
                s = self._node(("s", fk[0], fk[1], args))
                f = self._node(("f", fk[0], fk[1], args))
                negative = f in defaults_at
                self.edges[f].append((s, negative))

        # competing defaults for one node: the override check becomes a
        # negative self-dependency unless they agree syntactically
        for nid, rules in defaults_at.items():
            exprs = {r.head.value for r in rules}
            if len(exprs) > 1:
                self.edges[nid].append((nid, True))

    # Tarjan, iterative.
    def sccs(self) -> List[List[int]]:
        n = len(self.nodes)
        index = [None] * n
        low = [0] * n
        on_stack = [False] * n
        stack: List[int] = []
        out: List[List[int]] = []
        counter = itertools.count()
        for root in range(n):
            if index[root] is not None:
                continue
            work = [(root, 0)]
            while work:
                v, pi = work[-1]
                if pi == 0:
                    index[v] = low[v] = next(counter)
                    stack.append(v)
                    on_stack[v] = True
                recurse = False
                deps = self.edges.get(v, [])
                while pi < len(deps):
                    w = deps[pi][0]
                    pi += 1
                    if index[w] is None:
                        work[-1] = (v, pi)
                        work.append((w, 0))
                        recurse = True
                        break
                    if on_stack[w]:
                        low[v] = min(low[v], index[w])
                if recurse:
                    continue
                work[-1] = (v, pi)
                if pi >= len(deps):
                    work.pop()
                    if low[v] == index[v]:
                        comp = []
                        while True:
                            w = stack.pop()
                            on_stack[w] = False
                            comp.append(w)
                            if w == v:
                                break
                        out.append(comp)
                    if work:
                        parent = work[-1][0]
                        low[parent] = min(low[parent], low[v])
        return out

    def stratify(self) -> Optional[List[List[int]]]:
        """SCCs in dependency order, or None when some component contains a
        negative internal edge (not stratified)."""
        comps = self.sccs()
        comp_of = {}
        for ci, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = ci
        for v, deps in self.edges.items():
            for u, negative in deps:
                if negative and comp_of[u] == comp_of[v]:
                    return None
        # Tarjan emits components in reverse topological order of the
        # condensation seen from dependents, which is exactly evaluation order
        return comps


# --- stratified evaluation ------------------------------------------------------


def _raise_conflict(target, existing, new, first: GroundRule, second: GroundRule):
    cls = ExplicitContradiction if {existing, new} == {TRUE, FALSE} else Inconsistency
    raise cls(target, existing, new, first.text(), second.text())


def _stratified_solve(gp: GroundProgram, graph: _Graph, order) -> AnswerSet:
    valuation: Valuation = {}
    strict: Valuation = {}
    first_deriver: Dict[FunctionTerm, GroundRule] = {}
    rules_by_comp: Dict[int, List[int]] = defaultdict(list)
    comp_of = {}
    for ci, comp in enumerate(order):
        for v in comp:
            comp_of[v] = ci
    for ri, nid in graph.rule_nodes.items():
        rules_by_comp[comp_of[nid]].append(ri)

    for ci in range(len(order)):
        rule_ids = rules_by_comp.get(ci)
        if not rule_ids:
            continue
        changed = True
        while changed:
            changed = False
            for ri in rule_ids:
                gr = gp.rules[ri]
                if not body_satisfied(gr, valuation):
                    continue
                hv = head_value(gr, valuation)
                if hv is None:
                    continue
                target, value, _ = hv
                is_default = isinstance(gr.head, DefaultHead)
                if is_default:
                    sv = strict.get(target)
                    if sv is not None and sv != value:
                        continue  # overridden by an explicit assignment
                existing = valuation.get(target)
                if existing is None:
                    valuation[target] = value
                    if not is_default:
                        strict[target] = value
                    first_deriver[target] = gr
                    changed = True
                elif existing == value:
                    if not is_default and target not in strict:
                        strict[target] = value
                else:
                    _raise_conflict(target, existing, value,
                                    first_deriver[target], gr)

    for gr in gp.rules:
        if gr.is_constraint and body_satisfied(gr, valuation):
            raise ConstraintViolation(gr.text())
    return AnswerSet(valuation, collect_supports(gp, valuation))


# --- stable-model oracle ----------------------------------------------------------


def check_stable(gp: GroundProgram, candidate: Valuation) -> bool:
    """Independent stability check: reduce the program relative to the
    candidate, compute the least fixpoint of the remainder, and compare."""
    for gr in gp.rules:
        if gr.is_constraint and body_satisfied(gr, candidate):
            return False
    kept: List[Tuple[GroundRule, List[BodyLiteral]]] = []
    for gr in gp.rules:
        if gr.is_constraint:
            continue
        positives: List[BodyLiteral] = []
        deleted = False
        for lit in gr.body:
            if lit.default_negated:
                if literal_satisfied(BodyLiteral(lit.payload), candidate, gr.span):
                    deleted = True
                    break
            else:
                positives.append(lit)
        if deleted:
            continue
        if isinstance(gr.head, DefaultHead):
            t_c = apply_term(gr.head.target, candidate)
            v_c = evaluate(gr.head.value, candidate, gr.span)
            if t_c is not None and v_c is not None:
                established = candidate.get(t_c)
                if established is not None and established != v_c:
                    continue  # overridden relative to the candidate
        kept.append((gr, positives))

    world: Valuation = {}
    changed = True
    while changed:
        changed = False
        for gr, positives in kept:
            if not all(literal_satisfied(l, world, gr.span) for l in positives):
                continue
            if isinstance(gr.head, AggregateHead):
                target = apply_term(gr.head.target, world)
                value, _ = _aggregate_value(gr, candidate)
            else:
                hv = head_value(gr, world)
                if hv is None:
                    continue
                target, value, _ = hv
            if target is None or value is None:
                continue
            existing = world.get(target)
            if existing is None:
                world[target] = value
                changed = True
            elif existing != value:
                return False  # the reduct itself is inconsistent
    return world == candidate


# --- bounded enumeration -----------------------------------------------------------


def _eval_possible(expr: Expression, possible) -> set:
    if isinstance(expr, BinaryOp):
        out = set()
        for lv in _eval_possible(expr.lhs, possible):
            for rv in _eval_possible(expr.rhs, possible):
                if not isinstance(lv, Integer) or not isinstance(rv, Integer):
                    continue
                try:
                    fake = BinaryOp(expr.op, lv, rv)
                    v = evaluate(fake, {})
                except EvaluationError:
                    continue
                if v is not None:
                    out.add(v)
        return out
    if isinstance(expr, FunctionTerm):
        return set(possible.get(expr, ()))
    return {expr}


def _possibly_satisfied(lit: BodyLiteral, possible) -> bool:
    if lit.default_negated:
        return True  # over-approximation
    p = lit.payload
    if isinstance(p, Atom):
        want = FALSE if p.negated else TRUE
        return want in possible.get(p.term, ())
    lvs = _eval_possible(p.lhs, possible)
    rvs = _eval_possible(p.rhs, possible)
    for lv in lvs:
        for rv in rvs:
            try:
                if _compare(p.op, lv, rv, None):
                    return True
            except EvaluationError:
                continue
    return False


def _possible_atoms(gp: GroundProgram) -> Dict[FunctionTerm, List[Value]]:
    """Over-approximate the derivable (term, value) pairs of a non-stratified
    program.  Only plain terms are supported on this path."""
    for gr in gp.rules:
        t = gr.target
        if t is not None and not is_plain(t):
            raise NonStratifiedOverflow(
                "non-stratified program with nested function terms cannot be enumerated")
        for lit in gr.body:
            for ft in literal_function_terms(lit):
                if not is_plain(ft):
                    raise NonStratifiedOverflow(
                        "non-stratified program with nested function terms cannot be enumerated")
        if isinstance(gr.head, AggregateHead):
            raise NonStratifiedOverflow(
                "non-stratified program with aggregates cannot be enumerated")

    possible: Dict[FunctionTerm, set] = defaultdict(set)
    changed = True
    while changed:
        changed = False
        for gr in gp.rules:
            if gr.is_constraint:
                continue
            if not all(_possibly_satisfied(l, possible) for l in gr.body):
                continue
            h = gr.head
            if isinstance(h, AssertHead):
                values = {TRUE}
            elif isinstance(h, DenyHead):
                values = {FALSE}
            else:
                values = _eval_possible(h.value, possible)
            target = gr.target
            new = values - possible[target]
            if new:
                possible[target] |= new
                changed = True
                if sum(len(v) for v in possible.values()) > CLOSURE_ATOM_CAP:
                    raise NonStratifiedOverflow(
                        f"possible-atom closure exceeded {CLOSURE_ATOM_CAP} entries")
    idx = gp.symbol_index
    return {
        t: sorted(vs, key=lambda v: term_sort_key(v, idx))
        for t, vs in sorted(possible.items(), key=lambda kv: term_sort_key(kv[0], idx))
        if vs
    }


def _diagnose_no_model(gp: GroundProgram) -> None:
    """Zero stable models: if the negation-free over-derivation already
    conflicts, report that as the root inconsistency."""
    valuation: Valuation = {}
    first: Dict[FunctionTerm, GroundRule] = {}
    changed = True
    while changed:
        changed = False
        for gr in gp.rules:
            if gr.is_constraint:
                continue
            positives = [l for l in gr.body if not l.default_negated]
            if not all(literal_satisfied(l, valuation, gr.span) for l in positives):
                continue
            hv = head_value(gr, valuation)
            if hv is None:
                continue
            target, value, _ = hv
            existing = valuation.get(target)
            if existing is None:
                valuation[target] = value
                first[target] = gr
                changed = True
            elif existing != value:
                _raise_conflict(target, existing, value, first[target], gr)


def _enumerate_solve(gp: GroundProgram) -> List[AnswerSet]:
    possible = _possible_atoms(gp)
    terms = list(possible)
    count = 1
    for t in terms:
        count *= 1 + len(possible[t])
        if count > ENUMERATION_CAP:
            raise NonStratifiedOverflow(
                f"non-stratified program needs {count}+ candidate valuations "
                f"(cap {ENUMERATION_CAP})")
    accepted: List[AnswerSet] = []
    for combo in itertools.product(*([None] + possible[t] for t in terms)):
        candidate = {t: v for t, v in zip(terms, combo) if v is not None}
        if check_stable(gp, candidate):
            accepted.append(AnswerSet(candidate, collect_supports(gp, candidate)))
    if not accepted:
        _diagnose_no_model(gp)
    accepted.sort(key=lambda a: a.canonical_text(gp.symbol_index))
    return accepted


# --- entry point ----------------------------------------------------------------


def solve(gp: GroundProgram) -> SolveResult:
    """Compute the functional answer sets of a ground program, with the
    full support map for every established value."""
    graph = _Graph(gp)
    order = graph.stratify()
    diagnostics = list(gp.diagnostics)
    if order is not None:
        answer = _stratified_solve(gp, graph, order)
        return SolveResult([answer], gp, diagnostics)
    diagnostics.append("ground program is not stratified; enumerating candidates")
    answers = _enumerate_solve(gp)
    return SolveResult(answers, gp, diagnostics)

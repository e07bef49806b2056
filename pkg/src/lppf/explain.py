"""Explanation trees over the solver's support map.

Default mode shows every derived atom: a node's children are the witnessed
values its firing rule used (positive body atoms, comparison operands, head
expression inputs, aggregate contributors); facts are leaves; alternative
proofs arise from the cross product of alternative supports, pruned so no
atom repeats along a path.  Labeled mode keeps only nodes whose rule carries
a label, splicing the children of unlabeled nodes into their parent;
unlabeled facts vanish.

Text labels may carry ``%fn(args)`` placeholders which are resolved here
against the final valuation, so a label can quote computed values.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import ExplainError
from .ground import GroundProgram, GroundRule
from .render import assignment_text, term_text
from .solve import AnswerSet, SolveResult, apply_term, literal_satisfied
from .syntax import (
    FunctionTerm,
    Integer,
    Symbol,
    TermLabel,
    TextLabel,
    Value,
)

ALTERNATIVES_CAP = 32
HARD_NODE_CAP = 4096

_PLACEHOLDER = re.compile(r"%([a-z][A-Za-z0-9_]*)(\(([^()]*)\))?")


def _parse_constant(text: str):
    text = text.strip()
    if re.fullmatch(r"-?\d+", text):
        return Integer(int(text))
    return Symbol(text)


def resolve_label_text(text: str, valuation) -> str:
    """Replace %fn(args) placeholders with the function's value."""

    def repl(m: re.Match) -> str:
        args = ()
        if m.group(2) is not None and m.group(3).strip():
            args = tuple(_parse_constant(a) for a in m.group(3).split(","))
        value = valuation.get(FunctionTerm(m.group(1), args))
        return term_text(value) if value is not None else "undefined"

    return _PLACEHOLDER.sub(repl, text)


def rule_label_display(rule: GroundRule, valuation) -> Optional[str]:
    if isinstance(rule.label, TextLabel):
        return resolve_label_text(rule.label.text, valuation)
    if isinstance(rule.label, TermLabel):
        return term_text(rule.label.term)
    return None


@dataclass
class ExplanationNode:
    display: str
    term: Optional[FunctionTerm]
    value: Optional[Value]
    via: Optional[GroundRule]
    children: List["ExplanationNode"] = field(default_factory=list)

    def atom_text(self) -> Optional[str]:
        if self.term is None:
            return None
        return assignment_text(self.term, self.value, compact=True)

    def structure_key(self):
        return (self.display, self.atom_text(),
                tuple(c.structure_key() for c in self.children))


@dataclass
class ExplanationSet:
    term: FunctionTerm
    value: Value
    alternatives: List[ExplanationNode]
    truncated: int = 0

    def target_text(self) -> str:
        return assignment_text(self.term, self.value, compact=True)


def program_has_labels(gp: GroundProgram) -> bool:
    return any(r.label is not None for r in gp.rules)


def auto_mode(gp: GroundProgram) -> str:
    return "labeled" if program_has_labels(gp) else "default"


def _build_alternatives(term, value, aset: AnswerSet, path: frozenset,
                        budget: List[int]) -> List[ExplanationNode]:
    if term in path or budget[0] <= 0:
        return []
    deeper = path | {term}
    out: List[ExplanationNode] = []
    for support in aset.supports.get(term, ()):
        child_options: List[List[ExplanationNode]] = []
        usable = True
        for wt, wv in support.witnesses:
            if wt == term:
                continue  # a rule may read its own target; not a child
            subs = _build_alternatives(wt, wv, aset, deeper, budget)
            if not subs:
                usable = False
                break
            child_options.append(subs)
        if not usable:
            continue
        for combo in itertools.product(*child_options):
            if budget[0] <= 0:
                break
            budget[0] -= 1
            out.append(ExplanationNode(
                assignment_text(term, value), term, value, support.rule,
                list(combo)))
    # structurally distinct alternatives only
    seen = set()
    unique = []
    for node in out:
        key = node.structure_key()
        if key not in seen:
            seen.add(key)
            unique.append(node)
    return unique


def _elide_unlabeled(node: ExplanationNode, valuation) -> List[ExplanationNode]:
    kids = [k for c in node.children for k in _elide_unlabeled(c, valuation)]
    label = rule_label_display(node.via, valuation) if node.via else None
    if label is None:
        return kids
    return [ExplanationNode(label, node.term, node.value, node.via, kids)]


def explain(target: Tuple[FunctionTerm, Value], result: SolveResult,
            mode: str = "default", answer_index: int = 0) -> ExplanationSet:
    """Enumerate the alternative proofs of one established assignment."""
    if not result.answer_sets:
        raise ExplainError("no answer set to explain")
    aset = result.answer_sets[answer_index]
    term, value = target
    applied = apply_term(term, aset.valuation)
    if applied is None or aset.valuation.get(applied) != value:
        raise ExplainError(
            f"{assignment_text(term, value, compact=True)} does not hold "
            f"in the answer set")
    budget = [HARD_NODE_CAP]
    alternatives = _build_alternatives(applied, value, aset, frozenset(), budget)
    if mode == "labeled":
        spliced: List[ExplanationNode] = []
        seen = set()
        for alt in alternatives:
            for root in _elide_unlabeled(alt, aset.valuation):
                key = root.structure_key()
                if key not in seen:
                    seen.add(key)
                    spliced.append(root)
        alternatives = spliced
    truncated = max(0, len(alternatives) - ALTERNATIVES_CAP)
    return ExplanationSet(applied, value, alternatives[:ALTERNATIVES_CAP], truncated)


def select_targets(result: SolveResult, answer_index: int = 0):
    """Targets chosen by the program's #explain directives, or every derived
    assignment when there are none."""
    if not result.answer_sets:
        return []
    aset = result.answer_sets[answer_index]
    gp = result.ground
    if not gp.explains:
        idx = gp.symbol_index
        return [(t, v) for t, v in aset.assignments(idx) if aset.is_derived(t)]
    out = []
    seen = set()
    for ge in gp.explains:
        if not all(literal_satisfied(l, aset.valuation) for l in ge.conditions):
            continue
        applied = apply_term(ge.target, aset.valuation)
        if applied is None or applied not in aset.valuation:
            continue
        pair = (applied, aset.valuation[applied])
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return out


def explain_selected(result: SolveResult, mode: str = "default",
                     answer_index: int = 0) -> List[ExplanationSet]:
    return [explain(t, result, mode, answer_index)
            for t in select_targets(result, answer_index)]


# --- text rendering -----------------------------------------------------------


def _tree_lines(node: ExplanationNode, depth: int, lines: List[str]) -> None:
    if depth == 0:
        lines.append("*" + node.display)
    else:
        lines.append(" " + "|    " * (depth - 1) + "|-- " + node.display)
    for child in node.children:
        _tree_lines(child, depth + 1, lines)


def render_text(sets: List[ExplanationSet], solutions: int = 1) -> str:
    """The printable explanation listing: one starred tree per alternative,
    then the occurrence and solution trailer."""
    blocks: List[str] = []
    for s in sets:
        for alt in s.alternatives:
            lines: List[str] = []
            _tree_lines(alt, 0, lines)
            blocks.append("\n".join(lines))
        if s.truncated:
            blocks.append(f"(+{s.truncated} more)")
    body = "\n\n".join(blocks)
    trailer = (f"{len(sets)} ocurrences explained.\n\n"
               f"{solutions} solution" + ("" if solutions == 1 else "s"))
    if body:
        return body + "\n\n" + trailer + "\n"
    return trailer + "\n"


# --- graph rendering ------------------------------------------------------------

_DOT_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


def _dot_quote(text: str) -> str:
    return '"' + "".join(_DOT_ESCAPES.get(c, c) for c in text) + '"'


def render_dot(sets: List[ExplanationSet]) -> str:
    """All explanation trees as one DOT digraph; alternatives are separate
    roots."""
    lines = ["digraph explanations {", "  node [shape=box];"]
    counter = itertools.count()

    def emit(node: ExplanationNode) -> int:
        nid = next(counter)
        lines.append(f"  n{nid} [label={_dot_quote(node.display)}];")
        for child in node.children:
            cid = emit(child)
            lines.append(f"  n{nid} -> n{cid};")
        return nid

    for s in sets:
        for alt in s.alternatives:
            emit(alt)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _node_document(node: ExplanationNode) -> dict:
    return {
        "display": node.display,
        "atom": node.atom_text(),
        "children": [_node_document(c) for c in node.children],
    }


def tree_document(sets: List[ExplanationSet]) -> list:
    """Structured-tree form of the explanations, for APIs and the UI."""
    return [
        {
            "target": s.target_text(),
            "alternatives": [_node_document(a) for a in s.alternatives],
            "truncated": s.truncated,
        }
        for s in sets
    ]


@dataclass
class GraphDocument:
    dot: str
    tree: list


def render_graph(sets: List[ExplanationSet]) -> GraphDocument:
    return GraphDocument(render_dot(sets), tree_document(sets))

"""Classifiers: weighted, labeled scoring rules in two phases plus risk bands.

A classifier compiles to an lppf program.  Per category the program assigns
``cat_val(P, <id>) := <weight>`` under the category's conditions, labeled
``"<label>\\t[<weight>]"`` so explanation trees show the activated rules
with their weights.  ``psoft_cal(P)`` sums the P-SOFT categories;
``soft_cal(P)`` sums the SOFT categories plus, through a labeled bridge that
only fires when it is non-zero, the whole P-SOFT block — which is what makes
the pre-allocation contribution show up as a single ``psoft [w]`` node with
the P-SOFT categories underneath, and vanish entirely when nothing in it
fired.  Band rules map the total to a discrete risk level; scores outside
the configured bands clamp into the outermost ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Dict, List, Optional, Sequence, Tuple, Union

from lppf.explain import ExplanationSet, explain_selected
from lppf.ground import ground
from lppf.render import rule_text
from lppf.solve import solve
from lppf.errors import LppfError
from lppf.syntax import (
    AggregateHead,
    AssertHead,
    AssignHead,
    Atom,
    BodyLiteral,
    Comparison,
    ExplainDirective,
    FunctionTerm,
    Integer,
    Program,
    Rule,
    SumAggregate,
    Symbol,
    TextLabel,
    Variable,
)

from .records import TransplantRecord, to_facts
from .schema import Schema, canonical_schema

PSOFT = "psoft"
SOFT = "soft"

#: category id reserved for the P-SOFT block node in explanation trees
PSOFT_BLOCK = "psoft_block"

SCHEMA_VERSION = "v1"

OperandValue = Union[int, bool, str]


@dataclass(frozen=True)
class Condition:
    attribute: str
    comparator: str  # = != < <= > >=
    operand: OperandValue


@dataclass(frozen=True)
class ClassifierRule:
    id: str
    label: str
    value: int
    phase: str  # PSOFT | SOFT
    conditions: Tuple[Condition, ...]


@dataclass(frozen=True)
class RiskBand:
    name: str
    min: int
    max: Optional[int]  # None = unbounded above


DEFAULT_BANDS: Tuple[RiskBand, ...] = (
    RiskBand("low", 0, 5),
    RiskBand("low_moderate", 6, 15),
    RiskBand("high_moderate", 16, 35),
    RiskBand("high", 36, 40),
    RiskBand("futile", 41, None),
)


@dataclass
class Classifier:
    id: str
    name: str
    description: str = ""
    rules: Tuple[ClassifierRule, ...] = ()
    bands: Tuple[RiskBand, ...] = DEFAULT_BANDS
    created: str = ""
    modified: str = ""
    version: int = 1


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    rule_id: Optional[str] = None

    def to_document(self) -> dict:
        doc = {"code": self.code, "message": self.message}
        if self.rule_id is not None:
            doc["rule_id"] = self.rule_id
        return doc


@dataclass
class CaseScore:
    case_id: int
    psoft_score: int
    soft_score: int
    risk: str
    activated: List[Tuple[str, int, str]]  # (rule id, weight, phase)

    def to_document(self) -> dict:
        return {
            "case_id": self.case_id,
            "psoft_score": self.psoft_score,
            "soft_score": self.soft_score,
            "risk": self.risk,
            "activated": [
                {"rule_id": r, "weight": w, "phase": p} for r, w, p in self.activated
            ],
        }


@dataclass
class CaseResult:
    case_id: int
    score: Optional[CaseScore] = None
    explanations: List[ExplanationSet] = field(default_factory=list)
    error: Optional[str] = None


def now_stamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


# --- compilation -------------------------------------------------------------

_P = Variable("P")
_C = Variable("C")


def _case_atom() -> BodyLiteral:
    return BodyLiteral(Atom(FunctionTerm("case", (_P,))))


def _operand_term(operand: OperandValue):
    if isinstance(operand, bool):
        return Symbol("true" if operand else "false")
    if isinstance(operand, int):
        return Integer(operand)
    return Symbol(operand)


def condition_literal(cond: Condition) -> BodyLiteral:
    """One condition over the case variable P."""
    term = FunctionTerm(cond.attribute, (_P,))
    if isinstance(cond.operand, bool):
        want_true = cond.operand == (cond.comparator == "=")
        if cond.comparator in ("=", "!="):
            return BodyLiteral(Atom(term, negated=not want_true))
    return BodyLiteral(Comparison(cond.comparator, term, _operand_term(cond.operand)))


def compile_rule_preview(rule: ClassifierRule) -> str:
    """The schematic single-rule form shown in the editor:
    ``"<label>" :: rule(P):=<w> :- <conditions>.``"""
    body = tuple(condition_literal(c) for c in rule.conditions)
    ast = Rule(AssignHead(FunctionTerm("rule", (_P,)), Integer(rule.value)),
               body, TextLabel(rule.label))
    return rule_text(ast)


def compile(classifier: Classifier) -> Program:  # noqa: A001 - domain verb
    """The classifier as an lppf program over ``case(P)`` facts."""
    rules: List[Rule] = []
    for r in classifier.rules:
        body = (_case_atom(),) + tuple(condition_literal(c) for c in r.conditions)
        rules.append(Rule(
            AssignHead(FunctionTerm("cat_val", (_P, Symbol(r.id))), Integer(r.value)),
            body,
            TextLabel(f"{r.label}\t[{r.value}]")))
    for r in classifier.rules:
        functor = "psoft_cat" if r.phase == PSOFT else "soft_cat"
        rules.append(Rule(AssertHead(FunctionTerm(functor, (Symbol(r.id),)))))

    cat_val_pc = FunctionTerm("cat_val", (_P, _C))
    psoft_cal = FunctionTerm("psoft_cal", (_P,))
    rules.append(Rule(
        AggregateHead(psoft_cal, SumAggregate(
            cat_val_pc, (BodyLiteral(Atom(FunctionTerm("psoft_cat", (_C,)))),))),
        (_case_atom(),)))

    # the P-SOFT block contributes as one node, only when something fired
    rules.append(Rule(
        AssignHead(FunctionTerm("part", (_P, Symbol(PSOFT_BLOCK))), psoft_cal),
        (_case_atom(), BodyLiteral(Comparison("!=", psoft_cal, Integer(0)))),
        TextLabel("psoft\t[%psoft_cal(P)]")))
    rules.append(Rule(
        AssignHead(FunctionTerm("part", (_P, _C)), cat_val_pc),
        (_case_atom(), BodyLiteral(Atom(FunctionTerm("soft_cat", (_C,)))))))
    rules.append(Rule(AssertHead(FunctionTerm("part_src", (Symbol(PSOFT_BLOCK),)))))
    for r in classifier.rules:
        if r.phase != PSOFT:
            rules.append(Rule(AssertHead(FunctionTerm("part_src", (Symbol(r.id),)))))

    soft_cal = FunctionTerm("soft_cal", (_P,))
    rules.append(Rule(
        AggregateHead(soft_cal, SumAggregate(
            FunctionTerm("part", (_P, _C)),
            (BodyLiteral(Atom(FunctionTerm("part_src", (_C,)))),))),
        (_case_atom(),),
        TextLabel("Activated rules:")))

    risk = FunctionTerm("risk", (_P,))
    band_label = TextLabel("Risk level of %P is %risk(P) because SOFT score is %soft_cal(P)")
    ordered = sorted(classifier.bands, key=lambda b: b.min)
    last = len(ordered) - 1
    for i, band in enumerate(ordered):
        body: List[BodyLiteral] = [_case_atom()]
        if i > 0:  # scores below the first band clamp into it
            body.append(BodyLiteral(Comparison(">=", soft_cal, Integer(band.min))))
        if i < last and band.max is not None:  # and above the last one into it
            body.append(BodyLiteral(Comparison("<=", soft_cal, Integer(band.max))))
        rules.append(Rule(AssignHead(risk, Symbol(band.name)), tuple(body), band_label))

    directives = (ExplainDirective(risk, (_case_atom(),)),)
    return Program(tuple(rules), directives)


# --- scoring -------------------------------------------------------------------


def _extract_score(classifier: Classifier, case_id: int, valuation) -> CaseScore:
    cid = Integer(case_id)

    def value_of(functor: str) -> Optional[object]:
        return valuation.get(FunctionTerm(functor, (cid,)))

    psoft = value_of("psoft_cal")
    soft = value_of("soft_cal")
    risk = value_of("risk")
    if psoft is None or soft is None or risk is None:
        raise LppfError(f"case {case_id}: scoring functions undefined")
    activated = []
    for r in classifier.rules:
        got = valuation.get(FunctionTerm("cat_val", (cid, Symbol(r.id))))
        if got is not None:
            activated.append((r.id, got.value, r.phase))
    return CaseScore(case_id, psoft.value, soft.value, risk.name, activated)


def score_case(classifier: Classifier, record: TransplantRecord,
               mode: str = "labeled",
               compiled: Optional[Program] = None) -> CaseResult:
    program = (compiled or compile(classifier)).merged(to_facts(record))
    result = solve(ground(program))
    score = _extract_score(classifier, record.case_id, result.answer_sets[0].valuation)
    explanations = explain_selected(result, mode)
    return CaseResult(record.case_id, score, explanations)


def score_cases(classifier: Classifier, records: Sequence[TransplantRecord],
                mode: str = "labeled", strict: bool = True) -> List[CaseResult]:
    """Score every case, attaching labeled explanations.

    strict=True re-raises the first solver error with the case id attached;
    strict=False records failures per case and keeps going.
    """
    compiled = compile(classifier)
    out: List[CaseResult] = []
    for record in records:
        try:
            out.append(score_case(classifier, record, mode, compiled))
        except LppfError as err:
            if strict:
                raise LppfError(f"case {record.case_id}: {err}") from err
            out.append(CaseResult(record.case_id, error=str(err)))
    return out


# --- editing --------------------------------------------------------------------


def clone(classifier: Classifier, new_id: str, new_name: Optional[str] = None,
          stamp: Optional[str] = None) -> Classifier:
    stamp = stamp or now_stamp()
    return replace(
        classifier, id=new_id, name=new_name or f"copy of {classifier.name}",
        created=stamp, modified=stamp, version=1)


_ORDER_COMPARATORS = ("<", "<=", ">", ">=")


def validate(classifier: Classifier, schema: Optional[Schema] = None) -> List[Finding]:
    schema = schema or canonical_schema()
    by_name = schema.by_name
    findings: List[Finding] = []

    seen_ids = set()
    for r in classifier.rules:
        if r.id in seen_ids:
            findings.append(Finding("duplicate-rule-id", f"rule id {r.id!r} repeats", r.id))
        seen_ids.add(r.id)
        if r.id == PSOFT_BLOCK:
            findings.append(Finding("reserved-rule-id",
                                    f"rule id {PSOFT_BLOCK!r} is reserved", r.id))
        if r.phase not in (PSOFT, SOFT):
            findings.append(Finding("bad-phase", f"unknown phase {r.phase!r}", r.id))
        if not r.conditions:
            findings.append(Finding("no-conditions",
                                    "a rule needs at least one condition", r.id))
        for cond in r.conditions:
            attr = by_name.get(cond.attribute)
            if attr is None:
                findings.append(Finding("unknown-attribute",
                                        f"unknown attribute {cond.attribute!r}", r.id))
                continue
            if cond.comparator not in ("=", "!=") + _ORDER_COMPARATORS:
                findings.append(Finding("bad-comparator",
                                        f"unknown comparator {cond.comparator!r}", r.id))
                continue
            if attr.kind == "integer" and not isinstance(cond.operand, int) \
                    or isinstance(cond.operand, bool) and attr.kind != "boolean":
                findings.append(Finding(
                    "type-mismatch",
                    f"{cond.attribute} is {attr.kind}, operand {cond.operand!r} is not",
                    r.id))
            elif attr.kind == "boolean" and not isinstance(cond.operand, bool):
                findings.append(Finding(
                    "type-mismatch",
                    f"{cond.attribute} is boolean, operand {cond.operand!r} is not", r.id))
            elif attr.kind == "symbol" and not isinstance(cond.operand, str):
                findings.append(Finding(
                    "type-mismatch",
                    f"{cond.attribute} is a symbol, operand {cond.operand!r} is not", r.id))
            if attr.kind != "integer" and cond.comparator in _ORDER_COMPARATORS:
                findings.append(Finding(
                    "bad-comparator",
                    f"order comparison on non-integer attribute {cond.attribute}", r.id))
        if _unreachable(r.conditions):
            findings.append(Finding("unreachable-rule",
                                    "conditions can never hold together", r.id))

    findings.extend(_validate_bands(classifier.bands))
    return findings


def _unreachable(conditions: Tuple[Condition, ...]) -> bool:
    by_attr: Dict[str, List[Condition]] = {}
    for c in conditions:
        by_attr.setdefault(c.attribute, []).append(c)
    for conds in by_attr.values():
        lo, hi = -(1 << 62), 1 << 62
        eq: Optional[OperandValue] = None
        for c in conds:
            if isinstance(c.operand, bool) or isinstance(c.operand, str):
                if c.comparator == "=":
                    if eq is not None and eq != c.operand:
                        return True
                    eq = c.operand
                continue
            v = c.operand
            if c.comparator == "=":
                lo, hi = max(lo, v), min(hi, v)
            elif c.comparator == "<":
                hi = min(hi, v - 1)
            elif c.comparator == "<=":
                hi = min(hi, v)
            elif c.comparator == ">":
                lo = max(lo, v + 1)
            elif c.comparator == ">=":
                lo = max(lo, v)
        if lo > hi:
            return True
    return False


def _validate_bands(bands: Tuple[RiskBand, ...]) -> List[Finding]:
    findings: List[Finding] = []
    if not bands:
        return [Finding("no-bands", "a classifier needs at least one risk band")]
    names = [b.name for b in bands]
    if len(names) != len(set(names)):
        findings.append(Finding("duplicate-band-name", "band names repeat"))
    ordered = sorted(bands, key=lambda b: b.min)
    for band in ordered:
        if band.max is not None and band.max < band.min:
            findings.append(Finding("empty-band", f"band {band.name} has max < min"))
    for a, b in zip(ordered, ordered[1:]):
        if a.max is None:
            findings.append(Finding(
                "band-overlap", f"band {a.name} is unbounded but {b.name} follows"))
        elif a.max + 1 != b.min:
            kind = "band-overlap" if a.max >= b.min else "band-gap"
            findings.append(Finding(
                kind, f"bands {a.name} and {b.name} are not contiguous"))
    return findings


# --- documents -------------------------------------------------------------------


def to_document(classifier: Classifier) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "id": classifier.id,
        "name": classifier.name,
        "description": classifier.description,
        "rules": [
            {
                "id": r.id,
                "label": r.label,
                "value": r.value,
                "phase": r.phase,
                "conditions": [
                    {"attribute": c.attribute, "comparator": c.comparator,
                     "operand": c.operand}
                    for c in r.conditions
                ],
            }
            for r in classifier.rules
        ],
        "bands": [{"name": b.name, "min": b.min, "max": b.max} for b in classifier.bands],
        "created": classifier.created,
        "modified": classifier.modified,
        "version": classifier.version,
    }


def from_document(doc: dict) -> Classifier:
    if doc.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ValueError(f"unsupported classifier document version "
                         f"{doc.get('schema_version')!r}")
    rules = tuple(
        ClassifierRule(
            r["id"], r["label"], int(r["value"]), r["phase"],
            tuple(Condition(c["attribute"], c["comparator"], c["operand"])
                  for c in r.get("conditions", ())))
        for r in doc.get("rules", ()))
    bands = tuple(RiskBand(b["name"], int(b["min"]),
                           None if b.get("max") is None else int(b["max"]))
                  for b in doc.get("bands", ())) or DEFAULT_BANDS
    return Classifier(
        doc["id"], doc.get("name", doc["id"]), doc.get("description", ""),
        rules, bands, doc.get("created", ""), doc.get("modified", ""),
        int(doc.get("version", 1)))


def load_classifier(path) -> Classifier:
    from pathlib import Path

    return from_document(json.loads(Path(path).read_text(encoding="utf-8")))


# --- the built-in fragment ---------------------------------------------------------

_BUILTIN_STAMP = "2026-01-01T00:00:00Z"


def builtin_classifier() -> Classifier:
    """The bundled SOFT categories: recipient BMI over 35 (+2), donor age
    10-20 (-2), cold ischemia up to 6h (-3), donor age over 60 (+3), the
    three pretransplant P-SOFT flags (+6/+9/+5) and donor CVA (+2)."""
    def r(rid, value, phase, *conditions):
        return ClassifierRule(rid, rid, value, phase, conditions)

    rules = (
        r("bmi_gt_35", 2, SOFT, Condition("bmi", ">", 35)),
        r("donor_age_10_20", -2, SOFT,
          Condition("donor_age", ">=", 10), Condition("donor_age", "<=", 20)),
        r("cold_ischemia_0_6h", -3, SOFT,
          Condition("cold_ischemia_h", ">=", 0), Condition("cold_ischemia_h", "<=", 6)),
        r("donor_age2_gt_60", 3, SOFT, Condition("donor_age", ">", 60)),
        r("intensive_care_unit_pretransplant", 6, PSOFT,
          Condition("icu_pretransplant", "=", True)),
        r("life_support_pretransplant", 9, PSOFT,
          Condition("life_support_pretransplant", "=", True)),
        r("portal_vein_thrombosis", 5, PSOFT,
          Condition("portal_vein_thrombosis", "=", True)),
        r("donor_cerebral_vascular_accident", 2, SOFT,
          Condition("donor_cerebral_vascular_accident", "=", True)),
    )
    return Classifier(
        "soft-fragment", "SOFT fragment",
        "Survival Outcomes Following Liver Transplantation, bundled fragment",
        rules, DEFAULT_BANDS, _BUILTIN_STAMP, _BUILTIN_STAMP, 1)

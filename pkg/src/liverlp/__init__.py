"""liverlp — explainable donor-patient matching workbench over lppf."""

from .classifier import (
    CaseResult,
    CaseScore,
    Classifier,
    ClassifierRule,
    Condition,
    Finding,
    RiskBand,
    builtin_classifier,
    clone,
    compile,
    compile_rule_preview,
    from_document,
    score_case,
    score_cases,
    to_document,
    validate,
)
from .records import TransplantRecord, load, load_csv, save_csv, synthesize, to_facts
from .schema import AttributeSchema, Schema, canonical_schema, load_schema
from .store import Store

__version__ = "0.1.0"

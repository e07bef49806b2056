"""Transplant-case records: loading, fact compilation, synthesis.

A record is a partial map from attribute names to typed values; missing
attributes simply produce no fact, so downstream conditions over them fail
(partial-function semantics).  The CSV dialect is comma-separated, first
row header, empty cell = missing, UTF-8.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Union

from lppf.syntax import (
    AssertHead,
    AssignHead,
    DenyHead,
    FunctionTerm,
    Integer,
    Program,
    Rule,
    Symbol,
)

from .schema import Schema, canonical_schema

AttrValue = Union[int, bool, str]

PINNED_LOW_CASE = 686   # activates cold_ischemia_0_6h and donor_age2_gt_60
PINNED_HIGH_CASE = 763  # activates the three pretransplant flags plus donor CVA

_PINNED_VALUES = {
    PINNED_LOW_CASE: {
        "bmi": 28, "donor_age": 65, "cold_ischemia_h": 4,
        "icu_pretransplant": False, "life_support_pretransplant": False,
        "portal_vein_thrombosis": False, "donor_cerebral_vascular_accident": False,
    },
    PINNED_HIGH_CASE: {
        "bmi": 24, "donor_age": 45, "cold_ischemia_h": 8,
        "icu_pretransplant": True, "life_support_pretransplant": True,
        "portal_vein_thrombosis": True, "donor_cerebral_vascular_accident": True,
    },
}


@dataclass
class TransplantRecord:
    case_id: int
    values: Dict[str, AttrValue] = field(default_factory=dict)

    def to_document(self) -> dict:
        return {"case_id": self.case_id, "values": dict(self.values)}


class RecordError(ValueError):
    pass


def _parse_cell(name: str, kind: str, raw: str, where: str) -> AttrValue:
    raw = raw.strip()
    if kind == "integer":
        try:
            return int(raw)
        except ValueError:
            raise RecordError(f"{where}: expected an integer for {name}, got {raw!r}")
    if kind == "boolean":
        low = raw.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise RecordError(f"{where}: expected a boolean for {name}, got {raw!r}")
    return raw


def load_csv(path, schema: Schema | None = None) -> List[TransplantRecord]:
    schema = schema or canonical_schema()
    by_name = schema.by_name
    records: List[TransplantRecord] = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RecordError(f"{path}: empty file, expected a header row")
        header = [h.strip() for h in header]
        if not header or header[0] != "case_id":
            raise RecordError(f"{path}: first column must be case_id")
        for col in header[1:]:
            if col not in by_name:
                raise RecordError(f"{path}: unknown column {col!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            where = f"{path}: row {lineno}"
            try:
                case_id = int(row[0])
            except ValueError:
                raise RecordError(f"{where}: bad case_id {row[0]!r}")
            if case_id in seen:
                raise RecordError(f"{where}: duplicate case_id {case_id}")
            seen.add(case_id)
            values: Dict[str, AttrValue] = {}
            for col, raw in zip(header[1:], row[1:]):
                if raw.strip() == "":
                    continue  # missing: the function stays undefined
                values[col] = _parse_cell(col, by_name[col].kind,
                                          raw, f"{where}, column {col}")
            records.append(TransplantRecord(case_id, values))
    return records


def load_json_records(doc, schema: Schema | None = None) -> List[TransplantRecord]:
    """Records from a structured dataset document (list of record docs)."""
    schema = schema or canonical_schema()
    by_name = schema.by_name
    records = []
    seen = set()
    for i, entry in enumerate(doc):
        case_id = entry["case_id"]
        if not isinstance(case_id, int):
            raise RecordError(f"record {i}: case_id must be an integer")
        if case_id in seen:
            raise RecordError(f"record {i}: duplicate case_id {case_id}")
        seen.add(case_id)
        values = {}
        for name, value in entry.get("values", {}).items():
            attr = by_name.get(name)
            if attr is None:
                raise RecordError(f"record {case_id}: unknown attribute {name!r}")
            if attr.kind == "integer" and not isinstance(value, int) \
                    or attr.kind == "boolean" and not isinstance(value, bool) \
                    or attr.kind == "symbol" and not isinstance(value, str):
                raise RecordError(
                    f"record {case_id}: {name} must be {attr.kind}, got {value!r}")
            values[name] = value
        records.append(TransplantRecord(case_id, values))
    return records


def load(path, fmt: str = "csv", schema: Schema | None = None) -> List[TransplantRecord]:
    if fmt == "csv":
        return load_csv(path, schema)
    if fmt in ("structured", "json"):
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(doc, dict):
            doc = doc.get("records", [])
        return load_json_records(doc, schema)
    raise ValueError(f"unknown record format {fmt!r}")


def save_csv(records: List[TransplantRecord], path, schema: Schema | None = None) -> None:
    schema = schema or canonical_schema()
    names = list(schema.names())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case_id"] + names)
        for record in records:
            row = [str(record.case_id)]
            for name in names:
                value = record.values.get(name)
                if value is None:
                    row.append("")
                elif isinstance(value, bool):
                    row.append("true" if value else "false")
                else:
                    row.append(str(value))
            writer.writerow(row)


def to_facts(record: TransplantRecord) -> Program:
    """One case as lppf facts: integers and symbols assign, booleans assert
    or deny, missing attributes stay undefined."""
    case = Integer(record.case_id)
    rules = [Rule(AssertHead(FunctionTerm("case", (case,))))]
    for name in sorted(record.values):
        value = record.values[name]
        term = FunctionTerm(name, (case,))
        if isinstance(value, bool):
            head = AssertHead(term) if value else DenyHead(term)
        elif isinstance(value, int):
            head = AssignHead(term, Integer(value))
        else:
            head = AssignHead(term, Symbol(value))
        rules.append(Rule(head))
    return Program(tuple(rules))


def pinned_records() -> List[TransplantRecord]:
    return [TransplantRecord(cid, dict(values))
            for cid, values in sorted(_PINNED_VALUES.items())]


def synthesize(n: int, seed: int, schema: Schema | None = None) -> List[TransplantRecord]:
    """Deterministic synthetic dataset.  The two pinned reference cases are
    included whenever n >= 2; the rest draw from the schema's plausible
    ranges, with occasional missing attributes."""
    if n < 0:
        raise ValueError("n must be >= 0")
    schema = schema or canonical_schema()
    rng = random.Random(seed)
    records: List[TransplantRecord] = []
    include_pinned = n >= 2
    target_random = n - 2 if include_pinned else n
    next_id = 100
    reserved = set(_PINNED_VALUES)
    for _ in range(target_random):
        while next_id in reserved:
            next_id += 1
        values: Dict[str, AttrValue] = {}
        for attr in schema.attributes:
            if rng.random() < 0.08:
                continue  # missing value
            if attr.kind == "integer":
                values[attr.name] = rng.randint(attr.low or 0, attr.high or 100)
            elif attr.kind == "boolean":
                values[attr.name] = rng.random() < (attr.rate or 0.5)
            else:
                values[attr.name] = rng.choice(attr.choices or ("unknown",))
        records.append(TransplantRecord(next_id, values))
        next_id += 1
    if include_pinned:
        records.extend(pinned_records())
    records.sort(key=lambda r: r.case_id)
    return records

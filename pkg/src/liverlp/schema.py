"""Attribute schema for transplant-case records.

The canonical schema ships the attributes the built-in classifier needs;
deployments extend it through a schema file (JSON) with the same fields.
Integer attributes carry a plausible range and boolean attributes a
prevalence, which the synthetic dataset generator draws from.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

GROUPS = ("donor", "recipient", "surgery")
KINDS = ("integer", "boolean", "symbol")


@dataclass(frozen=True)
class AttributeSchema:
    name: str
    kind: str
    group: str
    unit: Optional[str] = None
    low: Optional[int] = None        # integer: synthesizer range
    high: Optional[int] = None
    rate: Optional[float] = None     # boolean: synthesizer prevalence
    choices: Tuple[str, ...] = ()    # symbol: synthesizer values

    def to_document(self) -> dict:
        doc = {"name": self.name, "kind": self.kind, "group": self.group}
        if self.unit is not None:
            doc["unit"] = self.unit
        if self.kind == "integer":
            doc["low"], doc["high"] = self.low, self.high
        if self.kind == "boolean":
            doc["rate"] = self.rate
        if self.kind == "symbol":
            doc["choices"] = list(self.choices)
        return doc


@dataclass(frozen=True)
class Schema:
    attributes: Tuple[AttributeSchema, ...]

    def __post_init__(self):
        names = [a.name for a in self.attributes]
        if len(names) != len(set(names)):
            raise ValueError("duplicate attribute names in schema")

    @property
    def by_name(self) -> Dict[str, AttributeSchema]:
        return {a.name: a for a in self.attributes}

    def names(self) -> Sequence[str]:
        return [a.name for a in self.attributes]

    def to_document(self) -> dict:
        return {"attributes": [a.to_document() for a in self.attributes]}


def canonical_schema() -> Schema:
    return Schema((
        AttributeSchema("bmi", "integer", "recipient", "kg/m2", low=16, high=45),
        AttributeSchema("donor_age", "integer", "donor", "years", low=1, high=85),
        AttributeSchema("cold_ischemia_h", "integer", "surgery", "hours", low=0, high=18),
        AttributeSchema("icu_pretransplant", "boolean", "recipient", rate=0.2),
        AttributeSchema("life_support_pretransplant", "boolean", "recipient", rate=0.15),
        AttributeSchema("portal_vein_thrombosis", "boolean", "recipient", rate=0.1),
        AttributeSchema("donor_cerebral_vascular_accident", "boolean", "donor", rate=0.3),
    ))


def load_schema(path) -> Schema:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    attributes = []
    for entry in doc["attributes"]:
        kind = entry["kind"]
        if kind not in KINDS:
            raise ValueError(f"unknown attribute kind {kind!r} for {entry['name']!r}")
        if entry.get("group") not in GROUPS:
            raise ValueError(f"unknown group {entry.get('group')!r} for {entry['name']!r}")
        attributes.append(AttributeSchema(
            entry["name"], kind, entry["group"], entry.get("unit"),
            entry.get("low"), entry.get("high"), entry.get("rate"),
            tuple(entry.get("choices", ()))))
    return Schema(tuple(attributes))

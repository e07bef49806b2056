"""HTTP facade: classifiers, results and transplants over the interpreter.

All API routes live under /api/v1 and exchange JSON documents with
snake_case fields mirroring the domain types.  Static UI assets, when a
build directory is configured, are served from the root path.

Environment: LIVERLP_DATA_ROOT (store directory), LIVERLP_HOST,
LIVERLP_PORT, LIVERLP_STATIC_DIR.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import List, Optional, Union

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, StrictBool, StrictInt, StrictStr

from lppf.errors import LppfError
from lppf.explain import tree_document

from . import classifier as clf
from .records import RecordError, load_json_records, synthesize
from .report import render_report
from .schema import canonical_schema
from .store import Store, valid_slug


# --- request models -----------------------------------------------------------


class ConditionIn(BaseModel):
    attribute: str
    comparator: str
    operand: Union[StrictBool, StrictInt, StrictStr]


class RuleIn(BaseModel):
    id: str
    label: str
    value: int
    phase: str
    conditions: List[ConditionIn]


class BandIn(BaseModel):
    name: str
    min: int
    max: Optional[int] = None


class ClassifierIn(BaseModel):
    id: Optional[str] = None
    name: str
    description: str = ""
    rules: List[RuleIn] = []
    bands: Optional[List[BandIn]] = None


class CloneIn(BaseModel):
    new_id: Optional[str] = None
    new_name: Optional[str] = None


class SynthesizeIn(BaseModel):
    n: int
    seed: int


class RecordIn(BaseModel):
    case_id: int
    values: dict = {}


class DatasetIn(BaseModel):
    id: str
    records: Optional[List[RecordIn]] = None
    synthesize: Optional[SynthesizeIn] = None


class PreviewIn(BaseModel):
    label: str
    value: int
    conditions: List[ConditionIn]


def _to_classifier(payload: ClassifierIn, cid: str, created: str,
                   version: int) -> clf.Classifier:
    rules = tuple(
        clf.ClassifierRule(
            r.id, r.label, r.value, r.phase,
            tuple(clf.Condition(c.attribute, c.comparator, c.operand)
                  for c in r.conditions))
        for r in payload.rules)
    bands = tuple(clf.RiskBand(b.name, b.min, b.max) for b in payload.bands) \
        if payload.bands else clf.DEFAULT_BANDS
    return clf.Classifier(cid, payload.name, payload.description, rules, bands,
                          created, clf.now_stamp(), version)


def _findings_response(findings) -> JSONResponse:
    return JSONResponse(status_code=422, content={
        "detail": "classifier validation failed",
        "findings": [f.to_document() for f in findings],
    })


# --- runs ------------------------------------------------------------------------


def execute_run(store: Store, classifier_doc: dict, dataset_doc: dict) -> dict:
    """Score a dataset and persist the run.  Run ids are a content hash, so
    re-running identical inputs reuses the stored document byte for byte."""
    model = clf.from_document(classifier_doc)
    records = load_json_records(dataset_doc.get("records", []))
    results = clf.score_cases(model, records, strict=False)
    content = {
        "classifier_id": classifier_doc["id"],
        "classifier_version": classifier_doc.get("version", 1),
        "dataset_id": dataset_doc["id"],
        "scores": [r.score.to_document() for r in results if r.score],
        "explanations": {
            str(r.case_id): tree_document(r.explanations)
            for r in results if r.score
        },
        "failures": [
            {"case_id": r.case_id, "error": r.error} for r in results if r.error
        ],
    }
    digest = hashlib.sha256(
        json.dumps(content, sort_keys=True).encode("utf-8")).hexdigest()
    run_id = "run-" + digest[:12]
    existing = store.read("runs", run_id)
    if existing is not None:
        return existing
    doc = {"run_id": run_id, "created": clf.now_stamp(), **content}
    store.write("runs", run_id, doc)
    return doc


# --- application -----------------------------------------------------------------

_PLACEHOLDER_PAGE = """<!DOCTYPE html>
<html><head><title>liverlp</title></head>
<body><h1>liverlp service</h1>
<p>The API lives under <code>/api/v1</code>.  No UI build is configured;
set LIVERLP_STATIC_DIR to a built frontend to serve it here.</p>
</body></html>
"""


def create_app(data_root=None, static_dir=None) -> FastAPI:
    root = Path(data_root or os.environ.get("LIVERLP_DATA_ROOT", "liverlp-data"))
    store = Store(root)
    if not store.exists("classifiers", "soft-fragment"):
        store.write("classifiers", "soft-fragment",
                    clf.to_document(clf.builtin_classifier()))

    app = FastAPI(title="liverlp", version="0.1.0")
    app.state.store = store
    api = "/api/v1"

    def get_classifier_doc(cid: str) -> dict:
        doc = store.read("classifiers", cid)
        if doc is None:
            raise HTTPException(404, f"classifier {cid!r} not found")
        return doc

    def get_dataset_doc(did: str) -> dict:
        doc = store.read("datasets", did)
        if doc is None:
            raise HTTPException(404, f"dataset {did!r} not found")
        return doc

    # -- schema ------------------------------------------------------------

    @app.get(api + "/schema")
    def get_schema():
        return canonical_schema().to_document()

    # -- classifiers ---------------------------------------------------------

    @app.get(api + "/classifiers")
    def list_classifiers():
        return [store.read("classifiers", cid)
                for cid in store.list_ids("classifiers")]

    @app.post(api + "/classifiers", status_code=201)
    def create_classifier(payload: ClassifierIn):
        cid = payload.id or payload.name.lower().replace(" ", "-")
        if not valid_slug(cid):
            raise HTTPException(422, f"invalid id {cid!r}")
        if store.exists("classifiers", cid):
            raise HTTPException(409, f"classifier {cid!r} already exists")
        model = _to_classifier(payload, cid, clf.now_stamp(), version=1)
        findings = clf.validate(model)
        if findings:
            return _findings_response(findings)
        doc = clf.to_document(model)
        store.write("classifiers", cid, doc)
        return doc

    @app.get(api + "/classifiers/{cid}")
    def read_classifier(cid: str):
        return get_classifier_doc(cid)

    @app.put(api + "/classifiers/{cid}")
    def update_classifier(cid: str, payload: ClassifierIn):
        existing = get_classifier_doc(cid)
        model = _to_classifier(payload, cid, existing.get("created", ""),
                               existing.get("version", 1) + 1)
        findings = clf.validate(model)
        if findings:
            return _findings_response(findings)
        doc = clf.to_document(model)
        store.write("classifiers", cid, doc)
        return doc

    @app.delete(api + "/classifiers/{cid}", status_code=204)
    def delete_classifier(cid: str, force: bool = False):
        get_classifier_doc(cid)
        referencing = store.runs_referencing(cid)
        if referencing and not force:
            raise HTTPException(
                409, f"classifier {cid!r} is referenced by runs "
                     f"{referencing}; pass force=true to delete anyway")
        store.delete("classifiers", cid)

    @app.post(api + "/classifiers/{cid}/clone", status_code=201)
    def clone_classifier(cid: str, payload: CloneIn):
        source = clf.from_document(get_classifier_doc(cid))
        new_id = payload.new_id or f"copy-of-{cid}"
        if not valid_slug(new_id):
            raise HTTPException(422, f"invalid id {new_id!r}")
        if store.exists("classifiers", new_id):
            raise HTTPException(409, f"classifier {new_id!r} already exists")
        copy = clf.clone(source, new_id, payload.new_name)
        doc = clf.to_document(copy)
        store.write("classifiers", new_id, doc)
        return doc

    @app.post(api + "/classifiers/{cid}/compile")
    def compile_classifier(cid: str):
        from lppf.render import render

        model = clf.from_document(get_classifier_doc(cid))
        return {"lppf": render(clf.compile(model))}

    @app.post(api + "/preview/rule")
    def preview_rule(payload: PreviewIn):
        rule = clf.ClassifierRule(
            "preview", payload.label, payload.value, clf.SOFT,
            tuple(clf.Condition(c.attribute, c.comparator, c.operand)
                  for c in payload.conditions))
        return {"lppf": clf.compile_rule_preview(rule)}

    # -- datasets --------------------------------------------------------------

    @app.get(api + "/datasets")
    def list_datasets():
        out = []
        for did in store.list_ids("datasets"):
            doc = store.read("datasets", did)
            out.append({"id": did, "cases": len(doc.get("records", [])),
                        "created": doc.get("created")})
        return out

    @app.post(api + "/datasets", status_code=201)
    def create_dataset(payload: DatasetIn):
        if not valid_slug(payload.id):
            raise HTTPException(422, f"invalid id {payload.id!r}")
        if store.exists("datasets", payload.id):
            raise HTTPException(409, f"dataset {payload.id!r} already exists")
        if payload.synthesize is not None:
            if payload.synthesize.n < 0:
                raise HTTPException(422, "synthesize.n must be >= 0")
            records = synthesize(payload.synthesize.n, payload.synthesize.seed)
        elif payload.records is not None:
            try:
                records = load_json_records([r.model_dump() for r in payload.records])
            except RecordError as err:
                raise HTTPException(422, str(err))
        else:
            raise HTTPException(422, "provide records or synthesize parameters")
        doc = {
            "id": payload.id,
            "created": clf.now_stamp(),
            "records": [r.to_document() for r in records],
        }
        store.write("datasets", payload.id, doc)
        return {"id": payload.id, "cases": len(records)}

    @app.get(api + "/datasets/{did}")
    def read_dataset(did: str):
        return get_dataset_doc(did)

    @app.delete(api + "/datasets/{did}", status_code=204)
    def delete_dataset(did: str):
        if not store.delete("datasets", did):
            raise HTTPException(404, f"dataset {did!r} not found")

    # -- results ------------------------------------------------------------------

    @app.post(api + "/classifiers/{cid}/run", status_code=201)
    def run_classifier(cid: str, dataset: str = Query(...)):
        classifier_doc = get_classifier_doc(cid)
        dataset_doc = get_dataset_doc(dataset)
        doc = execute_run(store, classifier_doc, dataset_doc)
        if doc.get("failures"):
            return JSONResponse(status_code=500, content={
                "detail": "some cases failed to solve",
                "run": doc,
            })
        return doc

    @app.get(api + "/runs")
    def list_runs():
        out = []
        for rid in store.list_ids("runs"):
            doc = store.read("runs", rid)
            out.append({
                "run_id": rid,
                "classifier_id": doc.get("classifier_id"),
                "classifier_version": doc.get("classifier_version"),
                "dataset_id": doc.get("dataset_id"),
                "created": doc.get("created"),
                "cases": len(doc.get("scores", [])),
                "failures": len(doc.get("failures", [])),
            })
        return out

    @app.get(api + "/runs/{rid}")
    def read_run(rid: str):
        doc = store.read("runs", rid)
        if doc is None:
            raise HTTPException(404, f"run {rid!r} not found")
        return doc

    @app.get(api + "/runs/{rid}/report", response_class=HTMLResponse)
    def run_report(rid: str, risk: Optional[str] = None,
                   min_score: Optional[int] = None,
                   max_score: Optional[int] = None,
                   rule: Optional[str] = None):
        doc = store.read("runs", rid)
        if doc is None:
            raise HTTPException(404, f"run {rid!r} not found")
        return render_report(doc, risk=risk, min_score=min_score,
                             max_score=max_score, rule=rule)

    @app.get(api + "/runs/{rid}/cases/{case_id}")
    def run_case(rid: str, case_id: int):
        doc = store.read("runs", rid)
        if doc is None:
            raise HTTPException(404, f"run {rid!r} not found")
        for score in doc.get("scores", []):
            if score["case_id"] == case_id:
                return {
                    "score": score,
                    "explanations": doc.get("explanations", {}).get(str(case_id), []),
                }
        raise HTTPException(404, f"case {case_id} not in run {rid!r}")

    # -- transplants ------------------------------------------------------------------

    @app.get(api + "/transplants")
    def list_transplants(dataset: str = Query(...)):
        doc = get_dataset_doc(dataset)
        return sorted(doc.get("records", []), key=lambda r: r["case_id"])

    @app.get(api + "/transplants/{case_id}")
    def read_transplant(case_id: int, dataset: str = Query(...)):
        doc = get_dataset_doc(dataset)
        for record in doc.get("records", []):
            if record["case_id"] == case_id:
                return record
        raise HTTPException(404, f"case {case_id} not in dataset {dataset!r}")

    @app.post(api + "/transplants/{case_id}/apply/{cid}")
    def apply_classifier(case_id: int, cid: str, dataset: str = Query(...)):
        classifier_doc = get_classifier_doc(cid)
        dataset_doc = get_dataset_doc(dataset)
        record = None
        for entry in dataset_doc.get("records", []):
            if entry["case_id"] == case_id:
                record = entry
                break
        if record is None:
            raise HTTPException(404, f"case {case_id} not in dataset {dataset!r}")
        model = clf.from_document(classifier_doc)
        try:
            result = clf.score_case(model, load_json_records([record])[0])
        except LppfError as err:
            raise HTTPException(500, f"case {case_id}: {err}")
        return {
            "score": result.score.to_document(),
            "explanations": tree_document(result.explanations),
        }

    # -- static UI ----------------------------------------------------------------------

    static = static_dir or os.environ.get("LIVERLP_STATIC_DIR")
    if static and Path(static).is_dir():
        app.mount("/", StaticFiles(directory=static, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return _PLACEHOLDER_PAGE

    return app

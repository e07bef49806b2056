"""The frontend's contract fixtures must match the live service.

The UI test suite runs against fixtures captured from the API; these tests
re-derive the same responses so a drifting contract fails here first.
"""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from liverlp.service import create_app

FIXTURES = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures"

pytestmark = pytest.mark.skipif(
    not FIXTURES.is_dir(), reason="frontend fixtures not present")


@pytest.fixture
def client(tmp_path):
    with TestClient(create_app(tmp_path / "data")) as c:
        yield c


def _fixture(name):
    return json.loads((FIXTURES / name).read_text(encoding="utf-8"))


def test_preview_fixture_matches_server(client):
    doc = _fixture("preview.json")
    response = client.post("/api/v1/preview/rule", json=doc["request"])
    assert response.status_code == 200
    assert response.json() == doc["response"]


def test_schema_fixture_matches_server(client):
    assert client.get("/api/v1/schema").json() == _fixture("schema.json")


def test_classifier_fixture_matches_server(client):
    assert client.get("/api/v1/classifiers/soft-fragment").json() == \
        _fixture("classifier.json")


def test_run_fixture_matches_server(client):
    fixture = _fixture("run.json")
    client.post("/api/v1/datasets",
                json={"id": "pinned", "synthesize": {"n": 2, "seed": 42}})
    run = client.post("/api/v1/classifiers/soft-fragment/run?dataset=pinned").json()
    assert run["run_id"] == fixture["run_id"]  # content-addressed: same inputs
    for field in ("classifier_id", "classifier_version", "dataset_id",
                  "scores", "explanations", "failures"):
        assert run[field] == fixture[field], field


def test_service_serves_built_frontend(tmp_path):
    dist = Path(__file__).parent.parent / "frontend" / "dist"
    if not (dist / "index.html").exists():
        pytest.skip("frontend not built")
    with TestClient(create_app(tmp_path / "data", static_dir=str(dist))) as client:
        index = client.get("/")
        assert index.status_code == 200
        assert 'id="outlet"' in index.text
        assert client.get("/main.js").status_code == 200
        assert client.get("/api/v1/classifiers").status_code == 200

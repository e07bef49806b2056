import json

import pytest

from conftest import (
    ANSWER_BLOCK_GOLDEN,
    CASE_686_GOLDEN,
    CASE_763_GOLDEN,
    CORPUS,
    EXPLAIN_DEFAULT_GOLDEN,
)
from liverlp.cli import main as liverlp_main
from lppf.cli import main as lppf_main

SENTENCES = str(CORPUS / "sentences_default.lppf")


class TestLppfSolve:
    def test_answer_block_golden(self, capsys):
        assert lppf_main(["solve", SENTENCES]) == 0
        assert capsys.readouterr().out == ANSWER_BLOCK_GOLDEN

    def test_explain_golden(self, capsys):
        code = lppf_main(["solve", SENTENCES,
                          "--explain", "sentence(gabriel)=prison"])
        assert code == 0
        expected = (ANSWER_BLOCK_GOLDEN + "\n" + EXPLAIN_DEFAULT_GOLDEN
                    + "\n1 ocurrences explained.\n\n1 solution\n")
        assert capsys.readouterr().out == expected

    def test_directives_trigger_explanations(self, capsys):
        code = lppf_main(["solve", str(CORPUS / "sentences_explain.lppf")])
        assert code == 0
        out = capsys.readouterr().out
        assert "0 ocurrences explained." in out

    def test_multiple_files_merge(self, tmp_path, capsys):
        rules = tmp_path / "rules.lppf"
        facts = tmp_path / "facts.lppf"
        rules.write_text("ok(P) :- seen(P).", encoding="utf-8")
        facts.write_text("seen(a).", encoding="utf-8")
        assert lppf_main(["solve", str(rules), str(facts)]) == 0
        assert "ok(a)." in capsys.readouterr().out

    def test_parse_error_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.lppf"
        bad.write_text("this is not lppf ???", encoding="utf-8")
        assert lppf_main(["solve", str(bad)]) == 2
        err = capsys.readouterr().err
        assert err.count("\n") >= 1
        assert "bad.lppf:1:" in err

    def test_inconsistency_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "conflict.lppf"
        bad.write_text("f(1):=2. f(1):=3.", encoding="utf-8")
        assert lppf_main(["solve", str(bad)]) == 1
        assert "conflicts" in capsys.readouterr().err

    def test_json_format(self, capsys):
        assert lppf_main(["solve", SENTENCES, "--format", "json",
                          "--explain", "sentence(gabriel)=prison"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["answers"][0]["assignments"]["sentence(gabriel)"] == "prison"
        assert "punish(gabriel)" in doc["answers"][0]["derived"]
        assert doc["explanations"][0]["target"] == "sentence(gabriel)=prison"
        assert len(doc["explanations"][0]["alternatives"]) == 2

    def test_dot_format(self, capsys):
        assert lppf_main(["solve", SENTENCES, "--format", "dot",
                          "--explain", "sentence(gabriel)=prison"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("digraph explanations {")
        assert out.count("->") == 5

    def test_explain_all(self, capsys):
        assert lppf_main(["solve", SENTENCES, "--explain-all"]) == 0
        out = capsys.readouterr().out
        assert "3 ocurrences explained." in out

    def test_ground_dump_reparses(self, capsys):
        from lppf.parse import parse

        assert lppf_main(["ground", SENTENCES]) == 0
        dumped = capsys.readouterr().out
        program = parse(dumped)
        assert len(program.rules) >= 12


class TestLiverlpRun:
    @pytest.fixture
    def dataset(self, tmp_path):
        path = tmp_path / "cases.csv"
        assert liverlp_main(["synth", "--n", "76", "--seed", "42",
                             "--out", str(path)]) == 0
        return path

    def test_batch_output(self, dataset, capsys, tmp_path):
        code = liverlp_main(["run", "--classifier", "soft-fragment",
                             "--records", str(dataset),
                             "--data-root", str(tmp_path / "d")])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("Answer:1\n\n")
        assert CASE_686_GOLDEN in out
        assert CASE_763_GOLDEN in out
        assert "76 ocurrences explained." in out
        assert out.endswith("1 solution\n")

    def test_single_case(self, dataset, capsys, tmp_path):
        code = liverlp_main(["run", "--classifier", "soft-fragment",
                             "--records", str(dataset), "--case", "686",
                             "--data-root", str(tmp_path / "d")])
        assert code == 0
        out = capsys.readouterr().out
        assert CASE_686_GOLDEN in out
        assert "763" not in out
        assert "1 ocurrences explained." in out

    def test_default_mode_shows_raw_derivations(self, dataset, capsys, tmp_path):
        code = liverlp_main(["run", "--classifier", "soft-fragment",
                             "--records", str(dataset), "--case", "763",
                             "--mode", "default",
                             "--data-root", str(tmp_path / "d")])
        assert code == 0
        out = capsys.readouterr().out
        assert "*risk(763) = high_moderate" in out
        assert "soft_cal(763) = 22" in out

    def test_classifier_from_file(self, dataset, capsys, tmp_path):
        from liverlp.classifier import builtin_classifier, to_document

        path = tmp_path / "clf.json"
        path.write_text(json.dumps(to_document(builtin_classifier())),
                        encoding="utf-8")
        code = liverlp_main(["run", "--classifier", str(path),
                             "--records", str(dataset), "--case", "763",
                             "--data-root", str(tmp_path / "d")])
        assert code == 0
        assert CASE_763_GOLDEN in capsys.readouterr().out

    def test_report_file_is_self_contained(self, dataset, capsys, tmp_path):
        report = tmp_path / "out.html"
        code = liverlp_main(["run", "--classifier", "soft-fragment",
                             "--records", str(dataset),
                             "--report", str(report),
                             "--data-root", str(tmp_path / "d")])
        assert code == 0
        html = report.read_text(encoding="utf-8")
        assert html.startswith("<!DOCTYPE html>")
        for marker in ('src="http', 'href="http', "url(", "@import", "<script src"):
            assert marker not in html

    def test_invalid_classifier_file_exit_2(self, dataset, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "schema_version": "v1", "id": "bad", "name": "bad",
            "rules": [{"id": "r", "label": "r", "value": 1, "phase": "soft",
                       "conditions": [{"attribute": "nope", "comparator": ">",
                                       "operand": 1}]}],
            "bands": [{"name": "low", "min": 0, "max": None}],
        }), encoding="utf-8")
        code = liverlp_main(["run", "--classifier", str(bad),
                             "--records", str(dataset),
                             "--data-root", str(tmp_path / "d")])
        assert code == 2
        assert "finding" in capsys.readouterr().err

    def test_unknown_case_exit_2(self, dataset, capsys, tmp_path):
        code = liverlp_main(["run", "--classifier", "soft-fragment",
                             "--records", str(dataset), "--case", "31337",
                             "--data-root", str(tmp_path / "d")])
        assert code == 2


class TestLiverlpSynth:
    def test_deterministic_files(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert liverlp_main(["synth", "--n", "76", "--seed", "42", "--out", str(a)]) == 0
        assert liverlp_main(["synth", "--n", "76", "--seed", "42", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_zero_cases_header_only(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        assert liverlp_main(["synth", "--n", "0", "--seed", "1", "--out", str(path)]) == 0
        lines = path.read_text(encoding="utf-8").strip().splitlines()
        assert len(lines) == 1
        assert lines[0].startswith("case_id,")

    def test_output_loads_back_clean(self, tmp_path, capsys):
        from liverlp.records import load_csv

        path = tmp_path / "x.csv"
        assert liverlp_main(["synth", "--n", "10", "--seed", "3", "--out", str(path)]) == 0
        assert len(load_csv(path)) == 10

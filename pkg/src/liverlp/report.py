"""Self-contained HTML report for a run: score table, per-case explanation
trees and derivation graphs, filterable through query parameters.

The document inlines all styling and uses plain <details> elements and a GET
form, so it renders without scripts and fetches nothing."""

from __future__ import annotations

import html
from typing import List, Optional

_STYLE = """
body { font-family: system-ui, sans-serif; margin: 1.5rem; color: #182026; }
h1 { font-size: 1.3rem; } h2 { font-size: 1.05rem; margin-top: 1.6rem; }
table.scores { border-collapse: collapse; margin: 1rem 0; }
table.scores th, table.scores td { border: 1px solid #c5cdd4; padding: .3rem .7rem; }
table.scores th { background: #eef2f5; text-align: left; }
tr.risk-low td.risk { color: #1a7f37; }
tr.risk-high_moderate td.risk, tr.risk-high td.risk, tr.risk-futile td.risk { color: #b35900; }
ul.tree { list-style: none; border-left: 1px dotted #9aa5ad; margin: .2rem 0 .2rem .6rem; padding-left: 1rem; }
ul.tree > li { margin: .15rem 0; }
.case { border: 1px solid #d7dde2; border-radius: 6px; padding: .6rem 1rem; margin: .8rem 0; }
.failed { border-color: #d43b3b; background: #fff5f5; }
.weight { color: #5b6770; }
form.filters { background: #f4f7f9; padding: .6rem 1rem; border-radius: 6px; }
form.filters label { margin-right: 1rem; }
svg.graph { background: #fbfcfd; border: 1px solid #e2e8ec; margin-top: .5rem; }
"""


def _esc(text) -> str:
    return html.escape(str(text), quote=True)


def _tree_html(node: dict) -> str:
    label = _esc(node["display"]).replace("\t", '&nbsp;<span class="weight">') \
        + ("</span>" if "\t" in node["display"] else "")
    if not node["children"]:
        return f"<li>{label}</li>"
    kids = "".join(_tree_html(c) for c in node["children"])
    return f'<li>{label}<ul class="tree">{kids}</ul></li>'


def _graph_svg(node: dict) -> str:
    """A small layered derivation graph: one box per node, parent left of
    children, drawn with plain SVG."""
    boxes: List[dict] = []
    edges: List[tuple] = []
    next_row = [0]

    def place(n: dict, depth: int) -> int:
        idx = len(boxes)
        boxes.append({"label": n["display"].replace("\t", " "), "depth": depth, "row": 0})
        child_rows = [place(c, depth + 1) for c in n["children"]]
        for c in child_rows:
            edges.append((idx, c))
        if child_rows:
            boxes[idx]["row"] = (boxes[child_rows[0]]["row"]
                                 + boxes[child_rows[-1]]["row"]) / 2
        else:
            boxes[idx]["row"] = next_row[0]
            next_row[0] += 1
        return idx

    place(node, 0)
    col_w, row_h, box_h = 260, 34, 24
    width = (max(b["depth"] for b in boxes) + 1) * col_w + 20
    height = max(next_row[0], 1) * row_h + 16
    parts = [f'<svg class="graph" width="{width}" height="{height}" '
             f'xmlns="http://www.w3.org/2000/svg">']
    for a, b in edges:
        x1 = boxes[a]["depth"] * col_w + 10 + 230
        y1 = boxes[a]["row"] * row_h + 10 + box_h / 2
        x2 = boxes[b]["depth"] * col_w + 10
        y2 = boxes[b]["row"] * row_h + 10 + box_h / 2
        parts.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                     f'stroke="#8a97a0" />')
    for b in boxes:
        x = b["depth"] * col_w + 10
        y = b["row"] * row_h + 10
        label = _esc(b["label"][:38])
        parts.append(
            f'<rect x="{x}" y="{y}" width="230" height="{box_h}" rx="4" '
            f'fill="#ffffff" stroke="#5b6770" />'
            f'<text x="{x + 6}" y="{y + 16}" font-size="11">{label}</text>')
    parts.append("</svg>")
    return "".join(parts)


def _matches(score: dict, explanations: list, risk: Optional[str],
             min_score: Optional[int], max_score: Optional[int],
             rule: Optional[str]) -> bool:
    if risk and score["risk"] != risk:
        return False
    if min_score is not None and score["soft_score"] < min_score:
        return False
    if max_score is not None and score["soft_score"] > max_score:
        return False
    if rule and not any(a["rule_id"] == rule for a in score["activated"]):
        return False
    return True


def render_report(run_doc: dict, *, risk: Optional[str] = None,
                  min_score: Optional[int] = None,
                  max_score: Optional[int] = None,
                  rule: Optional[str] = None) -> str:
    scores = run_doc.get("scores", [])
    explanations = run_doc.get("explanations", {})
    failures = run_doc.get("failures", [])
    bands = sorted({s["risk"] for s in scores})

    shown = [s for s in scores
             if _matches(s, explanations, risk, min_score, max_score, rule)]

    rows = []
    for s in shown:
        activated = ", ".join(f'{a["rule_id"]} [{a["weight"]}]' for a in s["activated"])
        rows.append(
            f'<tr class="risk-{_esc(s["risk"])}"><td>{s["case_id"]}</td>'
            f'<td>{s["psoft_score"]}</td><td>{s["soft_score"]}</td>'
            f'<td class="risk">{_esc(s["risk"])}</td><td>{_esc(activated)}</td></tr>')

    cases = []
    for s in shown:
        case_sets = explanations.get(str(s["case_id"]), [])
        body = []
        for expl in case_sets:
            for alt in expl["alternatives"]:
                body.append(f'<ul class="tree">{_tree_html(alt)}</ul>')
                body.append(_graph_svg(alt))
        cases.append(
            f'<details class="case"><summary>Case {s["case_id"]} — '
            f'{_esc(s["risk"])}, SOFT {s["soft_score"]}</summary>'
            + "".join(body) + "</details>")
    for f in failures:
        cases.append(f'<div class="case failed">Case {f["case_id"]} failed: '
                     f'{_esc(f["error"])}</div>')

    band_options = "".join(
        f'<option value="{_esc(b)}"{" selected" if b == risk else ""}>{_esc(b)}</option>'
        for b in bands)
    doc = f"""<!DOCTYPE html>
<html lang="en"><head><meta charset="utf-8">
<title>Run {_esc(run_doc.get("run_id", ""))}</title>
<style>{_STYLE}</style></head>
<body>
<h1>Run {_esc(run_doc.get("run_id", ""))}</h1>
<p>classifier <strong>{_esc(run_doc.get("classifier_id"))}</strong>
 v{_esc(run_doc.get("classifier_version"))} over dataset
 <strong>{_esc(run_doc.get("dataset_id"))}</strong> — {len(scores)} cases
 ({len(shown)} shown), {len(failures)} failed.</p>
<form class="filters" method="get">
<label>risk <select name="risk"><option value=""></option>{band_options}</select></label>
<label>score ≥ <input type="number" name="min_score" size="4"
 value="{min_score if min_score is not None else ""}"></label>
<label>score ≤ <input type="number" name="max_score" size="4"
 value="{max_score if max_score is not None else ""}"></label>
<label>activated rule <input type="text" name="rule" value="{_esc(rule or "")}"></label>
<button type="submit">filter</button>
</form>
<h2>Scores</h2>
<table class="scores">
<tr><th>case</th><th>psoft</th><th>soft</th><th>risk</th><th>activated</th></tr>
{"".join(rows)}
</table>
<h2>Explanations</h2>
{"".join(cases)}
</body></html>
"""
    return doc

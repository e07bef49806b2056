"""liverlp command line: batch scoring, synthetic datasets, the web service.

Exit codes: 0 success, 1 inconsistent cases, 2 input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from lppf.errors import LppfError, ParseFailure
from lppf.explain import render_text, tree_document

from .classifier import (
    builtin_classifier,
    from_document,
    load_classifier,
    score_cases,
    to_document,
    validate,
)
from .records import load_csv, save_csv, synthesize
from .report import render_report
from .schema import canonical_schema, load_schema
from .store import Store


def _load_classifier_arg(ref: str, data_root: str):
    path = Path(ref)
    if path.exists():
        return load_classifier(path)
    store = Store(data_root)
    doc = store.read("classifiers", ref)
    if doc is not None:
        return from_document(doc)
    if ref == "soft-fragment":
        return builtin_classifier()
    raise FileNotFoundError(f"classifier {ref!r}: no such file or stored id")


def cmd_run(args) -> int:
    schema = load_schema(args.schema) if args.schema else canonical_schema()
    classifier = _load_classifier_arg(args.classifier, args.data_root)
    findings = validate(classifier, schema)
    if findings:
        for f in findings:
            print(f"finding: {f.message}", file=sys.stderr)
        return 2
    records = load_csv(args.records, schema)
    if args.case is not None:
        records = [r for r in records if r.case_id == args.case]
        if not records:
            print(f"case {args.case} not found in {args.records}", file=sys.stderr)
            return 2
    results = score_cases(classifier, records, mode=args.mode, strict=False)

    sets = [s for r in results for s in r.explanations]
    print("Answer:1\n")
    print(render_text(sets, solutions=1), end="")

    failed = [r for r in results if r.error]
    if args.report:
        doc = {
            "run_id": "cli",
            "classifier_id": classifier.id,
            "classifier_version": classifier.version,
            "dataset_id": str(args.records),
            "scores": [r.score.to_document() for r in results if r.score],
            "explanations": {str(r.case_id): tree_document(r.explanations)
                             for r in results if r.score},
            "failures": [{"case_id": r.case_id, "error": r.error} for r in failed],
        }
        Path(args.report).write_text(render_report(doc), encoding="utf-8")
    if failed:
        for r in failed:
            print(f"case {r.case_id} failed: {r.error}", file=sys.stderr)
        return 1
    return 0


def cmd_synth(args) -> int:
    schema = load_schema(args.schema) if args.schema else canonical_schema()
    records = synthesize(args.n, args.seed, schema)
    save_csv(records, args.out, schema)
    print(f"wrote {len(records)} cases to {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data_root, args.static)
    host = args.host or os.environ.get("LIVERLP_HOST", "127.0.0.1")
    port = args.port or int(os.environ.get("LIVERLP_PORT", "8080"))
    uvicorn.run(app, host=host, port=port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liverlp",
        description="Donor-patient matching workbench over the lppf interpreter")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data-root",
                        default=os.environ.get("LIVERLP_DATA_ROOT", "liverlp-data"),
                        help="store directory (default: $LIVERLP_DATA_ROOT or ./liverlp-data)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", parents=[common],
                           help="score a record file with a classifier")
    p_run.add_argument("--classifier", required=True,
                       help="classifier JSON file or stored id (e.g. soft-fragment)")
    p_run.add_argument("--records", required=True, help="CSV record file")
    p_run.add_argument("--schema", help="schema JSON file (default: built-in)")
    p_run.add_argument("--report", help="also write a self-contained HTML report")
    p_run.add_argument("--case", type=int, help="restrict to one case id")
    p_run.add_argument("--mode", choices=["default", "labeled"], default="labeled")
    p_run.set_defaults(func=cmd_run)

    p_synth = sub.add_parser("synth", parents=[common],
                             help="write a deterministic synthetic dataset")
    p_synth.add_argument("--n", type=int, required=True)
    p_synth.add_argument("--seed", type=int, required=True)
    p_synth.add_argument("--out", required=True)
    p_synth.add_argument("--schema")
    p_synth.set_defaults(func=cmd_synth)

    p_serve = sub.add_parser("serve", parents=[common], help="start the web service")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--static", help="directory with built UI assets")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseFailure as failure:
        for err in failure.errors:
            print(str(err), file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as err:
        print(str(err), file=sys.stderr)
        return 2
    except LppfError as err:
        print(str(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

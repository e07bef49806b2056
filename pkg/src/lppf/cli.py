"""lppf command line: solve programs, print answer sets and explanations.

Exit codes: 0 success, 1 inconsistency / no answer set, 2 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    ConstraintViolation,
    EvaluationError,
    GroundingError,
    Inconsistency,
    LppfError,
    NonStratifiedOverflow,
    ParseFailure,
)
from .explain import (
    auto_mode,
    explain,
    explain_selected,
    render_dot,
    render_text,
    tree_document,
)
from .ground import ground
from .parse import parse, parse_assignment
from .render import assignment_text, render
from .solve import answer_block, solve


def load_program(paths):
    from .syntax import Program

    program = Program()
    for path in paths:
        source = Path(path).read_text(encoding="utf-8")
        program = program.merged(parse(source, origin=str(path)))
    return program


def _explanation_sets(result, args):
    """Explanation sets per flags, or None when none were requested."""
    mode = args.mode or auto_mode(result.ground)
    if args.explain:
        return [explain(parse_assignment(q), result, mode) for q in args.explain]
    if args.explain_all:
        aset = result.answer_sets[0]
        idx = result.ground.symbol_index
        targets = [(t, v) for t, v in aset.assignments(idx) if aset.is_derived(t)]
        return [explain(t, result, mode) for t in targets]
    if result.ground.explains:
        return explain_selected(result, mode)
    return None


def cmd_solve(args) -> int:
    program = load_program(args.files)
    gp = ground(program, narrow=not args.no_narrow, prune=not args.no_prune)
    result = solve(gp)
    if not result.answer_sets:
        print("no answer sets", file=sys.stderr)
        return 1
    sets = _explanation_sets(result, args)
    if args.format == "json":
        print(json.dumps(_json_document(result, sets), indent=2))
        return 0
    if args.format == "dot":
        print(render_dot(sets or []), end="")
        return 0
    out = answer_block(result)
    if sets is not None:
        out += "\n" + render_text(sets, solutions=len(result.answer_sets))
    print(out, end="")
    return 0


def _json_document(result, sets):
    from .render import term_text

    answers = []
    idx = result.ground.symbol_index
    for aset in result.answer_sets:
        answers.append({
            "assignments": {
                term_text(t): term_text(v) for t, v in aset.assignments(idx)
            },
            "derived": [
                assignment_text(t, v, compact=True)
                for t, v in aset.assignments(idx) if aset.is_derived(t)
            ],
        })
    doc = {"answers": answers}
    if sets is not None:
        doc["explanations"] = tree_document(sets)
    return doc


def cmd_ground(args) -> int:
    program = load_program(args.files)
    gp = ground(program, narrow=not args.no_narrow, prune=not args.no_prune)
    print(render(gp.as_program()), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lppf",
        description="Interpreter for logic programs with partial functions")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute answer sets and explanations")
    p_solve.add_argument("files", nargs="+", help="program files, merged in order")
    p_solve.add_argument("--explain", action="append", metavar="ATOM",
                         help="explain one conclusion, e.g. 'sentence(gabriel)=prison'")
    p_solve.add_argument("--explain-all", action="store_true",
                         help="explain every derived conclusion")
    p_solve.add_argument("--mode", choices=["default", "labeled"],
                         help="explanation mode (default: labeled when the "
                              "program has labels)")
    p_solve.add_argument("--format", choices=["text", "json", "dot"], default="text")
    p_solve.add_argument("--no-narrow", action="store_true",
                         help="ground with the full cartesian product")
    p_solve.add_argument("--no-prune", action="store_true",
                         help="keep rules over underivable functions")
    p_solve.set_defaults(func=cmd_solve)

    p_ground = sub.add_parser("ground", help="dump the ground program")
    p_ground.add_argument("files", nargs="+")
    p_ground.add_argument("--no-narrow", action="store_true")
    p_ground.add_argument("--no-prune", action="store_true")
    p_ground.set_defaults(func=cmd_ground)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseFailure as failure:
        for err in failure.errors:
            print(str(err), file=sys.stderr)
        return 2
    except (Inconsistency, ConstraintViolation, NonStratifiedOverflow) as err:
        print(str(err), file=sys.stderr)
        return 1
    except (GroundingError, EvaluationError, LppfError) as err:
        print(str(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

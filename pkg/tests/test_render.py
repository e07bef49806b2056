import string

from hypothesis import given, settings, strategies as st

from lppf.parse import parse
from lppf.render import render, rule_text
from lppf.syntax import (
    AssertHead,
    AssignHead,
    Atom,
    BinaryOp,
    BodyLiteral,
    Comparison,
    DefaultHead,
    DenyHead,
    FunctionTerm,
    Integer,
    Program,
    Rule,
    Symbol,
    TermLabel,
    Text,
    TextLabel,
    Variable,
)


def test_single_fact_rendering():
    assert render(parse("drive(gabriel).")) == "drive(gabriel).\n"


def test_canonical_operator_spacing():
    src = '"donor age between 10 and 20" :: rule(P):=-2 :- donor_age(P)>=10, donor_age(P)<=20.'
    assert render(parse(src)) == src + "\n"


def test_term_label_round_trip():
    src = "r :: resist(P) :- held(P)."
    assert render(parse(src)).strip() == src


def test_expression_parentheses():
    assert render(parse("calc:=2+3*4-(10/5).")).strip() == "calc:=2+3*4-10/5."
    assert render(parse("calc:=(2+3)*4.")).strip() == "calc:=(2+3)*4."
    assert render(parse("calc:=2-(3-4).")).strip() == "calc:=2-(3-4)."


def test_corpus_round_trip(corpus_files):
    assert corpus_files, "corpus must not be empty"
    for path in corpus_files:
        source = path.read_text(encoding="utf-8")
        first = parse(source, origin=path.name)
        rendered = render(first)
        second = parse(rendered, origin=path.name + "#re")
        assert first == second, f"round-trip changed {path.name}"
        assert render(second) == rendered


# --- random-program round trip --------------------------------------------------

_symbols = st.sampled_from(["a", "b", "kind", "x1", "very_long_name"])
_functors = st.sampled_from(["p", "q", "f", "rule_of", "w2"])
_variables = st.sampled_from(["X", "Y", "Case"])
_texts = st.text(
    alphabet=string.ascii_letters + string.digits + " %\t\"\\_[]().,:-",
    max_size=18)


def _terms(allow_vars: bool):
    base = [st.builds(Symbol, _symbols), st.builds(Integer, st.integers(-40, 99)),
            st.builds(Text, _texts)]
    if allow_vars:
        base.append(st.builds(Variable, _variables))
    leaf = st.one_of(*base)
    return st.recursive(
        leaf,
        lambda inner: st.builds(
            FunctionTerm, _functors,
            st.tuples(inner) | st.tuples(inner, inner)),
        max_leaves=3)


def _exprs(allow_vars: bool):
    return st.recursive(
        _terms(allow_vars) | st.builds(FunctionTerm, _functors,
                                       st.tuples(_terms(allow_vars))),
        lambda inner: st.builds(BinaryOp, st.sampled_from("+-*/"), inner, inner),
        max_leaves=3)


@st.composite
def _rules(draw):
    n_vars = draw(st.integers(0, 2))
    variables = [Variable(n) for n in ["X", "Y"][:n_vars]]
    # binder atoms keep every rule safe by construction
    body = [BodyLiteral(Atom(FunctionTerm("dom", (v,)))) for v in variables]

    def scoped_expr():
        # expressions drawn over ground terms plus the rule's own variables
        expr = draw(_exprs(False))
        if variables and draw(st.booleans()):
            return FunctionTerm("val", (draw(st.sampled_from(variables)),))
        return expr

    for _ in range(draw(st.integers(0, 2))):
        if draw(st.booleans()):
            term = draw(_terms(False))
            atom_term = FunctionTerm("q", (term,))
            body.append(BodyLiteral(Atom(atom_term, draw(st.booleans())),
                                    draw(st.booleans())))
        else:
            body.append(BodyLiteral(
                Comparison(draw(st.sampled_from(["=", "!=", "<", "<=", ">", ">="])),
                           scoped_expr(), scoped_expr()),
                draw(st.booleans())))
    args = tuple(variables) or (draw(_terms(False)),)
    target = FunctionTerm(draw(_functors), args)
    kinds = ["assert", "deny", "assign", "default"] + (["none"] if body else [])
    kind = draw(st.sampled_from(kinds))
    if kind == "assert":
        head = AssertHead(target)
    elif kind == "deny":
        head = DenyHead(target)
    elif kind == "assign":
        head = AssignHead(target, scoped_expr())
    elif kind == "default":
        head = DefaultHead(target, scoped_expr())
    else:
        head = None
    label = draw(st.one_of(
        st.none(),
        st.builds(TextLabel, _texts),
        st.just(TermLabel(Symbol("tag")))))
    return Rule(head, tuple(body), label)


@given(st.lists(_rules(), max_size=6).map(lambda rs: Program(tuple(rs))))
@settings(max_examples=120, deadline=None)
def test_random_program_round_trip(program):
    rendered = render(program)
    reparsed = parse(rendered)
    assert reparsed == program
    assert render(reparsed) == rendered


def test_negative_integer_argument():
    assert rule_text(parse("delta(-3).").rules[0]) == "delta(-3)."

import pytest

from conftest import SENTENCES_DEFAULT
from lppf.errors import GroundingError
from lppf.ground import ground, interpolate_label, universe_of
from lppf.parse import parse
from lppf.render import render
from lppf.solve import solve
from lppf.syntax import (
    DefaultHead,
    FunctionTerm,
    Integer,
    Symbol,
    TermLabel,
    TextLabel,
    Variable,
)


def test_universe_of_sentences_program():
    names = {t.name if isinstance(t, Symbol) else t.value
             for t in universe_of(parse(SENTENCES_DEFAULT))}
    assert {"gabriel", "clare", "innocent", "prison", 0, 50, 60} <= names


def test_universe_of_empty_program():
    assert universe_of(parse("")) == ()


def test_universe_collects_head_values():
    terms = set(universe_of(parse("f(1):=2.")))
    assert terms == {Integer(1), Integer(2)}


def test_default_rule_grounds_to_two_instances():
    gp = ground(parse(SENTENCES_DEFAULT))
    defaults = [r for r in gp.rules if isinstance(r.head, DefaultHead)]
    assert len(defaults) == 2
    targets = {r.target for r in defaults}
    assert targets == {
        FunctionTerm("sentence", (Symbol("gabriel"),)),
        FunctionTerm("sentence", (Symbol("clare"),)),
    }


def test_already_ground_program_is_identity():
    source = "drive(gabriel).\npunish(gabriel) :- drive(gabriel).\n"
    gp = ground(parse(source))
    assert render(gp.as_program()) == source


def test_grounding_idempotent_on_corpus(corpus_files):
    for path in corpus_files:
        gp = ground(parse(path.read_text(encoding="utf-8"), origin=path.name))
        once = render(gp.as_program())
        twice = render(ground(parse(once)).as_program())
        assert once == twice, path.name


def test_label_directive_attaches_to_matching_ground_rules():
    src = SENTENCES_DEFAULT + "\n#label r :: resist(P).\n"
    gp = ground(parse(src))
    labelled = [r for r in gp.rules
                if r.target == FunctionTerm("resist", (Symbol("gabriel"),))
                and not isinstance(r.head, DefaultHead)]
    assert labelled and all(r.label == TermLabel(Symbol("r")) for r in labelled)


def test_label_directive_substitutes_pattern_variables():
    src = "held(gabriel).\n#label tag(P) :: held(P).\n"
    gp = ground(parse(src))
    (rule,) = gp.rules
    assert rule.label == TermLabel(FunctionTerm("tag", (Symbol("gabriel"),)))


def test_own_label_wins_over_directive():
    src = '"mine" :: held(gabriel).\n#label tag(P) :: held(P).\n'
    gp = ground(parse(src))
    assert gp.rules[0].label == TextLabel("mine")


def test_text_label_interpolation():
    sub = {Variable("P"): Symbol("gabriel"), Variable("N"): Integer(3)}
    assert interpolate_label("%P scored %N points", sub) == "gabriel scored 3 points"
    assert interpolate_label("%P is %risk(P) at %Q", sub) == "gabriel is %risk(gabriel) at %Q"
    assert interpolate_label("100%% sure about %P", sub) == "100%% sure about gabriel"


def test_narrowing_is_a_subset_of_the_naive_grounding():
    program = parse(SENTENCES_DEFAULT)
    narrowed = ground(program)
    naive = ground(program, narrow=False, prune=False)
    narrowed_texts = {r.text() for r in narrowed.rules}
    naive_texts = {r.text() for r in naive.rules}
    assert narrowed_texts <= naive_texts
    assert len(narrowed.rules) < len(naive.rules)


def test_narrowing_preserves_answer_sets(corpus_files):
    for path in corpus_files:
        program = parse(path.read_text(encoding="utf-8"), origin=path.name)
        fast = solve(ground(program)).answer_sets
        slow = solve(ground(program, narrow=False, prune=False)).answer_sets
        assert [a.valuation for a in fast] == [a.valuation for a in slow], path.name


def test_prune_drops_underivable_rules():
    gp = ground(parse("useful :- phantom(1).\nreal."), narrow=False, prune=True)
    assert all(r.target != FunctionTerm("useful") for r in gp.rules)
    assert any("pruned" in d for d in gp.diagnostics)
    kept = ground(parse("useful :- phantom(1).\nreal."), narrow=False, prune=False)
    assert any(r.target == FunctionTerm("useful") for r in kept.rules)


def test_grounding_cap_names_the_largest_rule():
    atoms = "\n".join(f"dom({i})." for i in range(40))
    src = atoms + "\nbig(A,B,C,D) :- dom(A), dom(B), dom(C), dom(D).\n"
    with pytest.raises(GroundingError) as exc:
        ground(parse(src), cap=10_000)
    assert "big(A,B,C,D)" in str(exc.value)


def test_aggregate_instances_are_narrowed():
    src = ("case(c1). dom(a). dom(b).\n"
           "w(c1,a):=1.\n"
           "total(P):=#sum{ w(P,C) : dom(C) } :- case(P).\n")
    gp = ground(parse(src))
    (agg,) = [r for r in gp.rules if r.aggregate_instances is not None]
    # w(c1,b) can never be defined, so its instance contributes nothing
    # and narrowing drops it without changing the sum
    templates = {t for t, _ in agg.aggregate_instances}
    assert templates == {FunctionTerm("w", (Symbol("c1"), Symbol("a")))}
    total = FunctionTerm("total", (Symbol("c1"),))
    fast = solve(gp).answer_sets[0].valuation[total]
    slow = solve(ground(parse(src), narrow=False, prune=False)) \
        .answer_sets[0].valuation[total]
    assert fast == slow == Integer(1)


def test_explain_directive_grounding():
    gp = ground(parse("p(a). p(b).\n#explain p(X) :- p(X)."))
    targets = {ge.target for ge in gp.explains}
    assert targets == {
        FunctionTerm("p", (Symbol("a"),)),
        FunctionTerm("p", (Symbol("b"),)),
    }

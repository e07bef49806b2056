import pytest

from conftest import ANSWER_BLOCK_GOLDEN, SENTENCES_DEFAULT
from lppf import run
from lppf.errors import (
    ConstraintViolation,
    EvaluationError,
    ExplicitContradiction,
    Inconsistency,
    NonStratifiedOverflow,
)
from lppf.ground import ground
from lppf.parse import parse
from lppf.solve import answer_block, check_stable, evaluate, literal_satisfied, solve
from lppf.syntax import (
    Atom,
    BodyLiteral,
    Comparison,
    FALSE,
    FunctionTerm,
    Integer,
    Symbol,
    TRUE,
)

GABRIEL = FunctionTerm("punish", (Symbol("gabriel"),))


def fterm(functor, *args):
    conv = tuple(Integer(a) if isinstance(a, int) else Symbol(a) for a in args)
    return FunctionTerm(functor, conv)


class TestSentencesProgram:
    def test_unique_answer_set(self, gabriel_result):
        assert len(gabriel_result.answer_sets) == 1

    def test_conclusions(self, gabriel_result):
        v = gabriel_result.answer_sets[0].valuation
        assert v[fterm("punish", "gabriel")] == TRUE
        assert v[fterm("sentence", "gabriel")] == Symbol("prison")
        assert v[fterm("sentence", "clare")] == Symbol("innocent")
        assert fterm("punish", "clare") not in v  # neither punished nor cleared

    def test_input_facts_are_in_the_valuation(self, gabriel_result):
        v = gabriel_result.answer_sets[0].valuation
        assert v[fterm("alcohol", "gabriel")] == Integer(60)
        assert v[fterm("resist", "clare")] == FALSE

    def test_answer_block_byte_exact(self, gabriel_result):
        assert answer_block(gabriel_result) == ANSWER_BLOCK_GOLDEN

    def test_gabriel_valuation_is_stable(self, gabriel_result):
        gp = gabriel_result.ground
        assert check_stable(gp, gabriel_result.answer_sets[0].valuation)


def test_empty_program_has_one_empty_answer_set():
    result = run("")
    assert len(result.answer_sets) == 1
    assert result.answer_sets[0].valuation == {}


def test_even_loop_has_two_answer_sets():
    result = run("a :- not b. b :- not a.")
    models = [a.valuation for a in result.answer_sets]
    assert models == [{fterm("a"): TRUE}, {fterm("b"): TRUE}]


def test_odd_loop_has_no_answer_sets():
    result = run("a :- not a.")
    assert result.answer_sets == []


def test_functionality_violation_reports_both_derivations():
    with pytest.raises(Inconsistency) as exc:
        run("f(1):=2. f(1):=3.")
    message = str(exc.value)
    assert "f(1):=2." in message and "f(1):=3." in message


def test_explicit_contradiction():
    with pytest.raises(ExplicitContradiction):
        run("p. ~p.")


def test_constraint_violation_names_the_constraint():
    with pytest.raises(ConstraintViolation) as exc:
        run("p. :- p.")
    assert ":- p." in str(exc.value)


def test_constraint_with_negation_holds():
    result = run("p. :- not p.")
    assert result.answer_sets[0].valuation[fterm("p")] == TRUE


class TestEvaluate:
    def test_satisfied_comparison(self):
        val = {fterm("alcohol", "gabriel"): Integer(60)}
        lit = BodyLiteral(Comparison(">", fterm("alcohol", "gabriel"), Integer(50)))
        assert literal_satisfied(lit, val)

    def test_undefined_function_fails_quietly(self):
        lit = BodyLiteral(Comparison(">", fterm("alcohol", "zoe"), Integer(50)))
        assert not literal_satisfied(lit, {})
        assert not literal_satisfied(
            BodyLiteral(Atom(fterm("alcohol", "zoe"))), {})

    def test_nested_evaluation(self):
        val = {fterm("g", 1): Integer(2), fterm("h", 2): Integer(7)}
        assert evaluate(FunctionTerm("h", (fterm("g", 1),)), val) == Integer(7)

    def test_nested_partiality(self):
        assert evaluate(FunctionTerm("h", (fterm("g", 1),)), {}) is None

    def test_division_by_zero(self):
        with pytest.raises(EvaluationError):
            run("bad:=1/0.")

    def test_division_truncates_toward_zero(self):
        result = run("q:=-7/2.")
        assert result.answer_sets[0].valuation[fterm("q")] == Integer(-3)

    def test_equality_across_types_is_false_not_an_error(self):
        result = run("f(1):=sym. ok :- f(1)!=3.")
        assert result.answer_sets[0].valuation[fterm("ok")] == TRUE


class TestDefaults:
    def test_default_applies_when_nothing_overrides(self):
        result = run("mode ^= idle.")
        assert result.answer_sets[0].valuation[fterm("mode")] == Symbol("idle")

    def test_explicit_assignment_overrides_default(self):
        result = run("mode ^= idle. mode := busy :- task. task.")
        assert result.answer_sets[0].valuation[fterm("mode")] == Symbol("busy")

    def test_removing_the_default_does_not_change_an_overridden_value(self):
        with_default = run("mode ^= idle. mode := busy :- task. task.")
        without = run("mode := busy :- task. task.")
        key = fterm("mode")
        assert with_default.answer_sets[0].valuation[key] == \
            without.answer_sets[0].valuation[key]

    def test_agreeing_default_supports_the_same_value(self):
        result = run("mode ^= busy. mode := busy.")
        aset = result.answer_sets[0]
        assert aset.valuation[fterm("mode")] == Symbol("busy")
        assert len(aset.supports[fterm("mode")]) == 2

    def test_competing_defaults_enumerate(self):
        result = run("f(1) ^= 1. f(1) ^= 2.")
        models = sorted(a.valuation[fterm("f", 1)].value for a in result.answer_sets)
        assert models == [1, 2]

    def test_chained_defaults(self):
        result = run(SENTENCES_DEFAULT)
        assert result.answer_sets[0].valuation[fterm("sentence", "clare")] == \
            Symbol("innocent")


class TestAggregates:
    def test_sum_over_defined_instances(self):
        result = run("case(c). dom(a). dom(b). dom(z).\n"
                     "w(c,a):=3. w(c,b):=-1.\n"
                     "total(P):=#sum{ w(P,C) : dom(C) } :- case(P).")
        assert result.answer_sets[0].valuation[fterm("total", "c")] == Integer(2)

    def test_empty_selection_sums_to_zero(self):
        result = run("case(c). total(P):=#sum{ w(P,C) : dom(C) } :- case(P).")
        assert result.answer_sets[0].valuation[fterm("total", "c")] == Integer(0)

    def test_aggregate_sees_defaults_below_it(self):
        result = run("case(c). dom(a).\n"
                     "w(c,a) ^= 5.\n"
                     "total(P):=#sum{ w(P,C) : dom(C) } :- case(P).")
        assert result.answer_sets[0].valuation[fterm("total", "c")] == Integer(5)

    def test_non_integer_contribution_is_an_error(self):
        with pytest.raises(EvaluationError):
            run("case(c). dom(a). w(c,a):=oops.\n"
                "total(P):=#sum{ w(P,C) : dom(C) } :- case(P).")


class TestCheckStable:
    def test_examples(self):
        gp = ground(parse("a :- not b. b :- not a."))
        assert check_stable(gp, {fterm("a"): TRUE})
        assert not check_stable(gp, {fterm("a"): TRUE, fterm("b"): TRUE})
        assert check_stable(ground(parse("")), {})

    def test_unsupported_candidate_rejected(self):
        gp = ground(parse("p :- q."))
        assert not check_stable(gp, {fterm("p"): TRUE})

    def test_constraint_rejects_candidate(self):
        gp = ground(parse("p :- not q. :- p."))
        assert not check_stable(gp, {fterm("p"): TRUE})


def test_monotone_facts_on_stratified_programs():
    base = run(SENTENCES_DEFAULT).answer_sets[0].valuation
    extended = run(SENTENCES_DEFAULT + "\nnewfact(7).\n").answer_sets[0].valuation
    assert extended[fterm("newfact", 7)] == TRUE
    for term, value in base.items():
        assert extended[term] == value


def test_support_soundness_on_corpus(corpus_files):
    from lppf.solve import body_satisfied, head_value

    for path in corpus_files:
        program = parse(path.read_text(encoding="utf-8"), origin=path.name)
        result = solve(ground(program))
        for aset in result.answer_sets:
            assert set(aset.supports) == set(aset.valuation), path.name
            for term, supports in aset.supports.items():
                assert supports, f"{path.name}: {term} unsupported"
                for support in supports:
                    assert body_satisfied(support.rule, aset.valuation)
                    got = head_value(support.rule, aset.valuation)
                    assert got is not None and got[0] == term
                    assert got[1] == aset.valuation[term]
                    for wt, wv in support.witnesses:
                        assert aset.valuation[wt] == wv


def test_functionality_invariant_on_corpus(corpus_files):
    for path in corpus_files:
        program = parse(path.read_text(encoding="utf-8"), origin=path.name)
        for aset in solve(ground(program)).answer_sets:
            seen = {}
            for term, value in aset.valuation.items():
                assert seen.setdefault(term, value) == value


def test_non_stratified_overflow():
    lines = [f"a{i} :- not b{i}. b{i} :- not a{i}." for i in range(25)]
    with pytest.raises(NonStratifiedOverflow):
        run("\n".join(lines))


def test_answer_block_for_multiple_answer_sets():
    result = run("a :- not b. b :- not a.")
    assert answer_block(result) == "Answer:1\na.\n\nAnswer:2\nb.\n"


def test_parallel_solves_share_nothing():
    from concurrent.futures import ThreadPoolExecutor

    from lppf.parse import parse

    program = parse(SENTENCES_DEFAULT)

    def one_solve(_):
        from lppf.ground import ground as ground_fn

        return answer_block(solve(ground_fn(program)))

    with ThreadPoolExecutor(max_workers=8) as pool:
        blocks = list(pool.map(one_solve, range(32)))
    assert len(set(blocks)) == 1
    assert blocks[0] == ANSWER_BLOCK_GOLDEN


def test_deterministic_resolve(gabriel_result):
    again = run(SENTENCES_DEFAULT, origin="sentences_default.lppf")
    assert answer_block(again) == answer_block(gabriel_result)
    a, b = again.answer_sets[0], gabriel_result.answer_sets[0]
    assert list(a.valuation.items()) == list(b.valuation.items())

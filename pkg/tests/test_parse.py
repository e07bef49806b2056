import pytest

from lppf.errors import ParseFailure
from lppf.parse import parse, parse_assignment
from lppf.render import render
from lppf.syntax import (
    AssertHead,
    AssignHead,
    Atom,
    BodyLiteral,
    Comparison,
    DefaultHead,
    DenyHead,
    ExplainDirective,
    FunctionTerm,
    Integer,
    LabelDirective,
    Symbol,
    TermLabel,
    TextLabel,
    Variable,
)

P = Variable("P")


def test_punish_rule_structure():
    program = parse("punish(P) :- drive(P), alcohol(P)>50.")
    (rule,) = program.rules
    assert rule.head == AssertHead(FunctionTerm("punish", (P,)))
    assert rule.body == (
        BodyLiteral(Atom(FunctionTerm("drive", (P,)))),
        BodyLiteral(Comparison(">", FunctionTerm("alcohol", (P,)), Integer(50))),
    )


def test_empty_source():
    program = parse("")
    assert program.rules == ()
    assert program.directives == ()


def test_default_head():
    program = parse("sentence(P) ^= innocent :- person(P).")
    (rule,) = program.rules
    assert rule.head == DefaultHead(FunctionTerm("sentence", (P,)), Symbol("innocent"))


def test_codegen_line_with_label():
    src = '"donor age between 10 and 20" :: rule(P):=-2 :- donor_age(P)>=10, donor_age(P)<=20.'
    (rule,) = parse(src).rules
    assert rule.label == TextLabel("donor age between 10 and 20")
    assert rule.head == AssignHead(FunctionTerm("rule", (P,)), Integer(-2))
    assert len(rule.body) == 2


def test_unsafe_rule_names_variable():
    with pytest.raises(ParseFailure) as exc:
        parse("f(X) :- g(Y).")
    assert any("X" in e.message and "unsafe" in e.message for e in exc.value.errors)


def test_bare_string_line_labels_next_rule():
    src = '"%P was flagged"\nflag(P) :- seen(P).\nseen(a).'
    program = parse(src)
    assert program.rules[0].label == TextLabel("%P was flagged")
    # both layouts normalize to the same structure
    explicit = parse('"%P was flagged" :: flag(P) :- seen(P).\nseen(a).')
    assert program.rules == explicit.rules


def test_term_label():
    (rule,) = parse("r :: resist(P) :- held(P).").rules
    assert rule.label == TermLabel(Symbol("r"))


def test_explicit_negation_head_and_body():
    program = parse("~resist(clare).\nok(P) :- ~resist(P).")
    assert program.rules[0].head == DenyHead(FunctionTerm("resist", (Symbol("clare"),)))
    lit = program.rules[1].body[0]
    assert isinstance(lit.payload, Atom) and lit.payload.negated


def test_default_negation_wraps_atoms_and_comparisons():
    (rule,) = parse("go :- not stop, not heat(1)>5, heat(1)=1.").rules
    assert rule.body[0].default_negated
    assert rule.body[1].default_negated
    assert isinstance(rule.body[1].payload, Comparison)
    assert not rule.body[2].default_negated


def test_directives():
    program = parse("#label r :: resist(P).\n#explain sentence(P) :- sentence(P)=prison.")
    label, explain = program.directives
    assert isinstance(label, LabelDirective)
    assert label.pattern == FunctionTerm("resist", (P,))
    assert isinstance(explain, ExplainDirective)
    assert explain.target == FunctionTerm("sentence", (P,))


def test_aggregate_head():
    (rule,) = parse("total(P):=#sum{ w(P,C) : dom(C) } :- case(P).").rules
    agg = rule.head.aggregate
    assert agg.template == FunctionTerm("w", (P, Variable("C")))
    assert len(agg.conditions) == 1


def test_aggregate_without_conditions():
    (rule,) = parse("total(P):=#sum{ w(P,C) } :- case(P).").rules
    assert rule.head.aggregate.conditions == ()


def test_aggregate_local_variable_safety():
    # C is bound by the template, D by a positive condition atom
    parse("total(P):=#sum{ w(P,C) : C>2, dom(D) } :- case(P).")
    # E occurs only bare in a comparison: unsafe
    with pytest.raises(ParseFailure) as exc:
        parse("total(P):=#sum{ w(P,C) : E>2 } :- case(P).")
    assert any("E" in e.message for e in exc.value.errors)


def test_comparison_function_arguments_bind():
    # the generated-code shape: the case variable only occurs inside
    # comparison function terms
    parse("rule(P):=-2 :- donor_age(P)>=10, donor_age(P)<=20.")
    with pytest.raises(ParseFailure) as exc:
        parse("f(X) :- X>5.")
    assert any("X" in e.message for e in exc.value.errors)


def test_integrity_constraint():
    (rule,) = parse(":- bad(X), bad(X).").rules
    assert rule.head is None


def test_comparison_operand_bare_symbol_is_constant():
    (rule,) = parse("ok(P) :- kind(P)=good.").rules
    comparison = rule.body[0].payload
    assert comparison.rhs == Symbol("good")


def test_nested_function_terms():
    (rule,) = parse("deep :- h(g(1))=7.").rules
    lhs = rule.body[0].payload.lhs
    assert lhs == FunctionTerm("h", (FunctionTerm("g", (Integer(1),)),))


def test_string_escapes():
    (rule,) = parse(r'msg:="a\tb\"c\\d".').rules
    assert rule.head.value.value == 'a\tb"c\\d'


def test_comments_ignored():
    program = parse("% a comment\nfact. % trailing\n% only comment line\n")
    assert len(program.rules) == 1


def test_error_positions_and_recovery():
    with pytest.raises(ParseFailure) as exc:
        parse("good.\nbad syntax here.\nalso(@).\nfine.", origin="test.lppf")
    errors = exc.value.errors
    assert len(errors) >= 2
    assert all(str(e).startswith("test.lppf:") for e in errors)
    lines = [e.line for e in errors]
    assert 2 in lines and 3 in lines


def test_label_directive_unbound_variable():
    with pytest.raises(ParseFailure) as exc:
        parse("#label tag(Q) :: resist(P).")
    assert any("Q" in e.message for e in exc.value.errors)


def test_parse_determinism(corpus_files):
    for path in corpus_files:
        source = path.read_text(encoding="utf-8")
        assert render(parse(source)) == render(parse(source))


def test_parse_assignment_queries():
    term, value = parse_assignment("sentence(gabriel)=prison")
    assert term == FunctionTerm("sentence", (Symbol("gabriel"),))
    assert value == Symbol("prison")
    term, value = parse_assignment("punish(gabriel)")
    assert value == Symbol("true")
    term, value = parse_assignment("~resist(clare)")
    assert value == Symbol("false")
    with pytest.raises(ParseFailure):
        parse_assignment("not a query(")

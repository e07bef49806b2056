"""Parser for the lppf text format.

Grammar sketch (statements end with ``.``; ``%`` starts a line comment):

    statement  := "#label" term "::" fterm "."
                | "#explain" fterm [":-" body] "."
                | [label] rule "."
    label      := STRING ["::"] | term "::"
    rule       := ":-" body | head [":-" body]
    head       := "~" fterm | fterm [(":="|"^=") value]
    value      := expr | "#sum" "{" fterm [":" body] "}"
    body       := literal ("," literal)*
    literal    := ["not"] ("~" fterm | expr [cmp expr])
    expr       := mul (("+"|"-") mul)* ; mul := unary (("*"|"/") unary)*
    unary      := "-" unary | INT | STRING | VAR | ident ["(" args ")"] | "(" expr ")"

Variables match [A-Z][A-Za-z0-9_]*, symbols [a-z][A-Za-z0-9_]*.  A quoted
string at statement start labels the following rule, with or without an
explicit ``::``.  Lowercase identifiers become function terms in head and
body-atom position and when applied to parentheses; bare lowercase
identifiers in expression position are symbols.

All statements are checked for safety at parse time: every variable must
occur inside a positive, non-default-negated body atom (comparisons do not
bind).  Errors carry line/column; parsing recovers at the next ``.`` so one
pass reports every diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import ParseError, ParseFailure
from .syntax import (
    AggregateHead,
    AssertHead,
    AssignHead,
    Atom,
    BinaryOp,
    BodyLiteral,
    Comparison,
    DefaultHead,
    DenyHead,
    ExplainDirective,
    Expression,
    FunctionTerm,
    Head,
    Integer,
    LabelDirective,
    Program,
    Rule,
    Span,
    SumAggregate,
    Symbol,
    Term,
    TermLabel,
    Text,
    TextLabel,
    Variable,
    head_variables,
    literal_variables,
    term_variables,
)

_PUNCT = [
    "::",
    ":-",
    ":=",
    "^=",
    "!=",
    "<=",
    ">=",
    "{",
    "}",
    "(",
    ")",
    ",",
    ".",
    ":",
    "=",
    "<",
    ">",
    "~",
    "+",
    "-",
    "*",
    "/",
]

_UNESCAPES = {"\\": "\\", '"': '"', "t": "\t", "n": "\n"}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT VAR INT STRING HASH PUNCT EOF
    value: str
    line: int
    col: int


def tokenize(source: str, origin: str) -> Tuple[List[Token], List[ParseError]]:
    tokens: List[Token] = []
    errors: List[ParseError] = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        c = source[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if c == "%":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if c == '"':
            i, col = i + 1, col + 1
            buf = []
            closed = False
            while i < n:
                ch = source[i]
                if ch == "\\" and i + 1 < n:
                    esc = source[i + 1]
                    buf.append(_UNESCAPES.get(esc, esc))
                    i, col = i + 2, col + 2
                elif ch == '"':
                    i, col = i + 1, col + 1
                    closed = True
                    break
                elif ch == "\n":
                    break
                else:
                    buf.append(ch)
                    i, col = i + 1, col + 1
            if not closed:
                errors.append(ParseError(origin, start_line, start_col, "unterminated string"))
            tokens.append(Token("STRING", "".join(buf), start_line, start_col))
            continue
        if c == "#":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            if word not in ("#label", "#explain", "#sum"):
                errors.append(ParseError(origin, line, col, f"unknown directive {word}"))
            tokens.append(Token("HASH", word, line, col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("INT", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            kind = "VAR" if word[0].isupper() else "IDENT"
            tokens.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if source.startswith(p, i):
                tokens.append(Token("PUNCT", p, line, col))
                i, col = i + len(p), col + len(p)
                break
        else:
            errors.append(ParseError(origin, line, col, f"bad character {c!r}"))
            i, col = i + 1, col + 1
    tokens.append(Token("EOF", "", line, col))
    return tokens, errors


class _Parser:
    def __init__(self, tokens: List[Token], origin: str):
        self.tokens = tokens
        self.origin = origin
        self.pos = 0
        self.errors: List[ParseError] = []

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    def accept(self, kind: str, value: Optional[str] = None) -> Optional[Token]:
        if self.at(kind, value):
            return self.next()
        return None

    def expect(self, kind: str, value: Optional[str] = None) -> Token:
        tok = self.peek()
        if not self.at(kind, value):
            want = value or kind.lower()
            raise _Abort(ParseError(self.origin, tok.line, tok.col,
                                    f"expected {want!r}, found {tok.value or tok.kind!r}"))
        return self.next()

    def span(self, tok: Token) -> Span:
        return Span(self.origin, tok.line, tok.col)

    # -- program -----------------------------------------------------------

    def program(self) -> Program:
        rules: List[Rule] = []
        directives: List = []
        while not self.at("EOF"):
            try:
                self.statement(rules, directives)
            except _Abort as abort:
                self.errors.append(abort.error)
                self.synchronize()
        return Program(tuple(rules), tuple(directives))

    def synchronize(self) -> None:
        while not self.at("EOF"):
            if self.next().value == ".":
                return

    def statement(self, rules: List[Rule], directives: List) -> None:
        start = self.peek()
        if self.at("HASH", "#label"):
            self.next()
            label = self.term()
            self.expect("PUNCT", "::")
            pattern = self.function_term_required()
            self.expect("PUNCT", ".")
            directives.append(LabelDirective(label, pattern, self.span(start)))
            self.check_label_directive(directives[-1])
            return
        if self.at("HASH", "#explain"):
            self.next()
            target = self.function_term_required()
            conditions: Tuple[BodyLiteral, ...] = ()
            if self.accept("PUNCT", ":-"):
                conditions = self.body()
            self.expect("PUNCT", ".")
            directives.append(ExplainDirective(target, conditions, self.span(start)))
            return
        label = self.optional_label()
        rule = self.rule(label, self.span(start))
        rules.append(rule)
        self.check_safety(rule)

    def optional_label(self):
        if self.at("STRING"):
            text = self.next().value
            self.accept("PUNCT", "::")  # "label" :: rule.  or bare-line form
            return TextLabel(text)
        # lookahead for a term label:  term :: rule.
        mark = self.pos
        try:
            term = self.term()
            if self.accept("PUNCT", "::"):
                return TermLabel(term)
        except _Abort:
            pass
        self.pos = mark
        return None

    # -- rules ---------------------------------------------------------------

    def rule(self, label, span: Span) -> Rule:
        if self.accept("PUNCT", ":-"):
            body = self.body()
            self.expect("PUNCT", ".")
            return Rule(None, body, label, span)
        head = self.head()
        body: Tuple[BodyLiteral, ...] = ()
        if self.accept("PUNCT", ":-"):
            body = self.body()
        self.expect("PUNCT", ".")
        return Rule(head, body, label, span)

    def head(self) -> Head:
        if self.accept("PUNCT", "~"):
            return DenyHead(self.function_term_required())
        target = self.function_term_required()
        if self.accept("PUNCT", ":="):
            if self.at("HASH", "#sum"):
                return AggregateHead(target, self.aggregate())
            return AssignHead(target, self.expression())
        if self.accept("PUNCT", "^="):
            return DefaultHead(target, self.expression())
        return AssertHead(target)

    def aggregate(self) -> SumAggregate:
        self.expect("HASH", "#sum")
        self.expect("PUNCT", "{")
        template = self.function_term_required()
        conditions: Tuple[BodyLiteral, ...] = ()
        if self.accept("PUNCT", ":"):
            conditions = self.body(stop_at_brace=True)
        self.expect("PUNCT", "}")
        return conditions and SumAggregate(template, conditions) or SumAggregate(template)

    def body(self, stop_at_brace: bool = False) -> Tuple[BodyLiteral, ...]:
        literals = [self.literal()]
        while self.accept("PUNCT", ","):
            literals.append(self.literal())
        if stop_at_brace and not self.at("PUNCT", "}"):
            tok = self.peek()
            raise _Abort(ParseError(self.origin, tok.line, tok.col,
                                    f"expected '}}', found {tok.value!r}"))
        return tuple(literals)

    def literal(self) -> BodyLiteral:
        negated = False
        if self.at("IDENT", "not"):
            self.next()
            negated = True
        if self.accept("PUNCT", "~"):
            return BodyLiteral(Atom(self.function_term_required(), True), negated)
        lhs = self.expression()
        for op in ("!=", "<=", ">=", "=", "<", ">"):
            if self.accept("PUNCT", op):
                return BodyLiteral(Comparison(op, lhs, self.expression()), negated)
        atom = self.coerce_atom(lhs)
        return BodyLiteral(Atom(atom), negated)

    def coerce_atom(self, expr: Expression) -> FunctionTerm:
        if isinstance(expr, FunctionTerm):
            return expr
        if isinstance(expr, Symbol):
            return FunctionTerm(expr.name)
        tok = self.peek()
        raise _Abort(ParseError(self.origin, tok.line, tok.col,
                                "expected an atom or comparison"))

    # -- terms and expressions ------------------------------------------------

    def function_term_required(self) -> FunctionTerm:
        tok = self.expect("IDENT")
        if self.accept("PUNCT", "("):
            args = self.term_args()
            return FunctionTerm(tok.value, args)
        return FunctionTerm(tok.value)

    def term_args(self) -> Tuple[Term, ...]:
        args = [self.term()]
        while self.accept("PUNCT", ","):
            args.append(self.term())
        self.expect("PUNCT", ")")
        return tuple(args)

    def term(self) -> Term:
        tok = self.peek()
        if self.accept("PUNCT", "-"):
            inner = self.expect("INT")
            return Integer(-int(inner.value))
        if tok.kind == "INT":
            self.next()
            return Integer(int(tok.value))
        if tok.kind == "STRING":
            self.next()
            return Text(tok.value)
        if tok.kind == "VAR":
            self.next()
            return Variable(tok.value)
        if tok.kind == "IDENT":
            self.next()
            if self.accept("PUNCT", "("):
                return FunctionTerm(tok.value, self.term_args())
            return Symbol(tok.value)
        raise _Abort(ParseError(self.origin, tok.line, tok.col,
                                f"expected a term, found {tok.value or tok.kind!r}"))

    def expression(self) -> Expression:
        expr = self.mul_expr()
        while self.at("PUNCT", "+") or self.at("PUNCT", "-"):
            op = self.next().value
            expr = BinaryOp(op, expr, self.mul_expr())
        return expr

    def mul_expr(self) -> Expression:
        expr = self.unary_expr()
        while self.at("PUNCT", "*") or self.at("PUNCT", "/"):
            op = self.next().value
            expr = BinaryOp(op, expr, self.unary_expr())
        return expr

    def unary_expr(self) -> Expression:
        if self.accept("PUNCT", "-"):
            inner = self.unary_expr()
            if isinstance(inner, Integer):
                return Integer(-inner.value)
            return BinaryOp("-", Integer(0), inner)
        if self.accept("PUNCT", "("):
            expr = self.expression()
            self.expect("PUNCT", ")")
            return expr
        return self.term()

    # -- safety -----------------------------------------------------------------

    def bound_variables(self, body) -> set:
        # a variable is bound when it occurs as a function-term argument in
        # a positive literal; bare comparison operands do not bind
        from .syntax import literal_function_terms

        bound = set()
        for lit in body:
            if lit.default_negated:
                continue
            for ft in literal_function_terms(lit):
                for arg in ft.args:
                    bound.update(term_variables(arg))
        return bound

    def check_safety(self, rule: Rule) -> None:
        bound = self.bound_variables(rule.body)
        span = rule.span or Span(self.origin, 0, 0)
        head = rule.head
        if isinstance(head, AggregateHead):
            rule_vars = set(head_variables(AssertHead(head.target)))
        else:
            rule_vars = set(head_variables(head))
        for lit in rule.body:
            rule_vars.update(literal_variables(lit))
        if isinstance(rule.label, TermLabel):
            rule_vars.update(term_variables(rule.label.term))
        for var in sorted(rule_vars - bound, key=lambda v: v.name):
            self.errors.append(ParseError(
                span.origin, span.line, span.col,
                f"unsafe rule: variable {var.name} not bound by a positive body atom"))
        if isinstance(head, AggregateHead):
            self.check_aggregate_safety(head.aggregate, bound, span)

    def check_aggregate_safety(self, agg: SumAggregate, rule_bound: set, span: Span) -> None:
        # local variables are those not bound at rule level; they must occur
        # in the template or as a function-term argument in a positive condition
        from .syntax import literal_function_terms

        local_bound = set(term_variables(agg.template))
        local_bound.update(
            v for lit in agg.conditions if not lit.default_negated
            for ft in literal_function_terms(lit)
            for arg in ft.args for v in term_variables(arg))
        everything = set(local_bound)
        for lit in agg.conditions:
            everything.update(literal_variables(lit))
        for var in sorted(everything - local_bound - rule_bound, key=lambda v: v.name):
            self.errors.append(ParseError(
                span.origin, span.line, span.col,
                f"unsafe rule: aggregate variable {var.name} not bound by the "
                f"template or a positive condition"))

    def check_label_directive(self, d: LabelDirective) -> None:
        free = set(term_variables(d.label)) - set(term_variables(d.pattern))
        span = d.span or Span(self.origin, 0, 0)
        for var in sorted(free, key=lambda v: v.name):
            self.errors.append(ParseError(
                span.origin, span.line, span.col,
                f"unsafe directive: label variable {var.name} not bound by the head pattern"))


class _Abort(Exception):
    def __init__(self, error: ParseError):
        self.error = error


def parse(source: str, origin: str = "<string>") -> Program:
    """Parse lppf source text into a Program.

    Raises ParseFailure carrying every diagnostic (lexical errors, syntax
    errors, unsafe rules) found in one pass.
    """
    tokens, lex_errors = tokenize(source, origin)
    parser = _Parser(tokens, origin)
    program = parser.program()
    errors = lex_errors + parser.errors
    if errors:
        raise ParseFailure(errors)
    return program


def parse_assignment(text: str):
    """Parse a query like ``sentence(gabriel)=prison`` or ``punish(gabriel)``
    into a (function term, value) pair.  Used by the CLI --explain flag."""
    from .syntax import FALSE, TRUE

    tokens, lex_errors = tokenize(text, "<query>")
    parser = _Parser(tokens, "<query>")
    try:
        negated = parser.accept("PUNCT", "~") is not None
        term = parser.function_term_required()
        value: Term = FALSE if negated else TRUE
        if not negated and parser.accept("PUNCT", "="):
            value = parser.term()
        parser.expect("EOF")
    except _Abort as abort:
        raise ParseFailure([abort.error])
    if lex_errors:
        raise ParseFailure(lex_errors)
    return term, value

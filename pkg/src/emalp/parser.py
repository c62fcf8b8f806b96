"""Recursive-descent parser and serializer for the rule DSL.

    program  := (decl ";")*
    decl     := head "<-" tag expr "with" literal
    head     := IDENT | literal            # literal head = constraint
    tag      := "g" | "p" | "l"
    expr     := literal | IDENT | FUNC "(" expr ("," expr)* ")"
    literal  := DECIMAL | INT "/" INT      # must denote a value in [0, 1]

Files use extension .malp, UTF-8, '#' line comments.  "with" is a
reserved word.  f and g take their threshold constant as a first,
literal argument.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .lattice import DEFAULT_TOL
from .program import (
    Apply,
    Atom,
    BodyExpr,
    BUILTINS,
    Const,
    MalpError,
    Program,
    Rule,
    TAG_IMPLICATIONS,
    ValidationFailure,
    validate_program,
)


class ParseError(MalpError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+|\#[^\n]*)
      | (?P<number>\d+(?:\.\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<arrow><-)
      | (?P<punct>[(),;/])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        col = pos - line_start + 1
        if m.lastgroup == "ws":
            nl = m.group().count("\n")
            if nl:
                line += nl
                line_start = m.start() + m.group().rindex("\n") + 1
        elif m.lastgroup == "number":
            tokens.append(Token("number", m.group(), line, col))
        elif m.lastgroup == "ident":
            tokens.append(Token("ident", m.group(), line, col))
        elif m.lastgroup == "arrow":
            tokens.append(Token("<-", m.group(), line, col))
        else:
            tokens.append(Token(m.group(), m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text!r}", tok.line, tok.col)
        return self.next()

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    def literal(self) -> float:
        tok = self.expect("number")
        if self.peek().kind == "/":
            if "." in tok.text:
                raise ParseError("fraction numerator must be an integer", tok.line, tok.col)
            self.next()
            den = self.expect("number")
            if "." in den.text:
                raise ParseError("fraction denominator must be an integer", den.line, den.col)
            if int(den.text) == 0:
                raise ParseError("fraction denominator must be nonzero", den.line, den.col)
            value = int(tok.text) / int(den.text)
        else:
            value = float(tok.text)
        if not 0.0 <= value <= 1.0:
            raise ParseError(f"literal {value} outside [0, 1]", tok.line, tok.col)
        return value

    def expr(self) -> BodyExpr:
        tok = self.peek()
        if tok.kind == "number":
            return Const(self.literal())
        if tok.kind != "ident":
            raise self.error(f"expected an expression, found {tok.text!r}")
        if tok.text == "with":
            raise self.error("'with' is reserved")
        self.next()
        if self.peek().kind != "(":
            return Atom(tok.text)
        if tok.text not in BUILTINS:
            raise ParseError(f"unknown builtin: {tok.text!r}", tok.line, tok.col)
        self.next()
        args = [self.expr()]
        while self.peek().kind == ",":
            self.next()
            args.append(self.expr())
        self.expect(")")
        spec = BUILTINS[tok.text]
        if len(args) < spec.min_arity or (spec.max_arity is not None and len(args) > spec.max_arity):
            raise ParseError(f"{tok.text} applied to {len(args)} arguments", tok.line, tok.col)
        if spec.const_first and not isinstance(args[0], Const):
            raise ParseError(f"first argument of {tok.text} must be a literal", tok.line, tok.col)
        return Apply(tok.text, tuple(args))

    def decl(self) -> Rule:
        tok = self.peek()
        if tok.kind == "number":
            head: Atom | Const = Const(self.literal())
        elif tok.kind == "ident" and tok.text != "with":
            head = Atom(self.next().text)
        else:
            raise self.error(f"expected a rule head, found {tok.text!r}")
        self.expect("<-")
        tag = self.peek()
        if tag.kind != "ident" or tag.text not in TAG_IMPLICATIONS:
            raise self.error("expected implication tag 'g', 'p' or 'l'")
        self.next()
        body = self.expr()
        kw = self.peek()
        if kw.kind != "ident" or kw.text != "with":
            raise self.error(f"expected 'with', found {kw.text!r}")
        self.next()
        weight = self.literal()
        self.expect(";")
        return Rule(head, TAG_IMPLICATIONS[tag.text], body, weight)

    def program(self) -> Program:
        rules = []
        while self.peek().kind != "eof":
            rules.append(self.decl())
        return Program(tuple(rules))


def parse_body(text: str) -> BodyExpr:
    """Parse a single body expression (no trailing input allowed)."""
    p = _Parser(text)
    e = p.expr()
    p.expect("eof")
    return e


def parse_program(text: str, allow_repeats: bool = False, tol: float = DEFAULT_TOL,
                  validate: bool = True) -> Program:
    """Parse and validate DSL text; raises ParseError or ValidationFailure.

    With validate=False the syntax tree is returned as parsed, leaving
    invariant checking to the caller (used by diagnostics frontends).
    """
    program = _Parser(text).program()
    if validate:
        report = validate_program(program, allow_repeats=allow_repeats, tol=tol)
        if not report.ok:
            raise ValidationFailure(report)
    return program


def serialize_expr(e: BodyExpr) -> str:
    return str(e)


def serialize_rule(r: Rule) -> str:
    return str(r)


def serialize_program(program: Program) -> str:
    """Canonical DSL text; parse_program(serialize_program(P)) == P."""
    if not program.rules:
        return ""
    return "\n".join(str(r) for r in program.rules) + "\n"

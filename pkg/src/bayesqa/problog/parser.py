"""Tokenizer and recursive-descent parser for the program fragment.

Grammar (ground fragment; ``%`` starts a line comment):

    program    ::= statement*
    statement  ::= evidence | query | clause
    evidence   ::= "evidence" "(" atom "," ("true" | "false") ")" "."
    query      ::= "query" "(" atom ")" "."
    clause     ::= head ( ";" head )* ( ":-" body )? "."
    head       ::= ( number "::" )? atom
    body       ::= literal ( "," literal )*
    literal    ::= "not"? atom
    atom       ::= ident ( "(" constant ( "," constant )* ")" )?
    constant   ::= ident | quoted

An unannotated head is a deterministic fact (probability 1). ``not``,
``evidence`` and ``query`` are contextual keywords: ``evidence``/``query``
only at statement start, ``not`` only in literal position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ProblogSyntaxError
from .syntax import Atom, Clause, Evidence, Literal, ProbHead, ProblogProgram, Query

_TOKEN = re.compile(
    r"""
      (?P<WS>[ \t\r\n]+)
    | (?P<COMMENT>%[^\n]*)
    | (?P<PROBSEP>::)
    | (?P<ARROW>:-)
    | (?P<NUMBER>\d+\.\d+|\d+)
    | (?P<QUOTED>'[^'\n]*')
    | (?P<IDENT>[a-z][A-Za-z0-9_]*)
    | (?P<PUNCT>[;,.()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            raise ProblogSyntaxError(f"line {line}, column {col}: unexpected character {text[pos]!r}")
        kind = m.lastgroup or ""
        snippet = m.group()
        if kind not in ("WS", "COMMENT"):
            tokens.append(_Token(kind if kind != "PUNCT" else snippet, snippet, line, pos - line_start + 1))
        newlines = snippet.count("\n")
        if newlines:
            line += newlines
            line_start = pos + snippet.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    # -- token plumbing ----------------------------------------------------

    @property
    def current(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str) -> ProblogSyntaxError:
        tok = self.current
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return ProblogSyntaxError(
            f"line {tok.line}, column {tok.column}: expected {expected}, found {found}"
        )

    def expect(self, kind: str, expected: str) -> _Token:
        if self.current.kind != kind:
            raise self.fail(expected)
        return self.advance()

    # -- grammar -----------------------------------------------------------

    def program(self) -> ProblogProgram:
        clauses: list[Clause] = []
        evidence: list[Evidence] = []
        queries: list[Query] = []
        while self.current.kind != "EOF":
            tok = self.current
            if tok.kind == "IDENT" and tok.text == "evidence" and self._peek_is("("):
                evidence.append(self.evidence_directive())
            elif tok.kind == "IDENT" and tok.text == "query" and self._peek_is("("):
                queries.append(self.query_directive())
            else:
                clauses.append(self.clause())
        return ProblogProgram(tuple(clauses), tuple(evidence), tuple(queries))

    def _peek_is(self, kind: str) -> bool:
        return self.tokens[self.i + 1].kind == kind

    def evidence_directive(self) -> Evidence:
        self.advance()  # 'evidence'
        self.expect("(", "'('")
        atom = self.atom()
        self.expect(",", "','")
        flag = self.expect("IDENT", "'true' or 'false'")
        if flag.text not in ("true", "false"):
            raise ProblogSyntaxError(
                f"line {flag.line}, column {flag.column}: expected 'true' or 'false', found {flag.text!r}"
            )
        self.expect(")", "')'")
        self.expect(".", "'.' at end of statement")
        return Evidence(atom=atom, value=flag.text == "true")

    def query_directive(self) -> Query:
        self.advance()  # 'query'
        self.expect("(", "'('")
        atom = self.atom()
        self.expect(")", "')'")
        self.expect(".", "'.' at end of statement")
        return Query(atom=atom)

    def clause(self) -> Clause:
        heads = [self.head()]
        while self.current.kind == ";":
            self.advance()
            heads.append(self.head())
        body: list[Literal] = []
        if self.current.kind == "ARROW":
            self.advance()
            body.append(self.literal())
            while self.current.kind == ",":
                self.advance()
                body.append(self.literal())
        self.expect(".", "'.' at end of statement")
        return Clause(heads=tuple(heads), body=tuple(body))

    def head(self) -> ProbHead:
        if self.current.kind == "NUMBER":
            num = self.advance()
            probability = float(num.text)
            if probability > 1.0:
                raise ProblogSyntaxError(
                    f"line {num.line}, column {num.column}: probability {num.text} outside [0, 1]"
                )
            self.expect("PROBSEP", "'::' after probability")
            return ProbHead(probability=probability, atom=self.atom())
        if self.current.kind == "IDENT":
            return ProbHead(probability=1.0, atom=self.atom())
        raise self.fail("a probability or an atom")

    def literal(self) -> Literal:
        if self.current.kind == "IDENT" and self.current.text == "not":
            self.advance()
            return Literal(atom=self.atom(), negated=True)
        return Literal(atom=self.atom(), negated=False)

    def atom(self) -> Atom:
        name = self.expect("IDENT", "a predicate name")
        if self.current.kind != "(":
            return Atom(predicate=name.text)
        self.advance()
        args = [self.constant()]
        while self.current.kind == ",":
            self.advance()
            args.append(self.constant())
        self.expect(")", "')' or ','")
        return Atom(predicate=name.text, args=tuple(args))

    def constant(self) -> str:
        tok = self.current
        if tok.kind == "IDENT":
            self.advance()
            return tok.text
        if tok.kind == "QUOTED":
            self.advance()
            value = tok.text[1:-1]
            if not value:
                raise ProblogSyntaxError(
                    f"line {tok.line}, column {tok.column}: empty quoted constant"
                )
            return value
        raise self.fail("a constant (identifier or quoted string)")


def parse(text: str) -> ProblogProgram:
    """Parse program text; raise :class:`ProblogSyntaxError` with position."""

    return _Parser(text).program()


def parse_atom(text: str) -> Atom:
    """Parse a single atom, e.g. a CLI query argument."""

    p = _Parser(text)
    atom = p.atom()
    if p.current.kind != "EOF":
        raise p.fail("end of input after atom")
    return atom

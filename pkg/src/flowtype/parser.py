"""Recursive-descent parser for network programs.

The grammar is documented in ``docs/grammar.md``.  A program declares small
networks and holes and ends with ``main = <expr>``.  Hole occurrences are
written bare; the parser numbers them per hole in left-to-right order.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import FlowTypeError, SyntaxFault
from .model import Arc, Hole, SmallNetwork
from .syntax import (Bind, BindSet, Cascade, Conn, HoleRef, Let, LetSet, Par,
                     SmallRef)

TOKEN = re.compile(r"""
    (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*|//[^\n]*)
  | (?P<number>\d+(?:/\d+|\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*)
  | (?P<op>\|\||\|>|->|[{}()\[\],;:=<>])
""", re.VERBOSE)

KEYWORDS = {"network", "hole", "main", "node", "in", "out", "arc", "let", "bind",
            "loop", "conn", "copy", "inf"}
RESERVED = {"try", "mix", "letrec"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int

    @property
    def span(self):
        return (self.line, self.col)


def tokenize(text):
    tokens = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        match = TOKEN.match(text, pos)
        if match is None:
            raise SyntaxFault(f"unexpected character {text[pos]!r} at {line}:{pos - start + 1}")
        kind = match.lastgroup
        if kind == "newline":
            line, start = line + 1, match.end()
        elif kind not in ("space", "comment"):
            word = match.group()
            if kind == "op" or (kind == "name" and word in KEYWORDS | RESERVED):
                kind = word
            tokens.append(Token(kind, word, line, pos - start + 1))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


@dataclass
class Program:
    networks: dict = field(default_factory=dict)
    holes: dict = field(default_factory=dict)
    main: object = None


class Parser:
    def __init__(self, text, big=None, holes=()):
        self.tokens = tokenize(text)
        self.pos = 0
        self.big = None if big is None else Fraction(big)
        self.hole_names = set(holes)
        self.scopes = []
        self.counters = {}

    # token helpers

    @property
    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok=None, code="syntax-error"):
        tok = tok or self.peek
        raise SyntaxFault(f"{message} at {tok.line}:{tok.col}", code)

    def expect(self, kind):
        tok = self.peek
        if tok.kind != kind:
            found = tok.text or "end of input"
            self.fail(f"expected {kind!r} but found {found!r}")
        return self.advance()

    def accept(self, kind):
        if self.peek.kind == kind:
            return self.advance()
        return None

    def name(self):
        tok = self.peek
        if tok.kind in RESERVED:
            self.fail(f"{tok.text!r} is a binder this tool does not support", code="unsupported-binder")
        return self.expect("name").text

    def names(self):
        out = [self.name()]
        while self.accept(","):
            out.append(self.name())
        return out

    # declarations

    def program(self):
        prog = Program()
        seen = set()
        while self.peek.kind in ("network", "hole"):
            tok = self.peek
            decl = self.network(prog) if tok.kind == "network" else self.hole()
            if decl.name in seen:
                self.fail(f"{decl.name} is declared twice", tok, "duplicate-declaration")
            seen.add(decl.name)
            if isinstance(decl, Hole):
                prog.holes[decl.name] = decl
                self.hole_names.add(decl.name)
            else:
                prog.networks[decl.name] = decl
        self.expect("main")
        self.expect("=")
        prog.main = self.expr()
        self.accept(";")
        self.expect("eof")
        return prog

    def number(self):
        tok = self.peek
        if tok.kind == "inf":
            self.advance()
            if self.big is None:
                self.fail("infinite capacity needs a finite substitute (big)", tok, "infinite-capacity")
            return self.big
        return Fraction(self.expect("number").text)

    def bounds(self):
        if not self.accept("["):
            if self.big is None:
                self.fail("arc without bounds needs a finite substitute (big) for its capacity",
                          code="infinite-capacity")
            return Fraction(0), self.big
        lo = self.number()
        self.expect(",")
        hi = self.number()
        self.expect("]")
        return lo, hi

    def network(self, prog):
        start = self.expect("network")
        name = self.name()
        if self.accept("="):
            self.expect("copy")
            source_tok = self.peek
            source = self.name()
            self.accept(";")
            if source not in prog.networks:
                self.fail(f"cannot copy unknown network {source}", source_tok, "undeclared")
            return prog.networks[source].renamed(arc_prefix=f"{name}.", name=name)
        self.expect("{")
        nodes, arcs = [], []

        def touch(node):
            if node not in nodes:
                nodes.append(node)

        while not self.accept("}"):
            kind = self.advance()
            if kind.kind == "node":
                for n in self.names():
                    touch(n)
            elif kind.kind in ("in", "out", "arc"):
                arc_name = self.name()
                self.expect(":")
                first = self.name()
                if kind.kind == "arc":
                    self.expect("->")
                    second = self.name()
                    tail, head = first, second
                elif kind.kind == "in":
                    tail, head = None, first
                else:
                    tail, head = first, None
                for n in (tail, head):
                    if n is not None:
                        touch(n)
                lo, hi = self.bounds()
                arcs.append(Arc(arc_name, tail, head, lo, hi))
            else:
                self.fail(f"unexpected {kind.text!r} in network body", kind)
            self.expect(";")
        try:
            return SmallNetwork(name, tuple(nodes), tuple(arcs))
        except FlowTypeError as exc:
            self.fail(f"network {name}: {exc.args[0]}", start, exc.code)

    def hole(self):
        self.expect("hole")
        name = self.name()
        self.expect("{")
        inputs, outputs = [], []
        while not self.accept("}"):
            tok = self.advance()
            if tok.kind == "in":
                inputs += self.names()
            elif tok.kind == "out":
                outputs += self.names()
            else:
                self.fail(f"unexpected {tok.text!r} in hole declaration", tok)
            self.expect(";")
        try:
            return Hole(name, tuple(inputs), tuple(outputs))
        except FlowTypeError as exc:
            self.fail(f"hole {name}: {exc.args[0]}", code=exc.code)

    # expressions

    def expr(self):
        tok = self.peek
        left = self.cascade()
        while self.accept("||"):
            left = Par(left, self.cascade(), span=tok.span)
        return left

    def cascade(self):
        tok = self.peek
        left = self.unary()
        while self.accept("|>"):
            left = Cascade(left, self.unary(), span=tok.span)
        return left

    def pair_list(self):
        self.expect("{")
        pairs = []
        while True:
            a = self.name()
            self.expect("->")
            pairs.append((a, self.name()))
            if not self.accept(","):
                break
        self.expect("}")
        return tuple(pairs)

    def unary(self):
        tok = self.peek
        if tok.kind in RESERVED:
            self.fail(f"{tok.text!r} is a binder this tool does not support", code="unsupported-binder")
        if tok.kind == "let":
            return self.let()
        if tok.kind == "bind":
            self.advance()
            self.expect("<")
            a = self.name()
            self.expect(",")
            b = self.name()
            self.expect(">")
            return Bind(a, b, self.unary(), span=tok.span)
        if tok.kind == "loop":
            self.advance()
            pairs = self.pair_list()
            return BindSet(pairs, self.unary(), span=tok.span)
        if tok.kind == "conn":
            self.advance()
            pairs = self.pair_list()
            self.expect("(")
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect(")")
            return Conn(pairs, left, right, span=tok.span)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        name = self.name()
        if name in self.hole_names or any(name in s for s in self.scopes):
            self.counters[name] = self.counters.get(name, 0) + 1
            return HoleRef(name, self.counters[name], span=tok.span)
        return SmallRef(name, span=tok.span)

    def let(self):
        tok = self.expect("let")
        hole = self.name()
        if self.accept("="):
            bound = self.expr()
            self.expect("in")
            self.scopes.append({hole})
            body = self.expr()
            self.scopes.pop()
            return Let(hole, bound, body, span=tok.span)
        self.expect("in")
        self.expect("{")
        choices = [self.expr()]
        while self.accept(","):
            choices.append(self.expr())
        self.expect("}")
        self.expect("in")
        self.scopes.append({hole})
        body = self.expr()
        self.scopes.pop()
        return LetSet(hole, tuple(choices), body, span=tok.span)


def parse_program(text, big=None):
    """Parse a whole program.  ``big`` replaces ``inf`` and missing bounds."""
    return Parser(text, big).program()


def parse(text, holes=()):
    """Parse a bare expression.

    Names bound by an enclosing ``let`` (or listed in ``holes``) become hole
    occurrences; every other name is a small network.
    """
    parser = Parser(text, holes=holes)
    expr = parser.expr()
    parser.expect("eof")
    return expr

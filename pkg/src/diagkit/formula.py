"""Propositional sentences: immutable formula trees with structural equality.

Atoms are named by identifiers; connectives are negation, conjunction,
disjunction, implication and biconditional, plus the boolean constants.
Hashes are computed once at construction so sentences are cheap dictionary
keys for the caches in the reasoning layer.

The concrete syntax (used by the ``.dpi`` file format and the CLI) is a
minimal infix notation::

    atom     ::=  [A-Za-z_][A-Za-z0-9_]*        (except "true"/"false")
    sentence ::=  atom | "true" | "false" | "!" sentence
               |  sentence "&" sentence          (binds tightest of the binary ops)
               |  sentence "|" sentence
               |  sentence "->" sentence         (right associative)
               |  sentence "<->" sentence        (binds loosest)
               |  "(" sentence ")"
"""

from __future__ import annotations

from typing import Iterator

from .errors import SentenceSyntaxError

__all__ = [
    "Sentence",
    "Atom",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "TRUE",
    "FALSE",
    "parse_sentence",
    "to_text",
    "collect_atoms",
]


class Sentence:
    """Base class for formula nodes. Instances are immutable and hashable."""

    __slots__ = ("_hash",)

    def children(self) -> tuple["Sentence", ...]:
        return ()

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or other._hash != self._hash:
            return False
        return self._eq_fields(other)

    def _eq_fields(self, other) -> bool:
        return self.children() == other.children()

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {to_text(self)}>"

    def atoms(self) -> frozenset[str]:
        """Names of all atoms occurring in the sentence."""
        out: set[str] = set()
        stack: list[Sentence] = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, Atom):
                out.add(node.name)
            else:
                stack.extend(node.children())
        return frozenset(out)


class Atom(Sentence):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("atom", name))

    def _eq_fields(self, other) -> bool:
        return self.name == other.name


class _Const(Sentence):
    __slots__ = ("value",)

    def __init__(self, value: bool):
        self.value = value
        self._hash = hash(("const", value))

    def _eq_fields(self, other) -> bool:
        return self.value is other.value


TRUE = _Const(True)
FALSE = _Const(False)


class Not(Sentence):
    __slots__ = ("arg",)

    def __init__(self, arg: Sentence):
        self.arg = arg
        self._hash = hash(("not", arg._hash))

    def children(self) -> tuple[Sentence, ...]:
        return (self.arg,)


class _Binary(Sentence):
    __slots__ = ("lhs", "rhs")
    op = "?"

    def __init__(self, lhs: Sentence, rhs: Sentence):
        self.lhs = lhs
        self.rhs = rhs
        self._hash = hash((self.op, lhs._hash, rhs._hash))

    def children(self) -> tuple[Sentence, ...]:
        return (self.lhs, self.rhs)


class And(_Binary):
    __slots__ = ()
    op = "&"


class Or(_Binary):
    __slots__ = ()
    op = "|"


class Implies(_Binary):
    __slots__ = ()
    op = "->"


class Iff(_Binary):
    __slots__ = ()
    op = "<->"


def collect_atoms(sentences) -> frozenset[str]:
    """Union of atom names over an iterable of sentences."""
    out: set[str] = set()
    for s in sentences:
        out.update(s.atoms())
    return frozenset(out)


# ---------------------------------------------------------------------------
# Parsing

_KEYWORDS = {"true": TRUE, "false": FALSE}

# token kinds: ATOM LPAREN RPAREN NOT AND OR IMPLIES IFF END
_SYMBOLS = (("<->", "IFF"), ("->", "IMPLIES"), ("!", "NOT"), ("&", "AND"),
            ("|", "OR"), ("(", "LPAREN"), (")", "RPAREN"))


def _tokenize(text: str, line: int, col0: int) -> Iterator[tuple[str, str, int]]:
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r":
            i += 1
            continue
        for sym, kind in _SYMBOLS:
            if text.startswith(sym, i):
                yield kind, sym, col0 + i
                i += len(sym)
                break
        else:
            if ch.isalpha() or ch == "_":
                j = i + 1
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                yield "ATOM", text[i:j], col0 + i
                i = j
            else:
                raise SentenceSyntaxError(f"unexpected character {ch!r}", line, col0 + i)
    yield "END", "", col0 + n


class _Parser:
    """Recursive-descent parser over the infix grammar above."""

    def __init__(self, text: str, line: int, col0: int):
        self.line = line
        self.tokens = list(_tokenize(text, line, col0))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.advance()
        if tok[0] != kind:
            raise SentenceSyntaxError(
                f"expected {kind.lower()}, found {tok[1] or 'end of input'!r}",
                self.line, tok[2])
        return tok

    def parse(self) -> Sentence:
        node = self.iff()
        tok = self.peek()
        if tok[0] != "END":
            raise SentenceSyntaxError(f"unexpected token {tok[1]!r}", self.line, tok[2])
        return node

    def iff(self) -> Sentence:
        node = self.implies()
        while self.peek()[0] == "IFF":
            self.advance()
            node = Iff(node, self.implies())
        return node

    def implies(self) -> Sentence:
        node = self.disjunction()
        if self.peek()[0] == "IMPLIES":
            self.advance()
            return Implies(node, self.implies())  # right associative
        return node

    def disjunction(self) -> Sentence:
        node = self.conjunction()
        while self.peek()[0] == "OR":
            self.advance()
            node = Or(node, self.conjunction())
        return node

    def conjunction(self) -> Sentence:
        node = self.unary()
        while self.peek()[0] == "AND":
            self.advance()
            node = And(node, self.unary())
        return node

    def unary(self) -> Sentence:
        kind, value, col = self.peek()
        if kind == "NOT":
            self.advance()
            return Not(self.unary())
        if kind == "LPAREN":
            self.advance()
            node = self.iff()
            self.expect("RPAREN")
            return node
        if kind == "ATOM":
            self.advance()
            if value in _KEYWORDS:
                return _KEYWORDS[value]
            return Atom(value)
        raise SentenceSyntaxError(
            f"expected a sentence, found {value or 'end of input'!r}", self.line, col)


def parse_sentence(text: str, line: int = 1, col: int = 1) -> Sentence:
    """Parse an infix sentence; ``line``/``col`` seed error locations."""
    return _Parser(text, line, col).parse()


# ---------------------------------------------------------------------------
# Printing (minimal parentheses; inverse of parse_sentence)

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def to_text(s: Sentence) -> str:
    return _render(s, 0)


def _render(s: Sentence, min_prec: int) -> str:
    if isinstance(s, Atom):
        return s.name
    if isinstance(s, _Const):
        return "true" if s.value else "false"
    if isinstance(s, Not):
        return "!" + _render(s.arg, _PREC[Not])
    prec = _PREC[type(s)]
    if isinstance(s, Implies):
        text = f"{_render(s.lhs, prec + 1)} {s.op} {_render(s.rhs, prec)}"
    else:
        text = f"{_render(s.lhs, prec)} {s.op} {_render(s.rhs, prec + 1)}"
    if prec < min_prec:
        return f"({text})"
    return text

"""Formula language of DmBL*: AST, parser, printer, desugaring.

Concrete grammar (whitespace-insensitive)::

    formula := iff
    iff     := imp ("<->" imp)*             left-associated
    imp     := or ("->" imp)?               right-associated
    or      := and ("\\/" and)*
    and     := unary ("/\\" unary)*
    unary   := "~" unary | "box" unary | "dia" unary | primary
    primary := ident | "top" | "bot"
             | "indep" "(" formula "," formula ")"
             | "(" formula ("|" formula)? ")"

Identifiers start with a lowercase letter and continue with letters,
digits or underscores; ``box``, ``dia``, ``top``, ``bot`` and ``indep``
are reserved.  A conditional is only accepted fully parenthesized, as
``(psi | phi)``; the disjunction token is ``\\/``, never ``|``.

After :func:`desugar` a tree contains only the core node kinds
``Atom``, ``Not``, ``Implies``, ``Box`` and ``Cond``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Atom", "Not", "Implies", "Box", "Cond",
    "Or", "And", "Iff", "Dia", "Top", "Bot", "Indep",
    "Formula", "AtomContext", "ParseError",
    "parse", "desugar", "render", "cond_depth", "is_box_free", "atoms_of",
]

RESERVED = frozenset({"box", "dia", "top", "bot", "indep"})

_IDENT_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    child: "Formula"


@dataclass(frozen=True)
class Cond:
    """Conditional proposition ``(consequent | antecedent)``."""
    consequent: "Formula"
    antecedent: "Formula"


# Sugar nodes; gone after desugaring.

@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Dia:
    child: "Formula"


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Indep:
    """Logical independence ``psi x phi``, sugar for ``box((psi|phi) <-> psi)``."""
    psi: "Formula"
    phi: "Formula"


Formula = Union[Atom, Not, Implies, Box, Cond, Or, And, Iff, Dia, Top, Bot, Indep]

_CORE = (Atom, Not, Implies, Box, Cond)


@dataclass(frozen=True)
class AtomContext:
    """Ordered, fixed atom vocabulary.  Atom index is stable for a model's lifetime."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("atom context must declare at least one atom")
        if len(set(self.names)) != len(self.names):
            raise ValueError("atom names must be distinct")
        for n in self.names:
            if not _IDENT_RE.fullmatch(n):
                raise ValueError(f"invalid atom name {n!r}")
            if n in RESERVED:
                raise ValueError(f"reserved word used as atom: {n!r}")

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown atom {name!r}") from None


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------------------
# Tokenizer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<sym><->|->|/\\|\\/|[~()|,])|(?P<word>[a-zA-Z][a-zA-Z0-9_]*))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}",
                             len(text) - len(stripped))
        kind = "sym" if m.group("sym") else "word"
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.peek()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)
        return self.next()

    def parse(self) -> Formula:
        f = self.iff()
        kind, val, pos = self.peek()
        if kind != "end":
            if val == "|":
                raise ParseError("conditional requires parentheses", pos)
            raise ParseError(f"unexpected {val!r}", pos)
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek()[1] == "<->":
            self.next()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.or_()
        if self.peek()[1] == "->":
            self.next()
            return Implies(f, self.imp())
        return f

    def or_(self) -> Formula:
        f = self.and_()
        while self.peek()[1] == "\\/":
            self.next()
            f = Or(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "/\\":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "~":
            self.next()
            return Not(self.unary())
        if val == "box":
            self.next()
            return Box(self.unary())
        if val == "dia":
            self.next()
            return Dia(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        kind, val, pos = self.next()
        if val == "top":
            return Top()
        if val == "bot":
            return Bot()
        if val == "indep":
            self.expect("(")
            psi = self.iff()
            self.expect(",")
            phi = self.iff()
            self.expect(")")
            return Indep(psi, phi)
        if val == "(":
            f = self.iff()
            if self.peek()[1] == "|":
                self.next()
                phi = self.iff()
                self.expect(")")
                return Cond(f, phi)
            self.expect(")")
            return f
        if kind == "word":
            if val in RESERVED:
                raise ParseError(f"reserved word used as atom: {val!r}", pos)
            if not _IDENT_RE.fullmatch(val):
                raise ParseError(f"invalid identifier {val!r}", pos)
            return Atom(val)
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str, ctx: AtomContext) -> Formula:
    """Parse ``text`` against the grammar; every atom must be declared in ``ctx``."""
    f = _Parser(text).parse()
    for name in sorted(atoms_of(f)):
        if name not in ctx:
            raise ParseError(f"unknown atom {name!r}", text.index(name))
    return f


# ---------------------------------------------------------------------------
# Desugaring

def desugar(f: Formula, ctx: AtomContext) -> Formula:
    """Expand abbreviations down to Atom/Not/Implies/Box/Cond.

    ``top`` becomes ``t -> t`` over the first declared atom ``t`` (and
    ``bot`` its negation), ``a \\/ b`` becomes ``~a -> b``, ``a /\\ b``
    becomes ``~(~~a -> ~b)``, ``dia`` the dual of ``box``, and
    ``indep(psi, phi)`` becomes ``box((psi|phi) <-> psi)``.
    """
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.child, ctx))
    if isinstance(f, Implies):
        return Implies(desugar(f.left, ctx), desugar(f.right, ctx))
    if isinstance(f, Box):
        return Box(desugar(f.child, ctx))
    if isinstance(f, Cond):
        return Cond(desugar(f.consequent, ctx), desugar(f.antecedent, ctx))
    if isinstance(f, Or):
        return Implies(Not(desugar(f.left, ctx)), desugar(f.right, ctx))
    if isinstance(f, And):
        # a /\ b == ~(~a \/ ~b), with \/ expanded in turn
        return Not(desugar(Or(Not(f.left), Not(f.right)), ctx))
    if isinstance(f, Iff):
        return desugar(And(Implies(f.left, f.right), Implies(f.right, f.left)), ctx)
    if isinstance(f, Dia):
        return Not(Box(Not(desugar(f.child, ctx))))
    if isinstance(f, Top):
        t = Atom(ctx.names[0])
        return Implies(t, t)
    if isinstance(f, Bot):
        return Not(desugar(Top(), ctx))
    if isinstance(f, Indep):
        return desugar(Box(Iff(Cond(f.psi, f.phi), f.psi)), ctx)
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Printing

# Precedence levels, loosest first.  Unary/primary bind tightest.
_PREC_IFF, _PREC_IMP, _PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3, 4, 5


def render(f: Formula) -> str:
    """Print with minimal parentheses; conditionals are always parenthesized."""
    return _render(f, 0)


def _render(f: Formula, outer: int) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Cond):
        return f"({_render(f.consequent, 0)} | {_render(f.antecedent, 0)})"
    if isinstance(f, Indep):
        return f"indep({_render(f.psi, 0)}, {_render(f.phi, 0)})"
    if isinstance(f, Not):
        return _wrap(f"~{_render(f.child, _PREC_UNARY)}", _PREC_UNARY, outer)
    if isinstance(f, Box):
        return _wrap(f"box {_render(f.child, _PREC_UNARY)}", _PREC_UNARY, outer)
    if isinstance(f, Dia):
        return _wrap(f"dia {_render(f.child, _PREC_UNARY)}", _PREC_UNARY, outer)
    if isinstance(f, And):
        s = f"{_render(f.left, _PREC_AND)} /\\ {_render(f.right, _PREC_AND + 1)}"
        return _wrap(s, _PREC_AND, outer)
    if isinstance(f, Or):
        s = f"{_render(f.left, _PREC_OR)} \\/ {_render(f.right, _PREC_OR + 1)}"
        return _wrap(s, _PREC_OR, outer)
    if isinstance(f, Implies):
        s = f"{_render(f.left, _PREC_IMP + 1)} -> {_render(f.right, _PREC_IMP)}"
        return _wrap(s, _PREC_IMP, outer)
    if isinstance(f, Iff):
        s = f"{_render(f.left, _PREC_IFF)} <-> {_render(f.right, _PREC_IFF + 1)}"
        return _wrap(s, _PREC_IFF, outer)
    raise TypeError(f"not a formula node: {f!r}")


def _wrap(s: str, prec: int, outer: int) -> str:
    return f"({s})" if prec < outer else s


# ---------------------------------------------------------------------------
# Structural helpers

def cond_depth(f: Formula) -> int:
    """Maximum nesting of conditionals; ``indep`` counts as one level."""
    if isinstance(f, Atom) or isinstance(f, (Top, Bot)):
        return 0
    if isinstance(f, (Not, Box, Dia)):
        return cond_depth(f.child)
    if isinstance(f, (Implies, Or, And, Iff)):
        return max(cond_depth(f.left), cond_depth(f.right))
    if isinstance(f, Cond):
        return 1 + max(cond_depth(f.consequent), cond_depth(f.antecedent))
    if isinstance(f, Indep):
        return 1 + max(cond_depth(f.psi), cond_depth(f.phi))
    raise TypeError(f"not a formula node: {f!r}")


def is_box_free(f: Formula) -> bool:
    """True when no modality occurs (``indep`` desugars to one, so it counts)."""
    if isinstance(f, (Box, Dia, Indep)):
        return False
    if isinstance(f, Atom) or isinstance(f, (Top, Bot)):
        return True
    if isinstance(f, Not):
        return is_box_free(f.child)
    if isinstance(f, (Implies, Or, And, Iff)):
        return is_box_free(f.left) and is_box_free(f.right)
    if isinstance(f, Cond):
        return is_box_free(f.consequent) and is_box_free(f.antecedent)
    raise TypeError(f"not a formula node: {f!r}")


def atoms_of(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, (Top, Bot)):
        return set()
    if isinstance(f, (Not, Box, Dia)):
        return atoms_of(f.child)
    if isinstance(f, (Implies, Or, And, Iff)):
        return atoms_of(f.left) | atoms_of(f.right)
    if isinstance(f, Cond):
        return atoms_of(f.consequent) | atoms_of(f.antecedent)
    if isinstance(f, Indep):
        return atoms_of(f.psi) | atoms_of(f.phi)
    raise TypeError(f"not a formula node: {f!r}")

"""Exact rationals and sparse polynomials with rational coefficients.

Rationals are :class:`fractions.Fraction`.  :class:`SymPoly` is a sparse
multivariate polynomial over named symbols; a monomial is the sorted tuple
of its symbol names (repeated for powers), the empty tuple being the
constant monomial.  Quantities such as pi and the small parameter
``eps2`` are ordinary atomic symbols.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Union

from .errors import MissingSymbol, ParseError

Rational = Fraction
Monomial = tuple  # tuple[str, ...], sorted

# Symbols printed ahead of the others inside a monomial ("1/3*pi*b").
_LEADING = {"pi": 0, "eps2": 1}

_SYMBOL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


def as_rational(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction (never a float)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational number: {x!r}") from exc
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def format_rational(x: Fraction) -> str:
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


Scalar = Union[int, Fraction]


class SymPoly:
    """Immutable sparse polynomial ``{monomial: coefficient}``.

    Zero coefficients are never stored, so equality of polynomials is
    equality of the term maps.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Iterable[str], Scalar] | None = None):
        acc: dict[tuple, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            key = _canonical_monomial(mono)
            acc[key] = acc.get(key, Fraction(0)) + as_rational(coeff)
        self._terms = {k: v for k, v in sorted(acc.items()) if v != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "SymPoly":
        # terms already canonical; drop zeros and sort
        obj = cls.__new__(cls)
        obj._terms = {k: v for k, v in sorted(terms.items()) if v != 0}
        obj._hash = None
        return obj

    @classmethod
    def symbol(cls, name: str) -> "SymPoly":
        if not _SYMBOL_RE.match(name):
            raise ParseError(f"invalid symbol name {name!r}")
        return cls._raw({(name,): Fraction(1)})

    @classmethod
    def const(cls, c: Scalar) -> "SymPoly":
        return cls._raw({(): as_rational(c)})

    @classmethod
    def coerce(cls, x) -> "SymPoly":
        if isinstance(x, SymPoly):
            return x
        if isinstance(x, str):
            return parse_sympoly(x)
        return cls.const(x)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def symbols(self) -> set[str]:
        return {s for mono in self._terms for s in mono}

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, monomial: Iterable[str]) -> Fraction:
        return self._terms.get(_canonical_monomial(monomial), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        try:
            other = SymPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return SymPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return SymPoly._raw({k: -v for k, v in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = SymPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return SymPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        try:
            other = SymPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[tuple, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = tuple(sorted(m1 + m2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return SymPoly._raw(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "SymPoly":
        c = as_rational(c)
        return SymPoly._raw({k: v * c for k, v in self._terms.items()})

    def __truediv__(self, c):
        # division by rational constants only
        if isinstance(c, SymPoly):
            if c.symbols():
                return NotImplemented
            c = c.constant_term()
        c = as_rational(c)
        if c == 0:
            raise ZeroDivisionError("division of a SymPoly by zero")
        return self.scale(1 / c)

    # -- comparison / hashing --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, SymPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == SymPoly.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- evaluation and rendering ----------------------------------------

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        return sympoly_eval(self, assignment)

    def substitute(self, assignment: Mapping[str, "SymPoly | Scalar"]) -> "SymPoly":
        """Replace some symbols by polynomials; unassigned symbols are kept."""
        result = SymPoly()
        for mono, coeff in self._terms.items():
            term = SymPoly.const(coeff)
            for s in mono:
                term = term * (SymPoly.coerce(assignment[s]) if s in assignment else SymPoly.symbol(s))
            result = result + term
        return result

    def __str__(self):
        return render_sympoly(self)

    def __repr__(self):
        return f"SymPoly({render_sympoly(self)!r})"


def _canonical_monomial(mono) -> tuple:
    if isinstance(mono, str):
        mono = (mono,) if mono else ()
    mono = tuple(mono)
    for s in mono:
        if not isinstance(s, str) or not _SYMBOL_RE.match(s):
            raise ParseError(f"invalid symbol name {s!r}")
    return tuple(sorted(mono))


def sym(*names: str):
    """``sym("a")`` is one symbol, ``sym("a", "b")`` a tuple of them."""
    polys = tuple(SymPoly.symbol(n) for n in names)
    return polys[0] if len(polys) == 1 else polys


def sympoly_eval(p: SymPoly, assignment: Mapping[str, Scalar]) -> Fraction:
    total = Fraction(0)
    for mono, coeff in p._terms.items():
        term = coeff
        for s in mono:
            if s not in assignment:
                raise MissingSymbol(s)
            term *= as_rational(assignment[s])
        total += term
    return total


def _render_monomial(mono: tuple) -> str:
    return "*".join(sorted(mono, key=lambda s: (_LEADING.get(s, len(_LEADING)), s)))


def render_sympoly(p: SymPoly) -> str:
    """Canonical text: ``3*a + 1*eps2*a1 + 1/3*pi*b``.

    Terms follow the sorted monomial order; every non-constant term shows
    its coefficient, and negative terms are joined with `` - ``.
    """
    if not p._terms:
        return "0"
    parts = []
    for mono, coeff in p._terms.items():
        body = format_rational(abs(coeff))
        if mono:
            body += "*" + _render_monomial(mono)
        if not parts:
            parts.append(("-" if coeff < 0 else "") + body)
        else:
            parts.append((" - " if coeff < 0 else " + ") + body)
    return "".join(parts)


# -- parsing -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("sym", name))
        elif op in "+-*/()":
            tokens.append(("op", op))
        else:
            raise ParseError(f"unexpected character {op!r} in {text!r}")
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, what):
        raise ParseError(f"{what} in polynomial {self.text!r}")

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.symbols():
                    self.fail("division by a non-constant")
                if rhs.constant_term() == 0:
                    self.fail("division by zero")
                value = value / rhs.constant_term()
        return value

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.atom()

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return SymPoly.const(val)
        if kind == "sym":
            return SymPoly.symbol(val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                self.fail("missing ')'")
            return inner
        self.fail("unexpected end" if kind is None else f"unexpected token {val!r}")


def parse_sympoly(text: str) -> SymPoly:
    """Parse sums of products of rationals and symbols, e.g. ``2/3*pi*b - a``.

    Parentheses are allowed; division only by nonzero constants.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a polynomial string, got {type(text).__name__}")
    p = _Parser(text)
    if not p.tokens:
        raise ParseError("empty polynomial")
    value = p.expr()
    if p.i != len(p.tokens):
        p.fail(f"trailing token {p.tokens[p.i][1]!r}")
    return value

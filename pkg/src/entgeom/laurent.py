"""Multivariate Laurent polynomials with coefficients in Z/qZ.

Polynomials are immutable; the term map sends an exponent tuple (entries may be
negative) to its coefficient, stored as the least nonnegative residue.  Zero
coefficients are never stored, so the zero polynomial has an empty term map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

Exponent = tuple[int, ...]


class PolySyntaxError(ValueError):
    """Raised when polynomial text does not match the grammar."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        pointer = " " * pos + "^"
        super().__init__(f"{message} at position {pos}\n  {text}\n  {pointer}")


class RingMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class LaurentPoly:
    dim: int
    modulus: int
    _items: tuple[tuple[Exponent, int], ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")

    @classmethod
    def from_terms(cls, dim: int, modulus: int, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]]) -> LaurentPoly:
        acc: dict[Exponent, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != dim:
                raise ValueError(f"exponent {exp} does not have length {dim}")
            acc[exp] = (acc.get(exp, 0) + int(c)) % modulus
        return cls(dim, modulus, tuple(sorted((e, c) for e, c in acc.items() if c)))

    @classmethod
    def zero(cls, dim: int, modulus: int) -> LaurentPoly:
        return cls(dim, modulus)

    @classmethod
    def one(cls, dim: int, modulus: int) -> LaurentPoly:
        return cls.monomial((0,) * dim, modulus)

    @classmethod
    def monomial(cls, exp: Exponent, modulus: int, coeff: int = 1) -> LaurentPoly:
        return cls.from_terms(len(exp), modulus, {tuple(exp): coeff})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._items)

    def __iter__(self):
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def coeff(self, exp: Exponent) -> int:
        return self.terms.get(tuple(exp), 0)

    def _check(self, other: LaurentPoly) -> None:
        if self.dim != other.dim or self.modulus != other.modulus:
            raise RingMismatchError(
                f"ring mismatch: (d={self.dim}, q={self.modulus}) vs (d={other.dim}, q={other.modulus})"
            )

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        self._check(other)
        return LaurentPoly.from_terms(self.dim, self.modulus, list(self._items) + list(other._items))

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly.from_terms(self.dim, self.modulus, [(e, -c) for e, c in self._items])

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            return LaurentPoly.from_terms(self.dim, self.modulus, [(e, c * other) for e, c in self._items])
        return mul(self, other)

    __rmul__ = __mul__

    def shift(self, n: Exponent) -> LaurentPoly:
        """Multiply by the monomial u^n."""
        return LaurentPoly(
            self.dim,
            self.modulus,
            tuple(sorted((tuple(a + b for a, b in zip(e, n)), c) for e, c in self._items)),
        )

    def reduce(self, modulus: int) -> LaurentPoly:
        return LaurentPoly.from_terms(self.dim, modulus, self._items)

    def __str__(self) -> str:
        return render(self)


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    acc: dict[Exponent, int] = {}
    for ea, ca in a._items:
        for eb, cb in b._items:
            e = tuple(x + y for x, y in zip(ea, eb))
            acc[e] = (acc.get(e, 0) + ca * cb) % a.modulus
    return LaurentPoly(a.dim, a.modulus, tuple(sorted((e, c) for e, c in acc.items() if c)))


def support(f: LaurentPoly) -> frozenset[Exponent]:
    return frozenset(e for e, _ in f._items)


def is_monomial(f: LaurentPoly) -> bool:
    """True iff f has exactly one term.  Check ``not f`` separately for zero."""
    return len(f._items) == 1


# -- text form ---------------------------------------------------------------

def parse_poly(text: str, dim: int, modulus: int) -> LaurentPoly:
    """Parse ``1 + u1 + 2*u2^-1`` style text.

    Grammar: ``expr := term ('+' term)*``, ``term := coeff | coeff '*' mono | mono``,
    ``mono := factor+``, ``factor := 'u' INDEX ('^' SIGNED_INT)?``.
    """
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    p = _Parser(text, dim)
    terms = p.parse()
    return LaurentPoly.from_terms(dim, modulus, terms)


class _Parser:
    def __init__(self, text: str, dim: int):
        self.text = text
        self.dim = dim
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _error(self, msg: str):
        raise PolySyntaxError(msg, self.text, self.pos)

    def _int(self, signed: bool = False) -> int:
        self._skip()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
            self._skip()
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self._error("expected integer")
        return int(self.text[start:self.pos].replace(" ", ""))

    def parse(self) -> list[tuple[Exponent, int]]:
        if not self.text.strip():
            self._error("empty expression")
        terms = [self._term()]
        while self._peek() == "+":
            self.pos += 1
            terms.append(self._term())
        if self._peek():
            self._error(f"unexpected {self._peek()!r}")
        return terms

    def _term(self) -> tuple[Exponent, int]:
        c = self._peek()
        coeff = 1
        if c.isdigit():
            coeff = self._int()
            if self._peek() != "*":
                return (0,) * self.dim, coeff
            self.pos += 1
            if self._peek() != "u":
                self._error("expected monomial after '*'")
        elif c != "u":
            self._error("expected coefficient or monomial")
        exp = [0] * self.dim
        while self._peek() == "u":
            self.pos += 1
            idx_pos = self.pos
            idx = self._int()
            if not 1 <= idx <= self.dim:
                self.pos = idx_pos
                self._error(f"variable index u{idx} outside 1..{self.dim}")
            power = 1
            if self._peek() == "^":
                self.pos += 1
                power = self._int(signed=True)
            exp[idx - 1] += power
        return tuple(exp), coeff


def render(f: LaurentPoly) -> str:
    if not f:
        return "0"
    parts = []
    # grouped by ascending powers of u_d, then u_{d-1}, ..., then u1
    for exp, c in sorted(f._items, key=lambda t: t[0][::-1]):
        factors = []
        for i, e in enumerate(exp):
            if e == 1:
                factors.append(f"u{i + 1}")
            elif e:
                factors.append(f"u{i + 1}^{e}")
        mono = "".join(factors)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts)

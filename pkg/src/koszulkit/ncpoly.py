"""Group words, truncated noncommutative polynomials over F_p, Magnus expansion.

Monomials are tuples of letter indices ``0..d-1``; ``(0, 1)`` is ``X1X2``.
Commutators follow the left convention ``[x, y] = x y x^-1 y^-1``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Mapping, Sequence, Union

from .errors import (AlphabetMismatchError, IndexOutOfRangeError, NotInD2Error,
                     PrecisionError, WordSyntaxError)


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gen:
    i: int


@dataclass(frozen=True)
class Inverse:
    w: "Word"


@dataclass(frozen=True)
class Power:
    """``w**n``.  ``precision`` (if set) says ``n`` is only known mod p^precision."""
    w: "Word"
    n: int
    precision: int | None = None


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __init__(self, *factors):
        if len(factors) == 1 and isinstance(factors[0], (list, tuple)):
            factors = tuple(factors[0])
        object.__setattr__(self, "factors", tuple(factors))


@dataclass(frozen=True)
class Commutator:
    u: "Word"
    v: "Word"


Word = Union[Gen, Inverse, Power, Product, Commutator]


def iterated_commutator(x: Word, y: Word, m: int) -> Word:
    """``[x, [x, ... [x, y]]]`` with ``m`` copies of ``x``; ``m = 0`` gives ``y``."""
    w = y
    for _ in range(m):
        w = Commutator(x, w)
    return w


def max_generator(w: Word) -> int:
    if isinstance(w, Gen):
        return w.i
    if isinstance(w, (Inverse, Power)):
        return max_generator(w.w)
    if isinstance(w, Commutator):
        return max(max_generator(w.u), max_generator(w.v))
    return max((max_generator(f) for f in w.factors), default=-1)


def exponent_sums(w: Word, d: int) -> list[int]:
    """Image of ``w`` in the free abelian group Z^d."""
    out = [0] * d
    if isinstance(w, Gen):
        out[w.i] += 1
    elif isinstance(w, Inverse):
        out = [-x for x in exponent_sums(w.w, d)]
    elif isinstance(w, Power):
        out = [w.n * x for x in exponent_sums(w.w, d)]
    elif isinstance(w, Product):
        for f in w.factors:
            out = [a + b for a, b in zip(out, exponent_sums(f, d))]
    # commutators vanish
    return out


# ---------------------------------------------------------------------------
# Text grammar:  x3 | label | inv(w) | pow(w, n) | comm(w, w) | w * w | (w)
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_.]*)|(?P<sym>[(),*]))")


def _tokenize(s: str) -> list[tuple[str, str]]:
    pos, toks = 0, []
    s = s.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError(f"unexpected character at {pos}: {s[pos:pos + 10]!r}")
        kind = m.lastgroup
        toks.append((kind, m.group(kind)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, labels: Sequence[str] | None):
        self.toks = _tokenize(text)
        self.pos = 0
        self.labels = {lab: k for k, lab in enumerate(labels)} if labels is not None else None

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise WordSyntaxError(f"expected {value or 'token'}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def product(self) -> Word:
        factors = [self.atom()]
        while self.peek()[1] == "*":
            self.take("*")
            factors.append(self.atom())
        return factors[0] if len(factors) == 1 else Product(*factors)

    def atom(self) -> Word:
        kind, val = self.peek()
        if val == "(":
            self.take("(")
            w = self.product()
            self.take(")")
            return w
        if kind != "name":
            raise WordSyntaxError(f"expected a word, found {val!r}")
        self.take()
        if val in ("inv", "pow", "comm") and self.peek()[1] == "(":
            self.take("(")
            first = self.product()
            if val == "inv":
                self.take(")")
                return Inverse(first)
            self.take(",")
            if val == "pow":
                k, n = self.take()
                if k != "num":
                    raise WordSyntaxError(f"pow exponent must be an integer, found {n!r}")
                self.take(")")
                return Power(first, int(n))
            second = self.product()
            self.take(")")
            return Commutator(first, second)
        return Gen(self.generator(val))

    def generator(self, name: str) -> int:
        if self.labels is not None:
            if name not in self.labels:
                raise WordSyntaxError(f"unknown generator {name!r}")
            return self.labels[name]
        m = re.fullmatch(r"x(\d+)", name)
        if not m or int(m.group(1)) < 1:
            raise WordSyntaxError(f"generators are written x1, x2, ...; got {name!r}")
        return int(m.group(1)) - 1


def parse_word(text: str, labels: Sequence[str] | None = None) -> Word:
    """Parse the word grammar.  Without ``labels`` generators are ``x1..xd`` (1-based)."""
    p = _Parser(text, labels)
    w = p.product()
    if p.pos != len(p.toks):
        raise WordSyntaxError(f"trailing input: {p.peek()[1]!r}")
    return w


def format_word(w: Word, labels: Sequence[str] | None = None) -> str:
    if isinstance(w, Gen):
        return labels[w.i] if labels is not None else f"x{w.i + 1}"
    if isinstance(w, Inverse):
        return f"inv({format_word(w.w, labels)})"
    if isinstance(w, Power):
        return f"pow({format_word(w.w, labels)}, {w.n})"
    if isinstance(w, Commutator):
        return f"comm({format_word(w.u, labels)}, {format_word(w.v, labels)})"
    parts = []
    for f in w.factors:
        s = format_word(f, labels)
        parts.append(f"({s})" if isinstance(f, Product) else s)
    return " * ".join(parts)


# ---------------------------------------------------------------------------
# Truncated polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomogeneousPart:
    degree: int
    d: int
    vector: tuple[int, ...]

    def coefficient(self, monomial: Sequence[int]) -> int:
        return self.vector[monomial_index(monomial, self.d)]

    def is_zero(self) -> bool:
        return not any(self.vector)


def monomial_index(monomial: Sequence[int], d: int) -> int:
    """Position of a monomial among the d^k monomials of its length (lex order)."""
    idx = 0
    for letter in monomial:
        idx = idx * d + letter
    return idx


def monomial_from_index(idx: int, k: int, d: int) -> tuple[int, ...]:
    letters = []
    for _ in range(k):
        idx, r = divmod(idx, d)
        letters.append(r)
    return tuple(reversed(letters))


class NcPoly:
    """Element of F_p<X_1..X_d> truncated above total degree ``cap``."""

    __slots__ = ("p", "d", "cap", "coeffs")

    def __init__(self, p: int, d: int, cap: int, coeffs: Mapping[tuple, int] | None = None):
        self.p, self.d, self.cap = p, d, cap
        clean = {}
        for m, c in (coeffs or {}).items():
            m = tuple(m)
            c %= p
            if c and len(m) <= cap:
                clean[m] = c
        self.coeffs = clean

    @classmethod
    def one(cls, p, d, cap):
        return cls(p, d, cap, {(): 1})

    @classmethod
    def letter(cls, p, d, cap, i):
        return cls(p, d, cap, {(i,): 1})

    def _check(self, other: "NcPoly"):
        if (self.p, self.d, self.cap) != (other.p, other.d, other.cap):
            raise AlphabetMismatchError("polynomials over different alphabets, fields or caps")

    def __add__(self, other: "NcPoly") -> "NcPoly":
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return NcPoly(self.p, self.d, self.cap, out)

    def __neg__(self) -> "NcPoly":
        return NcPoly(self.p, self.d, self.cap, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + (-other)

    def scale(self, c: int) -> "NcPoly":
        return NcPoly(self.p, self.d, self.cap, {m: c * v for m, v in self.coeffs.items()})

    def __mul__(self, other: "NcPoly") -> "NcPoly":
        return nc_mul(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, NcPoly) and (self.p, self.d, self.cap) == (other.p, other.d, other.cap)
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.p, self.d, self.cap, frozenset(self.coeffs.items())))

    def constant(self) -> int:
        return self.coeffs.get((), 0)

    def homogeneous_part(self, k: int) -> HomogeneousPart:
        vec = [0] * (self.d ** k)
        for m, c in self.coeffs.items():
            if len(m) == k:
                vec[monomial_index(m, self.d)] = c
        return HomogeneousPart(k, self.d, tuple(vec))

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        return sorted(self.coeffs.items(), key=lambda mc: (len(mc[0]), mc[0]))

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d, "cap": self.cap,
                "terms": [[[i + 1 for i in m], c] for m, c in self.sorted_terms()]}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            neg = self.p > 2 and c > self.p // 2
            mag = self.p - c if neg else c
            body = "".join(f"X{i + 1}" for i in m)
            if not body:
                term = str(mag)
            else:
                term = body if mag == 1 else f"{mag}{body}"
            if not out:
                out.append(("-" if neg else "") + term)
            else:
                out.append(("- " if neg else "+ ") + term)
        return " ".join(out)

    __repr__ = __str__


def nc_mul(a: NcPoly, b: NcPoly) -> NcPoly:
    """Concatenation product; terms above the cap are dropped."""
    a._check(b)
    cap, p = a.cap, a.p
    out: dict[tuple, int] = {}
    for u, cu in a.coeffs.items():
        room = cap - len(u)
        for v, cv in b.coeffs.items():
            if len(v) <= room:
                m = u + v
                out[m] = (out.get(m, 0) + cu * cv) % p
    return NcPoly(p, a.d, cap, out)


def _binomial_mod_p(n: int, k: int, p: int, digits: int) -> int:
    # C(n, k) mod p depends only on n mod p^digits when k < p^digits (Lucas).
    n_red = n % (p ** digits)
    return math.comb(n_red, k) % p


def _powers(y: NcPoly, top: int) -> list[NcPoly]:
    out = [NcPoly.one(y.p, y.d, y.cap)]
    for _ in range(top):
        out.append(nc_mul(out[-1], y))
    return out


def _series_power(x: NcPoly, n: int) -> NcPoly:
    """``x**n`` for ``x`` with constant term 1, via the binomial series in ``x - 1``."""
    p, cap = x.p, x.cap
    y = x - NcPoly.one(p, x.d, cap)
    digits = 1
    while p ** digits <= cap:
        digits += 1
    out = NcPoly(p, x.d, cap)
    for k, yk in enumerate(_powers(y, cap)):
        c = _binomial_mod_p(n, k, p, digits)
        if c:
            out = out + yk.scale(c)
    return out


def _series_inverse(x: NcPoly) -> NcPoly:
    y = x - NcPoly.one(x.p, x.d, x.cap)
    out = NcPoly(x.p, x.d, x.cap)
    for k, yk in enumerate(_powers(y, x.cap)):
        out = out + (yk if k % 2 == 0 else -yk)
    return out


def magnus_expand(w: Word, d: int, p: int, cap: int) -> NcPoly:
    """Image of ``w`` under ``x_i -> 1 + X_i`` in F_p<<X>> modulo degree ``cap + 1``."""
    if isinstance(w, Gen):
        if not 0 <= w.i < d:
            raise IndexOutOfRangeError(f"generator index {w.i} outside alphabet of size {d}")
        return NcPoly(p, d, cap, {(): 1, (w.i,): 1})
    if isinstance(w, Inverse):
        return _series_inverse(magnus_expand(w.w, d, p, cap))
    if isinstance(w, Power):
        if w.precision is not None and w.precision < cap:
            raise PrecisionError(
                f"exponent known mod p^{w.precision}, need at least {cap} digits")
        return _series_power(magnus_expand(w.w, d, p, cap), w.n)
    if isinstance(w, Commutator):
        mu = magnus_expand(w.u, d, p, cap)
        mv = magnus_expand(w.v, d, p, cap)
        return nc_mul(nc_mul(mu, mv), nc_mul(_series_inverse(mu), _series_inverse(mv)))
    out = NcPoly.one(p, d, cap)
    for f in w.factors:
        out = nc_mul(out, magnus_expand(f, d, p, cap))
    return out


def initial_form(w: Word, d: int, p: int, cap: int) -> tuple[int, HomogeneousPart] | None:
    """Lowest nonzero homogeneous part of ``magnus(w) - 1``.

    Returns ``None`` when ``magnus(w) - 1`` vanishes through degree ``cap``,
    i.e. ``w`` lies in D_{cap+1}(F) as far as this truncation can see.
    """
    m = magnus_expand(w, d, p, cap)
    for k in range(1, cap + 1):
        part = m.homogeneous_part(k)
        if not part.is_zero():
            return k, part
    return None


def psi2(w: Word, d: int, p: int) -> tuple[int, ...]:
    """Degree-two Magnus coefficients of a relation in D_2(F), on the basis X_iX_j (row-major)."""
    m = magnus_expand(w, d, p, 2)
    if not m.homogeneous_part(1).is_zero():
        raise NotInD2Error("relation has a nonzero linear Magnus term")
    return m.homogeneous_part(2).vector


def in_d2(w: Word, d: int, p: int) -> bool:
    return magnus_expand(w, d, p, 1).homogeneous_part(1).is_zero()


def all_monomials(d: int, k: int):
    return cartesian(range(d), repeat=k)

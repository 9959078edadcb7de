"""Crossed homomorphisms into Z_p(1), computed in Z/p^M.

A crossed homomorphism ``f`` with respect to an orientation ``theta`` satisfies
``f(gh) = f(g) + theta(g) f(h)``; it is determined by its values on
generators, which may be prescribed freely on the free group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidSpecError, NonMonicError, PrecisionError
from .ncpoly import Commutator, Gen, Inverse, Power, Product, Word, iterated_commutator

DEFAULT_PRECISION = 8


@dataclass(frozen=True)
class PadicApprox:
    p: int
    value: int
    precision: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p ** self.precision)

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    def is_zero(self) -> bool:
        return self.value == 0

    def to_json(self) -> list[int]:
        return [self.value, self.precision]


@dataclass(frozen=True)
class Orientation:
    """Per-generator values of theta, as integer representatives mod p^precision."""
    p: int
    precision: int
    values: tuple[int, ...]

    def __post_init__(self):
        mod = self.p ** self.precision
        vals = tuple(v % mod for v in self.values)
        if any(v % self.p == 0 for v in vals):
            raise InvalidSpecError("orientation values must be p-adic units")
        object.__setattr__(self, "values", vals)

    @classmethod
    def trivial(cls, p: int, d: int, precision: int = DEFAULT_PRECISION) -> "Orientation":
        return cls(p, precision, (1,) * d)

    def torsion_free_image(self) -> bool:
        if self.p == 2:
            return all(v % 4 == 1 for v in self.values)
        return all(v % self.p == 1 for v in self.values)


@dataclass(frozen=True)
class CrossedHom:
    p: int
    precision: int
    values: tuple[int, ...]

    def __post_init__(self):
        mod = self.p ** self.precision
        object.__setattr__(self, "values", tuple(v % mod for v in self.values))

    @classmethod
    def dual(cls, p: int, d: int, i: int, precision: int = DEFAULT_PRECISION) -> "CrossedHom":
        """Value 1 on generator ``i`` and 0 on the others."""
        return cls(p, precision, tuple(1 if k == i else 0 for k in range(d)))


def geometric_sum(t: int, n: int, mod: int) -> int:
    """``1 + t + ... + t^(n-1)`` mod ``mod`` for ``n >= 0``, by halving ``n``."""
    if n == 0:
        return 0
    if n % 2:
        return (1 + t * geometric_sum(t, n - 1, mod)) % mod
    half = geometric_sum(t, n // 2, mod)
    return half * (1 + pow(t, n // 2, mod)) % mod


def _pair(f: CrossedHom, theta: Orientation, w: Word, mod: int) -> tuple[int, int]:
    """``(theta(w), f(w))`` mod ``mod``."""
    if isinstance(w, Gen):
        return theta.values[w.i] % mod, f.values[w.i] % mod
    if isinstance(w, Inverse):
        t, v = _pair(f, theta, w.w, mod)
        ti = pow(t, -1, mod)
        return ti, (-ti * v) % mod
    if isinstance(w, Power):
        t, v = _pair(f, theta, w.w, mod)
        n = w.n
        if n < 0:
            t = pow(t, -1, mod)
            v = (-t * v) % mod
            n = -n
        return pow(t, n, mod), geometric_sum(t, n, mod) * v % mod
    if isinstance(w, Commutator):
        expanded = _pair(f, theta, Product(w.u, w.v, Inverse(w.u), Inverse(w.v)), mod)
        tu, fu = _pair(f, theta, w.u, mod)
        tv, fv = _pair(f, theta, w.v, mod)
        closed = ((tu - 1) * fv - (tv - 1) * fu) % mod
        if expanded != (1, closed):
            raise ArithmeticError("commutator evaluation disagrees with the closed form")
        return expanded
    t, v = 1, 0
    for factor in w.factors:
        tf, vf = _pair(f, theta, factor, mod)
        v = (v + t * vf) % mod
        t = t * tf % mod
    return t, v


def _check_precision(f: CrossedHom, theta: Orientation) -> None:
    if f.p != theta.p or f.precision != theta.precision:
        raise PrecisionError(
            f"crossed hom (p={f.p}, M={f.precision}) and orientation "
            f"(p={theta.p}, M={theta.precision}) do not match")


def evaluate(f: CrossedHom, theta: Orientation, w: Word) -> PadicApprox:
    """``f(w)`` in Z/p^M."""
    _check_precision(f, theta)
    return PadicApprox(f.p, _pair(f, theta, w, f.p ** f.precision)[1], f.precision)


def theta_value(theta: Orientation, w: Word) -> int:
    """``theta(w)`` mod p^M; multiplicative in the word structure."""
    zero = CrossedHom(theta.p, theta.precision, (0,) * len(theta.values))
    return _pair(zero, theta, w, theta.p ** theta.precision)[0]


@dataclass
class ObstructionTable:
    p: int
    precision: int
    generators: list[str]
    relations: list[str]
    entries: list[list[int]]

    @property
    def obstructed(self) -> list[tuple[str, str, int]]:
        return [(g, r, v) for g, row in zip(self.generators, self.entries)
                for r, v in zip(self.relations, row) if v]

    @property
    def status(self) -> str:
        return "obstruction found" if self.obstructed else "no obstruction found"

    def to_json(self) -> dict:
        return {"p": self.p, "precision": self.precision, "status": self.status,
                "rows": [f"f_{g}" for g in self.generators], "columns": self.relations,
                "entries": [[[v, self.precision] for v in row] for row in self.entries]}


def cyclotomic_obstruction(presentation, precision: int = DEFAULT_PRECISION) -> ObstructionTable:
    """Evaluate each generator-dual crossed hom on each relation.

    ``presentation`` needs ``p``, ``generators``, ``relations`` (words) and
    ``theta`` (integer representatives).  A nonzero entry certifies that the
    dual of that generator has no lift to a crossed hom into Z_p(1) for the
    given orientation.  An all-zero table is only a necessary condition.
    """
    from .ncpoly import format_word, in_d2
    from .errors import NotInD2Error

    p, gens = presentation.p, list(presentation.generators)
    d = len(gens)
    for r in presentation.relations:
        if not in_d2(r, d, p):
            raise NotInD2Error(f"relation {format_word(r, gens)} is not in D_2")
    theta = Orientation(p, precision, tuple(presentation.theta))
    entries = []
    for i in range(d):
        f = CrossedHom.dual(p, d, i, precision)
        entries.append([evaluate(f, theta, r).value for r in presentation.relations])
    return ObstructionTable(p, precision, gens,
                            [format_word(r, gens) for r in presentation.relations], entries)


# ---------------------------------------------------------------------------
# Weierstrass polynomials
# ---------------------------------------------------------------------------

def _check_monic(alpha: Sequence[int]) -> None:
    if not alpha or alpha[-1] != 1:
        raise NonMonicError("coefficients (ascending) must end with the leading coefficient 1")


def weierstrass_eval(alpha: Sequence[int], q: PadicApprox) -> PadicApprox:
    """``℘(q)`` for ``℘ = alpha[0] + alpha[1] X + ... + X^h`` (ascending, monic)."""
    _check_monic(alpha)
    mod = q.modulus
    acc = 0
    for c in reversed(alpha):
        acc = (acc * q.value + c) % mod
    return PadicApprox(q.p, acc, q.precision)


def commutator_polynomial_word(alpha: Sequence[int], x: Word = Gen(0), y: Word = Gen(1)) -> Word:
    """``[x,_h y] [x,_{h-1} y]^alpha_{h-1} ... [x, y]^alpha_1  y^alpha_0``."""
    _check_monic(alpha)
    h = len(alpha) - 1
    factors = [iterated_commutator(x, y, h)]
    for m in range(h - 1, -1, -1):
        if alpha[m]:
            factors.append(Power(iterated_commutator(x, y, m), alpha[m]))
    return Product(*factors)


def root_multiplicity(alpha: Sequence[int], q: int) -> int:
    """Exact multiplicity of ``q`` as a root of the integer polynomial ``alpha``."""
    coeffs = list(alpha)
    m = 0
    while len(coeffs) > 1:
        # synthetic division by (X - q), descending Horner
        desc = coeffs[::-1]
        quotient, acc = [], 0
        for c in desc:
            acc = acc * q + c
            quotient.append(acc)
        if quotient[-1] != 0:
            break
        coeffs = quotient[:-1][::-1]
        m += 1
    return m


def weierstrass_report(alpha: Sequence[int], q: PadicApprox) -> dict:
    """Evaluate ``℘(q)`` both directly and on the commutator-polynomial word."""
    value = weierstrass_eval(alpha, q)
    p, M = q.p, q.precision
    theta = Orientation(p, M, (1 + q.value, 1))
    f_y = CrossedHom.dual(p, 2, 1, M)
    via_word = evaluate(f_y, theta, commutator_polynomial_word(alpha))
    if via_word != value:
        raise ArithmeticError("word evaluation disagrees with polynomial evaluation")
    mult = root_multiplicity(alpha, q.value)
    if not value.is_zero():
        status = "obstructed"
    elif mult >= 2:
        status = ("passes crossed-hom test; excluded because (X - q)^m with m >= 2 "
                  "would force torsion in ker(theta)^ab")
    else:
        status = "no obstruction found"
    return {"value": value.value, "precision": M, "root_multiplicity": mult, "status": status}

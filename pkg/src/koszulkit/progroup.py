"""Oriented pro-p groups of elementary type.

A ``GroupSpec`` is a small expression tree built from free groups, Demushkin
groups and theta-abelian groups by free products and cyclotomic fibre
products.  ``q`` encodes the image ``1 + q Z_p`` of the orientation, with
``q = 0`` for the trivial orientation.

Generator order is fixed: fibre products append their new generators after
the inner ones, and free products list the left factor first.  Cohomology
generators carry the label of the group generator followed by ``*``, so the
Koszul dual of the cohomology ring and the graded group algebra are equal as
presentations, labels included.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from .cocycle import DEFAULT_PRECISION, Orientation, theta_value
from .errors import (DegenerateRelationSpanError, FieldMismatchError, InvalidSpecError,
                     KoszulkitError, ModelOutOfScopeError, NotInD2Error, SpecFormatError,
                     UnsupportedSpecError)
from .fpfield import PrimeField, Subspace, annihilator
from .ncpoly import (Commutator, Gen, Inverse, Power, Product, Word, exponent_sums,
                     format_word, in_d2, parse_word, psi2)
from .quadalg import (QuadraticPresentation, demushkin_dual, direct_product, dual_numbers,
                      exterior, free_product, hilbert, koszul_dual, relations_equal,
                      skew_tensor, sym_tensor, symmetric, tensor_algebra)


# ---------------------------------------------------------------------------
# Specifications
# ---------------------------------------------------------------------------

def _is_power_of(q: int, p: int) -> bool:
    while q > 1 and q % p == 0:
        q //= p
    return q == 1


def _check_q(p: int, q: int, where: str) -> None:
    if q == 0:
        return
    if q < p or not _is_power_of(q, p):
        raise InvalidSpecError(f"{where}: q={q} must be 0 or a power of p={p} with q >= p")
    if p == 2 and q < 4:
        raise InvalidSpecError(f"{where}: for p = 2 the orientation needs q = 0 or q >= 4")


@dataclass(frozen=True)
class Free:
    d: int
    p: int
    q: int = 0  # theta(x1) = 1 + q

    def __post_init__(self):
        PrimeField(self.p)
        if self.d < 1:
            raise InvalidSpecError("a free group needs d >= 1")
        _check_q(self.p, self.q, "Free")


@dataclass(frozen=True)
class Demushkin:
    """Variant ``"i"`` is the generic case; ``"ii"``/``"iii"`` are the p = 2, q = 2 cases.

    ``f`` is the exponent in ``x^(-2^f)`` (``None`` stands for f = infinity) and
    ``alpha`` lies in 4Z; both only matter for the q = 2 variants.
    """
    d: int
    p: int
    q: int
    variant: str = "i"
    f: int | None = None
    alpha: int = 0

    def __post_init__(self):
        PrimeField(self.p)
        if self.d < 2:
            raise InvalidSpecError("a Demushkin group needs d >= 2")
        if self.variant == "i":
            if self.d % 2:
                raise InvalidSpecError("Demushkin case (i) needs an even d")
            _check_q(self.p, self.q, "Demushkin")
        elif self.variant in ("ii", "iii"):
            if self.p != 2 or self.q != 2:
                raise InvalidSpecError(f"Demushkin case ({self.variant}) needs p = 2 and q = 2")
            if self.variant == "ii" and (self.d % 2 == 0 or self.d < 3):
                raise InvalidSpecError("Demushkin case (ii) needs an odd d >= 3")
            if self.variant == "iii" and self.d % 2:
                raise InvalidSpecError("Demushkin case (iii) needs an even d")
            if self.f is not None and self.f < 2:
                raise InvalidSpecError("f must be at least 2 (or None for infinity)")
            if self.alpha % 4:
                raise InvalidSpecError("alpha must lie in 4Z")
        else:
            raise InvalidSpecError(f"unknown Demushkin variant {self.variant!r}")


@dataclass(frozen=True)
class ThetaAbelian:
    """``Z_p(1)^(d-1)`` extended by ``Z_p``; generators ``x0`` (acting) and ``x1..x_{d-1}``."""
    d: int
    p: int
    q: int

    def __post_init__(self):
        PrimeField(self.p)
        if self.d < 1:
            raise InvalidSpecError("a theta-abelian group needs d >= 1")
        _check_q(self.p, self.q, "ThetaAbelian")


@dataclass(frozen=True)
class FibreProduct:
    """``inner`` extended by ``c`` copies of ``Z_p(1)``."""
    inner: "GroupSpec"
    c: int

    def __post_init__(self):
        if self.c < 1:
            raise InvalidSpecError("a fibre product needs c >= 1")

    @property
    def p(self) -> int:
        return self.inner.p


@dataclass(frozen=True)
class FreeProduct:
    a: "GroupSpec"
    b: "GroupSpec"

    def __post_init__(self):
        if self.a.p != self.b.p:
            raise FieldMismatchError(f"free product of pro-{self.a.p} and pro-{self.b.p} groups")

    @property
    def p(self) -> int:
        return self.a.p


GroupSpec = Union[Free, Demushkin, ThetaAbelian, FibreProduct, FreeProduct]


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupPresentation:
    """Generators, relation words and integer representatives of theta.

    Every relation must lie in D_2 and be killed by theta (checked mod p^precision).
    """
    p: int
    generators: tuple[str, ...]
    relations: tuple[Word, ...]
    theta: tuple[int, ...]
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        PrimeField(self.p)
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "theta", tuple(int(t) for t in self.theta))
        d = len(self.generators)
        if len(set(self.generators)) != d:
            raise InvalidSpecError(f"generator labels must be distinct: {self.generators}")
        if len(self.theta) != d:
            raise InvalidSpecError("one orientation value per generator is required")
        orient = Orientation(self.p, self.precision, self.theta)
        for r in self.relations:
            if not in_d2(r, d, self.p):
                raise NotInD2Error(f"relation {format_word(r, self.generators)} is not in D_2")
            if theta_value(orient, r) != 1:
                raise InvalidSpecError(
                    f"theta does not kill the relation {format_word(r, self.generators)}")

    @property
    def d(self) -> int:
        return len(self.generators)

    def orientation(self, precision: int | None = None) -> Orientation:
        return Orientation(self.p, precision or self.precision, self.theta)

    def to_json(self) -> dict:
        return {"p": self.p, "generators": list(self.generators),
                "relations": [format_word(r, self.generators) for r in self.relations],
                "theta": list(self.theta)}

    @classmethod
    def from_json(cls, data: dict) -> "GroupPresentation":
        try:
            gens = [str(g) for g in data["generators"]]
            rels = [parse_word(str(s), gens) for s in data.get("relations", [])]
            theta = [int(t) for t in data.get("theta", [1] * len(gens))]
            return cls(int(data["p"]), tuple(gens), tuple(rels), tuple(theta))
        except (KeyError, TypeError) as exc:
            raise SpecFormatError(f"malformed presentation: {exc}") from exc


def kochloukova_zalesskii(p: int) -> GroupPresentation:
    """``<x, y, z | z^p [x, y]>`` with the trivial orientation."""
    x, y, z = Gen(0), Gen(1), Gen(2)
    return GroupPresentation(p, ("x", "y", "z"), (Product(Power(z, p), Commutator(x, y)),),
                             (1, 1, 1))


def _shift(w: Word, k: int) -> Word:
    if isinstance(w, Gen):
        return Gen(w.i + k)
    if isinstance(w, Inverse):
        return Inverse(_shift(w.w, k))
    if isinstance(w, Power):
        return Power(_shift(w.w, k), w.n, w.precision)
    if isinstance(w, Commutator):
        return Commutator(_shift(w.u, k), _shift(w.v, k))
    return Product(*(_shift(f, k) for f in w.factors))


def _product(factors: list[Word]) -> Word:
    return factors[0] if len(factors) == 1 else Product(*factors)


def _demushkin_presentation(s: Demushkin) -> tuple[list[str], list[Word], list[int]]:
    d = s.d
    x = [Gen(i) for i in range(d)]
    theta = [1] * d
    factors: list[Word] = []
    if s.variant == "i":
        if s.q:
            factors.append(Power(x[0], -s.q))
        factors += [Commutator(x[k], x[k + 1]) for k in range(0, d, 2)]
        theta[1] = 1 - s.q
    elif s.variant == "ii":
        factors.append(Power(x[0], -2))
        if s.f is not None:
            factors.append(Power(x[1], -2 ** s.f))
        factors += [Commutator(x[k], x[k + 1]) for k in range(1, d, 2)]
        theta[0] = -1
        theta[2] = 1 - 2 ** s.f if s.f is not None else 1
    else:
        factors += [Power(x[0], -2 - s.alpha), Commutator(x[0], x[1])]
        if d >= 4:
            if s.f is not None:
                factors.append(Power(x[2], -2 ** s.f))
            factors += [Commutator(x[k], x[k + 1]) for k in range(2, d, 2)]
            theta[3] = 1 - 2 ** s.f if s.f is not None else 1
        # With [x, y] = x y x^-1 y^-1 this value makes f(r) vanish for every crossed hom.
        theta[1] = -(1 + s.alpha)
    return [f"x{i + 1}" for i in range(d)], [_product(factors)], theta


def _fresh_labels(taken: Sequence[str], c: int) -> list[str]:
    out, k, used = [], 1, set(taken)
    while len(out) < c:
        if f"z{k}" not in used:
            out.append(f"z{k}")
        k += 1
    return out


def presentation_of(spec: GroupSpec) -> GroupPresentation:
    labels, relations, theta = _presentation_parts(spec)
    return GroupPresentation(spec.p, tuple(labels), tuple(relations), tuple(theta))


def _presentation_parts(spec: GroupSpec) -> tuple[list[str], list[Word], list[int]]:
    if isinstance(spec, Free):
        theta = [1] * spec.d
        theta[0] = 1 + spec.q
        return [f"x{i + 1}" for i in range(spec.d)], [], theta
    if isinstance(spec, Demushkin):
        return _demushkin_presentation(spec)
    if isinstance(spec, ThetaAbelian):
        d = spec.d
        x = [Gen(i) for i in range(d)]
        rels: list[Word] = [Product(x[0], x[i], Inverse(x[0]), Power(x[i], -(1 + spec.q)))
                            for i in range(1, d)]
        rels += [Commutator(x[i], x[j]) for i in range(1, d) for j in range(i + 1, d)]
        return [f"x{i}" for i in range(d)], rels, [1 + spec.q] + [1] * (d - 1)
    if isinstance(spec, FibreProduct):
        labels, rels, theta = _presentation_parts(spec.inner)
        n = len(labels)
        new = _fresh_labels(labels, spec.c)
        rels = list(rels)
        for k in range(spec.c):
            z = Gen(n + k)
            for i in range(n):
                t = theta[i]
                # x z x^-1 = z^theta(x), i.e. z^-(theta(x) - 1) [x, z] = 1
                rels.append(Commutator(Gen(i), z) if t == 1
                            else Product(Power(z, -(t - 1)), Commutator(Gen(i), z)))
        rels += [Commutator(Gen(n + a), Gen(n + b))
                 for a in range(spec.c) for b in range(a + 1, spec.c)]
        return labels + new, rels, list(theta) + [1] * spec.c
    if isinstance(spec, FreeProduct):
        la, ra, ta = _presentation_parts(spec.a)
        lb, rb, tb = _presentation_parts(spec.b)
        if set(la) & set(lb):
            la, lb = [f"a.{g}" for g in la], [f"b.{g}" for g in lb]
        return la + lb, list(ra) + [_shift(r, len(la)) for r in rb], list(ta) + list(tb)
    raise UnsupportedSpecError(f"unknown group specification {spec!r}")


def labels_of(spec: GroupSpec) -> list[str]:
    return _presentation_parts(spec)[0]


# ---------------------------------------------------------------------------
# Cohomology rings and graded group algebras
# ---------------------------------------------------------------------------

def _relabel(A: QuadraticPresentation, labels: Sequence[str]) -> QuadraticPresentation:
    return QuadraticPresentation(A.p, list(labels), A.relations)


def _out_of_scope(spec: GroupSpec) -> str | None:
    if isinstance(spec, Demushkin) and spec.variant != "i":
        return (f"Demushkin case ({spec.variant}) at p = 2 has q = 2, where chi cup chi is a "
                "nonzero Bockstein and the ring is not skew-commutative")
    if isinstance(spec, FibreProduct):
        return _out_of_scope(spec.inner)
    if isinstance(spec, FreeProduct):
        return _out_of_scope(spec.a) or _out_of_scope(spec.b)
    return None


def _cohomology_raw(spec: GroupSpec) -> QuadraticPresentation:
    p = spec.p
    if isinstance(spec, Free):
        return dual_numbers(spec.d, p)
    if isinstance(spec, Demushkin):
        cup = demushkin_dual(spec.d, p).relations
        return QuadraticPresentation(p, [f"x{i}" for i in range(spec.d)], annihilator(cup))
    if isinstance(spec, ThetaAbelian):
        return exterior(spec.d, p)
    if isinstance(spec, FibreProduct):
        return skew_tensor(_cohomology_raw(spec.inner), exterior(spec.c, p))
    return direct_product(_cohomology_raw(spec.a), _cohomology_raw(spec.b))


def cohomology_ring(spec: GroupSpec) -> QuadraticPresentation:
    """Closed-form quadratic presentation of ``H^*(G, F_p)``."""
    why = _out_of_scope(spec)
    if why:
        raise ModelOutOfScopeError(why)
    return _relabel(_cohomology_raw(spec), [g + "*" for g in labels_of(spec)])


def _gr_raw(spec: GroupSpec) -> QuadraticPresentation:
    p = spec.p
    if isinstance(spec, Free):
        return tensor_algebra(spec.d, p)
    if isinstance(spec, Demushkin):
        return demushkin_dual(spec.d, p)
    if isinstance(spec, ThetaAbelian):
        return symmetric(spec.d, p)
    if isinstance(spec, FibreProduct):
        return sym_tensor(_gr_raw(spec.inner), symmetric(spec.c, p))
    return free_product(_gr_raw(spec.a), _gr_raw(spec.b))


def gr_algebra(spec: GroupSpec) -> QuadraticPresentation:
    """Closed-form quadratic presentation of the graded group algebra ``gr(F_p[G])``."""
    why = _out_of_scope(spec)
    if why:
        raise ModelOutOfScopeError(why)
    return _relabel(_gr_raw(spec), labels_of(spec))


@dataclass
class DualityReport:
    relation_subspaces_equal: bool
    dims_equal_up_to: int
    dual_dims: tuple[int, ...]
    gr_dims: tuple[int, ...]
    cohomology_dims: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.relation_subspaces_equal and self.dims_equal_up_to == len(self.gr_dims) - 1

    def to_json(self) -> dict:
        return {"relation_subspaces_equal": self.relation_subspaces_equal,
                "dims_equal_up_to": self.dims_equal_up_to,
                "gr_dims": list(self.gr_dims), "dual_dims": list(self.dual_dims),
                "cohomology_dims": list(self.cohomology_dims)}


def verify_koszul_duality(spec: GroupSpec, N: int) -> DualityReport:
    H = cohomology_ring(spec)
    dual = koszul_dual(H)
    gr = gr_algebra(spec)
    a, b = hilbert(dual, N), hilbert(gr, N)
    up_to = -1
    for n in range(N + 1):
        if a[n] != b[n]:
            break
        up_to = n
    return DualityReport(relations_equal(dual, gr), up_to, a, b, hilbert(H, N))


def cohomology_from_presentation(pres: GroupPresentation) -> QuadraticPresentation:
    """``R1`` as the annihilator of the initial forms ``psi2(r)`` of the relations."""
    d, p = pres.d, pres.p
    images = Subspace(p, d * d, [list(psi2(r, d, p)) for r in pres.relations])
    if images.dim != len(pres.relations):
        raise DegenerateRelationSpanError(
            f"{len(pres.relations)} relations but their initial forms span only {images.dim} "
            "dimensions; the presentation is not minimal")
    return QuadraticPresentation(p, [g + "*" for g in pres.generators], annihilator(images))


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------

@dataclass
class GroupInvariants:
    d: int
    r: int
    abelianization: tuple[int, tuple[int, ...]]
    theta_centre_rank: int
    t1: int | None
    f1: int | None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        free, tors = self.abelianization
        return {"d": self.d, "r": self.r,
                "abelianization": {"free_rank": free, "torsion": list(tors)},
                "theta_centre_rank": self.theta_centre_rank, "t1": self.t1, "f1": self.f1,
                "notes": list(self.notes)}


def _p_part(n: int, p: int) -> int:
    out = 1
    while n and n % p == 0:
        n //= p
        out *= p
    return out


def abelianization_snf(pres: GroupPresentation) -> tuple[int, tuple[int, ...]]:
    """``(free rank, torsion exponents)`` of ``G^ab`` from the exponent-sum matrix."""
    d = pres.d
    if not pres.relations:
        return d, ()
    rows = [exponent_sums(r, d) for r in pres.relations]
    factors = invariant_factors(Matrix(rows), domain=ZZ)
    nonzero = [abs(int(f)) for f in factors if f != 0]
    torsion = sorted(q for q in (_p_part(f, pres.p) for f in nonzero) if q > 1)
    return d - len(nonzero), tuple(torsion)


def _theta_q(spec: GroupSpec) -> int:
    """``q`` with ``theta(G) = 1 + q Z_p`` (0 for trivial theta); 2 when -1 is in the image."""
    theta = _presentation_parts(spec)[2]
    vals = [_p_part(t - 1, spec.p) for t in theta if t != 1]
    return min(vals) if vals else 0


def _abelianization(spec: GroupSpec) -> tuple[int, tuple[int, ...]]:
    if isinstance(spec, Free):
        return spec.d, ()
    if isinstance(spec, Demushkin):
        return (spec.d - 1, (spec.q,)) if spec.q else (spec.d, ())
    if isinstance(spec, ThetaAbelian):
        return (1, (spec.q,) * (spec.d - 1)) if spec.q else (spec.d, ())
    if isinstance(spec, FibreProduct):
        free, tors = _abelianization(spec.inner)
        q = _theta_q(spec.inner)
        if q == 0:
            return free + spec.c, tors
        return free, tuple(sorted(tors + (q,) * spec.c))
    fa, ta = _abelianization(spec.a)
    fb, tb = _abelianization(spec.b)
    return fa + fb, tuple(sorted(ta + tb))


def _d(spec: GroupSpec) -> int:
    return len(labels_of(spec))


def _torsion_ranks(spec: GroupSpec, notes: list[str]) -> tuple[int, int] | None:
    """``(t1, f1)`` or ``None`` when theta is trivial or outside the torsion-free setting."""
    if isinstance(spec, Free):
        return (0, spec.d - 1) if spec.q else None
    if isinstance(spec, Demushkin):
        if spec.variant != "i" or not spec.q:
            return None
        return 1, spec.d - 2
    if isinstance(spec, ThetaAbelian):
        return (spec.d - 1, 0) if spec.q else None
    if isinstance(spec, FibreProduct):
        inner = _torsion_ranks(spec.inner, notes)
        return None if inner is None else (inner[0] + spec.c, inner[1])
    a = _torsion_ranks(spec.a, notes)
    b = _torsion_ranks(spec.b, notes)
    if a is None and b is None:
        return None
    if not any("free product" in n for n in notes):
        notes.append("t1/f1 of a free product: modeling choice, t1 adds up and f1 is "
                     "f1(a) + f1(b) + 1 (a theta-trivial factor counts as t1 = 0, f1 = d - 1)")
    a = a or (0, _d(spec.a) - 1)
    b = b or (0, _d(spec.b) - 1)
    return a[0] + b[0], a[1] + b[1] + 1


def _theta_centre_rank(spec: GroupSpec) -> int:
    if isinstance(spec, Free):
        if spec.d == 1:
            return 0 if spec.q else 1
        return 0
    if isinstance(spec, Demushkin):
        if spec.d == 2:  # one relation in two generators: the group is theta-abelian
            return 1 if _theta_q(spec) else 2
        return 0
    if isinstance(spec, ThetaAbelian):
        return spec.d - 1 if spec.q else spec.d
    if isinstance(spec, FibreProduct):
        return _theta_centre_rank(spec.inner) + spec.c
    return 0


def invariants(spec: GroupSpec) -> GroupInvariants:
    pres = presentation_of(spec)
    notes: list[str] = []
    ab = _abelianization(spec)
    check = abelianization_snf(pres)
    if ab != check:
        raise AssertionError(f"closed-form abelianization {ab} disagrees with {check}")
    tf = _torsion_ranks(spec, notes)
    t1, f1 = tf if tf is not None else (None, None)
    return GroupInvariants(pres.d, len(pres.relations), ab, _theta_centre_rank(spec),
                           t1, f1, notes)


# ---------------------------------------------------------------------------
# Zassenhaus dimensions
# ---------------------------------------------------------------------------

def _p_powers_upto(p: int, N: int) -> set[int]:
    out, k = set(), 1
    while k <= N:
        out.add(k)
        k *= p
    return out


def free_zassenhaus_dims(d: int, p: int, N: int) -> tuple[int, ...]:
    """Solve ``prod_n ((1 - t^{pn}) / (1 - t^n))^{l_n} = 1 / (1 - d t)`` for ``l_1..l_N``."""
    target = [d ** n for n in range(N + 1)]
    current = [1] + [0] * N
    dims = []
    for n in range(1, N + 1):
        ln = target[n] - current[n]
        if ln < 0:
            raise ArithmeticError("negative restricted Lie dimension")
        dims.append(ln)
        for _ in range(ln):
            # multiply by 1 + t^n + ... + t^{(p-1)n}
            nxt = current[:]
            for k in range(1, p):
                shift = k * n
                if shift > N:
                    break
                for m in range(N - shift + 1):
                    nxt[m + shift] += current[m]
            current = nxt
    return tuple(dims)


def restricted_pbw_series(dims: Sequence[int], p: int, N: int) -> tuple[int, ...]:
    """Hilbert series ``1..N`` of a restricted envelope with Lie dimensions ``dims[n-1]``."""
    series = [1] + [0] * N
    for n, ln in enumerate(dims, start=1):
        for _ in range(ln):
            nxt = series[:]
            for k in range(1, p):
                if k * n > N:
                    break
                for m in range(N - k * n + 1):
                    nxt[m + k * n] += series[m]
            series = nxt
    return tuple(series)


def zassenhaus_dims(spec: GroupSpec, N: int) -> tuple[int, ...]:
    """``dim D_i(G) / D_{i+1}(G)`` for ``1 <= i <= N``."""
    p = spec.p
    powers = _p_powers_upto(p, N)
    if isinstance(spec, ThetaAbelian):
        return tuple(spec.d if i in powers else 0 for i in range(1, N + 1))
    if isinstance(spec, Free):
        if spec.d == 1:
            return tuple(1 if i in powers else 0 for i in range(1, N + 1))
        return free_zassenhaus_dims(spec.d, p, N)
    if isinstance(spec, FibreProduct):
        inner = zassenhaus_dims(spec.inner, N)
        return tuple(v + (spec.c if i in powers else 0) for i, v in enumerate(inner, start=1))
    raise UnsupportedSpecError(
        f"Zassenhaus dimensions are only available for free, theta-abelian and fibre "
        f"products over them, not {type(spec).__name__}")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _node_from_json(node: dict, p: int) -> GroupSpec:
    if not isinstance(node, dict) or "kind" not in node:
        raise SpecFormatError(f"group node must be an object with a 'kind': {node!r}")
    kind = node["kind"]
    try:
        if kind == "free":
            return Free(int(node["d"]), p, int(node.get("q", 0)))
        if kind == "demushkin":
            f = node.get("f")
            return Demushkin(int(node["d"]), p, int(node["q"]), str(node.get("variant", "i")),
                             None if f is None else int(f), int(node.get("alpha", 0)))
        if kind in ("theta_abelian", "theta-abelian"):
            return ThetaAbelian(int(node["d"]), p, int(node["q"]))
        if kind in ("fibre", "fibre_product"):
            return FibreProduct(_node_from_json(node["inner"], p), int(node.get("c", 1)))
        if kind == "free_product":
            return FreeProduct(_node_from_json(node["a"], p), _node_from_json(node["b"], p))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, KoszulkitError):
            raise
        raise SpecFormatError(f"malformed {kind!r} node: {exc}") from exc
    raise SpecFormatError(f"unknown group kind {kind!r}")


def group_spec_from_json(data: dict) -> GroupSpec:
    """Parse ``{"p": 3, "group": {"kind": ..., ...}}``."""
    if not isinstance(data, dict) or "p" not in data or "group" not in data:
        raise SpecFormatError("a group file needs top-level keys 'p' and 'group'")
    try:
        p = int(data["p"])
    except (TypeError, ValueError) as exc:
        raise SpecFormatError(f"p must be an integer: {data['p']!r}") from exc
    return _node_from_json(data["group"], p)


def _node_to_json(spec: GroupSpec) -> dict:
    if isinstance(spec, Free):
        out = {"kind": "free", "d": spec.d}
        if spec.q:
            out["q"] = spec.q
        return out
    if isinstance(spec, Demushkin):
        out = {"kind": "demushkin", "d": spec.d, "q": spec.q}
        if spec.variant != "i":
            out.update(variant=spec.variant, f=spec.f, alpha=spec.alpha)
        return out
    if isinstance(spec, ThetaAbelian):
        return {"kind": "theta_abelian", "d": spec.d, "q": spec.q}
    if isinstance(spec, FibreProduct):
        return {"kind": "fibre", "c": spec.c, "inner": _node_to_json(spec.inner)}
    return {"kind": "free_product", "a": _node_to_json(spec.a), "b": _node_to_json(spec.b)}


def group_spec_to_json(spec: GroupSpec) -> dict:
    return {"p": spec.p, "group": _node_to_json(spec)}

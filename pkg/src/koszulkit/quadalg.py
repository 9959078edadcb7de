"""Quadratic graded algebras over F_p given by generators and a relation subspace.

A presentation is ``T(V) / (R1)`` with ``R1 <= V (x) V``.  Coordinates on
``V^(x)n`` are monomials in lex order, encoded as base-``d`` integers with the
first letter most significant (so ``e_i (x) e_j`` has index ``i*d + j``).

Components are built degree by degree.  ``A_n`` is the quotient of
``A_{n-1} (x) V`` by the image of ``A_{n-2} (x) R1``; that image is kept in
fully reduced echelon form with the smallest monomial as pivot.  Because lex
order on words of a fixed length is compatible with concatenation, the
surviving (non-pivot) monomials are exactly the non-pivot coordinates of the
RREF of the full ideal component ``I_n``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, FieldMismatchError, InvalidSpecError
from .fpfield import (FpMatrix, PrimeField, SparseEchelon, Subspace, annihilator,
                      subspace_equal)


class QuadraticPresentation:
    """``F_p<generators> / (relations)``; immutable apart from a degree memo."""

    def __init__(self, p: int, generators: Sequence[str], relations: Subspace | Sequence[Sequence[int]] = ()):
        PrimeField(p)
        generators = tuple(generators)
        if len(set(generators)) != len(generators):
            raise InvalidSpecError(f"generator labels must be distinct: {generators}")
        d = len(generators)
        if not isinstance(relations, Subspace):
            relations = Subspace(p, d * d, [list(v) for v in relations])
        if relations.p != p:
            raise FieldMismatchError("relation subspace over a different field")
        if relations.ambient_dim != d * d:
            raise DimensionMismatchError(
                f"relations live in dimension {relations.ambient_dim}, expected {d * d}")
        self.p = p
        self.generators = generators
        self.relations = relations
        self._engine = _Components(self)

    @property
    def d(self) -> int:
        return len(self.generators)

    def __eq__(self, other) -> bool:
        return (isinstance(other, QuadraticPresentation) and self.p == other.p
                and self.generators == other.generators and self.relations == other.relations)

    def __hash__(self) -> int:
        return hash((self.p, self.generators, self.relations))

    def __repr__(self) -> str:
        return (f"QuadraticPresentation(p={self.p}, generators={list(self.generators)}, "
                f"dim R1={self.relations.dim})")

    def to_json(self) -> dict:
        return {"p": self.p, "generators": list(self.generators),
                "relations": self.relations.vectors()}

    @classmethod
    def from_json(cls, data: dict) -> "QuadraticPresentation":
        return cls(int(data["p"]), [str(g) for g in data["generators"]],
                   [[int(c) for c in row] for row in data.get("relations", [])])


@dataclass
class ComponentBasis:
    """``A_n`` described by its normal monomials; ``ideal`` is ``I_n`` in F_p^{d^n}."""
    presentation: QuadraticPresentation = field(repr=False)
    degree: int
    normal: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.normal)

    @property
    def monomials(self) -> list[tuple[int, ...]]:
        d, n = self.presentation.d, self.degree
        out = []
        for code in self.normal:
            letters = []
            for _ in range(n):
                code, r = divmod(code, d)
                letters.append(r)
            out.append(tuple(reversed(letters)))
        return out

    @cached_property
    def ideal(self) -> Subspace:
        """Rows ``w - NF(w)`` over the non-normal words ``w``; this is already the RREF of I_n."""
        A, n = self.presentation, self.degree
        size = A.d ** n
        normal = set(self.normal)
        rows = []
        eng = A._engine
        for w in range(size):
            if w in normal:
                continue
            row = np.zeros(size, dtype=np.int64)
            row[w] = 1
            for u, c in eng.word_nf(w, n).items():
                row[u] = (row[u] - c) % A.p
            rows.append(row)
        return Subspace(A.p, size, np.array(rows, dtype=np.int64).reshape(len(rows), size))


class _Components:
    """Per-presentation memo of normal monomials and rewriting rules per degree."""

    def __init__(self, A: QuadraticPresentation):
        self.A = A
        self.p, self.d = A.p, A.d
        self.normal: list[list[int]] = [[0], list(range(self.d))]
        self.index: list[dict[int, int]] = [{0: 0}, {i: i for i in range(self.d)}]
        self.rules: list[dict[int, dict[int, int]]] = [{}, {}]
        self._nf_cache: dict[tuple[int, int], dict[int, int]] = {}
        self._mult_cache: dict[tuple[int, int], list[dict[int, int]]] = {}
        self._lock = threading.Lock()
        rel = A.relations.basis.array
        self._rel_rows = [{int(k): int(row[k]) for k in np.flatnonzero(row)} for row in rel]

    def ensure(self, n: int) -> None:
        if len(self.normal) > n:
            return
        with self._lock:
            while len(self.normal) <= n:
                self._build(len(self.normal))

    def _build(self, n: int) -> None:
        d, p = self.d, self.p
        ech = SparseEchelon(p)
        for a in self.normal[n - 2]:
            for rel in self._rel_rows:
                row: dict[int, int] = {}
                for pair, c in rel.items():
                    i, j = divmod(pair, d)
                    for u, cu in self._extend({a: 1}, n - 2, i).items():
                        key = u * d + j
                        row[key] = (row.get(key, 0) + c * cu) % p
                ech.insert(row)
        rules = {piv: {c: (-v) % p for c, v in row.items() if c != piv}
                 for piv, row in ech.rows.items()}
        normal = [u * d + j for u in self.normal[n - 1] for j in range(d)
                  if u * d + j not in rules]
        normal.sort()
        self.rules.append(rules)
        self.index.append({c: k for k, c in enumerate(normal)})
        self.normal.append(normal)

    def _extend(self, vec: dict[int, int], n: int, letter: int) -> dict[int, int]:
        """Normal form of ``vec * X_letter``, where ``vec`` is normal in degree ``n``."""
        d, p = self.d, self.p
        rules = self.rules[n + 1]
        out: dict[int, int] = {}
        for u, c in vec.items():
            key = u * d + letter
            rule = rules.get(key)
            if rule is None:
                out[key] = (out.get(key, 0) + c) % p
            else:
                for t, ct in rule.items():
                    out[t] = (out.get(t, 0) + c * ct) % p
        return {k: v for k, v in out.items() if v}

    def extend(self, vec: dict[int, int], n: int, letter: int) -> dict[int, int]:
        self.ensure(n + 1)
        return self._extend(vec, n, letter)

    def word_nf(self, code: int, n: int) -> dict[int, int]:
        if n <= 1:
            return {code: 1}
        key = (n, code)
        hit = self._nf_cache.get(key)
        if hit is None:
            prefix, last = divmod(code, self.d)
            hit = self.extend(self.word_nf(prefix, n - 1), n - 1, last)
            if len(self._nf_cache) < 200_000:
                self._nf_cache[key] = hit
        return hit

    def product_table(self, i: int, j: int) -> list[dict[int, int]]:
        """Entry ``ui * dim A_j + vj``: normal form of ``u*v`` as {index in A_{i+j}: coeff}."""
        key = (i, j)
        hit = self._mult_cache.get(key)
        if hit is not None:
            return hit
        self.ensure(i + j)
        d = self.d
        target = self.index[i + j]
        table = []
        v_words = []
        for v in self.normal[j]:
            letters = []
            for _ in range(j):
                v, r = divmod(v, d)
                letters.append(r)
            v_words.append(letters[::-1])
        for u in self.normal[i]:
            for letters in v_words:
                vec, deg = {u: 1}, i
                for letter in letters:
                    vec = self._extend(vec, deg, letter)
                    deg += 1
                table.append({target[c]: v for c, v in vec.items()})
        self._mult_cache[key] = table
        return table


# ---------------------------------------------------------------------------
# Degreewise data
# ---------------------------------------------------------------------------

def component(A: QuadraticPresentation, n: int) -> ComponentBasis:
    if n < 0:
        raise ValueError("degree must be non-negative")
    A._engine.ensure(n)
    return ComponentBasis(A, n, tuple(A._engine.normal[n]))


def hilbert(A: QuadraticPresentation, N: int) -> tuple[int, ...]:
    """Graded dimensions ``(dim A_0, ..., dim A_N)``."""
    A._engine.ensure(N)
    return tuple(len(A._engine.normal[n]) for n in range(N + 1))


def normal_form(A: QuadraticPresentation, n: int, v: Sequence[int]) -> list[int]:
    """Coordinates of the image of ``v in V^(x)n`` on the normal monomials of A_n."""
    d, p = A.d, A.p
    if len(v) != d ** n:
        raise DimensionMismatchError(f"expected a vector of length {d ** n}")
    eng = A._engine
    eng.ensure(n)
    index = eng.index[n]
    out = [0] * len(index)
    for w, c in enumerate(v):
        c %= p
        if not c:
            continue
        for u, cu in eng.word_nf(w, n).items():
            k = index[u]
            out[k] = (out[k] + c * cu) % p
    return out


def mult_map(A: QuadraticPresentation, i: int, j: int) -> FpMatrix:
    """Matrix of ``A_i (x) A_j -> A_{i+j}``; column ``a * dim A_j + b`` is ``u_a * v_b``."""
    table = A._engine.product_table(i, j)
    rows = len(A._engine.normal[i + j])
    m = np.zeros((rows, len(table)), dtype=np.int64)
    for col, vec in enumerate(table):
        for r, c in vec.items():
            m[r, col] = c
    return FpMatrix(A.p, m, cols=len(table))


# ---------------------------------------------------------------------------
# Canonical families
# ---------------------------------------------------------------------------

def _labels(prefix: str, d: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(d)]


def _unit(d: int, i: int, j: int, c: int = 1) -> dict[int, int]:
    return {i * d + j: c}


def _vectors(d: int, sparse_rows: list[dict[int, int]]) -> list[list[int]]:
    out = []
    for row in sparse_rows:
        v = [0] * (d * d)
        for k, c in row.items():
            v[k] += c
        out.append(v)
    return out


def tensor_algebra(d: int, p: int, prefix: str = "x") -> QuadraticPresentation:
    return QuadraticPresentation(p, _labels(prefix, d))


def dual_numbers(d: int, p: int, prefix: str = "x") -> QuadraticPresentation:
    return QuadraticPresentation(p, _labels(prefix, d), Subspace.full(p, d * d))


def symmetric(d: int, p: int, prefix: str = "x") -> QuadraticPresentation:
    rows = [{i * d + j: 1, j * d + i: -1} for i in range(d) for j in range(i + 1, d)]
    return QuadraticPresentation(p, _labels(prefix, d), _vectors(d, rows))


polynomial = symmetric


def exterior(d: int, p: int, prefix: str = "x") -> QuadraticPresentation:
    rows = [_unit(d, i, i) for i in range(d)]
    rows += [{i * d + j: 1, j * d + i: 1} for i in range(d) for j in range(i + 1, d)]
    return QuadraticPresentation(p, _labels(prefix, d), _vectors(d, rows))


def demushkin_dual(d: int, p: int, prefix: str = "X") -> QuadraticPresentation:
    """Free algebra modulo the single relation ``[X1,X2] + ... + [X_{d-1},X_d]``."""
    if d % 2:
        raise InvalidSpecError("demushkin_dual needs an even number of generators")
    row: dict[int, int] = {}
    for k in range(0, d, 2):
        row[k * d + k + 1] = 1
        row[(k + 1) * d + k] = -1
    return QuadraticPresentation(p, _labels(prefix, d), _vectors(d, [row]))


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def _embed(A: QuadraticPresentation, offset: int, d: int) -> list[list[int]]:
    dA = A.d
    out = []
    for row in A.relations.basis.array:
        v = [0] * (d * d)
        for k in np.flatnonzero(row):
            i, j = divmod(int(k), dA)
            v[(i + offset) * d + (j + offset)] = int(row[k])
        out.append(v)
    return out


def _combine(A: QuadraticPresentation, B: QuadraticPresentation, cross: int | None,
             both_orders: bool = False) -> QuadraticPresentation:
    if A.p != B.p:
        raise FieldMismatchError(f"cannot combine algebras over F_{A.p} and F_{B.p}")
    dA, dB = A.d, B.d
    d = dA + dB
    labels = [f"A.{g}" for g in A.generators] + [f"B.{g}" for g in B.generators]
    rows = _embed(A, 0, d) + _embed(B, dA, d)
    if both_orders:
        for a in range(dA):
            for b in range(dB):
                for k in (a * d + dA + b, (dA + b) * d + a):
                    v = [0] * (d * d)
                    v[k] = 1
                    rows.append(v)
    elif cross is not None:
        for a in range(dA):
            for b in range(dB):
                v = [0] * (d * d)
                v[a * d + dA + b] = 1
                v[(dA + b) * d + a] = cross % A.p
                rows.append(v)
    return QuadraticPresentation(A.p, labels, rows)


def direct_product(A: QuadraticPresentation, B: QuadraticPresentation) -> QuadraticPresentation:
    """``A ⊓ B``: mixed products vanish, so ``C_n = A_n ⊕ B_n`` for ``n >= 1``."""
    return _combine(A, B, None, both_orders=True)


def free_product(A: QuadraticPresentation, B: QuadraticPresentation) -> QuadraticPresentation:
    return _combine(A, B, None)


def sym_tensor(A: QuadraticPresentation, B: QuadraticPresentation) -> QuadraticPresentation:
    """``A ⊗^1 B``: generators of A and B commute."""
    return _combine(A, B, -1)


def skew_tensor(A: QuadraticPresentation, B: QuadraticPresentation) -> QuadraticPresentation:
    """``A ⊗^-1 B``: generators of A and B anticommute."""
    return _combine(A, B, 1)


def koszul_dual(A: QuadraticPresentation) -> QuadraticPresentation:
    labels = [g[:-1] if g.endswith("*") else g + "*" for g in A.generators]
    return QuadraticPresentation(A.p, labels, annihilator(A.relations))


def relations_equal(A: QuadraticPresentation, B: QuadraticPresentation) -> bool:
    """Equality of relation subspaces under the positional generator identification."""
    if A.d != B.d or A.p != B.p:
        return False
    return subspace_equal(A.relations, B.relations)

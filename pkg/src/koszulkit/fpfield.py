"""Exact linear algebra over the prime field F_p.

Matrices are dense numpy ``int64`` arrays of residues.  Since ``p <= 2**31``,
a product of two residues fits in 62 bits, so row operations never overflow.
Subspaces are stored by their reduced row echelon basis, which makes equality
and hashing a comparison of arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, FieldMismatchError, NotPrimeError

MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p > MAX_PRIME:
            raise NotPrimeError(f"{self.p} is not a supported prime")

    def reduce(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        return pow(a % self.p, -1, self.p)

    def neg(self, a: int) -> int:
        return (-a) % self.p


class FpMatrix:
    """Immutable dense matrix over F_p."""

    __slots__ = ("p", "_a")

    def __init__(self, p: int, data, cols: int | None = None):
        a = np.array(data, dtype=np.int64)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, cols or 0)
        if a.ndim != 2:
            raise DimensionMismatchError("matrix data must be two-dimensional")
        if cols is not None and a.shape[1] != cols:
            raise DimensionMismatchError(f"expected {cols} columns, got {a.shape[1]}")
        a = np.mod(a, p)
        a.setflags(write=False)
        self.p = p
        self._a = a

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the residues."""
        return self._a

    def entries(self) -> list[int]:
        return [int(x) for x in self._a.ravel()]

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p:
            raise FieldMismatchError("matrices over different fields")
        if self.cols != other.rows:
            raise DimensionMismatchError("incompatible shapes for product")
        # Blocked to keep partial sums below 2**63.
        step = max(1, (2**62) // max(1, (self.p - 1) ** 2))
        acc = np.zeros((self.rows, other.cols), dtype=np.int64)
        for k in range(0, self.cols, step):
            acc = (acc + self._a[:, k:k + step] @ other._a[k:k + step, :]) % self.p
        return FpMatrix(self.p, acc)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FpMatrix) and self.p == other.p
                and self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a)))

    def __hash__(self) -> int:
        return hash((self.p, self._a.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.tolist()})"


def _rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(a, dtype=np.int64, copy=True) % p
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r]) % p) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: FpMatrix) -> tuple[int, FpMatrix, tuple[int, ...]]:
    """Reduced row echelon form by Gauss-Jordan with first-nonzero pivoting.

    Returns ``(rank, reduced, pivots)``; ``reduced`` has the same shape as ``m``
    with the zero rows at the bottom.
    """
    red, piv = _rref_array(m.array, m.p)
    return len(piv), FpMatrix(m.p, red), tuple(piv)


def rank(m: FpMatrix) -> int:
    return rref(m)[0]


def rank_array(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(_rref_array(a, p)[1])


class Subspace:
    """A subspace of F_p^n, stored by its canonical RREF basis."""

    __slots__ = ("p", "ambient_dim", "basis", "pivots")

    def __init__(self, p: int, ambient_dim: int, vectors=()):
        arr = np.array(vectors, dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, ambient_dim), dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.shape[1] != ambient_dim:
            raise DimensionMismatchError(
                f"vectors of length {arr.shape[1]} in ambient dimension {ambient_dim}")
        red, piv = _rref_array(arr, p)
        self.p = p
        self.ambient_dim = ambient_dim
        self.basis = FpMatrix(p, red[:len(piv)], cols=ambient_dim)
        self.pivots = tuple(piv)

    @classmethod
    def zero(cls, p: int, n: int) -> "Subspace":
        return cls(p, n)

    @classmethod
    def full(cls, p: int, n: int) -> "Subspace":
        return cls(p, n, np.eye(n, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list[list[int]]:
        return self.basis.tolist()

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.p == other.p
                and self.ambient_dim == other.ambient_dim and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.p, self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, n={self.ambient_dim}, dim={self.dim})"


def _check_same(a: Subspace, b: Subspace) -> None:
    if a.p != b.p:
        raise FieldMismatchError(f"subspaces over F_{a.p} and F_{b.p}")
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(
            f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")


def annihilator(s: Subspace) -> Subspace:
    """Vectors ``f`` with ``sum_k f_k v_k = 0`` for every ``v`` in ``s``.

    Coordinate ``k`` of the dual space is paired with coordinate ``k``.
    """
    n, p = s.ambient_dim, s.p
    piv = s.pivots
    free = [c for c in range(n) if c not in set(piv)]
    B = s.basis.array
    out = np.zeros((len(free), n), dtype=np.int64)
    for row, f in enumerate(free):
        out[row, f] = 1
        for k, c in enumerate(piv):
            out[row, c] = (-B[k, f]) % p
    return Subspace(p, n, out)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return Subspace(a.p, a.ambient_dim, np.vstack([a.basis.array, b.basis.array]))


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return annihilator(subspace_sum(annihilator(a), annihilator(b)))


def contains(a: Subspace, v: Sequence[int]) -> bool:
    if len(v) != a.ambient_dim:
        raise DimensionMismatchError("vector length does not match ambient dimension")
    w = np.array(v, dtype=np.int64) % a.p
    B = a.basis.array
    for k, c in enumerate(a.pivots):
        if w[c]:
            w = (w - w[c] * B[k]) % a.p
    return not w.any()


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    _check_same(a, b)
    return a == b


def quotient_basis(ambient_dim: int, s: Subspace) -> tuple[int, ...]:
    """Non-pivot coordinates of ``s``; their images span F_p^n / s."""
    if s.ambient_dim != ambient_dim:
        raise DimensionMismatchError("subspace lives in a different ambient space")
    piv = set(s.pivots)
    return tuple(c for c in range(ambient_dim) if c not in piv)


def span(p: int, ambient_dim: int, vectors: Iterable[Sequence[int]]) -> Subspace:
    return Subspace(p, ambient_dim, [list(v) for v in vectors])


class SparseEchelon:
    """Incremental fully reduced echelon form over F_p with dict rows.

    Every stored row has coefficient 1 at its pivot (its smallest column) and
    zero at every other pivot column, so the result is the canonical RREF of
    the span of the inserted rows.
    """

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[int, dict[int, int]] = {}
        self._occurs: dict[int, set[int]] = {}

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        p = self.p
        out = {c: v % p for c, v in row.items() if v % p}
        for c in [c for c in out if c in self.rows]:
            f = out.get(c)
            if not f:
                continue
            for cc, vv in self.rows[c].items():
                nv = (out.get(cc, 0) - f * vv) % p
                if nv:
                    out[cc] = nv
                else:
                    out.pop(cc, None)
        return out

    def insert(self, row: dict[int, int]) -> int | None:
        """Add ``row`` to the span; returns the new pivot or ``None`` if dependent."""
        p = self.p
        r = self.reduce(row)
        if not r:
            return None
        piv = min(r)
        inv = pow(r[piv], -1, p)
        if inv != 1:
            r = {c: v * inv % p for c, v in r.items()}
        for other in list(self._occurs.pop(piv, ())):
            orow = self.rows[other]
            f = orow.get(piv)
            if not f:
                continue
            for c, v in r.items():
                nv = (orow.get(c, 0) - f * v) % p
                if nv:
                    if c not in orow:
                        self._occurs.setdefault(c, set()).add(other)
                    orow[c] = nv
                else:
                    if c in orow:
                        del orow[c]
                        occ = self._occurs.get(c)
                        if occ is not None:
                            occ.discard(other)
        self.rows[piv] = r
        for c in r:
            if c != piv:
                self._occurs.setdefault(c, set()).add(piv)
        return piv

    @property
    def rank(self) -> int:
        return len(self.rows)

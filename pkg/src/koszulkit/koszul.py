"""Truncated Koszulity certification through the reduced bar complex.

``Tor^A_{i,j}(F, F)`` is the homology of the normalized bar complex
``B_{i,j} = ⊕ A_{j_1} ⊗ ... ⊗ A_{j_i}`` (all ``j_k >= 1``, ``Σ j_k = j``) with
``d(a_1|...|a_i) = Σ_{k=1}^{i-1} (-1)^k a_1|...|a_k a_{k+1}|...|a_i``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ResourceLimitError
from .fpfield import rank_array
from .quadalg import QuadraticPresentation, hilbert, koszul_dual

DEFAULT_RESOURCE_LIMIT = 2_000_000


def resource_limit() -> int:
    env = os.environ.get("KOSZULKIT_RESOURCE_LIMIT")
    return int(env) if env else DEFAULT_RESOURCE_LIMIT


@dataclass
class TorTable:
    imax: int
    jmax: int
    dims: dict[tuple[int, int], int]
    chain_dims: dict[tuple[int, int], int] = field(default_factory=dict, repr=False)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.dims.get(ij, 0)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.imax, self.jmax) + 1)]

    def off_diagonal_nonzero(self) -> list[tuple[int, int]]:
        return sorted(((i, j) for (i, j), v in self.dims.items() if v and i != j),
                      key=lambda ij: (ij[1], ij[0]))

    def to_json(self) -> dict:
        grid = [[self[i, j] for j in range(self.jmax + 1)] for i in range(self.imax + 1)]
        return {"imax": self.imax, "jmax": self.jmax, "tor": grid}

    def render(self) -> str:
        """Text grid (rows i, columns j); diagonal entries are bracketed."""
        width = max(3, max((len(str(v)) for v in self.dims.values()), default=1) + 2)
        head = "i\\j " + "".join(f"{j:>{width}}" for j in range(self.jmax + 1))
        lines = [head]
        for i in range(self.imax + 1):
            cells = []
            for j in range(self.jmax + 1):
                v = self[i, j]
                cells.append(f"{f'[{v}]' if i == j else str(v):>{width}}")
            lines.append(f"{i:>3} " + "".join(cells))
        return "\n".join(lines)


@dataclass
class KoszulReport:
    bound: int
    koszul_up_to: int
    witness: tuple[int, int] | None
    hilbert_defect: list[int]
    tor: TorTable | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = {"bound": self.bound, "koszul_up_to": self.koszul_up_to,
               "witness": list(self.witness) if self.witness else None,
               "hilbert_defect": self.hilbert_defect}
        if self.tor is not None:
            out["tor"] = self.tor.to_json()["tor"]
        return out


@lru_cache(maxsize=None)
def compositions(j: int, i: int) -> tuple[tuple[int, ...], ...]:
    """Ordered compositions of ``j`` into ``i`` positive parts, lexicographically."""
    if i == 0:
        return ((),) if j == 0 else ()
    out = []
    for first in range(1, j - i + 2):
        for rest in compositions(j - first, i - 1):
            out.append((first,) + rest)
    return tuple(out)


class _BarComplex:
    def __init__(self, A: QuadraticPresentation, jmax: int, limit: int):
        self.A = A
        self.dims = hilbert(A, jmax)
        self.limit = limit
        self._offsets: dict[tuple[int, int], tuple[dict, int]] = {}

    def layout(self, i: int, j: int) -> tuple[dict[tuple[int, ...], int], int]:
        """Block offsets per composition and total dimension of B_{i,j}."""
        key = (i, j)
        if key not in self._offsets:
            offsets, total = {}, 0
            for comp in compositions(j, i):
                size = 1
                for part in comp:
                    size *= self.dims[part]
                offsets[comp] = total
                total += size
            if total > self.limit:
                raise ResourceLimitError(
                    f"chain space B_({i},{j}) has {total} basis elements (limit {self.limit})")
            self._offsets[key] = (offsets, total)
        return self._offsets[key]

    def differential(self, i: int, j: int) -> np.ndarray:
        """Matrix of ``d: B_{i,j} -> B_{i-1,j}`` (rows index the target)."""
        src_off, src_dim = self.layout(i, j)
        dst_off, dst_dim = self.layout(i - 1, j)
        p = self.A.p
        m = np.zeros((dst_dim, src_dim), dtype=np.int64)
        if i < 2 or src_dim == 0 or dst_dim == 0:
            return m
        eng = self.A._engine
        dims = self.dims
        for comp, base in src_off.items():
            sizes = [dims[part] for part in comp]
            for k in range(i - 1):
                sign = 1 if k % 2 else p - 1  # (-1)^(k+1) for the 0-based merge position k
                merged = comp[:k] + (comp[k] + comp[k + 1],) + comp[k + 2:]
                tgt_base = dst_off[merged]
                table = eng.product_table(comp[k], comp[k + 1])
                tgt_sizes = [dims[part] for part in merged]
                for flat in range(int(np.prod(sizes))):
                    idx = _unflatten(flat, sizes)
                    prod = table[idx[k] * sizes[k + 1] + idx[k + 1]]
                    if not prod:
                        continue
                    head, tail = idx[:k], idx[k + 2:]
                    for t, c in prod.items():
                        row = tgt_base + _flatten(head + [t] + tail, tgt_sizes)
                        m[row, base + flat] = (m[row, base + flat] + sign * c) % p
        return m


def _unflatten(flat: int, sizes: list[int]) -> list[int]:
    idx = []
    for s in reversed(sizes):
        flat, r = divmod(flat, s)
        idx.append(r)
    return idx[::-1]


def _flatten(idx: list[int], sizes: list[int]) -> int:
    flat = 0
    for x, s in zip(idx, sizes):
        flat = flat * s + x
    return flat


def bar_tor(A: QuadraticPresentation, imax: int, jmax: int, limit: int | None = None) -> TorTable:
    """Bigraded ``dim Tor_{i,j}`` for ``i <= imax``, ``j <= jmax``."""
    if imax > jmax:
        raise ValueError("imax must not exceed jmax")
    limit = resource_limit() if limit is None else limit
    bar = _BarComplex(A, jmax, limit)
    p = A.p
    dims = {(0, 0): 1}
    chain = {(0, 0): 1}
    for j in range(1, jmax + 1):
        ranks = {}
        for i in range(1, j + 1):
            chain[(i, j)] = bar.layout(i, j)[1]
        for i in range(2, j + 1):
            ranks[i] = rank_array(bar.differential(i, j), p)
        for i in range(1, j + 1):
            tor = chain[(i, j)] - ranks.get(i, 0) - ranks.get(i + 1, 0)
            if i <= imax:
                dims[(i, j)] = tor
    return TorTable(imax, jmax, dims, chain)


def euler_check(table: TorTable) -> dict[int, tuple[int, int]]:
    """Per internal degree j: (Σ(-1)^i dim B_{i,j}, Σ(-1)^i dim Tor_{i,j}); needs imax = jmax."""
    out = {}
    for j in range(table.jmax + 1):
        chain = sum((-1) ** i * table.chain_dims.get((i, j), 0) for i in range(j + 1))
        tor = sum((-1) ** i * table[i, j] for i in range(j + 1))
        out[j] = (chain, tor)
    return out


def hilbert_criterion(A: QuadraticPresentation, N: int) -> list[int]:
    """Coefficients 0..N of ``h_A(t) h_{A!}(-t) - 1`` (integers)."""
    h = hilbert(A, N)
    g = hilbert(koszul_dual(A), N)
    out = []
    for n in range(N + 1):
        c = sum(h[k] * g[n - k] * (-1) ** (n - k) for k in range(n + 1))
        out.append(c - (1 if n == 0 else 0))
    return out


def is_koszul_up_to(A: QuadraticPresentation, bound: int, limit: int | None = None) -> KoszulReport:
    table = bar_tor(A, bound, bound, limit)
    bad = table.off_diagonal_nonzero()
    witness = bad[0] if bad else None
    up_to = bound if witness is None else witness[1] - 1
    return KoszulReport(bound, up_to, witness, hilbert_criterion(A, bound), table)

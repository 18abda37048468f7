"""Exact evaluation of the group determinants of C4, C4 x C2 and C4 x C2 x C2.

Coefficient vectors for C4 x C2 x C2 are indexed by ``j = r + 4*s + 8*t`` for the
group element ``(r mod 4, s mod 2, t mod 2)``.  Two independent routes are
provided: the closed-form factorization through four C4 circulants, and a
direct 16x16 determinant of ``(a[g - h])`` by fraction-free elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import prod
from typing import Sequence

import numpy as np

from .errors import UsageError

GROUP_ORDERS = (4, 2, 2)
ORDER = 16

QuadVec = tuple[int, int, int, int]


def encode(r: int, s: int, t: int) -> int:
    """Index of the group element (r, s, t)."""
    return (r % 4) + 4 * (s % 2) + 8 * (t % 2)


def decode(j: int) -> tuple[int, int, int]:
    if not 0 <= j < ORDER:
        raise UsageError(f"index {j} outside 0..15")
    return j % 4, (j // 4) % 2, j // 8


def coeff_vec(values: Sequence[int]) -> tuple[int, ...]:
    """Validate and freeze a 16-entry coefficient vector."""
    vec = tuple(int(v) for v in values)
    if len(vec) != ORDER:
        raise UsageError(f"expected 16 coefficients, got {len(vec)}")
    return vec


@dataclass(frozen=True)
class Bcde:
    """The four C4 arguments whose circulants multiply to the full determinant."""

    b: QuadVec
    c: QuadVec
    d: QuadVec
    e: QuadVec

    def quads(self) -> tuple[QuadVec, QuadVec, QuadVec, QuadVec]:
        return self.b, self.c, self.d, self.e


def d4(x0: int, x1: int, x2: int, x3: int) -> int:
    """4x4 circulant determinant D4(x0, x1, x2, x3)."""
    s0, s1 = x0 + x2, x1 + x3
    t0, t1 = x0 - x2, x1 - x3
    return (s0 * s0 - s1 * s1) * (t0 * t0 + t1 * t1)


def bcde(a: Sequence[int]) -> Bcde:
    a = coeff_vec(a)
    b, c, d, e = [], [], [], []
    for i in range(4):
        p, q = a[i] + a[i + 8], a[i + 4] + a[i + 12]
        u, w = a[i] - a[i + 8], a[i + 4] - a[i + 12]
        b.append(p + q)
        c.append(p - q)
        d.append(u + w)
        e.append(u - w)
    return Bcde(tuple(b), tuple(c), tuple(d), tuple(e))


def d4x2(y: Sequence[int]) -> int:
    """Group determinant of C4 x C2, indexed by j = r + 4*s."""
    y = tuple(int(v) for v in y)
    if len(y) != 8:
        raise UsageError(f"expected 8 coefficients, got {len(y)}")
    plus = [y[i] + y[i + 4] for i in range(4)]
    minus = [y[i] - y[i + 4] for i in range(4)]
    return d4(*plus) * d4(*minus)


def d4_factors(a: Sequence[int]) -> tuple[int, int, int, int]:
    """The four circulant factors D4(b), D4(c), D4(d), D4(e)."""
    t = bcde(a)
    return tuple(d4(*q) for q in t.quads())


def d4x2x2_fast(a: Sequence[int]) -> int:
    return prod(d4_factors(a))


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    m = [list(row) for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise UsageError("matrix is not square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        rk = m[k]
        pivot = rk[k]
        tail = rk[k + 1:]
        for i in range(k + 1, n):
            ri = m[i]
            f = ri[k]
            # exact division: every entry is a (k+2)-minor of the input
            ri[k + 1:] = [(pivot * x - f * y) // prev for x, y in zip(ri[k + 1:], tail)]
        prev = pivot
    return sign * m[n - 1][n - 1]


@lru_cache(maxsize=None)
def _difference_table(orders: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """table[g][h] = index of g - h, elements in mixed radix (first factor fastest)."""
    # itertools.product varies the last factor fastest, so build reversed
    elems = [tuple(reversed(g)) for g in product(*(range(n) for n in reversed(orders)))]

    def index(g):
        j, scale = 0, 1
        for gi, n in zip(g, orders):
            j += (gi % n) * scale
            scale *= n
        return j

    return tuple(
        tuple(index(tuple(x - y for x, y in zip(g, h))) for h in elems) for g in elems
    )


def group_matrix(a: Sequence[int], orders: Sequence[int] = GROUP_ORDERS) -> list[list[int]]:
    """Matrix (a[g - h])_{g,h} for the abelian group C_{n0} x C_{n1} x ...

    For orders (4, 2, 2) the element order is exactly j = r + 4*s + 8*t.
    """
    table = _difference_table(tuple(orders))
    a = tuple(int(v) for v in a)
    if len(a) != len(table):
        raise UsageError(f"expected {len(table)} coefficients, got {len(a)}")
    return [[a[j] for j in row] for row in table]


def d4x2x2_oracle(a: Sequence[int]) -> int:
    """Group determinant of C4 x C2 x C2 straight from its definition."""
    return bareiss_det(group_matrix(coeff_vec(a)))


# Largest entry bound for which the int64 batch path cannot overflow:
# |b_i| <= 4B, |x0 +- x2| <= 8B, |D4| <= 2 * (8B)^4 < 2^63.
BATCH_ENTRY_LIMIT = 1000


def d4_factors_batch(a: np.ndarray) -> np.ndarray:
    """Vectorized D4(b), D4(c), D4(d), D4(e) for an (N, 16) int64 array.

    Entries must satisfy |a_j| <= BATCH_ENTRY_LIMIT; returns an (N, 4) array.
    """
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2 or a.shape[1] != ORDER:
        raise UsageError("expected an (N, 16) array")
    if a.size and int(np.abs(a).max()) > BATCH_ENTRY_LIMIT:
        raise UsageError(f"batch path needs entries within +-{BATCH_ENTRY_LIMIT}")
    g = a.reshape(-1, 2, 2, 4)  # [t][s][r]
    p = g[:, 0, 0] + g[:, 1, 0]
    q = g[:, 0, 1] + g[:, 1, 1]
    u = g[:, 0, 0] - g[:, 1, 0]
    w = g[:, 0, 1] - g[:, 1, 1]
    out = np.empty((a.shape[0], 4), dtype=np.int64)
    for col, x in enumerate((p + q, p - q, u + w, u - w)):
        s0, s1 = x[:, 0] + x[:, 2], x[:, 1] + x[:, 3]
        t0, t1 = x[:, 0] - x[:, 2], x[:, 1] - x[:, 3]
        out[:, col] = (s0 * s0 - s1 * s1) * (t0 * t0 + t1 * t1)
    return out

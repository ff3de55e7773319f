"""Exact integer and modular linear algebra for boundary matrices.

Everything here works on Python ints, so entries never overflow.  Sparse
matrices are handled as ``{row: {col: value}}`` dictionaries; the elimination
order is fixed (columns ascending, ties broken by row index) so reported ranks
are reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MODULAR_PRIME = 2**31 - 1


@dataclass(frozen=True)
class SmithResult:
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)


def _as_rows(M) -> list[list[int]]:
    if hasattr(M, "toarray"):
        M = M.toarray()
    return [[int(x) for x in row] for row in np.asarray(M, dtype=object).tolist()] if len(M) else []


def smith_decomposition(M) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Dense Smith form with transforms: returns ``(U, S, V)`` with ``U M V = S``.

    U and V are unimodular.  Intended for small matrices.
    """
    A = _as_rows(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V


def _dense_factors(A: list[list[int]]) -> list[int]:
    """Invariant factors of a dense integer matrix (no transforms kept)."""
    A = [row[:] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    factors = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            moved = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        moved = True
                        break
            if moved:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        factors.append(abs(A[t][t]))
        t += 1
    return factors


def _to_sparse(M) -> dict[int, dict[int, int]]:
    if isinstance(M, dict):
        return {r: dict(cols) for r, cols in M.items() if cols}
    if hasattr(M, "tocoo"):
        coo = M.tocoo()
        rows: dict[int, dict[int, int]] = {}
        for r, c, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
            if v:
                rows.setdefault(r, {})[c] = rows.get(r, {}).get(c, 0) + int(v)
        return rows
    rows = {}
    for r, row in enumerate(_as_rows(M)):
        cols = {c: v for c, v in enumerate(row) if v}
        if cols:
            rows[r] = cols
    return rows


def _eliminate(rows: dict[int, dict[int, int]], prime: int | None):
    """Sparse pivoting on unit entries (every nonzero is a unit mod a prime).

    Returns ``(pivot_count, leftover_rows)``; ``leftover_rows`` holds the part
    that has no unit entry left (always empty in the modular case).
    """
    if prime is not None:
        rows = {r: {c: v % prime for c, v in cols.items() if v % prime} for r, cols in rows.items()}
        rows = {r: cols for r, cols in rows.items() if cols}
    cols_index: dict[int, set[int]] = {}
    for r, cols in rows.items():
        for c in cols:
            cols_index.setdefault(c, set()).add(r)

    def is_unit(v):
        return True if prime is not None else v in (1, -1)

    pivots = 0
    progress = True
    while progress and rows:
        progress = False
        for c in sorted(cols_index):
            if c not in cols_index:
                continue
            candidates = [r for r in cols_index[c] if is_unit(rows[r][c])]
            if not candidates:
                continue
            r = min(candidates, key=lambda x: (len(rows[x]), x))
            prow = rows.pop(r)
            pv = prow[c]
            inv = pow(pv, -1, prime) if prime is not None else pv  # pv = +-1 is its own inverse
            for c2 in prow:
                cols_index[c2].discard(r)
            for r2 in sorted(cols_index[c]):
                row2 = rows[r2]
                factor = row2[c] * inv
                if prime is not None:
                    factor %= prime
                for c2, v in prow.items():
                    nv = row2.get(c2, 0) - factor * v
                    if prime is not None:
                        nv %= prime
                    if nv:
                        if c2 not in row2:
                            cols_index[c2].add(r2)
                        row2[c2] = nv
                    elif c2 in row2:
                        del row2[c2]
                        cols_index[c2].discard(r2)
                if not row2:
                    del rows[r2]
            for c2 in list(prow):
                if not cols_index.get(c2):
                    cols_index.pop(c2, None)
            pivots += 1
            progress = True
    return pivots, rows


def smith_normal_form(M) -> SmithResult:
    """Invariant factors of an integer matrix (dense array, nested list or scipy sparse).

    Unit pivots are eliminated sparsely first; whatever is left is reduced
    densely.  Factors are returned in divisibility order.
    """
    rows = _to_sparse(M)
    units, leftover = _eliminate(rows, None)
    factors = [1] * units
    if leftover:
        rix = sorted(leftover)
        cix = sorted({c for cols in leftover.values() for c in cols})
        cpos = {c: k for k, c in enumerate(cix)}
        dense = [[0] * len(cix) for _ in rix]
        for k, r in enumerate(rix):
            for c, v in leftover[r].items():
                dense[k][cpos[c]] = v
        factors.extend(_dense_factors(dense))
    return SmithResult(tuple(sorted(factors)))


def rank_mod_p(M, prime: int = MODULAR_PRIME) -> int:
    pivots, leftover = _eliminate(_to_sparse(M), prime)
    assert not leftover
    return pivots


def exact_rank(M) -> int:
    return smith_normal_form(M).rank


def integer_det(M: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]

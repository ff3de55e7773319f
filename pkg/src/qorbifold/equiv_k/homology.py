"""Boundary operators, Betti numbers and (equivariant) rational K-ranks."""

from __future__ import annotations

from dataclasses import dataclass, field

import scipy.sparse as sp

from qorbifold.equiv_k.complex import (
    GComplex,
    QuotientComplex,
    SimplicialComplex,
    fixed_subcomplex,
    make_regular,
    orbit_cells,
)
from qorbifold.equiv_k.linalg import MODULAR_PRIME, exact_rank, rank_mod_p
from qorbifold.errors import IntegrityError, ParameterError

METHODS = ("exact", "modular")


def _simplicial_boundaries(K: SimplicialComplex) -> list[sp.csr_matrix]:
    mats = []
    for k in range(1, K.dim + 1):
        faces = K.index[k - 1]
        rows, cols, vals = [], [], []
        for j, s in enumerate(K.simplices[k]):
            for i in range(len(s)):
                rows.append(faces[s[:i] + s[i + 1:]])
                cols.append(j)
                vals.append(-1 if i % 2 else 1)
        mats.append(sp.csr_matrix((vals, (rows, cols)),
                                  shape=(len(K.simplices[k - 1]), len(K.simplices[k])), dtype="int64"))
    return mats


def _quotient_boundaries(Q: QuotientComplex) -> list[sp.csr_matrix]:
    mats = []
    for k in range(1, Q.dim + 1):
        acc: dict[tuple[int, int], int] = {}
        for j, rep in enumerate(Q.cells[k]):
            for i in range(len(rep)):
                _, row, sign = Q.orbit_of[rep[:i] + rep[i + 1:]]
                acc[(row, j)] = acc.get((row, j), 0) + (-1 if i % 2 else 1) * sign
        items = [(r, c, v) for (r, c), v in acc.items() if v]
        rows = [r for r, _, _ in items]
        cols = [c for _, c, _ in items]
        vals = [v for _, _, v in items]
        mats.append(sp.csr_matrix((vals, (rows, cols)),
                                  shape=(len(Q.cells[k - 1]), len(Q.cells[k])), dtype="int64"))
    return mats


def boundary_matrices(K) -> list[sp.csr_matrix]:
    """``[d_1, ..., d_dim]`` where ``d_k`` maps k-chains to (k-1)-chains."""
    if isinstance(K, QuotientComplex):
        return _quotient_boundaries(K)
    return _simplicial_boundaries(K)


def _counts(K) -> list[int]:
    return K.counts()


def _rank(M, method: str) -> int:
    if M.nnz == 0:
        return 0
    if method == "exact":
        return exact_rank(M)
    if method == "modular":
        return rank_mod_p(M, MODULAR_PRIME)
    raise ParameterError(f"unknown rank method {method!r}; expected one of {METHODS}")


def betti_numbers(K, method: str = "modular", audit: bool = False) -> list[int]:
    """Rational Betti numbers ``b_0 .. b_dim``.

    ``audit=True`` recomputes every rank with the other method and raises
    IntegrityError on any disagreement.
    """
    counts = _counts(K)
    if not counts:
        return []
    mats = boundary_matrices(K)
    ranks = [0] + [_rank(M, method) for M in mats] + [0]
    if audit:
        other = "exact" if method == "modular" else "modular"
        check = [0] + [_rank(M, other) for M in mats] + [0]
        if check != ranks:
            raise IntegrityError(f"{method} ranks {ranks[1:-1]} disagree with {other} ranks {check[1:-1]}")
    betti = [counts[k] - ranks[k] - ranks[k + 1] for k in range(len(counts))]
    euler_cells = sum((-1) ** k * c for k, c in enumerate(counts))
    if sum((-1) ** k * b for k, b in enumerate(betti)) != euler_cells or min(betti) < 0:
        raise IntegrityError(f"Euler characteristic check failed: betti={betti}, counts={counts}")
    return betti


def euler_characteristic(K) -> int:
    return sum((-1) ** k * c for k, c in enumerate(_counts(K)))


def k_ranks_from_betti(betti) -> tuple[int, int]:
    return sum(betti[0::2]), sum(betti[1::2])


def k_ranks(K, method: str = "modular") -> tuple[int, int]:
    """Ranks of K^0 and K^1 as even and odd Betti sums."""
    return k_ranks_from_betti(betti_numbers(K, method))


@dataclass
class Stratum:
    g: int
    fixed_vertices: int
    fixed_size: int
    quotient_cells: list[int]
    betti: list[int]

    @property
    def even(self) -> int:
        return sum(self.betti[0::2])

    @property
    def odd(self) -> int:
        return sum(self.betti[1::2])

    def as_dict(self) -> dict:
        return {"g": self.g, "fixed_size": self.fixed_size, "fixed_vertices": self.fixed_vertices,
                "betti": list(self.betti), "even": self.even, "odd": self.odd}


@dataclass
class StrataReport:
    order: int
    regularity_level: int
    method: str
    strata: list[Stratum] = field(default_factory=list)

    @property
    def k0_rank(self) -> int:
        return sum(s.even for s in self.strata)

    @property
    def k1_rank(self) -> int:
        return sum(s.odd for s in self.strata)

    @property
    def totals(self) -> tuple[int, int]:
        return self.k0_rank, self.k1_rank

    def as_dict(self) -> dict:
        return {"k0_rank": self.k0_rank, "k1_rank": self.k1_rank,
                "order": self.order, "regularity_level": self.regularity_level,
                "method": self.method, "strata": [s.as_dict() for s in self.strata]}


def equivariant_k_ranks(G: GComplex, method: str = "modular", max_subdiv: int = 2,
                        audit: bool = False) -> StrataReport:
    """Rational ranks of K^0_G and K^1_G as a sum over group elements.

    For a cyclic group every element is its own centraliser class, so the
    contribution of ``g`` is the ordinary K-rank of ``X^g / G``.
    """
    R = make_regular(G, max_subdiv)
    report = StrataReport(R.order, R.regularity_level, method)
    for g in range(R.order):
        F = fixed_subcomplex(R, g)
        if len(F) == 0:
            report.strata.append(Stratum(g, 0, 0, [], []))
            continue
        Q = orbit_cells(F, R.action)
        betti = betti_numbers(Q, method, audit=audit)
        report.strata.append(Stratum(g, len(F.vertices), len(F), Q.counts(), betti))
    return report


def check_boundary_squares(K) -> bool:
    mats = boundary_matrices(K)
    for a, b in zip(mats, mats[1:]):
        prod = (a @ b)
        prod.eliminate_zeros()
        if prod.nnz:
            return False
    return True


"""Finite cyclic actions on the weight algebra through integer matrices.

The group acts on the torus by ``x -> rho x``; on functions this is
``(beta_g f)(x) = f(rho_g^{-1} x)``, which sends the character ``e_p`` to
``e_{(rho_g^{-1})^T p}``.  All matrix work is exact integer arithmetic; the
inverse of ``rho^k`` is taken as ``rho^(order - k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from qorbifold.equiv_k.linalg import integer_det, smith_decomposition
from qorbifold.errors import DimensionError, InfiniteFixedSetError, ParameterError, UnsupportedOrderError
from qorbifold.weight_algebra import (
    AlgebraElement,
    DeformationForm,
    _int_matrix,
    graded_product,
    l1_norm,
    lift,
    skew_pairing,
    specialize,
)

Matrix = tuple[tuple[int, ...], ...]

BUILTIN_GENERATORS: dict[int, Matrix] = {
    2: ((-1, 0), (0, -1)),
    3: ((-1, -1), (1, 0)),
    4: ((0, -1), (1, 0)),
    6: ((0, -1), (1, 1)),
}


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, m = len(A), len(B[0])
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(m)) for i in range(n))


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matvec(A: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


@dataclass(frozen=True)
class CyclicAction:
    """Cyclic group of ``order`` generated by the integer matrix ``generator``."""

    order: int
    generator: Matrix
    _powers: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gen = _int_matrix(self.generator)
        object.__setattr__(self, "generator", gen)
        n = len(gen)
        if n == 0 or any(len(r) != n for r in gen):
            raise DimensionError("generator must be a square matrix")
        if self.order < 1:
            raise ParameterError("order must be positive")
        if abs(integer_det(gen)) != 1:
            raise ParameterError(f"generator {gen} is not invertible over the integers")
        powers = [identity(n)]
        for _ in range(self.order):
            powers.append(matmul(powers[-1], gen))
        if powers[-1] != identity(n):
            raise ParameterError(f"generator^{self.order} is not the identity")
        object.__setattr__(self, "_powers", tuple(powers[:-1]))

    @property
    def rank(self) -> int:
        return len(self.generator)

    def matrix(self, g: int) -> Matrix:
        """rho(sigma^g)."""
        return self._powers[g % self.order]

    def dual_matrix(self, g: int) -> Matrix:
        """(rho(sigma^g)^{-1})^T, the matrix acting on weights."""
        return transpose(self._powers[(-g) % self.order])

    def elements(self) -> range:
        return range(self.order)

    def transform(self, g: int, p: Sequence[int]):
        """Image of ``e_p`` under ``beta_g`` as ``(weight, phase in turns)``."""
        return weight_action(self, g, p), Fraction(0)


def builtin_generator(i: int) -> CyclicAction:
    try:
        return CyclicAction(i, BUILTIN_GENERATORS[i])
    except KeyError:
        raise UnsupportedOrderError(f"no built-in generator of order {i}; choose from 2, 3, 4, 6") from None


@dataclass
class CompatibilityReport:
    symplectic_ok: bool
    det_ok: bool
    order_ok: bool
    witnesses: list[str]

    @property
    def ok(self) -> bool:
        return self.symplectic_ok and self.det_ok and self.order_ok


def check_compatibility(act: CyclicAction, D: DeformationForm) -> CompatibilityReport:
    """Does the generator lie in SL_n(R, J) and have exact order ``act.order``?"""
    if act.rank != D.rank:
        raise DimensionError(f"action of rank {act.rank} vs deformation of rank {D.rank}")
    rho = act.generator
    witnesses = []
    lhs = matmul(matmul(transpose(rho), D.J0), rho)
    for i in range(D.rank):
        for j in range(D.rank):
            if lhs[i][j] != D.J0[i][j]:
                witnesses.append(f"(rho^T J0 rho)[{i}][{j}] = {lhs[i][j]} != J0[{i}][{j}] = {D.J0[i][j]}")
    symplectic_ok = not witnesses
    det = integer_det(rho)
    det_ok = det == 1
    if not det_ok:
        witnesses.append(f"det(rho) = {det}")
    n = act.rank
    smaller = [k for k in range(1, act.order) if act.matrix(k) == identity(n)]
    order_ok = not smaller and act.matrix(act.order) == identity(n)
    if smaller:
        witnesses.append(f"rho^{smaller[0]} is already the identity")
    return CompatibilityReport(symplectic_ok, det_ok, order_ok, witnesses)


def weight_action(act: CyclicAction, g: int, p: Sequence[int]) -> tuple[int, ...]:
    if len(p) != act.rank:
        raise DimensionError(f"weight {tuple(p)} has wrong length for rank {act.rank}")
    return matvec(act.dual_matrix(g), p)


def act(action: CyclicAction, g: int, a: AlgebraElement) -> AlgebraElement:
    """beta_g(a): relabel weights, keep coefficients."""
    if a.rank != action.rank:
        raise DimensionError(f"element rank {a.rank} vs action rank {action.rank}")
    return AlgebraElement({weight_action(action, g, p): c for p, c in a.items()}, a.rank)


def _act_graded(action: CyclicAction, g: int, x: dict) -> dict:
    return {(weight_action(action, g, p), m): c for (p, m), c in x.items()}


@dataclass
class EquivarianceResult:
    residual: float
    mismatches: list[tuple[tuple[int, ...], tuple[int, ...], int, int]]

    @property
    def ok(self) -> bool:
        return self.residual == 0 and not self.mismatches


def equivariance_residual(action: CyclicAction, g: int, a: AlgebraElement, b: AlgebraElement,
                          D: DeformationForm, allow_incompatible: bool = False) -> EquivarianceResult:
    """Compare beta_g(a x_J b) with beta_g(a) x_J beta_g(b).

    ``mismatches`` lists ``(p, q, m(p, q), m(g.p, g.q))`` for every basis pair
    whose integer phase exponent changes under the action.
    """
    if not allow_incompatible and not check_compatibility(action, D).ok:
        raise ParameterError("action is not compatible with J; pass allow_incompatible=True")
    mismatches = []
    for p in a:
        gp = weight_action(action, g, p)
        for q in b:
            gq = weight_action(action, g, q)
            m0 = skew_pairing(p, q, D.J0)
            m1 = skew_pairing(gp, gq, D.J0)
            if m0 != m1:
                mismatches.append((p, q, m0, m1))
    lhs = _act_graded(action, g, graded_product(lift(a), lift(b), D.J0))
    rhs = graded_product(_act_graded(action, g, lift(a)), _act_graded(action, g, lift(b)), D.J0)
    diff = dict(lhs)
    for k, c in rhs.items():
        diff[k] = diff.get(k, 0) - c
    residual = l1_norm(specialize(diff, D.theta, D.rank))
    return EquivarianceResult(residual, mismatches)


def torus_fixed_points(action: CyclicAction, g: int) -> list[tuple[Fraction, ...]]:
    """Points of [0,1)^n fixed by x -> rho(g) x modulo Z^n.

    Uses the Smith form ``U (rho - I) V = S``: the solutions are
    ``V (j_1/d_1, ..., j_n/d_n)`` reduced mod 1.
    """
    n = action.rank
    rho = action.matrix(g)
    A = tuple(tuple(rho[i][j] - int(i == j) for j in range(n)) for i in range(n))
    if integer_det(A) == 0:
        raise InfiniteFixedSetError(f"rho(sigma^{g}) - I is singular; fixed set is not finite")
    _, S, V = smith_decomposition(A)
    d = [S[i][i] for i in range(n)]
    points = set()
    for js in product(*(range(di) for di in d)):
        y = [Fraction(j, di) for j, di in zip(js, d)]
        x = tuple((sum(V[i][k] * y[k] for k in range(n))) % 1 for i in range(n))
        points.add(x)
    return sorted(points)

from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qorbifold.errors import DimensionError, InfiniteFixedSetError, ParameterError, UnsupportedOrderError
from qorbifold.equiv_k.linalg import integer_det
from qorbifold.symmetry import (
    BUILTIN_GENERATORS,
    CyclicAction,
    act,
    builtin_generator,
    check_compatibility,
    equivariance_residual,
    torus_fixed_points,
    weight_action,
)
from qorbifold.weight_algebra import STANDARD_J0, AlgebraElement, DeformationForm, l1_norm, trace

D = DeformationForm(STANDARD_J0, 0.1)
SWAP = CyclicAction(2, [[0, 1], [1, 0]])
ORDERS = (2, 3, 4, 6)


def e(*p, c=1.0):
    return AlgebraElement.basis(p, c)


def box_element(box, seed):
    rng = np.random.default_rng(seed)
    return AlgebraElement({p: complex(rng.normal(), rng.normal())
                           for p in product(range(-box, box + 1), repeat=2)}, 2)


def test_builtin_generators():
    assert builtin_generator(4).generator == ((0, -1), (1, 0))
    assert builtin_generator(6).generator == ((0, -1), (1, 1))
    for i in ORDERS:
        assert builtin_generator(i).order == i
    with pytest.raises(UnsupportedOrderError):
        builtin_generator(5)


def test_action_validation():
    with pytest.raises(ParameterError):
        CyclicAction(3, [[0, -1], [1, 0]])         # order 4 matrix declared order 3
    with pytest.raises(ParameterError):
        CyclicAction(2, [[2, 0], [0, 1]])          # not unimodular
    with pytest.raises(DimensionError):
        CyclicAction(2, [[1, 0, 0], [0, 1, 0]])


def test_compatibility():
    for i in ORDERS:
        assert check_compatibility(builtin_generator(i), D).ok
    rep = check_compatibility(SWAP, D)
    assert not rep.ok and not rep.det_ok and not rep.symplectic_ok and rep.witnesses
    # non-faithful declaration: -I is declared of order 4
    rep = check_compatibility(CyclicAction(4, [[-1, 0], [0, -1]]), D)
    assert rep.symplectic_ok and rep.det_ok and not rep.order_ok
    with pytest.raises(DimensionError):
        check_compatibility(builtin_generator(2), DeformationForm.standard(0.1, 2))


def test_weight_action_examples():
    assert weight_action(builtin_generator(4), 1, (1, 0)) == (0, 1)
    assert weight_action(builtin_generator(2), 1, (3, -5)) == (-3, 5)
    for i in ORDERS:
        assert weight_action(builtin_generator(i), 0, (4, -7)) == (4, -7)


@given(st.sampled_from(ORDERS), st.integers(0, 12), st.integers(0, 12),
       st.tuples(st.integers(-20, 20), st.integers(-20, 20)))
def test_weight_action_is_group_action(i, j, k, p):
    a = builtin_generator(i)
    assert weight_action(a, j, weight_action(a, k, p)) == weight_action(a, j + k, p)


def test_act_examples():
    s2 = builtin_generator(2)
    assert act(s2, 1, e(1, 0) + e(0, 1, c=2)) == e(-1, 0) + e(0, -1, c=2)
    for i in ORDERS:
        assert act(builtin_generator(i), 1, AlgebraElement.unit(2)) == AlgebraElement.unit(2)
    s4 = builtin_generator(4)
    rng = np.random.default_rng(0)
    for _ in range(10):
        a = AlgebraElement.random(rng, 2)
        b = a
        for _ in range(4):
            b = act(s4, 1, b)
        assert b == a


def test_act_preserves_trace_and_norm():
    rng = np.random.default_rng(1)
    for i in ORDERS:
        A = builtin_generator(i)
        for g in range(i):
            a = AlgebraElement.random(rng, 2) + AlgebraElement.unit(2) * 0.5
            b = act(A, g, a)
            assert trace(b) == trace(a)
            assert l1_norm(b) == l1_norm(a)


def test_equivariance_examples():
    s4 = builtin_generator(4)
    r = equivariance_residual(s4, 1, e(1, 0), e(0, 1), D)
    assert r.residual == 0 and not r.mismatches and r.ok
    r = equivariance_residual(SWAP, 1, e(1, 0), e(0, 1), D, allow_incompatible=True)
    assert r.mismatches == [((1, 0), (0, 1), 1, -1)]
    assert r.residual > 0
    with pytest.raises(ParameterError):
        equivariance_residual(SWAP, 1, e(1, 0), e(0, 1), D)
    for i in ORDERS:
        a = box_element(2, i)
        assert equivariance_residual(builtin_generator(i), 1, a, AlgebraElement.unit(2), D).residual == 0


@pytest.mark.parametrize("i", ORDERS)
def test_equivariance_box_and_random(i):
    A = builtin_generator(i)
    a, b = box_element(3, 10 + i), box_element(3, 20 + i)
    rng = np.random.default_rng(i)
    for g in range(1, i):
        r = equivariance_residual(A, g, a, b, D)
        assert r.residual == 0 and not r.mismatches
        for _ in range(100):
            x, y = AlgebraElement.random(rng, 2, box=4), AlgebraElement.random(rng, 2, box=4)
            assert equivariance_residual(A, g, x, y, D).residual == 0


def test_swap_negative_control_fails_on_box():
    a, b = box_element(3, 1), box_element(3, 2)
    r = equivariance_residual(SWAP, 1, a, b, D, allow_incompatible=True)
    assert not r.ok
    assert all(m1 == -m0 for _, _, m0, m1 in r.mismatches)


def brute_force_fixed(A, g):
    M = A.matrix(g)
    d = abs(integer_det([[M[i][j] - (i == j) for j in range(2)] for i in range(2)]))
    pts = set()
    for a, b in product(range(d), repeat=2):
        x = (Fraction(a, d), Fraction(b, d))
        y = tuple((M[i][0] * x[0] + M[i][1] * x[1]) % 1 for i in range(2))
        if y == x:
            pts.add(x)
    return sorted(pts), d


def test_fixed_point_examples():
    h = Fraction(1, 2)
    assert torus_fixed_points(builtin_generator(2), 1) == sorted([(0, 0), (h, 0), (0, h), (h, h)])
    assert torus_fixed_points(builtin_generator(4), 1) == [(0, 0), (h, h)]
    assert torus_fixed_points(builtin_generator(6), 1) == [(0, 0)]
    with pytest.raises(InfiniteFixedSetError):
        torus_fixed_points(builtin_generator(2), 0)


@pytest.mark.parametrize("i", ORDERS)
def test_fixed_points_match_determinant_and_brute_force(i):
    A = builtin_generator(i)
    for g in range(1, i):
        pts = torus_fixed_points(A, g)
        brute, d = brute_force_fixed(A, g)
        assert len(pts) == d
        assert pts == brute


def test_fixed_points_rank4():
    A = CyclicAction(2, [[-1 if i == j else 0 for j in range(4)] for i in range(4)])
    assert len(torus_fixed_points(A, 1)) == 16

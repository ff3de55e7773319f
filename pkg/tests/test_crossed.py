import cmath
import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from qorbifold.crossed import (
    CrossedElement,
    TranslationAction,
    basis_product,
    commuting_deformation_compare,
    crossed_product,
    crossed_star,
    crossed_trace,
)
from qorbifold.errors import DimensionError, ParameterError, ResourceError
from qorbifold.symmetry import builtin_generator
from qorbifold.weight_algebra import STANDARD_J0, AlgebraElement, DeformationForm, deformed_product, l1_norm, phase_exponent

D = DeformationForm(STANDARD_J0, 0.1)
HALF = TranslationAction((Fraction(1, 2), Fraction(1, 2)), 2)


def actions():
    return [builtin_generator(i) for i in (2, 3, 4, 6)] + [HALF]


def test_product_example():
    s2 = builtin_generator(2)
    x = CrossedElement.basis(1, (1, 0), 2)
    y = CrossedElement.basis(1, (0, 1), 2)
    out = crossed_product(x, y, s2, D)
    assert set(out.terms) == {(0, (1, -1))}
    assert out.coefficient(0, (1, -1)) == pytest.approx(cmath.exp(2j * math.pi * 0.1), abs=1e-15)


def test_unit():
    rng = np.random.default_rng(0)
    for A in actions():
        one = CrossedElement.unit(2, A.order)
        for _ in range(5):
            x = CrossedElement.random(rng, 2, A.order)
            assert crossed_product(one, x, A, D) == x
            assert crossed_product(x, one, A, D) == x


def test_identity_piece_is_weight_algebra():
    rng = np.random.default_rng(1)
    for A in actions():
        for _ in range(5):
            a, b = AlgebraElement.random(rng, 2), AlgebraElement.random(rng, 2)
            prod = crossed_product(CrossedElement.embed(a, A.order), CrossedElement.embed(b, A.order), A, D)
            # summation order differs between the two paths, so compare to round-off
            assert (prod - CrossedElement.embed(deformed_product(a, b, D), A.order)).l1_norm() < 1e-13
            assert l1_norm(prod.graded_piece(0) - deformed_product(a, b, D)) < 1e-13


def test_identity_piece_structure_constants_exact():
    W = list(product(range(-3, 4), repeat=2))
    for A in actions():
        for p, q in product(W, repeat=2):
            g, w, turns, m = basis_product(0, p, 0, q, A, D.J0)
            assert (g, w, turns, m) == (0, (p[0] + q[0], p[1] + q[1]), 0, phase_exponent(p, q, D))


def exhaustive_associativity_failures(A, box=2):
    """Compare both bracketings of every basis triple with weights in [-box, box]^2.

    ``basis_product`` is tabulated once on the pairs that occur; the triple
    composition then runs on integer arrays.  Turns are stored as multiples
    of 1/order, which is exact for every action used here.
    """
    W = list(product(range(-box, box + 1), repeat=2))
    basis = [(g, p) for g in range(A.order) for p in W]
    # stretch factor of the weight action in the sup norm
    c = max(abs(x) for g in range(A.order) for p in [(1, 0), (0, 1), (1, 1), (1, -1)]
            for x in A.transform(g, p)[0])
    two = box + c * box            # weight reach of a double product
    three = box + c * two          # ... and of either bracketing of a triple product

    def elements(r):
        return [(g, p) for g in range(A.order) for p in product(range(-r, r + 1), repeat=2)]

    space = elements(three)
    sidx = {x: i for i, x in enumerate(space)}
    mid = elements(two)

    def table(rows, cols):
        shape = (len(space), len(space))
        idx = np.full(shape, -1, dtype=np.int64)
        turns = np.zeros(shape, dtype=np.int64)
        ms = np.zeros(shape, dtype=np.int64)
        for x in rows:
            for y in cols:
                g, w, t, m = basis_product(x[0], x[1], y[0], y[1], A, D.J0)
                tt = t * A.order
                assert tt.denominator == 1
                i, j = sidx[x], sidx[y]
                idx[i, j], turns[i, j], ms[i, j] = sidx[(g, w)], int(tt) % A.order, m
        return idx, turns, ms

    Pi, Pt, Pm = table(mid, basis)
    Qi, Qt, Qm = table(basis, mid)
    b = np.array([sidx[x] for x in basis])
    X, Y, Z = b[:, None, None], b[None, :, None], b[None, None, :]
    xy = Pi[X, Y]
    left = (Pi[xy, Z], (Pt[X, Y] + Pt[xy, Z]) % A.order, Pm[X, Y] + Pm[xy, Z])
    yz = Pi[Y, Z]
    right = (Qi[X, yz], (Pt[Y, Z] + Qt[X, yz]) % A.order, Pm[Y, Z] + Qm[X, yz])
    bad = (left[0] < 0) | (left[0] != right[0]) | (left[1] != right[1]) | (left[2] != right[2])
    return int(bad.sum()), len(basis) ** 3


@pytest.mark.parametrize("A", actions(), ids=["s2", "s3", "s4", "s6", "translation"])
def test_associativity_exact_on_basis_box(A):
    bad, triples = exhaustive_associativity_failures(A)
    assert triples == (25 * A.order) ** 3
    assert bad == 0


def test_associativity_random_elements():
    rng = np.random.default_rng(2)
    for A in actions():
        for _ in range(5):
            x, y, z = (CrossedElement.random(rng, 2, A.order) for _ in range(3))
            l = crossed_product(crossed_product(x, y, A, D), z, A, D)
            r = crossed_product(x, crossed_product(y, z, A, D), A, D)
            assert (l - r).l1_norm() < 1e-12


def test_star_examples():
    s2 = builtin_generator(2)
    x = CrossedElement.basis(1, (1, 0), 2)
    assert crossed_star(x, s2) == x
    one = CrossedElement.unit(2, 2)
    assert crossed_star(one, s2) == one
    rng = np.random.default_rng(3)
    for A in actions():
        for _ in range(5):
            x = CrossedElement.random(rng, 2, A.order)
            assert (crossed_star(crossed_star(x, A), A) - x).l1_norm() < 1e-15


def test_star_anti_multiplicative_on_basis_pairs():
    W = list(product(range(-2, 3), repeat=2))
    for A in actions():
        basis = [CrossedElement.basis(g, p, A.order) for g in range(A.order) for p in W]
        rng = np.random.default_rng(A.order)
        for i, j in rng.integers(len(basis), size=(400, 2)):
            x, y = basis[i], basis[j]
            lhs = crossed_star(crossed_product(x, y, A, D), A)
            rhs = crossed_product(crossed_star(y, A), crossed_star(x, A), A, D)
            assert set(lhs.terms) == set(rhs.terms)
            assert (lhs - rhs).l1_norm() < 1e-14


def test_trace():
    assert crossed_trace(CrossedElement.unit(2, 2)) == 1
    assert crossed_trace(CrossedElement.basis(1, (0, 0), 2)) == 0
    rng = np.random.default_rng(4)
    for A in actions():
        for _ in range(10):
            x, y = CrossedElement.random(rng, 2, A.order), CrossedElement.random(rng, 2, A.order)
            assert abs(crossed_trace(crossed_product(x, y, A, D)) - crossed_trace(crossed_product(y, x, A, D))) < 1e-12
            t = crossed_trace(crossed_product(crossed_star(x, A), x, A, D))
            assert abs(t.imag) < 1e-12 and t.real >= -1e-12


def test_dimension_errors():
    s2 = builtin_generator(2)
    x = CrossedElement.basis(0, (1, 0), 2)
    with pytest.raises(DimensionError):
        crossed_product(x, CrossedElement.basis(0, (1, 0), 3), s2, D)
    with pytest.raises(DimensionError):
        CrossedElement({(0, (1, 0, 0)): 1.0}, 2, 2)


def test_translation_validation():
    with pytest.raises(ParameterError):
        TranslationAction((Fraction(1, 3), 0), 2)
    assert TranslationAction((Fraction(3, 2), Fraction(-1, 2)), 2).shift == (Fraction(1, 2), Fraction(1, 2))


@pytest.mark.parametrize("theta", [0.0, 0.1, 1 / 3, 0.77])
def test_commuting_compare(theta):
    rep = commuting_deformation_compare(HALF, 2, D.with_theta(theta), 2)
    assert rep.pairs == (2 * 25) ** 2
    assert rep.ok and rep.max_abs_difference == 0.0


def test_commuting_compare_trivial_shift_and_errors():
    t0 = TranslationAction((0, 0), 2)
    assert commuting_deformation_compare(t0, 2, D, 2).ok
    with pytest.raises(ResourceError):
        commuting_deformation_compare(HALF, 2, D, 30, max_pairs=1000)
    with pytest.raises(ParameterError):
        commuting_deformation_compare(HALF, 4, D, 1)


def test_theta_zero_is_undeformed_crossed_product():
    # e_p u_g e_q u_h = exp(2 pi i g q.t) e_{p+q} u_{g+h} in the commutative crossed product
    D0 = D.with_theta(0.0)
    for g, h in product(range(2), repeat=2):
        for p, q in [((1, 0), (0, 1)), ((1, 1), (1, -1)), ((2, 0), (1, 1))]:
            out = crossed_product(CrossedElement.basis(g, p, 2), CrossedElement.basis(h, q, 2), HALF, D0)
            sign = (-1) ** (g * (q[0] + q[1]))
            assert out == CrossedElement.basis((g + h) % 2, (p[0] + q[0], p[1] + q[1]), 2, sign)

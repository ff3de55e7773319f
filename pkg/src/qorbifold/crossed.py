"""The crossed product A_J x| G as a (group x weight)-graded algebra.

A basis element ``(g, p)`` stands for ``e_p u_g`` and multiplication is

    (a u_g)(b u_h) = (a x_J beta_g(b)) u_{gh}.

Any action object with ``order`` and ``transform(g, p) -> (weight, turns)``
works here: matrix actions (turns always 0) and torus translations (a pure
phase ``exp(2 pi i turns)``, weight unchanged).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from qorbifold.errors import DimensionError, ParameterError, ResourceError
from qorbifold.weight_algebra import AlgebraElement, DROP_TOL, DeformationForm, phase, phase_exponent, skew_pairing

Key = tuple[int, tuple[int, ...]]


class CrossedElement:
    """Finite sum of ``c * e_p u_g``, keyed by ``(g, p)``."""

    __slots__ = ("_terms", "rank", "order")

    def __init__(self, terms: Mapping[tuple[int, Sequence[int]], complex], rank: int, order: int):
        clean: dict[Key, complex] = {}
        for (g, p), c in terms.items():
            p = tuple(int(x) for x in p)
            if len(p) != rank:
                raise DimensionError(f"weight {p} has length {len(p)}, expected {rank}")
            key = (int(g) % order, p)
            clean[key] = clean.get(key, 0j) + complex(c)
        self._terms = {k: c for k, c in clean.items() if abs(c) >= DROP_TOL}
        self.rank = rank
        self.order = order

    @classmethod
    def basis(cls, g: int, p: Sequence[int], order: int, coefficient: complex = 1.0) -> "CrossedElement":
        return cls({(g, tuple(p)): coefficient}, len(p), order)

    @classmethod
    def unit(cls, rank: int, order: int) -> "CrossedElement":
        return cls.basis(0, (0,) * rank, order)

    @classmethod
    def embed(cls, a: AlgebraElement, order: int, g: int = 0) -> "CrossedElement":
        return cls({(g, p): c for p, c in a.items()}, a.rank, order)

    @classmethod
    def random(cls, rng: np.random.Generator, rank: int, order: int, box: int = 2, count: int = 5):
        terms = {}
        for _ in range(count):
            g = int(rng.integers(order))
            p = tuple(int(x) for x in rng.integers(-box, box + 1, size=rank))
            terms[(g, p)] = complex(rng.normal(), rng.normal())
        return cls(terms, rank, order)

    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> dict[Key, complex]:
        return dict(self._terms)

    def coefficient(self, g: int, p: Sequence[int]) -> complex:
        return self._terms.get((g % self.order, tuple(p)), 0j)

    def graded_piece(self, g: int) -> AlgebraElement:
        return AlgebraElement({p: c for (h, p), c in self._terms.items() if h == g % self.order}, self.rank)

    def __add__(self, other: "CrossedElement") -> "CrossedElement":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0j) + c
        return CrossedElement(out, self.rank, self.order)

    def __sub__(self, other: "CrossedElement") -> "CrossedElement":
        return self + CrossedElement({k: -c for k, c in other._terms.items()}, other.rank, other.order)

    def __eq__(self, other):
        if not isinstance(other, CrossedElement):
            return NotImplemented
        return (self.rank, self.order, self._terms) == (other.rank, other.order, other._terms)

    def __hash__(self):
        return hash((self.rank, self.order, frozenset(self._terms.items())))

    def __repr__(self):
        body = " + ".join(f"({c:.6g})e{list(p)}u^{g}" for (g, p), c in sorted(self._terms.items()))
        return f"CrossedElement({body or 0})"

    def l1_norm(self) -> float:
        return math.fsum(abs(c) for c in self._terms.values())


@dataclass(frozen=True)
class TranslationAction:
    """Translation of the torus by ``shift`` generating a cyclic group of ``order``.

    On characters: ``e_p -> exp(2 pi i p.shift) e_p``.
    """

    shift: tuple[Fraction, ...]
    order: int

    def __post_init__(self):
        shift = tuple(Fraction(x) % 1 for x in self.shift)
        object.__setattr__(self, "shift", shift)
        if self.order < 1:
            raise ParameterError("order must be positive")
        if any((self.order * t).denominator != 1 for t in shift):
            raise ParameterError(f"order {self.order} does not annihilate shift {shift}")

    @property
    def rank(self) -> int:
        return len(self.shift)

    def transform(self, g: int, p: Sequence[int]):
        return tuple(p), (g * sum(Fraction(x) * t for x, t in zip(p, self.shift))) % 1


def _add(p, q):
    return tuple(a + b for a, b in zip(p, q))


def basis_product(g: int, p, h: int, q, action, J0):
    """Exact structure constant of ``(e_p u_g)(e_q u_h)``.

    Returns ``(gh, weight, turns, m)``: the product equals
    ``exp(2 pi i turns) exp(-2 pi i theta m) e_weight u_gh``.
    """
    q2, turns = action.transform(g, q)
    return (g + h) % action.order, _add(p, q2), turns, skew_pairing(p, q2, J0)


_QUARTER_TURNS = {Fraction(0): 1.0 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1.0 + 0j, Fraction(3, 4): -1j}


def _turn_value(turns: Fraction) -> complex:
    turns = Fraction(turns) % 1
    if turns in _QUARTER_TURNS:
        return _QUARTER_TURNS[turns]
    return cmath.exp(2j * math.pi * float(turns))


def _coefficient(turns: Fraction, m: int, theta: float) -> complex:
    # same float path as the weight algebra, so the identity piece matches bit for bit
    return _turn_value(turns) * phase(m, theta)


def _check(x: CrossedElement, action, D: DeformationForm):
    if x.rank != D.rank or action.rank != D.rank:
        raise DimensionError(f"rank mismatch: element {x.rank}, action {action.rank}, form {D.rank}")
    if x.order != action.order:
        raise DimensionError(f"group order mismatch: element {x.order}, action {action.order}")


def crossed_product(x: CrossedElement, y: CrossedElement, action, D: DeformationForm) -> CrossedElement:
    _check(x, action, D)
    _check(y, action, D)
    out: dict[Key, complex] = {}
    for (g, p), c1 in x.items():
        for (h, q), c2 in y.items():
            k, w, turns, m = basis_product(g, p, h, q, action, D.J0)
            out[(k, w)] = out.get((k, w), 0j) + c1 * c2 * _coefficient(turns, m, D.theta)
    return CrossedElement(out, x.rank, x.order)


def crossed_star(x: CrossedElement, action) -> CrossedElement:
    """(a u_g)* = beta_{g^-1}(a*) u_{g^-1}."""
    out: dict[Key, complex] = {}
    for (g, p), c in x.items():
        ginv = (-g) % action.order
        w, turns = action.transform(ginv, tuple(-a for a in p))
        key = (ginv, w)
        out[key] = out.get(key, 0j) + c.conjugate() * _coefficient(turns, 0, 0.0)
    return CrossedElement(out, x.rank, x.order)


def crossed_trace(x: CrossedElement) -> complex:
    """Coefficient of e_0 u_e (no 1/|G| normalisation)."""
    return x.coefficient(0, (0,) * x.rank)


@dataclass
class ComparisonReport:
    pairs: int
    exact_mismatches: list
    max_abs_difference: float

    @property
    def ok(self) -> bool:
        return not self.exact_mismatches and self.max_abs_difference == 0.0


def _undeformed_translation_constant(g, p, h, q, t: TranslationAction):
    # (e_p u_g)(e_q u_h) = e_p (u_g e_q u_g^-1) u_g u_h in the commutative crossed product
    turns = Fraction(0)
    for qi, ti in zip(q, t.shift):
        turns += g * qi * ti
    return (g + h) % t.order, tuple(a + b for a, b in zip(p, q)), turns % 1


def commuting_deformation_compare(translation: TranslationAction, order: int, D: DeformationForm,
                                  box: int, max_pairs: int = 2_000_000) -> ComparisonReport:
    """Compare A_J x| G with (A x| G)_J on all basis pairs with weights in ``[-box, box]^n``.

    The first side multiplies through ``crossed_product``'s structure
    constants; the second takes the undeformed crossed product and deforms it
    along the lifted torus action, under which ``e_p u_g`` has weight ``p``.
    """
    if order != translation.order:
        raise ParameterError(f"order {order} differs from the translation's order {translation.order}")
    if translation.rank != D.rank:
        raise DimensionError("translation and deformation ranks differ")
    weights = list(product(range(-box, box + 1), repeat=D.rank))
    basis = [(g, p) for g in range(order) for p in weights]
    pairs = len(basis) ** 2
    if pairs > max_pairs:
        raise ResourceError(f"{pairs} basis pairs exceed the cap of {max_pairs}")
    mismatches = []
    worst = 0.0
    for g, p in basis:
        for h, q in basis:
            k1, w1, t1, m1 = basis_product(g, p, h, q, translation, D.J0)
            k2, w2, t2 = _undeformed_translation_constant(g, p, h, q, translation)
            m2 = phase_exponent(p, q, D)
            if (k1, w1, t1, m1) != (k2, w2, t2, m2):
                mismatches.append(((g, p), (h, q), (k1, w1, t1, m1), (k2, w2, t2, m2)))
            # both sides are evaluated from their exact (turns, m) descriptors
            v1 = _coefficient(t1, m1, D.theta)
            v2 = _coefficient(t2, m2, D.theta)
            worst = max(worst, abs(v1 - v2) if (k1, w1) == (k2, w2) else abs(v1) + abs(v2))
    return ComparisonReport(pairs, mismatches, worst)

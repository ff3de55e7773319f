"""The theta-deformed four-sphere as a weight-graded monomial algebra.

Coordinates ``z1 = x1 + i x2``, ``z2 = x3 + i x4`` and ``x5``; a monomial is
the exponent vector of ``(z1, z1bar, z2, z2bar, x5)``.  The rotation action
of T^2 gives ``z1`` weight (1, 0) and ``z2`` weight (0, 1), and homogeneous
elements multiply as

    a x_J b = exp(-2 pi i theta m(wt a, wt b)) (a b)

with ``ab`` the commutative product.  The sphere relation is not quotiented
out: the radius element has weight zero, hence is central, and relation
checks are made on representatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import Iterable, Mapping

import numpy as np

from qorbifold.errors import DimensionError
from qorbifold.weight_algebra import DROP_TOL, DeformationForm, phase, skew_pairing

Monomial = tuple[int, int, int, int, int]

GENERATOR_NAMES = ("z1", "z1bar", "z2", "z2bar", "x5")
Z1: Monomial = (1, 0, 0, 0, 0)
Z1BAR: Monomial = (0, 1, 0, 0, 0)
Z2: Monomial = (0, 0, 1, 0, 0)
Z2BAR: Monomial = (0, 0, 0, 1, 0)
X5: Monomial = (0, 0, 0, 0, 1)
ONE: Monomial = (0, 0, 0, 0, 0)
GENERATORS = dict(zip(GENERATOR_NAMES, (Z1, Z1BAR, Z2, Z2BAR, X5)))


def _monomial(m: Iterable[int]) -> Monomial:
    m = tuple(int(x) for x in m)
    if len(m) != 5 or min(m) < 0:
        raise ValueError(f"monomial needs 5 non-negative exponents, got {m}")
    return m  # type: ignore[return-value]


def monomial_weight(m: Monomial) -> tuple[int, int]:
    return (m[0] - m[1], m[2] - m[3])


def monomial_name(m: Monomial) -> str:
    parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(GENERATOR_NAMES, m) if e]
    return "*".join(parts) or "1"


class SphereElement:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Iterable[int], complex] | None = None):
        clean: dict[Monomial, complex] = {}
        for m, c in (terms or {}).items():
            m = _monomial(m)
            clean[m] = clean.get(m, 0j) + complex(c)
        self._terms = {m: c for m, c in clean.items() if abs(c) >= DROP_TOL}

    @classmethod
    def generator(cls, name: str) -> "SphereElement":
        return cls({GENERATORS[name]: 1.0})

    @classmethod
    def monomial(cls, m, coefficient: complex = 1.0) -> "SphereElement":
        return cls({tuple(m): coefficient})

    @classmethod
    def random(cls, rng: np.random.Generator, max_degree: int = 2, count: int = 4) -> "SphereElement":
        pool = all_monomials(max_degree)
        picks = rng.choice(len(pool), size=count, replace=False)
        return cls({pool[i]: complex(rng.normal(), rng.normal()) for i in picks})

    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> dict[Monomial, complex]:
        return dict(self._terms)

    def __add__(self, other: "SphereElement") -> "SphereElement":
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0j) + c
        return SphereElement(out)

    def __sub__(self, other: "SphereElement") -> "SphereElement":
        return self + SphereElement({m: -c for m, c in other._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SphereElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        body = " + ".join(f"({c:.6g}){monomial_name(m)}" for m, c in sorted(self._terms.items()))
        return f"SphereElement({body or 0})"

    def l1_norm(self) -> float:
        return math.fsum(abs(c) for c in self._terms.values())


def radius_element() -> SphereElement:
    """z1 z1bar + z2 z2bar + x5^2 (equal to 1 on the sphere)."""
    return SphereElement({(1, 1, 0, 0, 0): 1.0, (0, 0, 1, 1, 0): 1.0, (0, 0, 0, 0, 2): 1.0})


def all_monomials(max_degree: int) -> list[Monomial]:
    out = []
    for deg in range(max_degree + 1):
        for combo in combinations_with_replacement(range(5), deg):
            m = [0] * 5
            for i in combo:
                m[i] += 1
            out.append(tuple(m))
    return out


def _mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))  # type: ignore[return-value]


def _require_rank2(D: DeformationForm):
    if D.rank != 2:
        raise DimensionError(f"the sphere's torus action has rank 2, got a form of rank {D.rank}")


# exact layer: (monomial, m) -> coefficient, meaning coefficient * exp(-2 pi i theta m) * monomial

def graded_sphere_product(a: dict, b: dict, J0) -> dict:
    out: dict = {}
    for (ma, ka), ca in a.items():
        wa = monomial_weight(ma)
        for (mb, kb), cb in b.items():
            key = (_mul(ma, mb), ka + kb + skew_pairing(wa, monomial_weight(mb), J0))
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


def lift_sphere(u: SphereElement) -> dict:
    return {(m, 0): c for m, c in u.items()}


def specialize_sphere(x: dict, theta: float) -> SphereElement:
    out: dict[Monomial, complex] = {}
    for (m, k), c in x.items():
        out[m] = out.get(m, 0j) + complex(c) * phase(k, theta)
    return SphereElement(out)


def sphere_product(u: SphereElement, v: SphereElement, D: DeformationForm) -> SphereElement:
    _require_rank2(D)
    return specialize_sphere(graded_sphere_product(lift_sphere(u), lift_sphere(v), D.J0), D.theta)


def _conjugate_monomial(m: Monomial) -> Monomial:
    return (m[1], m[0], m[3], m[2], m[4])


def sphere_action(g: int, u: SphereElement) -> SphereElement:
    """(x1, x2, x3, x4, x5) -> (x1, -x2, x3, -x4, x5), i.e. z_i -> zbar_i, for odd ``g``."""
    if g % 2 == 0:
        return SphereElement(u.terms)
    return SphereElement({_conjugate_monomial(m): c for m, c in u.items()})


def sphere_star(u: SphereElement) -> SphereElement:
    return SphereElement({_conjugate_monomial(m): c.conjugate() for m, c in u.items()})


def graded_sphere_star(x: dict) -> dict:
    return {(_conjugate_monomial(m), -k): c.conjugate() for (m, k), c in x.items()}


def graded_sphere_action(g: int, x: dict) -> dict:
    if g % 2 == 0:
        return dict(x)
    return {(_conjugate_monomial(m), k): c for (m, k), c in x.items()}


def action_equivariance_residual(g: int, u: SphereElement, v: SphereElement, D: DeformationForm) -> float:
    """l1 norm of beta(u x_J v) - beta(u) x_J beta(v), computed exactly then specialised."""
    _require_rank2(D)
    lu, lv = lift_sphere(u), lift_sphere(v)
    lhs = graded_sphere_action(g, graded_sphere_product(lu, lv, D.J0))
    rhs = graded_sphere_product(graded_sphere_action(g, lu), graded_sphere_action(g, lv), D.J0)
    diff = dict(lhs)
    for k, c in rhs.items():
        diff[k] = diff.get(k, 0) - c
    diff = {k: c for k, c in diff.items() if c != 0}
    return specialize_sphere(diff, D.theta).l1_norm()


@dataclass
class RelationEntry:
    left: str
    right: str
    exponent: int   # (left x right) = exp(2 pi i theta * exponent) (right x left)

    @property
    def pi_theta_exponent(self) -> int:
        """Same ratio written as exp(pi i theta * k)."""
        return 2 * self.exponent

    def ratio(self, theta: float) -> complex:
        return phase(-self.exponent, theta)

    def describe(self) -> str:
        if self.exponent == 0:
            return f"{self.left} x {self.right} = {self.right} x {self.left}"
        return f"{self.left} x {self.right} = e^({self.pi_theta_exponent} pi i theta) {self.right} x {self.left}"


@dataclass
class RelationReport:
    theta: float
    entries: list[RelationEntry]
    radius_central: bool
    x5_central: bool
    action_residual: float

    def lookup(self, left: str, right: str) -> RelationEntry:
        return next(e for e in self.entries if e.left == left and e.right == right)


def _commutation_exponent(a: Monomial, b: Monomial, J0) -> int:
    """Integer e with a x b = exp(2 pi i theta e) b x a for monomials a, b."""
    ((m1, k1),) = graded_sphere_product({(a, 0): 1}, {(b, 0): 1}, J0)
    ((m2, k2),) = graded_sphere_product({(b, 0): 1}, {(a, 0): 1}, J0)
    assert m1 == m2
    # exp(-2 pi i theta k1) = exp(2 pi i theta e) exp(-2 pi i theta k2)
    return k2 - k1


def relation_report(D: DeformationForm) -> RelationReport:
    _require_rank2(D)
    names = GENERATOR_NAMES
    entries = []
    for a, b in product(names, repeat=2):
        e = _commutation_exponent(GENERATORS[a], GENERATORS[b], D.J0)
        entries.append(RelationEntry(a, b, e))
    radius = {(m, 0): int(c.real) for m, c in radius_element().items()}
    radius_central = all(
        graded_sphere_product(radius, {(g, 0): 1}, D.J0) == graded_sphere_product({(g, 0): 1}, radius, D.J0)
        for g in GENERATORS.values()
    )
    x5_central = all(e.exponent == 0 for e in entries if "x5" in (e.left, e.right))
    gens = [SphereElement.generator(n) for n in names]
    residual = max(action_equivariance_residual(1, u, v, D) for u in gens for v in gens)
    return RelationReport(D.theta, entries, radius_central, x5_central, residual)

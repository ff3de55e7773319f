"""Rieffel's deformed product on the Fourier (weight) model of C(T^n).

An element is a finite sum ``sum_p c_p e_p`` of characters
``e_p(x) = exp(2 pi i p.x)``.  The torus acts by translation,
``(alpha_v f)(x) = f(x + v)``, so ``e_p`` has weight ``p``.  Evaluating the
oscillatory product on two characters gives

    e_p x_J e_q = exp(-2 pi i theta * m(p, q)) e_{p+q},   m(p, q) = p^T J0 q,

with ``J = theta * J0``.  The integer ``m`` is kept exact everywhere; only the
final specialisation to a complex number uses floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from qorbifold.errors import DimensionError, NumericalFailure, ParameterError

Weight = tuple[int, ...]

# With J = theta*[[0,1],[-1,0]], V x U = exp(2 pi i * 2 theta) U x V.
THETA_PRIME_FACTOR = 2
DROP_TOL = 1e-15
DEFAULT_SCHEDULE = (0.1, 0.05, 0.025, 0.0125)

STANDARD_J0 = ((0, 1), (-1, 0))


def _int_matrix(rows: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, float):
                if not x.is_integer():
                    raise ParameterError(f"non-integer matrix entry {x!r}")
                x = int(x)
            r.append(int(x))
        out.append(tuple(r))
    return tuple(out)


@dataclass(frozen=True)
class DeformationForm:
    """``J = theta * J0`` with ``J0`` an integer skew-symmetric matrix."""

    J0: tuple[tuple[int, ...], ...]
    theta: float = 0.0

    def __post_init__(self):
        J0 = _int_matrix(self.J0)
        object.__setattr__(self, "J0", J0)
        object.__setattr__(self, "theta", float(self.theta))
        n = len(J0)
        if n == 0 or any(len(row) != n for row in J0):
            raise DimensionError(f"J0 must be a non-empty square matrix, got {J0!r}")
        for i in range(n):
            for j in range(n):
                if J0[i][j] != -J0[j][i]:
                    raise ParameterError(
                        f"J0 is not skew-symmetric: J0[{i}][{j}]={J0[i][j]}, "
                        f"J0[{j}][{i}]={J0[j][i]}"
                    )

    @property
    def rank(self) -> int:
        return len(self.J0)

    @property
    def J(self) -> np.ndarray:
        return self.theta * np.array(self.J0, dtype=float)

    @classmethod
    def standard(cls, theta: float, pairs: int = 1) -> "DeformationForm":
        """The standard symplectic matrix on R^{2*pairs}, scaled by theta."""
        n = 2 * pairs
        J0 = [[0] * n for _ in range(n)]
        for k in range(pairs):
            J0[k][pairs + k] = 1
            J0[pairs + k][k] = -1
        return cls(J0, theta)

    def with_theta(self, theta: float) -> "DeformationForm":
        return DeformationForm(self.J0, theta)


def _check_weight(p: Sequence[int], n: int) -> Weight:
    p = tuple(int(x) for x in p)
    if len(p) != n:
        raise DimensionError(f"weight {p} has length {len(p)}, expected {n}")
    return p


def _add(p: Weight, q: Weight) -> Weight:
    return tuple(a + b for a, b in zip(p, q))


def _neg(p: Weight) -> Weight:
    return tuple(-a for a in p)


def skew_pairing(p: Weight, q: Weight, J0) -> int:
    """p^T J0 q for integer data, no validation."""
    total = 0
    for i, pi in enumerate(p):
        if pi:
            row = J0[i]
            total += pi * sum(row[j] * qj for j, qj in enumerate(q))
    return total


def phase_exponent(p: Sequence[int], q: Sequence[int], D: DeformationForm) -> int:
    """Exact exponent ``m`` with ``e_p x_J e_q = exp(-2 pi i theta m) e_{p+q}``."""
    n = D.rank
    return skew_pairing(_check_weight(p, n), _check_weight(q, n), D.J0)


def phase(m: int, theta: float) -> complex:
    if m == 0:
        return 1.0 + 0.0j
    return cmath.exp(-2j * math.pi * theta * m)


class AlgebraElement:
    """Finite linear combination of characters, kept in canonical form.

    Instances are treated as immutable; arithmetic returns new elements.
    """

    __slots__ = ("_terms", "rank")

    def __init__(self, terms: Mapping[Sequence[int], complex] | None = None, rank: int | None = None):
        terms = dict(terms or {})
        if rank is None:
            if not terms:
                raise DimensionError("rank is required for an empty element")
            rank = len(next(iter(terms)))
        clean: dict[Weight, complex] = {}
        for p, c in terms.items():
            p = _check_weight(p, rank)
            c = complex(c)
            if abs(c) < DROP_TOL:
                continue
            clean[p] = clean.get(p, 0j) + c
        self._terms = {p: c for p, c in clean.items() if abs(c) >= DROP_TOL}
        self.rank = rank

    @property
    def terms(self) -> dict[Weight, complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def coefficient(self, p: Sequence[int]) -> complex:
        return self._terms.get(tuple(p), 0j)

    @classmethod
    def basis(cls, p: Sequence[int], coefficient: complex = 1.0) -> "AlgebraElement":
        return cls({tuple(p): coefficient}, rank=len(p))

    @classmethod
    def unit(cls, rank: int) -> "AlgebraElement":
        return cls({(0,) * rank: 1.0}, rank=rank)

    @classmethod
    def zero(cls, rank: int) -> "AlgebraElement":
        return cls({}, rank=rank)

    @classmethod
    def random(cls, rng: np.random.Generator, rank: int, box: int = 2, count: int = 5) -> "AlgebraElement":
        terms = {}
        for _ in range(count):
            p = tuple(int(x) for x in rng.integers(-box, box + 1, size=rank))
            terms[p] = complex(rng.normal(), rng.normal())
        return cls(terms, rank=rank)

    def _same_rank(self, other: "AlgebraElement"):
        if self.rank != other.rank:
            raise DimensionError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same_rank(other)
        out = dict(self._terms)
        for p, c in other._terms.items():
            out[p] = out.get(p, 0j) + c
        return AlgebraElement(out, self.rank)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement({p: -c for p, c in self._terms.items()}, self.rank)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, scalar: complex) -> "AlgebraElement":
        return AlgebraElement({p: scalar * c for p, c in self._terms.items()}, self.rank)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        return hash((self.rank, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "AlgebraElement(0)"
        parts = [f"({c:.6g})e{list(p)}" for p, c in sorted(self._terms.items())]
        return "AlgebraElement(" + " + ".join(parts) + ")"


# Exact bookkeeping: a "graded" element maps (weight, m) -> coefficient, meaning
# coefficient * exp(-2 pi i theta m) e_weight.  With integer or Fraction
# coefficients every operation below is exact.

Graded = dict[tuple[Weight, int], object]


def lift(a: AlgebraElement) -> Graded:
    return {(p, 0): c for p, c in a.items()}


def graded_product(a: Graded, b: Graded, J0) -> Graded:
    out: Graded = {}
    for (p, m1), c1 in a.items():
        for (q, m2), c2 in b.items():
            key = (_add(p, q), m1 + m2 + skew_pairing(p, q, J0))
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


def graded_star(a: Graded) -> Graded:
    return {(_neg(p), -m): c.conjugate() for (p, m), c in a.items()}


def specialize(a: Graded, theta: float, rank: int) -> AlgebraElement:
    out: dict[Weight, complex] = {}
    for (p, m), c in a.items():
        out[p] = out.get(p, 0j) + complex(c) * phase(m, theta)
    return AlgebraElement(out, rank)


def deformed_product(a: AlgebraElement, b: AlgebraElement, D: DeformationForm) -> AlgebraElement:
    """The deformed product ``a x_J b`` by bilinear extension of the character law."""
    if a.rank != D.rank or b.rank != D.rank:
        raise DimensionError(f"ranks {a.rank}, {b.rank} do not match form of rank {D.rank}")
    return specialize(graded_product(lift(a), lift(b), D.J0), D.theta, D.rank)


def star(a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement({_neg(p): c.conjugate() for p, c in a.items()}, a.rank)


def trace(a: AlgebraElement) -> complex:
    return a.coefficient((0,) * a.rank)


def l1_norm(a: AlgebraElement) -> float:
    return math.fsum(abs(c) for _, c in a.items())


# --- regulated oscillatory integral ----------------------------------------
#
# On characters the double integral factorises as e_{p+q} times
#   I = int int exp(2 pi i (b.u + q.v + u.v)) du dv,    b = J^T p,
# regulated by exp(-eps(|u|^2 + |v|^2)).  The v integral is Gaussian; the u
# integral is evaluated either in closed form or by adaptive quadrature.  Both
# factorise over coordinates.  Dividing by the same integral with J = 0 (whose
# unregulated value is 1 by Fourier inversion) removes the O(eps |q|^2) bias.


def _coordinate_integral_closed(b: float, q: float, eps: float) -> complex:
    s = eps * eps + math.pi ** 2
    expo = (-(math.pi ** 2) * q * q * eps - 2j * math.pi ** 3 * b * q - eps * math.pi ** 2 * b * b) / s
    return math.pi / math.sqrt(s) * cmath.exp(expo)


def _coordinate_integral_quad(b: float, q: float, eps: float) -> complex:
    from scipy.integrate import quad

    # after the Gaussian v integral the u integrand is concentrated at u = -q
    # with width sqrt(eps)/pi
    width = 12.0 * math.sqrt(eps) / math.pi
    lo, hi = -q - width, -q + width
    pref = math.sqrt(math.pi / eps)

    def envelope(u):
        return pref * math.exp(-eps * u * u - (math.pi ** 2) * (u + q) ** 2 / eps)

    re, _ = quad(lambda u: envelope(u) * math.cos(2 * math.pi * b * u), lo, hi,
                 epsabs=1e-14, epsrel=1e-13, limit=200)
    im, _ = quad(lambda u: envelope(u) * math.sin(2 * math.pi * b * u), lo, hi,
                 epsabs=1e-14, epsrel=1e-13, limit=200)
    return complex(re, im)


_METHODS = {"closed": _coordinate_integral_closed, "quadrature": _coordinate_integral_quad}


def regulated_integral(p, q, D: DeformationForm, eps: float, method: str = "closed",
                       normalize: bool = True) -> complex:
    """The regulated double integral on ``e_p, e_q`` at a single width ``eps``."""
    n = D.rank
    p = _check_weight(p, n)
    q = _check_weight(q, n)
    if eps <= 0:
        raise ParameterError("regulator width must be positive")
    try:
        coord = _METHODS[method]
    except KeyError:
        raise ParameterError(f"unknown method {method!r}") from None
    b = D.J.T @ np.array(p, dtype=float)
    value = 1.0 + 0j
    base = 1.0 + 0j
    for k in range(n):
        value *= coord(float(b[k]), float(q[k]), eps)
        if normalize:
            base *= coord(0.0, float(q[k]), eps)
    return value / base if normalize else value


def richardson(xs: Sequence[float], ys: Sequence[complex]) -> list[complex]:
    """Successive polynomial extrapolations to x = 0 (Neville).

    Entry ``k`` uses the first ``k + 1`` samples.
    """
    n = len(xs)
    table = [list(ys)]
    estimates = [ys[0]]
    for level in range(1, n):
        prev = table[-1]
        row = []
        for i in range(n - level):
            x_lo, x_hi = xs[i], xs[i + level]
            row.append((x_hi * prev[i] - x_lo * prev[i + 1]) / (x_hi - x_lo))
        table.append(row)
        estimates.append(row[0])
    return estimates


def oscillatory_check(p, q, D: DeformationForm, schedule: Sequence[float] = DEFAULT_SCHEDULE,
                      method: str = "closed") -> complex:
    """Extrapolate the regulated integral to zero width.

    The result should agree with ``exp(-2 pi i theta p^T J0 q)``; it never uses
    the phase law itself.
    """
    schedule = [float(e) for e in schedule]
    if len(schedule) < 3:
        raise ParameterError("schedule needs at least 3 regulator widths")
    if any(e <= 0 for e in schedule) or any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ParameterError("schedule must be strictly decreasing and positive")
    samples = [regulated_integral(p, q, D, eps, method) for eps in schedule]
    if any(s == 0 for s in samples):
        raise NumericalFailure(f"regulated integral vanished for p={tuple(p)}, q={tuple(q)}", samples)
    # the logarithm of each coordinate factor is rational in eps with poles at
    # +-i pi, so it extrapolates far better than the value itself when |J^T p| is large
    logs = np.log(np.abs(samples)) + 1j * np.unwrap(np.angle(samples))
    estimates = [complex(np.exp(z)) for z in richardson(schedule, list(logs))]
    residuals = [abs(b - a) for a, b in zip(estimates, estimates[1:])]
    if len(residuals) >= 2 and residuals[-1] > residuals[-2] and residuals[-1] > 1e-9:
        raise NumericalFailure(
            f"extrapolation diverging for p={tuple(p)}, q={tuple(q)}", estimates
        )
    return estimates[-1]

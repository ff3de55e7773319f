"""A projection of trace theta' in the quantum torus, built from piecewise-linear bumps.

With ``U = e_(1,0)``, ``V = e_(0,1)`` and ``V U = exp(2 pi i theta') U V``,
conjugation by V shifts functions of U: ``V h(U) V* = h(. + theta')(U)``.
Elements are written in the normal form ``sum_k h_k(U) V^k`` and

    p = V g(U) + f(U) + (V g(U))*  =  g(. + theta')(U) V + f(U) + g(U) V*.

``p x p = p`` is equivalent to three pointwise identities between f and g,
which are checked on a uniform grid of [0, 1).  The full square is also
formed componentwise as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from qorbifold.errors import ParameterError
from qorbifold.weight_algebra import THETA_PRIME_FACTOR

MIN_GRID = 1000


@dataclass(frozen=True)
class BumpSpec:
    theta_prime: float
    ramp_width: float
    grid_size: int = 100_000

    def __post_init__(self):
        tp, eps = self.theta_prime, self.ramp_width
        if not 0 < tp < 0.5:
            raise ParameterError(f"theta' = {tp} must lie in (0, 1/2)")
        if not 0 < eps < tp:
            raise ParameterError(f"ramp width {eps} must lie in (0, theta' = {tp})")
        if not 2 * tp + eps < 1:
            raise ParameterError(f"need 2 theta' + eps < 1, got {2 * tp + eps}")
        if self.grid_size < 1:
            raise ParameterError("grid_size must be positive")

    @property
    def theta(self) -> float:
        """Deformation parameter of J = theta [[0,1],[-1,0]] giving this theta'."""
        return self.theta_prime / THETA_PRIME_FACTOR


def bump_pair(spec: BumpSpec) -> tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]:
    """The functions (f, g) on R/Z; both accept arrays and reduce mod 1."""
    tp, eps = spec.theta_prime, spec.ramp_width

    def f(t):
        t = np.mod(np.asarray(t, dtype=float), 1.0)
        out = np.zeros_like(t)
        up = t < eps
        out[up] = t[up] / eps
        flat = (t >= eps) & (t <= tp)
        out[flat] = 1.0
        down = (t > tp) & (t < tp + eps)
        out[down] = (tp + eps - t[down]) / eps
        return out

    def g(t):
        t = np.mod(np.asarray(t, dtype=float), 1.0)
        out = np.zeros_like(t)
        on = (t > tp) & (t < tp + eps)
        ft = f(t[on])
        out[on] = np.sqrt(np.clip(ft - ft * ft, 0.0, None))
        return out

    return f, g


def bump_integral(spec: BumpSpec) -> float:
    """Closed-form integral of f: two ramps of area eps/2 plus the plateau."""
    eps = Fraction(spec.ramp_width)
    return float(eps / 2 + (Fraction(spec.theta_prime) - eps) + eps / 2)


@dataclass(frozen=True)
class Component:
    """The function ``t -> name(scale * t + shift)`` (conjugated if ``conj``)."""

    name: str
    scale: int = 1
    shift: float = 0.0
    conj: bool = False


@dataclass
class TorusElement:
    """Finite sum ``sum_k h_k(U) V^k``; ``parts[k]`` lists the summands of h_k."""

    theta_prime: float
    parts: dict[int, tuple[Component, ...]] = field(default_factory=dict)

    def star(self) -> "TorusElement":
        # (h(U) V^k)* = V^-k hbar(U) = hbar(. - k theta')(U) V^-k
        out: dict[int, list[Component]] = {}
        for k, comps in self.parts.items():
            for c in comps:
                out.setdefault(-k, []).append(
                    Component(c.name, c.scale, c.shift - c.scale * k * self.theta_prime, not c.conj))
        return TorusElement(self.theta_prime, {k: _canon(v) for k, v in out.items()})

    def flip(self) -> "TorusElement":
        """Image under U -> U*, V -> V*."""
        out = {-k: tuple(Component(c.name, -c.scale, c.shift, c.conj) for c in comps)
               for k, comps in self.parts.items()}
        return TorusElement(self.theta_prime, out)

    def evaluate(self, k: int, t: np.ndarray, functions: dict[str, Callable]) -> np.ndarray:
        total = np.zeros_like(np.asarray(t, dtype=complex))
        for c in self.parts.get(k, ()):
            vals = functions[c.name](c.scale * np.asarray(t) + c.shift).astype(complex)
            total += np.conj(vals) if c.conj else vals
        return total


def _canon(comps) -> tuple[Component, ...]:
    # f and g are real-valued, so the conj flag carries no information
    return tuple(sorted((Component(c.name, c.scale, c.shift, False) for c in comps),
                        key=lambda c: (c.name, c.scale, c.shift)))


def assemble_projection(spec: BumpSpec) -> TorusElement:
    tp = spec.theta_prime
    parts = {
        1: (Component("g", 1, tp),),
        0: (Component("f"),),
        -1: (Component("g"),),
    }
    return TorusElement(tp, {k: _canon(v) for k, v in parts.items()})


def is_self_adjoint(x: TorusElement) -> bool:
    """Structural comparison of components; no numerics involved."""
    s = x.star()
    keys = {k for k, v in x.parts.items() if v} | {k for k, v in s.parts.items() if v}
    return all(_canon(x.parts.get(k, ())) == _canon(s.parts.get(k, ())) for k in keys)


@dataclass
class ProjectionReport:
    cond_orthogonality: float
    cond_partition: float
    cond_square: float
    trace: float
    square_residual: float
    grid_size: int

    @property
    def max_residual(self) -> float:
        return max(self.cond_orthogonality, self.cond_partition, self.cond_square, self.square_residual)


def square_components(x: TorusElement, t: np.ndarray, functions) -> dict[int, np.ndarray]:
    """Pointwise components of x x x: (h_j V^j)(h_k V^k) = h_j h_k(. + j theta') V^(j+k)."""
    out: dict[int, np.ndarray] = {}
    tp = x.theta_prime
    for j in x.parts:
        hj = x.evaluate(j, t, functions)
        for k in x.parts:
            hk = x.evaluate(k, t + j * tp, functions)
            out[j + k] = out.get(j + k, 0) + hj * hk
    return out


def projection_residuals(spec: BumpSpec) -> ProjectionReport:
    if spec.grid_size < MIN_GRID:
        raise ParameterError(f"grid of {spec.grid_size} points is too coarse (minimum {MIN_GRID})")
    f, g = bump_pair(spec)
    tp = spec.theta_prime
    t = np.arange(spec.grid_size, dtype=float) / spec.grid_size
    gt, ft = g(t), f(t)
    orth = float(np.max(np.abs(gt * g(t - tp))))
    part = float(np.max(np.abs(gt * (ft + f(t - tp) - 1.0))))
    sq = float(np.max(np.abs(ft - ft * ft - gt * gt - g(t + tp) ** 2)))

    p = assemble_projection(spec)
    funcs = {"f": f, "g": g}
    pp = square_components(p, t, funcs)
    generic = 0.0
    for k in set(pp) | set(p.parts):
        diff = pp.get(k, 0) - (p.evaluate(k, t, funcs) if k in p.parts else 0)
        generic = max(generic, float(np.max(np.abs(diff))))
    return ProjectionReport(orth, part, sq, bump_integral(spec), generic, spec.grid_size)


def flip_orbit(spec: BumpSpec) -> list[TorusElement]:
    """The projection and its image under the order-two flip U -> U*, V -> V*."""
    p = assemble_projection(spec)
    return [p, p.flip()]


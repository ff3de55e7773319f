"""Simplicial complexes with simplicial cyclic group actions.

Vertices are non-negative integer ids; a simplex is a sorted tuple of ids and
that order fixes its orientation.  A cyclic action is a vertex permutation
(the image of the generator), stored as a tuple indexed by vertex id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from qorbifold.errors import ParameterError, PreconditionError, RegularityError

Simplex = tuple[int, ...]


def _closure(faces: Iterable[Iterable[int]]) -> set[Simplex]:
    out: set[Simplex] = set()
    for f in faces:
        f = tuple(sorted(set(int(v) for v in f)))
        if not f or f in out:
            continue
        for k in range(1, len(f) + 1):
            out.update(combinations(f, k))
    return out


class SimplicialComplex:
    """A finite abstract simplicial complex, immutable after construction."""

    def __init__(self, simplices: Iterable[Iterable[int]], vertices: Iterable[int] | None = None,
                 *, closed: bool = False):
        if closed:
            all_simplices = {tuple(s) for s in simplices}
        else:
            all_simplices = _closure(simplices)
        verts = {s[0] for s in all_simplices if len(s) == 1}
        if vertices is not None:
            extra = set(int(v) for v in vertices)
            all_simplices |= {(v,) for v in extra}
            verts |= extra
        self.vertices: tuple[int, ...] = tuple(sorted(verts))
        dim = max((len(s) for s in all_simplices), default=0) - 1
        by_dim: list[list[Simplex]] = [[] for _ in range(dim + 1)]
        for s in all_simplices:
            by_dim[len(s) - 1].append(s)
        self.simplices: tuple[tuple[Simplex, ...], ...] = tuple(tuple(sorted(d)) for d in by_dim)

    @classmethod
    def from_maximal(cls, facets: Iterable[Iterable[int]], vertices=None) -> "SimplicialComplex":
        return cls(facets, vertices)

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def __len__(self):
        return sum(len(d) for d in self.simplices)

    def counts(self) -> list[int]:
        return [len(d) for d in self.simplices]

    @cached_property
    def index(self) -> list[dict[Simplex, int]]:
        return [{s: i for i, s in enumerate(d)} for d in self.simplices]

    def __contains__(self, s) -> bool:
        s = tuple(sorted(s))
        k = len(s) - 1
        return 0 <= k <= self.dim and s in self.index[k]

    def all_simplices(self) -> Iterable[Simplex]:
        for d in self.simplices:
            yield from d

    def maximal(self) -> list[Simplex]:
        covered: set[Simplex] = set()
        for d in self.simplices[1:]:
            for s in d:
                covered.update(combinations(s, len(s) - 1))
        return [s for s in self.all_simplices() if s not in covered]

    def validate(self) -> None:
        verts = set(self.vertices)
        for d in self.simplices:
            for s in d:
                if list(s) != sorted(set(s)):
                    raise ParameterError(f"simplex {s} is not a sorted set of vertices")
                if not set(s) <= verts:
                    raise ParameterError(f"simplex {s} uses unknown vertices")
                if len(s) > 1:
                    for f in combinations(s, len(s) - 1):
                        if f not in self:
                            raise ParameterError(f"face {f} of {s} missing")

    def full_subcomplex(self, vertices: Iterable[int]) -> "SimplicialComplex":
        keep = set(vertices)
        simplices = [s for s in self.all_simplices() if keep.issuperset(s)]
        return SimplicialComplex(simplices, vertices=keep & set(self.vertices), closed=True)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dim}, counts={self.counts()})"


@dataclass(frozen=True)
class SimplicialAction:
    """Cyclic group of ``order`` acting through the vertex permutation ``perm``."""

    order: int
    perm: tuple[int, ...]
    faithful: bool = False

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(v) for v in self.perm))
        if self.order < 1:
            raise ParameterError("group order must be positive")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ParameterError("generator is not a permutation of 0..n-1")
        k = self.perm_order()
        if self.order % k:
            raise ParameterError(f"permutation has order {k}, not dividing {self.order}")
        if self.faithful and k != self.order:
            raise ParameterError(f"permutation has order {k}, declared faithful of order {self.order}")

    @classmethod
    def trivial(cls, n_vertices: int, order: int = 1) -> "SimplicialAction":
        return cls(order, tuple(range(n_vertices)))

    def perm_order(self) -> int:
        k, cur = 1, self.perm
        ident = tuple(range(len(self.perm)))
        while cur != ident:
            cur = tuple(self.perm[v] for v in cur)
            k += 1
        return k

    def power(self, k: int) -> tuple[int, ...]:
        k %= self.order
        out = tuple(range(len(self.perm)))
        for _ in range(k):
            out = tuple(self.perm[v] for v in out)
        return out

    @cached_property
    def powers(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.power(k) for k in range(self.order))

    def apply(self, k: int, s: Sequence[int]) -> Simplex:
        p = self.powers[k % self.order]
        return tuple(sorted(p[v] for v in s))

    def check_simplicial(self, K: SimplicialComplex) -> None:
        if len(self.perm) <= max(K.vertices, default=-1):
            raise ParameterError("permutation does not cover every vertex")
        for s in K.all_simplices():
            if self.apply(1, s) not in K:
                raise ParameterError(f"generator maps simplex {s} outside the complex")


@dataclass(frozen=True)
class GComplex:
    complex: SimplicialComplex
    action: SimplicialAction
    regularity_level: int = 0

    def __post_init__(self):
        self.action.check_simplicial(self.complex)

    @property
    def order(self) -> int:
        return self.action.order


def barycentric_subdivide(K: SimplicialComplex, act: SimplicialAction | None = None):
    """Barycentric subdivision; returns ``K'`` or ``(K', act')`` if an action is given.

    Original vertices keep their ids; barycenters of higher simplices follow,
    ordered lexicographically by the simplex they subdivide.
    """
    higher = sorted(s for s in K.all_simplices() if len(s) > 1)
    offset = max(K.vertices, default=-1) + 1
    ident = {(v,): v for v in K.vertices}
    ident.update({s: offset + i for i, s in enumerate(higher)})

    chains: dict[Simplex, list[tuple[int, ...]]] = {}
    for d in K.simplices:
        for s in d:
            top = ident[s]
            ending = [(top,)]
            for k in range(1, len(s)):
                for f in combinations(s, k):
                    ending.extend(c + (top,) for c in chains[f])
            chains[s] = ending
    new_simplices = {tuple(sorted(c)) for d in K.simplices for s in d for c in chains[s]}
    Kd = SimplicialComplex(new_simplices, closed=True)
    if act is None:
        return Kd
    n = offset + len(higher)
    perm = list(range(n))
    base = act.perm
    for s, i in ident.items():
        perm[i] = ident[tuple(sorted(base[v] for v in s))]
    return Kd, SimplicialAction(act.order, tuple(perm), act.faithful)


def regularity_check(G: GComplex) -> tuple[bool, tuple | None]:
    """True iff no vertex shares a simplex with a distinct translate of itself.

    On failure the witness is ``(g, v, simplex)``.
    """
    act = G.action
    for d in G.complex.simplices[1:]:
        for s in d:
            members = set(s)
            for g in range(1, act.order):
                p = act.powers[g]
                for v in s:
                    w = p[v]
                    if w != v and w in members:
                        return False, (g, v, s)
    return True, None


def make_regular(G: GComplex, max_subdiv: int = 2) -> GComplex:
    level = 0
    while True:
        ok, witness = regularity_check(G)
        if ok:
            return GComplex(G.complex, G.action, G.regularity_level + level)
        if level >= max_subdiv:
            raise RegularityError(f"not regular after {max_subdiv} subdivisions", witness)
        K, act = barycentric_subdivide(G.complex, G.action)
        G = GComplex(K, act, G.regularity_level)
        level += 1


def _require_regular(G: GComplex):
    ok, witness = regularity_check(G)
    if not ok:
        raise PreconditionError(f"action is not regular (witness {witness}); call make_regular first")


def fixed_vertices(G: GComplex, g: int) -> list[int]:
    p = G.action.powers[g % G.order]
    return [v for v in G.complex.vertices if p[v] == v]


def fixed_subcomplex(G: GComplex, g: int) -> SimplicialComplex:
    """Full subcomplex on the vertices fixed by ``g`` (the fixed set, for regular actions)."""
    _require_regular(G)
    return G.complex.full_subcomplex(fixed_vertices(G, g))


def _perm_sign(seq: Sequence[int]) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@dataclass
class QuotientComplex:
    """Orbit cell complex ``K/G``: one cell per orbit of simplices.

    ``cells[k]`` lists the canonical representative of each k-cell;
    ``orbit_of`` maps every simplex to ``(dim, cell index, sign)`` where sign
    compares its induced orientation with the representative's.
    """

    cells: list[list[Simplex]]
    orbit_of: dict[Simplex, tuple[int, int, int]] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def counts(self) -> list[int]:
        return [len(c) for c in self.cells]

    @property
    def vertex_orbits(self) -> list[Simplex]:
        return self.cells[0] if self.cells else []


def orbit_cells(K: SimplicialComplex, act: SimplicialAction) -> QuotientComplex:
    powers = act.powers
    orbit_of: dict[Simplex, tuple[int, int, int]] = {}
    cells: list[list[Simplex]] = [[] for _ in range(K.dim + 1)]
    for k, d in enumerate(K.simplices):
        for s in d:
            if s in orbit_of:
                continue
            images = []
            for p in powers:
                ordered = tuple(p[v] for v in s)
                images.append((tuple(sorted(ordered)), ordered))
            rep = min(t for t, _ in images)
            idx = len(cells[k])
            cells[k].append(rep)
            # orientation of each orbit member relative to rep: map member -> rep
            for t, _ in images:
                if t in orbit_of:
                    continue
                signs = set()
                for p in powers:
                    ordered = tuple(p[v] for v in t)
                    if tuple(sorted(ordered)) == rep:
                        signs.add(_perm_sign(ordered))
                if len(signs) != 1:
                    raise PreconditionError(
                        f"cell {t} is mapped to itself with reversed orientation"
                    )
                orbit_of[t] = (k, idx, signs.pop())
    return QuotientComplex(cells, orbit_of)


def quotient_complex(G: GComplex) -> QuotientComplex:
    """Orbit space of a regular action, as a cell complex of simplex orbits."""
    _require_regular(G)
    return orbit_cells(G.complex, G.action)

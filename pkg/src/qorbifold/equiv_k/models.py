"""Triangulations of T^2 and S^4 on which the shipped group actions are simplicial.

Torus vertices carry integer coordinates on the lattice ``(1/den) Z^2 / Z^2``;
sphere vertices are the signed unit vectors of R^5.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from qorbifold.equiv_k.complex import SimplicialAction, SimplicialComplex
from qorbifold.errors import ParameterError


@dataclass(frozen=True)
class Triangulation:
    complex: SimplicialComplex
    coordinates: tuple[tuple[int, ...], ...]   # indexed by vertex id
    denominator: int
    periodic: bool

    def vertex_at(self) -> dict[tuple[int, ...], int]:
        return {c: v for v, c in enumerate(self.coordinates)}

    def induced_permutation(self, matrix) -> tuple[int, ...]:
        """Vertex permutation realising ``x -> matrix @ x`` (mod 1 if periodic)."""
        lookup = self.vertex_at()
        perm = []
        for c in self.coordinates:
            img = tuple(sum(row[j] * c[j] for j in range(len(c))) for row in matrix)
            if self.periodic:
                img = tuple(x % self.denominator for x in img)
            if img not in lookup:
                raise ParameterError(f"matrix does not map vertex {c} to a vertex")
            perm.append(lookup[img])
        return tuple(perm)


def torus_a2(N: int = 6) -> Triangulation:
    """Grid triangulation with diagonals along e2 - e1 (invariant under the order 3 and 6 rotations)."""
    coords = [(a, b) for a in range(N) for b in range(N)]
    vid = {c: i for i, c in enumerate(coords)}
    tris = []
    for a, b in coords:
        p00 = vid[(a, b)]
        p10 = vid[((a + 1) % N, b)]
        p01 = vid[(a, (b + 1) % N)]
        p11 = vid[((a + 1) % N, (b + 1) % N)]
        tris += [(p00, p10, p01), (p10, p01, p11)]
    return Triangulation(SimplicialComplex(tris), tuple(coords), N, True)


def torus_crossed_square(N: int = 6) -> Triangulation:
    """Each grid square coned off from its centre (invariant under the quarter turn).

    Coordinates are doubled: corners are (2a, 2b), centres (2a+1, 2b+1), mod 2N.
    """
    M = 2 * N
    corners = [(2 * a, 2 * b) for a in range(N) for b in range(N)]
    centres = [(2 * a + 1, 2 * b + 1) for a in range(N) for b in range(N)]
    coords = corners + centres
    vid = {c: i for i, c in enumerate(coords)}
    tris = []
    for a, b in product(range(N), repeat=2):
        c = vid[(2 * a + 1, 2 * b + 1)]
        ring = [(2 * a, 2 * b), (2 * a + 2, 2 * b), (2 * a + 2, 2 * b + 2), (2 * a, 2 * b + 2)]
        ring = [vid[(x % M, y % M)] for x, y in ring]
        for k in range(4):
            tris.append((c, ring[k], ring[(k + 1) % 4]))
    return Triangulation(SimplicialComplex(tris), tuple(coords), M, True)


def torus_for_order(order: int, N: int = 6) -> Triangulation:
    if order in (2, 3, 6):
        return torus_a2(N)
    if order == 4:
        return torus_crossed_square(N)
    raise ParameterError(f"no torus triangulation for order {order}")


def cross_polytope_sphere(dim: int = 4) -> Triangulation:
    """Boundary of the (dim+1)-dimensional cross-polytope: antipode-free subsets of +-e_i."""
    n = dim + 1
    coords = []
    for i in range(n):
        for s in (1, -1):
            v = [0] * n
            v[i] = s
            coords.append(tuple(v))
    facets = [tuple(2 * i + (1 if bit else 0) for i, bit in enumerate(bits))
              for bits in product((0, 1), repeat=n)]
    return Triangulation(SimplicialComplex(facets), tuple(coords), 1, False)


def s4_reflection_matrix() -> tuple[tuple[int, ...], ...]:
    """(x1, x2, x3, x4, x5) -> (x1, -x2, x3, -x4, x5)."""
    diag = (1, -1, 1, -1, 1)
    return tuple(tuple(diag[i] if i == j else 0 for j in range(5)) for i in range(5))


def matrix_action(tri: Triangulation, matrix, order: int) -> SimplicialAction:
    return SimplicialAction(order, tri.induced_permutation(matrix))

"""Simplicial pipeline for rational equivariant K-ranks of finite cyclic actions."""

from qorbifold.equiv_k.complex import (
    GComplex,
    QuotientComplex,
    SimplicialAction,
    SimplicialComplex,
    barycentric_subdivide,
    fixed_subcomplex,
    make_regular,
    quotient_complex,
    regularity_check,
)
from qorbifold.equiv_k.homology import (
    StrataReport,
    betti_numbers,
    boundary_matrices,
    equivariant_k_ranks,
    k_ranks,
)
from qorbifold.equiv_k.linalg import SmithResult, smith_normal_form

__all__ = [
    "GComplex",
    "QuotientComplex",
    "SimplicialAction",
    "SimplicialComplex",
    "SmithResult",
    "StrataReport",
    "barycentric_subdivide",
    "betti_numbers",
    "boundary_matrices",
    "equivariant_k_ranks",
    "fixed_subcomplex",
    "k_ranks",
    "make_regular",
    "quotient_complex",
    "regularity_check",
    "smith_normal_form",
]

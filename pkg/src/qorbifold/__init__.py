"""Quantum toroidal orbifolds: deformed weight algebras, finite symmetries,
crossed products and rational equivariant K-ranks.

Subpackages and modules:

* ``weight_algebra`` - the deformed product on torus characters and its oscillatory-integral oracle
* ``symmetry`` - cyclic integer-matrix actions, compatibility and equivariance
* ``crossed`` - crossed products by those actions and by torus translations
* ``theta_sphere`` - the deformed four-sphere with its reflection
* ``projections`` - a bump-function projection in the quantum torus
* ``equiv_k`` - simplicial pipeline for equivariant K-ranks
* ``workbench`` - instance files and the ``qorbifold`` command line
"""

from qorbifold.crossed import CrossedElement, TranslationAction, crossed_product
from qorbifold.symmetry import CyclicAction, builtin_generator, check_compatibility
from qorbifold.weight_algebra import AlgebraElement, DeformationForm, deformed_product

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "CrossedElement",
    "CyclicAction",
    "DeformationForm",
    "TranslationAction",
    "builtin_generator",
    "check_compatibility",
    "crossed_product",
    "deformed_product",
]

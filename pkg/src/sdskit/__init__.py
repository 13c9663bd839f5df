"""Cyclic supplementary difference sets and skew-Hadamard matrices.

Library + CLI for enumerating, searching, verifying, and canonicalizing
cyclic difference families over Z_v (v prime, v = 3 mod 4), and for
assembling skew-Hadamard matrices of order 4v via the Goethals-Seidel
array.
"""

from .sds import (
    Block,
    DifferenceFamily,
    ParameterSet,
    complement_block,
    compose_with_paley_todd,
    derive_lambda,
    difference_counts,
    enumerate_P,
    is_skew,
    is_symmetric,
    verify_sds,
)
from .zmod import element_of_order, is_prime, orbit_system, quadratic_residues

__version__ = "0.1.0"

__all__ = [
    "Block",
    "DifferenceFamily",
    "ParameterSet",
    "complement_block",
    "compose_with_paley_todd",
    "derive_lambda",
    "difference_counts",
    "enumerate_P",
    "is_skew",
    "is_symmetric",
    "verify_sds",
    "element_of_order",
    "is_prime",
    "orbit_system",
    "quadratic_residues",
    "__version__",
]

"""projsyz: exact syzygies of projective schemes and their linear projections.

Computes graded Betti numbers over the ambient polynomial ring and over
coordinate subrings via Koszul homology, partial elimination ideals, and
geometric reports (fibers, linear sections, secant loci) for projections.
"""

from .fields import DEFAULT_FIELD, DEFAULT_PRIME, FieldElement, GF, PrimeField, QQ
from .linalg import ExactMatrix, rank, rank_kernel, rref
from .polyring import Monomial, Polynomial, RingDescriptor, parse_polynomial
from .groebner import Ideal

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_FIELD", "DEFAULT_PRIME", "FieldElement", "GF", "PrimeField", "QQ",
    "ExactMatrix", "rank", "rank_kernel", "rref",
    "Monomial", "Polynomial", "RingDescriptor", "parse_polynomial",
    "Ideal",
]

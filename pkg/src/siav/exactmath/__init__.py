"""Exact integer polynomial and lattice arithmetic."""

from .factor import Factorization, factor_over_integers, is_irreducible
from .lattice import (
    IntegerMatrix,
    hermite_normal_form,
    in_lattice,
    lattice_index,
    smith_normal_form,
)
from .polynomial import (
    X,
    IntPolynomial,
    QuadRingValue,
    discriminant,
    eval_at_sqrt,
    interpolate,
    poly_gcd,
    resultant,
    resultant_subresultant,
    resultant_sylvester,
    squarefree_part,
)
from .sturm import integer_roots, isolate_real_roots, sign_at, sturm_count

__all__ = [
    "Factorization",
    "IntPolynomial",
    "IntegerMatrix",
    "QuadRingValue",
    "X",
    "discriminant",
    "eval_at_sqrt",
    "factor_over_integers",
    "hermite_normal_form",
    "in_lattice",
    "integer_roots",
    "interpolate",
    "is_irreducible",
    "isolate_real_roots",
    "lattice_index",
    "poly_gcd",
    "resultant",
    "resultant_subresultant",
    "resultant_sylvester",
    "sign_at",
    "smith_normal_form",
    "squarefree_part",
    "sturm_count",
]

"""Exact noncommutative engine for super Gaudin Bethe algebras.

Subpackages:

- ``superweyl``: the Weyl superalgebra kernel with canonical normal ordering
- ``spectral``: truncated Laurent series, pseudodifferential operators, and
  the shift homomorphisms into w-series
- ``ncmatrix``: column determinants, quasi-minors, Berezinians, Manin checks
- ``gaudin``: the model matrices, Capelli expansions, and the duality tables
- ``fock``: the action on supersymmetric polynomials and weight-space matrices
- ``cli``: the batch verification driver
"""

from .rational import Rational, rat, rat_str
from .superweyl import NOElement, WeylAlgebra, normal_order, super_commutator

__all__ = [
    "Rational",
    "rat",
    "rat_str",
    "NOElement",
    "WeylAlgebra",
    "normal_order",
    "super_commutator",
]

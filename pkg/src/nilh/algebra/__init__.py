"""Group law, polynomial operator algebra and exact Gaussian test functions."""
from .diffop import (
    FIELD_NAMES,
    DiffOp,
    NumericApplication,
    apply_numeric,
    commutator,
    compose,
    fields,
    generators,
    left_invariant_field,
    symbol_product,
    symmetrize,
)
from .gausspoly import GaussianMoments, GaussPoly, apply_exact, inner_product, inner_product_parts, integrate, l2_norm
from .group import (
    IDENTITY,
    IDENTITY_PRIME,
    GroupPoint,
    GroupPointPrime,
    Rotation,
    act,
    hilbert_map,
    inverse,
    multiply,
    wedge,
)
from .poly import SPACES, Gauss, Poly, hilbert_basis

__all__ = [
    "FIELD_NAMES", "DiffOp", "NumericApplication", "apply_numeric", "commutator", "compose",
    "fields", "generators", "left_invariant_field", "symbol_product", "symmetrize",
    "GaussianMoments", "GaussPoly", "apply_exact", "inner_product", "inner_product_parts",
    "integrate", "l2_norm", "IDENTITY", "IDENTITY_PRIME", "GroupPoint", "GroupPointPrime",
    "Rotation", "act", "hilbert_map", "inverse", "multiply", "wedge", "SPACES", "Gauss",
    "Poly", "hilbert_basis",
]

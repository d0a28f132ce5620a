"""Exact scalar, polynomial and linear-algebra substrate."""

from nilkur.exact.gaussian import HALF, I, ONE, ZERO, GaussQ, gq
from nilkur.exact.linalg import (
    Matrix,
    hermitian_complement,
    hermitian_solve,
    inner,
    intersect,
    kernel_basis,
    orthogonal_projection,
    rank,
    rref,
    solve,
    span_basis,
)
from nilkur.exact.poly import Poly, poly_sum, poly_vars

__all__ = [
    "GaussQ", "gq", "ZERO", "ONE", "I", "HALF",
    "Poly", "poly_vars", "poly_sum",
    "Matrix", "rref", "rank", "kernel_basis", "solve", "inner", "intersect",
    "hermitian_complement", "hermitian_solve", "orthogonal_projection", "span_basis",
]

"""Linear algebra and polynomials over prime fields."""

from .matrix import (
    FieldMatrix,
    left_nullspace_basis,
    mat_inverse,
    mat_mul,
    nullspace_basis,
    rank,
    row_echelon,
    solve_rows,
    transpose,
)
from .poly import FieldPoly, char_poly, char_poly_blocks, eval_poly, factor_poly

__all__ = [
    "FieldMatrix",
    "FieldPoly",
    "char_poly",
    "char_poly_blocks",
    "eval_poly",
    "factor_poly",
    "left_nullspace_basis",
    "mat_inverse",
    "mat_mul",
    "nullspace_basis",
    "rank",
    "row_echelon",
    "solve_rows",
    "transpose",
]

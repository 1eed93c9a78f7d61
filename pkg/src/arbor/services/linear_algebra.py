# src/arbor/services/linear_algebra.py

"""Exact matrix inversion over ℚ for linear terms, backed by sympy."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

from sympy import Matrix, Rational

from arbor.errors import DimensionMismatchError, NotInvertibleError
from arbor.models.comm_series import LinearTerm

logger = logging.getLogger(__name__)


def _to_sympy(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    size = len(rows)
    if any(len(row) != size for row in rows):
        raise DimensionMismatchError("expected a square matrix")
    return Matrix([[Rational(value.numerator, value.denominator) for value in map(Fraction, row)] for row in rows])


def _from_sympy(matrix: Matrix) -> LinearTerm:
    return LinearTerm(
        tuple(
            tuple(Fraction(int(matrix[i, j].p), int(matrix[i, j].q)) for j in range(matrix.cols))
            for i in range(matrix.rows)
        )
    )


def invert_matrix(term: LinearTerm) -> LinearTerm:
    """P⁻¹ exactly; raises NotInvertibleError when det P = 0."""
    matrix = _to_sympy(term.rows)
    determinant = matrix.det()
    if determinant == 0:
        logger.info("Linear term is singular: %s", term.to_lists())
        raise NotInvertibleError("linear term is singular over the rationals; the map has no compositional inverse")
    return _from_sympy(matrix.inv())


def matrix_product(left: LinearTerm, right: LinearTerm) -> LinearTerm:
    return _from_sympy(_to_sympy(left.rows) * _to_sympy(right.rows))

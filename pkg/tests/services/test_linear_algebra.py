# tests/services/test_linear_algebra.py
from fractions import Fraction

import pytest

from arbor.errors import DimensionMismatchError, NotInvertibleError
from arbor.models.comm_series import LinearTerm
from arbor.services.linear_algebra import invert_matrix, matrix_product


def test_inverse_is_exact():
    term = LinearTerm(((2, 1), (1, 1)))
    assert invert_matrix(term) == LinearTerm(((1, -1), (-1, 2)))


def test_inverse_with_fractions():
    term = LinearTerm(((3, 0), (Fraction(1, 2), 2)))
    inverse = invert_matrix(term)
    assert inverse.entry(1, 1) == Fraction(1, 3)
    assert matrix_product(term, inverse).is_identity()


def test_singular_matrix():
    with pytest.raises(NotInvertibleError) as excinfo:
        invert_matrix(LinearTerm(((1, 2), (2, 4))))
    assert excinfo.value.code.value == "singular-linear-term"


def test_non_square_rows_are_rejected():
    with pytest.raises(DimensionMismatchError):
        LinearTerm(((1, 2),))

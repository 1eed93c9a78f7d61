# tests/services/test_comm_arithmetic.py
from fractions import Fraction

import pytest

from arbor.errors import DimensionMismatchError, InvalidArgumentError, NonzeroConstantTermError
from arbor.models.comm_series import CommMap, CommSeries, LinearTerm
from arbor.services.comm_arithmetic import (
    apply_linear,
    identity_map,
    jacobian_linear_term,
    linear_map,
    map_difference,
    partial_derivative,
    require_zero_constant_term,
    series_add,
    series_mul,
    series_mul_by_subsets,
    series_scale,
    series_sub,
)


def test_add_keeps_the_smaller_truncation():
    f = CommSeries.univariate([1, 2, 3])
    g = CommSeries.univariate([0, 1])
    assert series_add(f, g) == CommSeries.univariate([1, 3])


def test_scale_and_sub():
    f = CommSeries.univariate([1, 2])
    assert series_scale(f, Fraction(1, 2)) == CommSeries.univariate([Fraction(1, 2), 1])
    assert series_sub(f, f).is_zero()


def test_square_of_a_variable_in_divided_powers():
    x = CommSeries.variable(1, 3, 1)
    # X^2 = 2 * X^2/2!
    assert series_mul(x, x) == CommSeries(1, 3, {(2,): 2})


def test_mixed_product():
    x = CommSeries.variable(2, 2, 1)
    y = CommSeries.variable(2, 2, 2)
    assert series_mul(x, y) == CommSeries(2, 2, {(1, 1): 1})


def test_product_agrees_with_label_splitting(random_series):
    for _ in range(10):
        dimension, truncation = random_series.shape(3, 4, min_truncation=0)
        f = random_series.comm_series(dimension, truncation)
        g = random_series.comm_series(dimension, truncation)
        assert series_mul(f, g) == series_mul_by_subsets(f, g)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        series_mul(CommSeries.zero(1, 2), CommSeries.zero(2, 2))


def test_partial_derivative_shifts_indices():
    f = CommSeries(2, 3, {(3, 0): 6, (1, 1): 2, (0, 2): 5})
    assert partial_derivative(f, 1) == CommSeries(2, 2, {(2, 0): 6, (0, 1): 2})
    assert partial_derivative(f, 2) == CommSeries(2, 2, {(1, 0): 2, (0, 1): 5})
    with pytest.raises(InvalidArgumentError):
        partial_derivative(CommSeries.zero(1, 0), 1)


def test_linear_maps():
    matrix = LinearTerm(((1, 2), (0, 1)))
    mapping = linear_map(matrix, 3)
    assert jacobian_linear_term(mapping) == matrix
    assert jacobian_linear_term(identity_map(2, 3)).is_identity()
    assert apply_linear(matrix, identity_map(2, 3)) == mapping


def test_map_difference_of_a_map_with_itself_is_zero(random_series):
    mapping = random_series.comm_map(2, 3)
    difference = map_difference(mapping, mapping)
    assert all(series.is_zero() for series in difference.components)


def test_zero_constant_term_is_required():
    with pytest.raises(NonzeroConstantTermError):
        require_zero_constant_term(CommMap.univariate([1, 1]))

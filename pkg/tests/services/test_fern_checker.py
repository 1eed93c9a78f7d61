# tests/services/test_fern_checker.py
from fractions import Fraction

import pytest

from arbor.errors import DimensionMismatchError, InvalidArgumentError
from arbor.models.comm_series import CommMap, CommSeries
from arbor.services.combinatorics import iter_multi_indices
from arbor.services.fern_checker import (
    FernPath,
    druzkowski_cubic,
    fern_nilpotency_check,
    fern_sum,
    gradient_map,
    jacobian_matrix,
    matrix_power_entries,
)

# H = (X_2^2, 0): H_{1,(0,2)} = 2 in divided powers
SQUARE = CommMap.from_coefficients(2, 2, {(1, (0, 2)): 2})


def _triangular(rng, dimension: int, degree: int) -> CommMap:
    """H_i uses only X_j with j > i, so J(H) is strictly upper triangular."""
    coefficients = {}
    for i in range(1, dimension + 1):
        for alpha in iter_multi_indices(dimension, degree, min_degree=2):
            if any(alpha[:i]) or rng.random() < 0.3:
                continue
            coefficients[(i, alpha)] = Fraction(rng.randint(-3, 3))
    return CommMap.from_coefficients(dimension, degree, coefficients)


class TestSquareExample:
    """The two paths on H = (X_2^2, 0)."""

    @pytest.mark.parametrize("path", list(FernPath))
    def test_nilpotent_at_two(self, path):
        result = fern_nilpotency_check(SQUARE, 2, path=path)
        assert result.nilpotent
        assert result.witness is None

    @pytest.mark.parametrize("path", list(FernPath))
    def test_not_nilpotent_at_one(self, path):
        result = fern_nilpotency_check(SQUARE, 1, path=path)
        assert not result.nilpotent
        assert (result.witness.row, result.witness.column) == (1, 2)
        assert result.witness.alpha == (0, 1)
        assert result.witness.value == 2

    def test_witness_serialization(self):
        assert fern_nilpotency_check(SQUARE, 1).to_dict() == {
            "nilpotent": False,
            "witness": {"i": 1, "j": 2, "alpha": [0, 1], "value": "2"},
        }

    def test_fern_sum_equals_matrix_entry(self):
        entries = matrix_power_entries(SQUARE, 1, 1)
        assert fern_sum(SQUARE, 1, 2, (0, 1), 1) == entries[0][1].coefficient((0, 1))


@pytest.mark.acceptance
def test_paths_agree_on_random_maps(rng):
    cases = []
    for _ in range(5):
        cases.append((_triangular(rng, 2, 3), 2))
    for _ in range(5):
        coefficients = {
            (i, alpha): Fraction(rng.randint(-2, 2))
            for i in (1, 2)
            for alpha in iter_multi_indices(2, 2, min_degree=2)
        }
        cases.append((CommMap.from_coefficients(2, 2, coefficients), 2))
    for nonlinear, power in cases:
        by_matrix = fern_nilpotency_check(nonlinear, power, path=FernPath.MATRIX_POWER)
        by_ferns = fern_nilpotency_check(nonlinear, power, path=FernPath.FERN_SUM)
        assert by_matrix == by_ferns
    assert any(fern_nilpotency_check(h, m).nilpotent for h, m in cases)


def test_triangular_maps_are_nilpotent_at_dimension(rng):
    for _ in range(5):
        nonlinear = _triangular(rng, 3, 3)
        assert fern_nilpotency_check(nonlinear, 3).nilpotent


def test_jacobian_entries_are_partial_derivatives():
    (row1, row2) = jacobian_matrix(SQUARE)
    assert row1[1] == CommSeries(2, 1, {(0, 1): 2})
    assert row1[0].is_zero() and row2[0].is_zero() and row2[1].is_zero()


def test_degree_bound_must_cover_the_power():
    with pytest.raises(InvalidArgumentError):
        fern_nilpotency_check(SQUARE, 2, degree_bound=1)


def test_power_must_be_positive():
    with pytest.raises(InvalidArgumentError):
        fern_nilpotency_check(SQUARE, 0)


def test_linear_terms_are_rejected():
    with pytest.raises(InvalidArgumentError):
        fern_nilpotency_check(CommMap.univariate([0, 1, 1]), 1)


class TestGenerators:
    def test_druzkowski_cubic_with_nilpotent_matrix(self):
        # L = [[1, 1], [-1, -1]] squares to zero, so J(H)^2 = 9 (L·X)^4 L^2 = 0
        nonlinear = druzkowski_cubic([[1, 1], [-1, -1]])
        assert nonlinear.coefficient(1, (3, 0)) == 1
        assert nonlinear.coefficient(2, (1, 2)) == -1
        assert fern_nilpotency_check(nonlinear, 2).nilpotent
        assert not fern_nilpotency_check(nonlinear, 1).nilpotent

    def test_druzkowski_needs_square_rows(self):
        with pytest.raises(DimensionMismatchError):
            druzkowski_cubic([[1, 2]])

    def test_gradient_map_has_symmetric_jacobian(self, random_series):
        potential = random_series.comm_series(2, 4)
        nonlinear = gradient_map(potential)
        jacobian = jacobian_matrix(nonlinear)
        assert jacobian[0][1] == jacobian[1][0]
        for _, alpha, _ in nonlinear.terms():
            assert alpha.degree >= 2

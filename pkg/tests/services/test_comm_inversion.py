# tests/services/test_comm_inversion.py
from fractions import Fraction

import pytest

from arbor.config import override_settings
from arbor.errors import (
    InvalidArgumentError,
    NonIdentityLinearTermError,
    NonzeroConstantTermError,
    NotInvertibleError,
    ResourceLimitError,
)
from arbor.models.comm_series import CommMap, LinearTerm
from arbor.services.applications import count_proper_trees
from arbor.services.comm_arithmetic import identity_map, jacobian_linear_term
from arbor.services.comm_composition import compose_direct
from arbor.services.comm_inversion import (
    InversionPath,
    invert_general,
    invert_identity_linear,
    map_from_nonlinear,
    nonlinear_table,
    phi_involution,
)

X_MINUS_HALF_X2 = CommMap.univariate([0, 1, -1, 0, 0, 0, 0])


class TestIdentityLinearInversion:
    """F = X − H with H of order >= 2."""

    @pytest.mark.acceptance
    @pytest.mark.parametrize("path", [InversionPath.TREE_SUM, InversionPath.RECURSIVE])
    def test_double_factorials(self, path):
        inverse = invert_identity_linear(X_MINUS_HALF_X2, path)
        assert [inverse.coefficient(1, (k,)) for k in range(1, 7)] == [1, 1, 3, 15, 105, 945]

    def test_paths_agree_exactly(self):
        assert invert_identity_linear(X_MINUS_HALF_X2, "tree") == invert_identity_linear(X_MINUS_HALF_X2, "recursive")

    @pytest.mark.acceptance
    @pytest.mark.slow
    def test_tree_count_generating_function(self):
        # 2X + 1 − e^X has identity linear term and h = e^X − 1 − X
        f = CommMap.univariate([0, 1, -1, -1, -1, -1, -1, -1])
        inverse = invert_identity_linear(f, InversionPath.RECURSIVE)
        assert [inverse.coefficient(1, (k,)) for k in range(2, 8)] == [1, 4, 26, 236, 2752, 39208]

    @pytest.mark.acceptance
    def test_inverse_is_two_sided(self, random_series):
        for _ in range(10):
            dimension, truncation = random_series.shape(3, 4)
            mapping = random_series.comm_map(dimension, truncation)
            inverse = invert_identity_linear(mapping)
            assert compose_direct(mapping, inverse) == identity_map(dimension, truncation)
            assert compose_direct(inverse, mapping) == identity_map(dimension, truncation)

    def test_tree_path_matches_recursive_on_random_maps(self, random_series):
        for _ in range(5):
            dimension, truncation = random_series.shape(2, 4)
            mapping = random_series.comm_map(dimension, truncation)
            assert invert_identity_linear(mapping, "tree") == invert_identity_linear(mapping, "recursive")

    def test_rejects_non_identity_linear_term(self):
        with pytest.raises(NonIdentityLinearTermError):
            invert_identity_linear(CommMap.univariate([0, 2, 1]))

    def test_rejects_constant_term(self):
        with pytest.raises(NonzeroConstantTermError):
            invert_identity_linear(CommMap.univariate([1, 1, 1]))

    def test_rejects_general_paths(self):
        with pytest.raises(InvalidArgumentError):
            invert_identity_linear(X_MINUS_HALF_X2, InversionPath.ALTERNATING)

    def test_memo_budget(self):
        override_settings(max_cells=5)
        with pytest.raises(ResourceLimitError):
            invert_identity_linear(X_MINUS_HALF_X2, InversionPath.RECURSIVE)

    def test_truncation_one_is_the_identity(self):
        assert invert_identity_linear(identity_map(2, 1)) == identity_map(2, 1)


class TestGeneralInversion:
    """F = P·X − H with P invertible."""

    def test_scalar_linear_term(self):
        # F = 2X has inverse X/2
        inverse = invert_general(CommMap.univariate([0, 2, 0, 0]))
        assert inverse == CommMap.univariate([0, Fraction(1, 2), 0, 0])

    def test_singular_linear_term(self):
        mapping = CommMap.from_coefficients(2, 2, {(1, (1, 0)): 1, (2, (1, 0)): 1, (1, (0, 2)): 1})
        with pytest.raises(NotInvertibleError):
            invert_general(mapping)

    def test_linear_term_of_inverse_is_q(self, random_series):
        mapping = random_series.comm_map(2, 3, linear="invertible")
        inverse = invert_general(mapping)
        product = [
            [sum(jacobian_linear_term(inverse).entry(i, k) * jacobian_linear_term(mapping).entry(k, j) for k in (1, 2))
             for j in (1, 2)]
            for i in (1, 2)
        ]
        assert product == [[1, 0], [0, 1]]

    @pytest.mark.acceptance
    def test_reduction_is_two_sided(self, random_series):
        for _ in range(25):
            dimension, truncation = random_series.shape(3, 4)
            if dimension == 1:
                truncation = random_series.rng.randint(2, 5)
            mapping = random_series.comm_map(dimension, truncation, linear="invertible")
            inverse = invert_general(mapping, InversionPath.REDUCTION)
            assert compose_direct(mapping, inverse) == identity_map(dimension, truncation)
            assert compose_direct(inverse, mapping) == identity_map(dimension, truncation)

    @pytest.mark.acceptance
    @pytest.mark.slow
    @pytest.mark.parametrize("dimension, truncation", [(1, 5), (2, 4), (3, 3)])
    def test_alternating_path_matches_reduction(self, random_series, dimension, truncation):
        mapping = random_series.comm_map(dimension, truncation, linear="invertible")
        assert invert_general(mapping, "alt") == invert_general(mapping, "reduce")

    @pytest.mark.acceptance
    def test_identity_linear_term_collapses_to_proper_trees(self, random_series):
        for _ in range(3):
            mapping = random_series.comm_map(2, 3)
            expected = invert_identity_linear(mapping, "tree")
            assert invert_general(mapping, "alt") == expected
            assert invert_general(mapping, "reduce") == expected

    def test_rejects_identity_paths(self):
        with pytest.raises(InvalidArgumentError):
            invert_general(X_MINUS_HALF_X2, InversionPath.RECURSIVE)


class TestPhiInvolution:
    """Φ(H) is the nonlinear table of the inverse of X − H."""

    def test_univariate_quadratic(self):
        h = CommMap.univariate([0, 0, 1, 0, 0])
        # inverse of X − X^2/2 is X + X^2/2 + 3X^3/3! + 15X^4/4!, so Φ(H) = −(1, 3, 15)
        assert phi_involution(h) == CommMap.univariate([0, 0, -1, -3, -15])

    @pytest.mark.acceptance
    def test_is_an_involution(self, random_series):
        for _ in range(25):
            dimension = random_series.rng.randint(1, 2)
            truncation = random_series.rng.randint(2, 6 if dimension == 1 else 5)
            h = random_series.nonlinear(dimension, truncation)
            assert phi_involution(phi_involution(h)) == h

    def test_tree_path_agrees(self, random_series):
        h = random_series.nonlinear(2, 4)
        assert phi_involution(h, "tree") == phi_involution(h, "recursive")

    def test_rejects_linear_entries(self):
        with pytest.raises(InvalidArgumentError):
            phi_involution(CommMap.univariate([0, 1, 1]))

    def test_low_truncation_is_fixed(self):
        h = CommMap.univariate([0, 0])
        assert phi_involution(h) == h


def test_map_from_nonlinear_and_back(random_series):
    h = random_series.nonlinear(2, 3)
    p = LinearTerm(((1, 1), (0, 1)))
    mapping = map_from_nonlinear(h, p)
    assert jacobian_linear_term(mapping) == p
    table = nonlinear_table(mapping)
    assert {key: value for key, value in table.items() if value} == {
        (i, alpha): value for i, alpha, value in h.terms()
    }


class TestRecursiveInverterTerminates:
    """The leading block never swallows labels another factor needs."""

    def test_quadratic_at_degree_five(self):
        inverse = invert_identity_linear(CommMap.univariate([0, 1, -1, 0, 0, 0]), InversionPath.RECURSIVE)
        assert [inverse.coefficient(1, (k,)) for k in range(1, 6)] == [1, 1, 3, 15, 105]

    def test_general_inverse_of_scaled_quadratic(self):
        # 2X − X^2 inverts to 1 − sqrt(1 − X)
        inverse = invert_general(CommMap.univariate([0, 2, -2, 0, 0]))
        assert [inverse.coefficient(1, (k,)) for k in range(1, 5)] == [
            Fraction(1, 2), Fraction(1, 4), Fraction(3, 8), Fraction(15, 16),
        ]

    def test_two_dimensional_quadratic_terms(self):
        mapping = CommMap.from_coefficients(
            2, 4, {(1, (1, 0)): 1, (2, (0, 1)): 1, (1, (1, 1)): -1, (2, (2, 0)): 1, (1, (0, 2)): -2}
        )
        inverse = invert_identity_linear(mapping, InversionPath.RECURSIVE)
        assert inverse == invert_identity_linear(mapping, InversionPath.TREE_SUM)
        assert compose_direct(mapping, inverse) == identity_map(2, 4)

    def test_phi_of_quadratic_at_degree_four(self):
        h = CommMap.univariate([0, 0, 1, 0, 0])
        assert phi_involution(phi_involution(h)) == h

    def test_tree_count_by_inversion(self):
        count = count_proper_trees(5)
        assert count.by_inversion == count.by_enumeration == 236

# tests/services/test_comm_composition.py
from fractions import Fraction

import pytest

from arbor.config import override_settings
from arbor.errors import DimensionMismatchError, InvalidArgumentError, NonzeroConstantTermError, ResourceLimitError
from arbor.models.comm_series import CommMap
from arbor.services.comm_arithmetic import identity_map
from arbor.services.comm_composition import (
    compose_chain_direct,
    compose_direct,
    compose_fdb,
    compose_partition,
)


def test_univariate_example():
    # F = X + X^2/2 composed with itself: X + X^2 + X^3/2 + ...
    f = CommMap.univariate([0, 1, 1, 0])
    assert compose_direct(f, f) == CommMap.univariate([0, 1, 2, 3])
    assert compose_fdb([f, f]) == CommMap.univariate([0, 1, 2, 3])
    assert compose_partition(f, f) == CommMap.univariate([0, 1, 2, 3])


def test_exponential_of_exponential_gives_bell_numbers():
    # e^X - 1 composed with itself: Bell numbers 1, 2, 5, 15 in divided powers
    g = CommMap.univariate([0, 1, 1, 1, 1])
    assert [compose_fdb([g, g]).coefficient(1, (k,)) for k in range(1, 5)] == [1, 2, 5, 15]


def test_identity_is_neutral(random_series):
    mapping = random_series.comm_map(2, 4)
    assert compose_direct(mapping, identity_map(2, 4)) == mapping
    assert compose_direct(identity_map(2, 4), mapping) == mapping


def test_outer_constant_term_is_carried_through():
    outer = CommMap.univariate([3, 1, 1])
    inner = CommMap.univariate([0, 2, 0])
    assert compose_direct(outer, inner) == CommMap.univariate([3, 2, 4])


def test_truncation_is_the_minimum():
    outer = CommMap.univariate([0, 1, 1, 1])
    inner = CommMap.univariate([0, 1, 1])
    assert compose_direct(outer, inner).truncation == 2
    assert compose_fdb([outer, inner]).truncation == 2


def test_inner_constant_term_is_rejected():
    with pytest.raises(NonzeroConstantTermError):
        compose_direct(CommMap.univariate([0, 1]), CommMap.univariate([1, 1]))


def test_chain_maps_must_all_vanish_at_zero():
    # compose_fdb needs zero constant terms on every map, outer included
    with pytest.raises(NonzeroConstantTermError):
        compose_fdb([CommMap.univariate([1, 1]), CommMap.univariate([0, 1])])


def test_dimension_mismatch(random_series):
    with pytest.raises(DimensionMismatchError):
        compose_direct(random_series.comm_map(1, 2), random_series.comm_map(2, 2))


def test_chain_needs_two_maps():
    with pytest.raises(InvalidArgumentError):
        compose_fdb([CommMap.univariate([0, 1])])


def test_leaf_cap():
    override_settings(max_leaves=3)
    f = CommMap.univariate([0, 1, 1, 1, 1])
    with pytest.raises(ResourceLimitError):
        compose_fdb([f, f])


@pytest.mark.acceptance
def test_fdb_matches_direct_on_random_pairs(random_series):
    for _ in range(50):
        dimension, truncation = random_series.shape(3, 4)
        if dimension == 1:
            truncation = random_series.rng.randint(2, 5)
        outer = random_series.comm_map(dimension, truncation, linear="random")
        inner = random_series.comm_map(dimension, truncation, linear="random")
        assert compose_fdb([outer, inner]) == compose_direct(outer, inner)


@pytest.mark.acceptance
def test_partition_path_matches_direct(random_series):
    for _ in range(10):
        dimension, truncation = random_series.shape(2, 4)
        outer = random_series.comm_map(dimension, truncation, linear="random")
        inner = random_series.comm_map(dimension, truncation, linear="random")
        assert compose_partition(outer, inner) == compose_direct(outer, inner)


@pytest.mark.acceptance
def test_chain_of_three_matches_both_associations(random_series):
    for _ in range(5):
        dimension, truncation = random_series.shape(2, 4)
        f, g, h = (random_series.comm_map(dimension, truncation, linear="random") for _ in range(3))
        chained = compose_fdb([f, g, h])
        assert chained == compose_direct(compose_direct(f, g), h)
        assert chained == compose_direct(f, compose_direct(g, h))
        assert chained == compose_chain_direct([f, g, h])


def test_fractional_coefficients_stay_exact():
    f = CommMap.univariate([0, Fraction(1, 3), Fraction(-2, 7)])
    g = CommMap.univariate([0, Fraction(5, 2), Fraction(1, 11)])
    assert compose_fdb([f, g]) == compose_direct(f, g)

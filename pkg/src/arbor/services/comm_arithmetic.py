# src/arbor/services/comm_arithmetic.py

"""
Ring operations on truncated commutative series in divided-power coordinates.

Products use the binomial form of the Leibniz rule,
``(fg)_α = Σ_{β<=α} C(α,β) f_β g_{α-β}``. ``series_mul_by_subsets`` evaluates
the same product as a sum over splittings S ⊔ T = [α] of the label set and is
kept as an independent check of the convolution.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import product
from typing import Sequence

from arbor.errors import DimensionMismatchError, InvalidArgumentError, NonzeroConstantTermError
from arbor.models.comm_series import CommMap, CommSeries, LinearTerm
from arbor.models.multi_index import MultiIndex, basis, label_set, mi_binomial, multi_index_of
from arbor.services.combinatorics import iter_multi_indices

logger = logging.getLogger(__name__)


def _check_dimensions(f: CommSeries, g: CommSeries) -> None:
    if f.dimension != g.dimension:
        raise DimensionMismatchError(f"series of dimensions {f.dimension} and {g.dimension}")


def series_add(f: CommSeries, g: CommSeries) -> CommSeries:
    _check_dimensions(f, g)
    truncation = min(f.truncation, g.truncation)
    total: dict[MultiIndex, Fraction] = {}
    for series in (f, g):
        for alpha, value in series.terms():
            if alpha.degree <= truncation:
                total[alpha] = total.get(alpha, Fraction(0)) + value
    return CommSeries(f.dimension, truncation, total)


def series_scale(f: CommSeries, factor: Fraction | int) -> CommSeries:
    factor = Fraction(factor)
    return CommSeries(f.dimension, f.truncation, {alpha: factor * value for alpha, value in f.terms()})


def series_sub(f: CommSeries, g: CommSeries) -> CommSeries:
    return series_add(f, series_scale(g, -1))


def series_mul(f: CommSeries, g: CommSeries) -> CommSeries:
    _check_dimensions(f, g)
    truncation = min(f.truncation, g.truncation)
    total: dict[MultiIndex, Fraction] = {}
    right = list(g.terms())
    for beta, f_value in f.terms():
        if beta.degree > truncation:
            continue
        for gamma, g_value in right:
            if beta.degree + gamma.degree > truncation:
                continue
            alpha = beta.plus(gamma)
            total[alpha] = total.get(alpha, Fraction(0)) + mi_binomial(alpha, beta) * f_value * g_value
    return CommSeries(f.dimension, truncation, total)


def series_mul_by_subsets(f: CommSeries, g: CommSeries) -> CommSeries:
    """(fg)_α = Σ over S ⊔ T = [α] of f_{#S} g_{#T}, summed label by label."""
    _check_dimensions(f, g)
    truncation = min(f.truncation, g.truncation)
    dimension = f.dimension
    total: dict[MultiIndex, Fraction] = {}
    for alpha in iter_multi_indices(dimension, truncation):
        slots = label_set(alpha)
        value = Fraction(0)
        for sides in product((0, 1), repeat=len(slots)):
            left = multi_index_of((slot for slot, side in zip(slots, sides) if side == 0), dimension)
            right = multi_index_of((slot for slot, side in zip(slots, sides) if side == 1), dimension)
            value += f.coefficient(left) * g.coefficient(right)
        total[alpha] = value
    return CommSeries(dimension, truncation, total)


def partial_derivative(f: CommSeries, component: int) -> CommSeries:
    """∂f/∂X_j; divided-power coefficient at α is f_{α+e_j}, truncation drops by one."""
    if f.truncation < 1:
        raise InvalidArgumentError("cannot differentiate a series truncated at degree 0")
    unit = basis(f.dimension, component)
    return CommSeries(
        f.dimension,
        f.truncation - 1,
        {alpha.minus(unit): value for alpha, value in f.terms() if alpha[component - 1] > 0},
    )


def jacobian_linear_term(mapping: CommMap) -> LinearTerm:
    """The matrix (F_{i,e_j})."""
    n = mapping.dimension
    if mapping.truncation < 1:
        return LinearTerm(tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n)))
    return LinearTerm(
        tuple(
            tuple(mapping.coefficient(i, basis(n, j)) for j in range(1, n + 1))
            for i in range(1, n + 1)
        )
    )


def identity_map(dimension: int, truncation: int) -> CommMap:
    return CommMap(tuple(CommSeries.variable(dimension, truncation, i) for i in range(1, dimension + 1)))


def linear_map(matrix: LinearTerm | Sequence[Sequence[Fraction]], truncation: int) -> CommMap:
    """The map X -> M·X."""
    rows = matrix.rows if isinstance(matrix, LinearTerm) else tuple(tuple(row) for row in matrix)
    n = len(rows)
    if truncation < 1:
        return CommMap(tuple(CommSeries.zero(n, truncation) for _ in range(n)))
    return CommMap(
        tuple(
            CommSeries(n, truncation, {basis(n, j + 1): value for j, value in enumerate(row)})
            for row in rows
        )
    )


def apply_linear(matrix: LinearTerm, mapping: CommMap) -> CommMap:
    """(M∘G)_i = Σ_j M_ij G_j."""
    if matrix.dimension != mapping.dimension:
        raise DimensionMismatchError("matrix and map dimensions differ")
    components = []
    for row in matrix.rows:
        total = CommSeries.zero(mapping.dimension, mapping.truncation)
        for entry, series in zip(row, mapping.components):
            if entry:
                total = series_add(total, series_scale(series, entry))
        components.append(total)
    return CommMap(tuple(components))


def map_difference(left: CommMap, right: CommMap) -> CommMap:
    if left.dimension != right.dimension:
        raise DimensionMismatchError("maps of different dimensions")
    return CommMap(tuple(series_sub(f, g) for f, g in zip(left.components, right.components)))


def require_zero_constant_term(mapping: CommMap, role: str = "inner map") -> None:
    for i, series in enumerate(mapping.components, start=1):
        if series.constant_term != 0:
            raise NonzeroConstantTermError(
                f"{role} component {i} has constant term {series.constant_term}; composition needs zero constant terms"
            )

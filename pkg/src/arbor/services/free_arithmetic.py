# src/arbor/services/free_arithmetic.py

"""Ring operations on truncated free series: concatenation products and the Hausdorff derivative."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

from arbor.errors import DimensionMismatchError, InvalidArgumentError, NonzeroConstantTermError
from arbor.models.comm_series import LinearTerm
from arbor.models.free_series import FreeMap, FreeSeries
from arbor.models.multi_index import Word

logger = logging.getLogger(__name__)


def _check_dimensions(f: FreeSeries, g: FreeSeries) -> None:
    if f.dimension != g.dimension:
        raise DimensionMismatchError(f"series of dimensions {f.dimension} and {g.dimension}")


def free_add(f: FreeSeries, g: FreeSeries) -> FreeSeries:
    _check_dimensions(f, g)
    truncation = min(f.truncation, g.truncation)
    total: dict[Word, Fraction] = {}
    for series in (f, g):
        for word, value in series.terms():
            if len(word) <= truncation:
                total[word] = total.get(word, Fraction(0)) + value
    return FreeSeries(f.dimension, truncation, total)


def free_scale(f: FreeSeries, factor: Fraction | int) -> FreeSeries:
    factor = Fraction(factor)
    return FreeSeries(f.dimension, f.truncation, {word: factor * value for word, value in f.terms()})


def free_sub(f: FreeSeries, g: FreeSeries) -> FreeSeries:
    return free_add(f, free_scale(g, -1))


def free_mul(f: FreeSeries, g: FreeSeries) -> FreeSeries:
    """h_κ = Σ_j f_{κ_1..κ_j} g_{κ_{j+1}..κ_k}."""
    _check_dimensions(f, g)
    truncation = min(f.truncation, g.truncation)
    total: dict[Word, Fraction] = {}
    right = list(g.terms())
    for left_word, f_value in f.terms():
        for right_word, g_value in right:
            if len(left_word) + len(right_word) > truncation:
                continue
            word = left_word + right_word
            total[word] = total.get(word, Fraction(0)) + f_value * g_value
    return FreeSeries(f.dimension, truncation, total)


def hausdorff_derivative(f: FreeSeries, letter: int) -> FreeSeries:
    """Delete one occurrence of X_j from each word, summing over occurrences."""
    if not 1 <= letter <= f.dimension:
        raise InvalidArgumentError(f"letter {letter} outside [1..{f.dimension}]")
    if f.truncation < 1:
        raise InvalidArgumentError("cannot differentiate a series truncated at length 0")
    total: dict[Word, Fraction] = {}
    for word, value in f.terms():
        for position, current in enumerate(word):
            if current == letter:
                shorter = word[:position] + word[position + 1:]
                total[shorter] = total.get(shorter, Fraction(0)) + value
    return FreeSeries(f.dimension, f.truncation - 1, total)


def free_jacobian_at_zero(mapping: FreeMap) -> LinearTerm:
    """The matrix (F_{i,(j)})."""
    n = mapping.dimension
    return LinearTerm(
        tuple(tuple(mapping.coefficient(i, (j,)) for j in range(1, n + 1)) for i in range(1, n + 1))
    )


def free_identity_map(dimension: int, truncation: int) -> FreeMap:
    return FreeMap(tuple(FreeSeries.variable(dimension, truncation, i) for i in range(1, dimension + 1)))


def free_linear_map(matrix: LinearTerm | Sequence[Sequence[Fraction]], truncation: int) -> FreeMap:
    rows = matrix.rows if isinstance(matrix, LinearTerm) else tuple(tuple(row) for row in matrix)
    n = len(rows)
    if truncation < 1:
        return FreeMap(tuple(FreeSeries.zero(n, truncation) for _ in range(n)))
    return FreeMap(
        tuple(FreeSeries(n, truncation, {(j + 1,): value for j, value in enumerate(row)}) for row in rows)
    )


def free_apply_linear(matrix: LinearTerm, mapping: FreeMap) -> FreeMap:
    if matrix.dimension != mapping.dimension:
        raise DimensionMismatchError("matrix and map dimensions differ")
    components = []
    for row in matrix.rows:
        total = FreeSeries.zero(mapping.dimension, mapping.truncation)
        for entry, series in zip(row, mapping.components):
            if entry:
                total = free_add(total, free_scale(series, entry))
        components.append(total)
    return FreeMap(tuple(components))


def require_zero_constant_term(mapping: FreeMap, role: str = "inner map") -> None:
    for i, series in enumerate(mapping.components, start=1):
        if series.constant_term != 0:
            raise NonzeroConstantTermError(
                f"{role} component {i} has constant term {series.constant_term}; composition needs zero constant terms"
            )

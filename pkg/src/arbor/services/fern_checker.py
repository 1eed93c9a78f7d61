# src/arbor/services/fern_checker.py

"""
Nilpotency of the Jacobian of a polynomial map H, checked two ways.

``MATRIX_POWER`` forms J(H) with truncated-series entries and multiplies it out;
``FERN_SUM`` sums tree energies over ferns. For every (i, j, α) the fern sum
equals the divided-power coefficient at α of the (i, j) entry of J(H)^m, so
both paths report the same verdict and the same first witness.

Entries of J(H)^m have degree at most m(δ−1) when H has degree δ; a degree
bound below that cannot certify the zero matrix and is refused.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from opentelemetry import trace

from arbor.errors import DimensionMismatchError, InvalidArgumentError
from arbor.metrics import fern_checks_total
from arbor.models.comm_series import CommMap, CommSeries
from arbor.models.multi_index import MultiIndex
from arbor.models.tree import TreeFamily, TreeFamilySpec
from arbor.services.comm_arithmetic import partial_derivative, series_add, series_mul
from arbor.services.combinatorics import iter_multi_indices
from arbor.services.tree_energy import tree_energy
from arbor.services.tree_enumeration import TreeEnumerator, check_leaf_limit, iter_trees
from arbor.utils.rational import format_rational

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

SeriesMatrix = list[list[CommSeries]]


class FernPath(str, Enum):
    MATRIX_POWER = "matrix"
    FERN_SUM = "fern"


@dataclass(frozen=True)
class FernWitness:
    row: int
    column: int
    alpha: MultiIndex
    value: Fraction


@dataclass(frozen=True)
class FernCheckResult:
    nilpotent: bool
    witness: Optional[FernWitness] = None

    def to_dict(self) -> dict:
        payload: dict = {"nilpotent": self.nilpotent}
        if self.witness is not None:
            payload["witness"] = {
                "i": self.witness.row,
                "j": self.witness.column,
                "alpha": list(self.witness.alpha),
                "value": format_rational(self.witness.value),
            }
        return payload


def _validate(nonlinear: CommMap, power: int, degree_bound: int) -> int:
    if power < 1:
        raise InvalidArgumentError(f"power m must be >= 1, got {power}")
    for i, alpha, _ in nonlinear.terms():
        if alpha.degree < 2:
            raise InvalidArgumentError(
                f"H may only carry terms of degree >= 2; entry ({i}, {tuple(alpha)}) has degree {alpha.degree}"
            )
    degree = max(nonlinear.max_degree(), 0)
    required = power * (degree - 1)
    if degree_bound < required:
        raise InvalidArgumentError(
            f"degree bound {degree_bound} is below m(δ−1) = {required}; J(H)^m would be inconclusive"
        )
    return degree


def jacobian_matrix(nonlinear: CommMap, truncation: Optional[int] = None) -> SeriesMatrix:
    """J(H) with entries ∂H_i/∂X_j, each truncated at ``truncation`` (default D−1)."""
    if nonlinear.truncation < 1:
        raise InvalidArgumentError("the Jacobian needs a truncation of at least 1")
    rows: SeriesMatrix = []
    for series in nonlinear.components:
        row = []
        for j in range(1, nonlinear.dimension + 1):
            entry = partial_derivative(series, j)
            if truncation is not None:
                entry = _retruncate(entry, truncation)
            row.append(entry)
        rows.append(row)
    return rows


def _retruncate(series: CommSeries, truncation: int) -> CommSeries:
    # a polynomial's derivative can be re-read at any truncation covering its degree
    return CommSeries(
        series.dimension,
        truncation,
        {alpha: value for alpha, value in series.terms() if alpha.degree <= truncation},
    )


def _matrix_mul(left: SeriesMatrix, right: SeriesMatrix) -> SeriesMatrix:
    n = len(left)
    result: SeriesMatrix = []
    for i in range(n):
        row = []
        for j in range(n):
            total = CommSeries.zero(left[0][0].dimension, left[0][0].truncation)
            for k in range(n):
                if left[i][k].is_zero() or right[k][j].is_zero():
                    continue
                total = series_add(total, series_mul(left[i][k], right[k][j]))
            row.append(total)
        result.append(row)
    return result


def matrix_power_entries(nonlinear: CommMap, power: int, degree_bound: int) -> SeriesMatrix:
    jacobian = jacobian_matrix(nonlinear, truncation=degree_bound)
    result = jacobian
    for _ in range(power - 1):
        result = _matrix_mul(result, jacobian)
    return result


def fern_sum(
    nonlinear: CommMap, row: int, column: int, alpha: Sequence[int], power: int,
    enumerator: Optional[TreeEnumerator] = None,
) -> Fraction:
    """Σ of E_H over ferns with spine types starting at ``row`` and ending at ``column``."""
    table = nonlinear.as_table()
    spec = TreeFamilySpec(
        TreeFamily.FERN, row, tuple(alpha), nonlinear.dimension, generations=power, terminal_type=column
    )
    return sum(
        (tree_energy(tree, table, nonlinear.dimension) for tree in iter_trees(spec, enumerator)),
        Fraction(0),
    )


def fern_nilpotency_check(
    nonlinear: CommMap,
    power: int,
    path: FernPath = FernPath.MATRIX_POWER,
    degree_bound: Optional[int] = None,
) -> FernCheckResult:
    """
    Decide whether J(H)^m vanishes.

    Witnesses are reported in the order row i, column j, then α in graded-lex
    order, so both paths return the same first witness.
    """
    path = FernPath(path)
    with tracer.start_as_current_span("commseries.fern_nilpotency_check") as span:
        dimension = nonlinear.dimension
        degree = max(nonlinear.max_degree(), 0)
        if degree_bound is None:
            degree_bound = max(power * (degree - 1), 0)
        _validate(nonlinear, power, degree_bound)
        span.set_attribute("arbor.dimension", dimension)
        span.set_attribute("arbor.power", power)
        span.set_attribute("arbor.degree_bound", degree_bound)
        span.set_attribute("arbor.path", path.value)

        witness: Optional[FernWitness] = None
        if path is FernPath.MATRIX_POWER:
            entries = matrix_power_entries(nonlinear, power, degree_bound)
            witness = next(
                (
                    FernWitness(i + 1, j + 1, alpha, value)
                    for i in range(dimension)
                    for j in range(dimension)
                    for alpha, value in entries[i][j].terms()
                ),
                None,
            )
        else:
            check_leaf_limit(degree_bound)
            enumerator = TreeEnumerator(dimension)
            search = (
                (i, j, alpha)
                for i in range(1, dimension + 1)
                for j in range(1, dimension + 1)
                for alpha in iter_multi_indices(dimension, degree_bound)
            )
            for i, j, alpha in search:
                value = fern_sum(nonlinear, i, j, alpha, power, enumerator)
                if value:
                    witness = FernWitness(i, j, alpha, value)
                    break

        result = FernCheckResult(nilpotent=witness is None, witness=witness)
        fern_checks_total.labels(path=path.value, verdict="nilpotent" if result.nilpotent else "not-nilpotent").inc()
        logger.info("Fern check m=%s bound=%s via %s: nilpotent=%s", power, degree_bound, path.value, result.nilpotent)
        return result


def druzkowski_cubic(rows: Sequence[Sequence[Fraction | int]], truncation: int = 3) -> CommMap:
    """H_i = (L_i·X)³/3!, i.e. H_{i,α} = ∏_a L_{ia}^{α_a} for |α| = 3."""
    dimension = len(rows)
    if any(len(row) != dimension for row in rows):
        raise DimensionMismatchError("cubic-linear generator needs a square matrix")
    if truncation < 3:
        raise InvalidArgumentError("cubic-linear maps need truncation >= 3")
    coefficients = {}
    for i, row in enumerate(rows, start=1):
        for alpha in iter_multi_indices(dimension, 3, min_degree=3):
            value = Fraction(1)
            for entry, exponent in zip(row, alpha):
                value *= Fraction(entry) ** exponent
            coefficients[(i, alpha)] = value
    return CommMap.from_coefficients(dimension, truncation, coefficients)


def gradient_map(potential: CommSeries) -> CommMap:
    """H = ∇p with H_{i,α} = p_{α+e_i}; keeps only |α| >= 2, so p should start at degree 3."""
    if potential.truncation < 1:
        raise InvalidArgumentError("potential must be truncated at degree >= 1")
    truncation = potential.truncation - 1
    coefficients = {}
    for i in range(1, potential.dimension + 1):
        for alpha, value in partial_derivative(potential, i).terms():
            if alpha.degree >= 2:
                coefficients[(i, alpha)] = value
    return CommMap.from_coefficients(potential.dimension, truncation, coefficients)

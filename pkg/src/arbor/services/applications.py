# src/arbor/services/applications.py

"""
Classical identities read off the set-partition and tree sums.

Each application is computed from a partition or tree sum and is checked in
the test-suite against an independent route (recurrence, generating function,
series product or series inversion).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Mapping, Optional, Sequence

from opentelemetry import trace

from arbor.errors import DimensionMismatchError, InconsistentResultError, InvalidArgumentError
from arbor.models.comm_series import CommMap, CommSeries
from arbor.models.multi_index import MultiIndex, label_set, multi_index_of
from arbor.models.polynomial import IntPolynomial
from arbor.models.tree import TreeFamily, TreeFamilySpec
from arbor.services.comm_inversion import InversionPath, invert_identity_linear
from arbor.services.combinatorics import enumerate_set_partitions, iter_multi_indices
from arbor.services.tree_enumeration import iter_trees

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


def _partitions_of(k: int, **filters):
    if k < 0:
        raise InvalidArgumentError(f"k must be >= 0, got {k}")
    return enumerate_set_partitions(label_set((k,)), **filters)


def bell_stirling(k: int, j: int) -> int:
    """Stirling number of the second kind: partitions of [k] into j blocks."""
    with tracer.start_as_current_span("apps.bell_stirling") as span:
        span.set_attribute("arbor.k", k)
        span.set_attribute("arbor.j", j)
        if not 0 <= j <= k:
            raise InvalidArgumentError(f"need 0 <= j <= k, got k={k}, j={j}")
        return len(_partitions_of(k, blocks=j))


def stirling_row(k: int) -> list[int]:
    """[S(k, 0), ..., S(k, k)] from one enumeration."""
    row = [0] * (k + 1)
    for partition in _partitions_of(k):
        row[partition.size] += 1
    return row


def bell(k: int) -> int:
    return sum(stirling_row(k))


def hermite_polynomial(k: int) -> IntPolynomial:
    """
    Probabilists' Hermite polynomial He_k as a matching polynomial:
    Σ over partitions of [k] into singletons and pairs of (−1)^{k+#π} x^{#singletons}.
    """
    with tracer.start_as_current_span("apps.hermite_polynomial") as span:
        span.set_attribute("arbor.k", k)
        coefficients: dict[int, Fraction] = {}
        for partition in _partitions_of(k, max_block_size=2):
            singletons = sum(1 for block in partition.blocks if len(block) == 1)
            sign = -1 if (k + partition.size) % 2 else 1
            coefficients[singletons] = coefficients.get(singletons, Fraction(0)) + sign
        return IntPolynomial(coefficients)


def _table_dimension(table: Mapping, dimension: Optional[int]) -> int:
    lengths = {len(alpha) for alpha in table}
    if dimension is not None:
        lengths.add(dimension)
    if len(lengths) > 1:
        raise DimensionMismatchError(f"table mixes multi-indices of lengths {sorted(lengths)}")
    return lengths.pop() if lengths else 1


def _validate_table(table: Mapping, dimension: Optional[int]) -> tuple[int, dict[MultiIndex, Fraction]]:
    n = _table_dimension(table, dimension)
    cleaned: dict[MultiIndex, Fraction] = {}
    for key, value in table.items():
        alpha = MultiIndex(key)
        if alpha.is_zero():
            raise InvalidArgumentError("moment and cumulant tables are indexed by non-zero multi-indices only")
        cleaned[alpha] = Fraction(value)
    return n, cleaned


def _partition_transform(table, truncation, dimension, weight) -> dict[MultiIndex, Fraction]:
    n, values = _validate_table(table, dimension)
    result: dict[MultiIndex, Fraction] = {}
    for alpha in iter_multi_indices(n, truncation, min_degree=1):
        total = Fraction(0)
        for partition in enumerate_set_partitions(label_set(alpha)):
            term = Fraction(weight(partition.size))
            for block in partition.blocks:
                term *= values.get(multi_index_of(block, n), Fraction(0))
                if not term:
                    break
            total += term
        if total:
            result[alpha] = total
    return result


def cumulants_to_moments(
    cumulants: Mapping[Sequence[int], Fraction], truncation: int, dimension: Optional[int] = None
) -> dict[MultiIndex, Fraction]:
    """m_α = Σ over partitions π of [α] of ∏ κ_{#Γ}."""
    with tracer.start_as_current_span("apps.cumulants_to_moments") as span:
        span.set_attribute("arbor.truncation", truncation)
        return _partition_transform(cumulants, truncation, dimension, lambda blocks: 1)


def moments_to_cumulants(
    moments: Mapping[Sequence[int], Fraction], truncation: int, dimension: Optional[int] = None
) -> dict[MultiIndex, Fraction]:
    """κ_α = Σ over partitions π of [α] of (−1)^{#π−1} (#π−1)! ∏ m_{#Γ}."""
    with tracer.start_as_current_span("apps.moments_to_cumulants") as span:
        span.set_attribute("arbor.truncation", truncation)
        return _partition_transform(
            moments, truncation, dimension, lambda blocks: (-1) ** (blocks - 1) * factorial(blocks - 1)
        )


def series_reciprocal(f: CommSeries) -> CommSeries:
    """1/f for f_0 = 1: h_α = Σ_π (−1)^{#π} #π! ∏ f_{#Γ}."""
    with tracer.start_as_current_span("apps.series_reciprocal") as span:
        span.set_attribute("arbor.dimension", f.dimension)
        span.set_attribute("arbor.truncation", f.truncation)
        if f.constant_term != 1:
            raise InvalidArgumentError(f"reciprocal needs constant term 1, got {f.constant_term}")
        n = f.dimension
        coefficients: dict[MultiIndex, Fraction] = {}
        for alpha in iter_multi_indices(n, f.truncation):
            total = Fraction(0)
            for partition in enumerate_set_partitions(label_set(alpha)):
                term = Fraction((-1) ** partition.size * factorial(partition.size))
                for block in partition.blocks:
                    term *= f.coefficient(multi_index_of(block, n))
                    if not term:
                        break
                total += term
            coefficients[alpha] = total
        return CommSeries(n, f.truncation, coefficients)


class ProperTreeFilter(str, Enum):
    ALL = "all"
    EVEN_OUTDEGREES_ONLY = "even"


@dataclass(frozen=True)
class ProperTreeCount:
    k: int
    filter: ProperTreeFilter
    by_inversion: int
    by_enumeration: int

    @property
    def value(self) -> int:
        return self.by_enumeration


def _counting_map(k: int, tree_filter: ProperTreeFilter) -> CommMap:
    # X − h(X): h = e^X − 1 − X for all trees, cosh X − 1 for even outdegrees
    coefficients: list[Fraction | int] = [0, 1]
    for degree in range(2, k + 1):
        counted = tree_filter is ProperTreeFilter.ALL or degree % 2 == 0
        coefficients.append(-1 if counted else 0)
    return CommMap.univariate(coefficients)


def count_proper_trees(k: int, tree_filter: ProperTreeFilter = ProperTreeFilter.ALL) -> ProperTreeCount:
    """#proper trees with k labelled leaves, by series inversion and by enumeration."""
    tree_filter = ProperTreeFilter(tree_filter)
    with tracer.start_as_current_span("apps.count_proper_trees") as span:
        span.set_attribute("arbor.k", k)
        span.set_attribute("arbor.filter", tree_filter.value)
        if k < 1:
            raise InvalidArgumentError(f"k must be >= 1, got {k}")
        if k == 1:
            return ProperTreeCount(k, tree_filter, 1, 1)

        inverse = invert_identity_linear(_counting_map(k, tree_filter), InversionPath.RECURSIVE)
        by_inversion = inverse.coefficient(1, (k,))

        spec = TreeFamilySpec(TreeFamily.PROPER, 1, (k,), 1)
        by_enumeration = sum(
            1
            for tree in iter_trees(spec)
            if tree_filter is ProperTreeFilter.ALL
            or all(len(vertex.children) % 2 == 0 for vertex, _ in tree.internal_vertices())
        )
        if by_inversion != by_enumeration:
            raise InconsistentResultError(
                f"tree count paths disagree for k={k} ({tree_filter.value}): {by_inversion} vs {by_enumeration}",
                details={"by_inversion": str(by_inversion), "by_enumeration": by_enumeration},
            )
        logger.info("count_proper_trees k=%s filter=%s -> %s", k, tree_filter.value, by_enumeration)
        return ProperTreeCount(k, tree_filter, int(by_inversion), by_enumeration)

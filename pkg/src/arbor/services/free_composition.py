# src/arbor/services/free_composition.py

"""
Composition of truncated free maps.

``free_compose_direct`` substitutes G_{σ_l} for each letter of every word σ in
F, keeping letter order; ``free_compose_fdb`` sums generation-wise energies
over planar final trees, each internal vertex reading the coefficient of its
ordered child-type word.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

from opentelemetry import trace

from arbor.errors import InvalidArgumentError
from arbor.metrics import compositions_total
from arbor.models.comm_series import common_dimension
from arbor.models.free_series import FreeMap, FreeSeries
from arbor.models.multi_index import Word
from arbor.models.tree import TreeFamily, TreeFamilySpec
from arbor.services.combinatorics import iter_words
from arbor.services.free_arithmetic import free_add, free_mul, free_scale, require_zero_constant_term
from arbor.services.tree_energy import planar_final_energy
from arbor.services.tree_enumeration import TreeEnumerator, check_leaf_limit, iter_trees

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


class _WordProducts:
    """Memoized ordered products G_{σ_1} ... G_{σ_k}."""

    def __init__(self, inner: FreeMap, truncation: int):
        self.inner = tuple(series.truncate(truncation) for series in inner.components)
        self._cache: dict[Word, FreeSeries] = {(): FreeSeries.constant(inner.dimension, truncation)}

    def product(self, word: Word) -> FreeSeries:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        result = free_mul(self.product(word[:-1]), self.inner[word[-1] - 1])
        self._cache[word] = result
        return result


def free_compose_direct(outer: FreeMap, inner: FreeMap) -> FreeMap:
    with tracer.start_as_current_span("freeseries.free_compose_direct") as span:
        dimension = common_dimension((outer, inner))
        require_zero_constant_term(inner)
        truncation = min(outer.truncation, inner.truncation)
        span.set_attribute("arbor.dimension", dimension)
        span.set_attribute("arbor.truncation", truncation)

        products = _WordProducts(inner, truncation)
        components = []
        for series in outer.components:
            total = FreeSeries.zero(dimension, truncation)
            for word, value in series.terms():
                if len(word) <= truncation:
                    total = free_add(total, free_scale(products.product(word), value))
            components.append(total)

        compositions_total.labels(algebra="free", path="direct").inc()
        return FreeMap(tuple(components))


def free_compose_chain_direct(chain: Sequence[FreeMap]) -> FreeMap:
    if not chain:
        raise InvalidArgumentError("cannot compose an empty chain")
    result = chain[0]
    for mapping in chain[1:]:
        result = free_compose_direct(result, mapping)
    return result


def free_compose_fdb(chain: Sequence[FreeMap]) -> FreeMap:
    """F^(1)∘...∘F^(m) as a sum over planar final trees of height m."""
    with tracer.start_as_current_span("freeseries.free_compose_fdb") as span:
        if len(chain) < 2:
            raise InvalidArgumentError(f"a composition chain needs at least two maps, got {len(chain)}")
        dimension = common_dimension(chain)
        for position, mapping in enumerate(chain, start=1):
            require_zero_constant_term(mapping, role=f"map {position}")
        truncation = min(mapping.truncation for mapping in chain)
        check_leaf_limit(truncation)
        generations = len(chain)
        span.set_attribute("arbor.dimension", dimension)
        span.set_attribute("arbor.truncation", truncation)
        span.set_attribute("arbor.generations", generations)

        tables = [mapping.as_table() for mapping in chain]
        enumerator = TreeEnumerator(dimension)
        coefficients: dict[tuple[int, Word], Fraction] = {}
        for i in range(1, dimension + 1):
            for word in iter_words(dimension, truncation, min_length=1):
                spec = TreeFamilySpec(TreeFamily.FINAL, i, word, dimension, generations=generations, planar=True)
                coefficients[(i, word)] = sum(
                    (planar_final_energy(tree, tables) for tree in iter_trees(spec, enumerator)),
                    Fraction(0),
                )

        compositions_total.labels(algebra="free", path="fdb").inc()
        logger.info("free_compose_fdb: m=%s N=%s D=%s", generations, dimension, truncation)
        return FreeMap.from_coefficients(dimension, truncation, coefficients)

# src/arbor/services/comm_composition.py

"""
Composition of truncated commutative maps.

Three independent routes compute the same coefficients:

- ``compose_direct`` substitutes G into every monomial of F using repeated
  ``series_mul``; it is the oracle
- ``compose_fdb`` sums generation-wise energies over final trees, for chains
  of any length m >= 2
- ``compose_partition`` sums over set partitions of [α] with typed blocks,
  the two-map instance of the tree sum written without trees
"""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import product
from typing import Sequence

from opentelemetry import trace

from arbor.errors import InvalidArgumentError
from arbor.metrics import compositions_total
from arbor.models.comm_series import CommMap, CommSeries, common_dimension
from arbor.models.multi_index import MultiIndex, basis, label_set, mi_factorial, multi_index_of, zero
from arbor.models.tree import TreeFamily, TreeFamilySpec
from arbor.services.comm_arithmetic import require_zero_constant_term, series_add, series_mul, series_scale
from arbor.services.combinatorics import iter_multi_indices, iter_set_partitions
from arbor.services.tree_energy import final_tree_energy
from arbor.services.tree_enumeration import TreeEnumerator, check_leaf_limit, iter_trees

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


class _PowerCache:
    """Memoized products G^β = ∏ G_j^{β_j} for one inner map."""

    def __init__(self, inner: CommMap, truncation: int):
        self.inner = tuple(series.truncate(truncation) for series in inner.components)
        self.dimension = inner.dimension
        self.truncation = truncation
        self._cache: dict[MultiIndex, CommSeries] = {
            zero(self.dimension): CommSeries.constant(self.dimension, truncation)
        }

    def power(self, beta: MultiIndex) -> CommSeries:
        cached = self._cache.get(beta)
        if cached is not None:
            return cached
        leading = beta.first_component()
        smaller = beta.minus(basis(self.dimension, leading))
        result = series_mul(self.power(smaller), self.inner[leading - 1])
        self._cache[beta] = result
        return result


def compose_direct(outer: CommMap, inner: CommMap) -> CommMap:
    """F∘G by monomial substitution; G must have zero constant terms."""
    with tracer.start_as_current_span("commseries.compose_direct") as span:
        dimension = common_dimension((outer, inner))
        require_zero_constant_term(inner)
        truncation = min(outer.truncation, inner.truncation)
        span.set_attribute("arbor.dimension", dimension)
        span.set_attribute("arbor.truncation", truncation)

        powers = _PowerCache(inner, truncation)
        components = []
        for series in outer.components:
            total = CommSeries.zero(dimension, truncation)
            for beta, value in series.terms():
                if beta.degree > truncation:
                    continue
                # F_β/β! · G^β, back in divided-power coordinates
                total = series_add(total, series_scale(powers.power(beta), value / mi_factorial(beta)))
            components.append(total)

        compositions_total.labels(algebra="comm", path="direct").inc()
        logger.debug("compose_direct: N=%s D=%s", dimension, truncation)
        return CommMap(tuple(components))


def compose_chain_direct(chain: Sequence[CommMap]) -> CommMap:
    """Left fold of ``compose_direct`` over the chain."""
    if not chain:
        raise InvalidArgumentError("cannot compose an empty chain")
    result = chain[0]
    for mapping in chain[1:]:
        result = compose_direct(result, mapping)
    return result


def _validate_chain(chain: Sequence[CommMap]) -> tuple[int, int]:
    if len(chain) < 2:
        raise InvalidArgumentError(f"a composition chain needs at least two maps, got {len(chain)}")
    dimension = common_dimension(chain)
    for position, mapping in enumerate(chain, start=1):
        require_zero_constant_term(mapping, role=f"map {position}")
    return dimension, min(mapping.truncation for mapping in chain)


def compose_fdb(chain: Sequence[CommMap]) -> CommMap:
    """
    F^(1)∘...∘F^(m) as a sum over final trees of height m.

    Coefficient (i, α) is the sum, over final trees with root type i and
    leaves labelled by [α], of the product of F^(l+1)_{τ(v),μ(v)} over the
    internal vertices v of generation l.
    """
    with tracer.start_as_current_span("commseries.compose_fdb") as span:
        dimension, truncation = _validate_chain(chain)
        generations = len(chain)
        check_leaf_limit(truncation)
        span.set_attribute("arbor.dimension", dimension)
        span.set_attribute("arbor.truncation", truncation)
        span.set_attribute("arbor.generations", generations)

        tables = [mapping.as_table() for mapping in chain]
        enumerator = TreeEnumerator(dimension)
        coefficients: dict[tuple[int, MultiIndex], Fraction] = {}
        tree_count = 0
        for i in range(1, dimension + 1):
            for alpha in iter_multi_indices(dimension, truncation, min_degree=1):
                spec = TreeFamilySpec(TreeFamily.FINAL, i, alpha, dimension, generations=generations)
                value = Fraction(0)
                for tree in iter_trees(spec, enumerator):
                    value += final_tree_energy(tree, tables, dimension)
                    tree_count += 1
                coefficients[(i, alpha)] = value

        span.set_attribute("arbor.tree_count", tree_count)
        compositions_total.labels(algebra="comm", path="fdb").inc()
        logger.info("compose_fdb: m=%s N=%s D=%s summed %s trees", generations, dimension, truncation, tree_count)
        return CommMap.from_coefficients(dimension, truncation, coefficients)


def compose_partition(outer: CommMap, inner: CommMap) -> CommMap:
    """
    F∘G via (F∘G)_{i,α} = Σ_π Σ_types F_{i,Σ e_t} ∏_Γ G_{t_Γ,#Γ},
    π ranging over set partitions of [α] and each block Γ typed by t_Γ ∈ [N].
    """
    with tracer.start_as_current_span("commseries.compose_partition") as span:
        dimension = common_dimension((outer, inner))
        require_zero_constant_term(inner)
        truncation = min(outer.truncation, inner.truncation)
        check_leaf_limit(truncation)
        span.set_attribute("arbor.dimension", dimension)
        span.set_attribute("arbor.truncation", truncation)

        types = range(1, dimension + 1)
        coefficients: dict[tuple[int, MultiIndex], Fraction] = {}
        for alpha in iter_multi_indices(dimension, truncation):
            for partition in iter_set_partitions(label_set(alpha)):
                block_weights = []
                for block in partition.blocks:
                    size = multi_index_of(block, dimension)
                    block_weights.append([(t, inner.coefficient(t, size)) for t in types])
                for typing in product(*block_weights):
                    weight = Fraction(1)
                    for _, value in typing:
                        weight *= value
                    if not weight:
                        continue
                    outdegree = MultiIndex(sum(1 for t, _ in typing if t == k) for k in types)
                    for i in types:
                        value = outer.coefficient(i, outdegree)
                        if value:
                            key = (i, alpha)
                            coefficients[key] = coefficients.get(key, Fraction(0)) + value * weight

        compositions_total.labels(algebra="comm", path="partition").inc()
        return CommMap.from_coefficients(dimension, truncation, coefficients)

# src/arbor/services/combinatorics.py

"""
Combinatorial substrate shared by every series and tree computation.

- multi-index supports of truncated series, in graded-lex order
- set partitions of label sets (sympy's restricted-growth-string enumerator)
- ordered, possibly-empty distributions of labels over a fixed number of parts
- compositions of a word into consecutive segments

The ``iter_*`` generators are the hot-path forms used by tree enumeration;
``enumerate_*`` wrap them with limits, tracing and a materialized list.
"""

from __future__ import annotations

import logging
from itertools import combinations, product
from typing import Iterable, Iterator, Optional, Sequence

from opentelemetry import trace
from sympy.utilities.iterables import multiset_partitions

from arbor.config import get_settings
from arbor.errors import InvalidArgumentError
from arbor.models.multi_index import LabelSlot, MultiIndex, Word, mi_factorial
from arbor.models.partition import SetPartition, ordered_blocks
from arbor.utils.limits import enforce_limit

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

__all__ = [
    "mi_factorial",
    "enumerate_multi_indices",
    "iter_multi_indices",
    "enumerate_set_partitions",
    "iter_set_partitions",
    "iter_ordered_set_partitions",
    "iter_word_compositions",
    "iter_words",
]


def _weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # leading entries descend, which is graded-lex within one degree
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def iter_multi_indices(dimension: int, degree: int, min_degree: int = 0) -> Iterator[MultiIndex]:
    for d in range(min_degree, degree + 1):
        for exponents in _weak_compositions(d, dimension):
            yield MultiIndex(exponents)


def enumerate_multi_indices(dimension: int, degree: int) -> list[MultiIndex]:
    """All α with |α| <= degree, in graded-lex order; C(N+D, D) of them."""
    if dimension < 1:
        raise InvalidArgumentError(f"dimension must be >= 1, got {dimension}")
    if degree < 0:
        raise InvalidArgumentError(f"truncation degree must be >= 0, got {degree}")
    return list(iter_multi_indices(dimension, degree))


def iter_set_partitions(
    ground: Sequence[LabelSlot],
    *,
    blocks: Optional[int] = None,
    max_block_size: Optional[int] = None,
) -> Iterator[SetPartition]:
    """
    Yield every set partition of ``ground`` (assumed sorted, distinct).

    ``blocks`` restricts the number of blocks; ``max_block_size`` drops
    partitions with a larger block. No limit check here.
    """
    size = len(ground)
    if size == 0:
        if blocks in (None, 0):
            yield SetPartition(())
        return
    for raw in multiset_partitions(size, blocks):
        if max_block_size is not None and any(len(block) > max_block_size for block in raw):
            continue
        yield SetPartition(tuple(tuple(ground[position] for position in block) for block in raw))


def enumerate_set_partitions(
    ground: Iterable[LabelSlot],
    *,
    blocks: Optional[int] = None,
    max_block_size: Optional[int] = None,
) -> list[SetPartition]:
    """Every set partition of ``ground`` exactly once; Bell(|ground|) without filters."""
    with tracer.start_as_current_span("combinatorics.enumerate_set_partitions") as span:
        slots = sorted(set(ground))
        enforce_limit("partition_ground", len(slots), get_settings().max_partition_ground)
        span.set_attribute("arbor.ground_size", len(slots))
        partitions = list(iter_set_partitions(slots, blocks=blocks, max_block_size=max_block_size))
        span.set_attribute("arbor.partition_count", len(partitions))
        logger.debug("Enumerated %s partitions of a %s-element ground set", len(partitions), len(slots))
        return partitions


def iter_ordered_set_partitions(
    ground: Sequence[LabelSlot], parts: int
) -> Iterator[tuple[tuple[LabelSlot, ...], ...]]:
    """Ordered distributions of ``ground`` into ``parts`` labelled parts, empty parts allowed."""
    for assignment in product(range(parts), repeat=len(ground)):
        yield ordered_blocks(ground, assignment, parts)


def iter_word_compositions(word: Word, min_parts: int = 1) -> Iterator[tuple[Word, ...]]:
    """Cut ``word`` into consecutive non-empty segments, at least ``min_parts`` of them."""
    length = len(word)
    for parts in range(max(min_parts, 1), length + 1):
        for cuts in combinations(range(1, length), parts - 1):
            bounds = (0,) + cuts + (length,)
            yield tuple(word[bounds[k]:bounds[k + 1]] for k in range(parts))


def iter_words(dimension: int, length: int, min_length: int = 0) -> Iterator[Word]:
    """All words over [1..N] of length in [min_length, length], length-then-lex."""
    for k in range(min_length, length + 1):
        yield from product(range(1, dimension + 1), repeat=k)

# src/arbor/services/tree_enumeration.py

"""
Enumeration of the tree families behind every series formula.

Labelled families are built recursively over set partitions of the leaf-label
set:

- proper trees: the root's children are the blocks of a partition into at
  least two blocks; a singleton block is a leaf, any larger block is a proper
  subtree whose root type ranges over [N]
- final trees of height m: partition the labels among the root's children
  (any number of blocks), each child a final tree of height m-1
- alternating trees: take a proper tree, hang it below a fresh root and insert
  a one-child vertex of any type on every edge
- ferns: a spine v_0 ... v_m ending at an unlabelled leaf of type j, every
  label hanging directly off one of v_0 ... v_{m-1}

Planar families use compositions of the leaf word instead of set partitions.
Leaf labels are distinct, so no two generated trees are isomorphic and no
deduplication pass is needed. Sub-enumerations are memoized per enumerator
instance; an instance is not shared between threads.
"""

from __future__ import annotations

import logging
from itertools import product
from typing import Iterator

from opentelemetry import trace

from arbor.config import get_settings
from arbor.metrics import trees_enumerated_total
from arbor.models.multi_index import LabelSlot, Word, label_set
from arbor.models.tree import LabelledTree, PlanarTree, Tree, TreeFamily, TreeFamilySpec
from arbor.services.combinatorics import (
    iter_ordered_set_partitions,
    iter_set_partitions,
    iter_word_compositions,
)
from arbor.utils.limits import enforce_limit

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

Slots = tuple[LabelSlot, ...]


class TreeEnumerator:
    """Memoized constructors for the labelled and planar families over [N]."""

    def __init__(self, dimension: int):
        self.dimension = dimension
        self.types = range(1, dimension + 1)
        self._proper: dict[tuple[int, Slots], list[LabelledTree]] = {}
        self._final: dict[tuple[int, int, Slots], list[LabelledTree]] = {}
        self._planar_proper: dict[tuple[int, Word], list[PlanarTree]] = {}
        self._planar_final: dict[tuple[int, int, Word], list[PlanarTree]] = {}

    # -- labelled ------------------------------------------------------

    def proper(self, root: int, slots: Slots) -> list[LabelledTree]:
        key = (root, slots)
        cached = self._proper.get(key)
        if cached is not None:
            return cached
        trees: list[LabelledTree] = []
        if len(slots) == 1:
            if slots[0].component == root:
                trees.append(LabelledTree.leaf(slots[0]))
        elif slots:
            for partition in iter_set_partitions(slots):
                if partition.size < 2:
                    continue
                options = [self._proper_child(block) for block in partition.blocks]
                trees.extend(LabelledTree(root, children) for children in product(*options))
        self._proper[key] = trees
        return trees

    def _proper_child(self, block: Slots) -> list[LabelledTree]:
        if len(block) == 1:
            return [LabelledTree.leaf(block[0])]
        return [tree for child_type in self.types for tree in self.proper(child_type, block)]

    def final(self, generations: int, root: int, slots: Slots) -> list[LabelledTree]:
        key = (generations, root, slots)
        cached = self._final.get(key)
        if cached is not None:
            return cached
        trees: list[LabelledTree] = []
        if generations == 0:
            if len(slots) == 1 and slots[0].component == root:
                trees.append(LabelledTree.leaf(slots[0]))
        elif slots:
            for partition in iter_set_partitions(slots):
                options = [
                    [tree for child_type in self.types for tree in self.final(generations - 1, child_type, block)]
                    for block in partition.blocks
                ]
                trees.extend(LabelledTree(root, children) for children in product(*options))
        self._final[key] = trees
        return trees

    def alternating(self, root: int, slots: Slots) -> Iterator[LabelledTree]:
        for top_type in self.types:
            for collapsed in self.proper(top_type, slots):
                for expanded in self._expand(collapsed):
                    yield LabelledTree(root, (expanded,))

    def _expand(self, tree: LabelledTree) -> Iterator[LabelledTree]:
        # tree's root sits at an odd generation; every child gets a one-child parent
        if tree.is_leaf:
            yield tree
            return
        options = [
            [LabelledTree(bridge_type, (expanded,)) for expanded in self._expand(child) for bridge_type in self.types]
            for child in tree.children
        ]
        for children in product(*options):
            yield LabelledTree(tree.type, children)

    def fern(self, generations: int, root: int, slots: Slots, terminal: int) -> Iterator[LabelledTree]:
        for middle in product(self.types, repeat=generations - 1):
            spine_types = (root,) + middle + (terminal,)
            for parts in iter_ordered_set_partitions(slots, generations):
                node = LabelledTree(terminal)
                for level in range(generations - 1, -1, -1):
                    leaves = tuple(LabelledTree.leaf(slot) for slot in parts[level])
                    node = LabelledTree(spine_types[level], leaves + (node,))
                yield node

    # -- planar --------------------------------------------------------

    def planar_proper(self, root: int, word: Word) -> list[PlanarTree]:
        key = (root, word)
        cached = self._planar_proper.get(key)
        if cached is not None:
            return cached
        trees: list[PlanarTree] = []
        if len(word) == 1:
            if word[0] == root:
                trees.append(PlanarTree(root))
        elif word:
            for segments in iter_word_compositions(word, min_parts=2):
                options = [self._planar_proper_child(segment) for segment in segments]
                trees.extend(PlanarTree(root, children) for children in product(*options))
        self._planar_proper[key] = trees
        return trees

    def _planar_proper_child(self, segment: Word) -> list[PlanarTree]:
        if len(segment) == 1:
            return [PlanarTree(segment[0])]
        return [tree for child_type in self.types for tree in self.planar_proper(child_type, segment)]

    def planar_final(self, generations: int, root: int, word: Word) -> list[PlanarTree]:
        key = (generations, root, word)
        cached = self._planar_final.get(key)
        if cached is not None:
            return cached
        trees: list[PlanarTree] = []
        if generations == 0:
            if word == (root,):
                trees.append(PlanarTree(root))
        elif word:
            for segments in iter_word_compositions(word):
                options = [
                    [tree for child_type in self.types for tree in self.planar_final(generations - 1, child_type, segment)]
                    for segment in segments
                ]
                trees.extend(PlanarTree(root, children) for children in product(*options))
        self._planar_final[key] = trees
        return trees

    def planar_alternating(self, root: int, word: Word) -> Iterator[PlanarTree]:
        for top_type in self.types:
            for collapsed in self.planar_proper(top_type, word):
                for expanded in self._planar_expand(collapsed):
                    yield PlanarTree(root, (expanded,))

    def _planar_expand(self, tree: PlanarTree) -> Iterator[PlanarTree]:
        if tree.is_leaf:
            yield tree
            return
        options = [
            [PlanarTree(bridge_type, (expanded,)) for expanded in self._planar_expand(child) for bridge_type in self.types]
            for child in tree.children
        ]
        for children in product(*options):
            yield PlanarTree(tree.type, children)

    # -- dispatch ------------------------------------------------------

    def iter_family(self, spec: TreeFamilySpec) -> Iterator[Tree]:
        if spec.planar:
            word = tuple(spec.leaves)
            if spec.family is TreeFamily.PROPER:
                return iter(self.planar_proper(spec.root_type, word))
            if spec.family is TreeFamily.FINAL:
                return iter(self.planar_final(spec.generations, spec.root_type, word))
            return self.planar_alternating(spec.root_type, word)
        slots = label_set(spec.leaves)
        if spec.family is TreeFamily.PROPER:
            return iter(self.proper(spec.root_type, slots))
        if spec.family is TreeFamily.FINAL:
            return iter(self.final(spec.generations, spec.root_type, slots))
        if spec.family is TreeFamily.ALTERNATING:
            return self.alternating(spec.root_type, slots)
        return self.fern(spec.generations, spec.root_type, slots, spec.terminal_type)


def check_leaf_limit(leaf_count: int) -> None:
    enforce_limit("leaves", leaf_count, get_settings().max_leaves)


def iter_trees(spec: TreeFamilySpec, enumerator: TreeEnumerator | None = None) -> Iterator[Tree]:
    """Lazily yield the family selected by ``spec``; reuse ``enumerator`` to share memo tables."""
    check_leaf_limit(spec.leaf_count)
    if enumerator is None:
        enumerator = TreeEnumerator(spec.dimension)
    return enumerator.iter_family(spec)


def enumerate_trees(spec: TreeFamilySpec) -> list[Tree]:
    """One representative per isomorphism class (labelled) or per planar shape and typing."""
    with tracer.start_as_current_span("trees.enumerate_trees") as span:
        span.set_attribute("arbor.family", spec.family.value)
        span.set_attribute("arbor.planar", spec.planar)
        span.set_attribute("arbor.dimension", spec.dimension)
        span.set_attribute("arbor.leaves", spec.leaf_count)
        trees = list(iter_trees(spec))
        span.set_attribute("arbor.tree_count", len(trees))
        trees_enumerated_total.labels(family=spec.family.value).inc(len(trees))
        logger.info(
            "Enumerated %s %s trees (planar=%s, root=%s, leaves=%s)",
            len(trees), spec.family.value, spec.planar, spec.root_type, tuple(spec.leaves),
        )
        return trees


def count_trees(spec: TreeFamilySpec) -> int:
    return sum(1 for _ in iter_trees(spec))

# src/arbor/models/tree.py

"""
Rooted trees carrying vertex types, and the family selectors used to enumerate them.

``LabelledTree`` has unordered children: construction sorts them by their
canonical encoding, so structurally isomorphic trees are equal objects with
equal hashes. ``PlanarTree`` keeps children in rank order; the order is part of
its identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Iterator, Optional, Union

from arbor.errors import InvalidArgumentError
from arbor.models.multi_index import LabelSlot, MultiIndex, Word, types_to_multi_index, validate_word


@dataclass(frozen=True, eq=False)
class LabelledTree:
    type: int
    children: tuple["LabelledTree", ...] = ()
    label: Optional[LabelSlot] = None

    def __post_init__(self):
        if self.children and self.label is not None:
            raise InvalidArgumentError("only leaves carry labels")
        if self.label is not None and self.label.component != self.type:
            raise InvalidArgumentError(
                f"leaf of type {self.type} cannot carry label {tuple(self.label)}"
            )
        ordered = tuple(sorted(self.children, key=lambda child: child.encoding))
        object.__setattr__(self, "children", ordered)

    @classmethod
    def leaf(cls, label: LabelSlot) -> "LabelledTree":
        return cls(type=label.component, label=label)

    @cached_property
    def encoding(self) -> bytes:
        head = f"{self.type}"
        if self.label is not None:
            head += f":{self.label.component}.{self.label.index}"
        return b"(" + head.encode("ascii") + b"".join(child.encoding for child in self.children) + b")"

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def outdegree(self, dimension: int) -> MultiIndex:
        """μ(v): multiset of child types."""
        return types_to_multi_index((child.type for child in self.children), dimension)

    def vertices(self, generation: int = 0) -> Iterator[tuple["LabelledTree", int]]:
        """Pre-order walk yielding ``(vertex, generation)``."""
        yield self, generation
        for child in self.children:
            yield from child.vertices(generation + 1)

    def internal_vertices(self) -> Iterator[tuple["LabelledTree", int]]:
        return ((vertex, generation) for vertex, generation in self.vertices() if vertex.children)

    def leaves(self) -> list["LabelledTree"]:
        return [vertex for vertex, _ in self.vertices() if not vertex.children]

    def labels(self) -> list[LabelSlot]:
        return sorted(leaf.label for leaf in self.leaves() if leaf.label is not None)

    @property
    def height(self) -> int:
        return max(generation for _, generation in self.vertices())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelledTree):
            return NotImplemented
        return self.encoding == other.encoding

    def __hash__(self) -> int:
        return hash(self.encoding)

    def to_dict(self) -> dict[str, Any]:
        node: dict[str, Any] = {"type": self.type}
        if self.label is not None:
            node["label"] = list(self.label)
        node["children"] = [child.to_dict() for child in self.children]
        return node


@dataclass(frozen=True)
class PlanarTree:
    type: int
    children: tuple["PlanarTree", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def free_outdegree(self) -> Word:
        """μ⃗(v): word of child types, left to right."""
        return tuple(child.type for child in self.children)

    def vertices(self, generation: int = 0) -> Iterator[tuple["PlanarTree", int]]:
        yield self, generation
        for child in self.children:
            yield from child.vertices(generation + 1)

    def internal_vertices(self) -> Iterator[tuple["PlanarTree", int]]:
        return ((vertex, generation) for vertex, generation in self.vertices() if vertex.children)

    def leaf_word(self) -> Word:
        """Types of the leaves read left to right."""
        if not self.children:
            return (self.type,)
        return tuple(letter for child in self.children for letter in child.leaf_word())

    def to_dict(self) -> dict[str, Any]:
        return {"type": self.type, "children": [child.to_dict() for child in self.children]}


Tree = Union[LabelledTree, PlanarTree]


class TreeFamily(str, Enum):
    FINAL = "final"
    PROPER = "proper"
    ALTERNATING = "alternating"
    FERN = "fern"


@dataclass(frozen=True)
class TreeFamilySpec:
    """
    Selects one tree family.

    ``leaves`` is a multi-index α for labelled families, a word κ when
    ``planar`` is set. ``generations`` is m for final trees and ferns;
    ``terminal_type`` is the fern's spine end type j.
    """

    family: TreeFamily
    root_type: int
    leaves: tuple[int, ...]
    dimension: int
    generations: Optional[int] = None
    terminal_type: Optional[int] = None
    planar: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", TreeFamily(self.family))
        if self.dimension < 1:
            raise InvalidArgumentError(f"dimension must be >= 1, got {self.dimension}")
        if not 1 <= self.root_type <= self.dimension:
            raise InvalidArgumentError(f"root type {self.root_type} outside [1..{self.dimension}]")
        if self.planar:
            object.__setattr__(self, "leaves", validate_word(self.leaves, self.dimension))
        else:
            if len(self.leaves) != self.dimension:
                raise InvalidArgumentError(
                    f"multi-index {tuple(self.leaves)} does not have dimension {self.dimension}"
                )
            object.__setattr__(self, "leaves", MultiIndex(self.leaves))
        if self.family is TreeFamily.FINAL:
            if self.generations is None or self.generations < 0:
                raise InvalidArgumentError("final trees need a generation count m >= 0")
        elif self.family is TreeFamily.FERN:
            if self.planar:
                raise InvalidArgumentError("ferns are only defined for labelled trees")
            if self.generations is None or self.generations < 1:
                raise InvalidArgumentError("ferns need a spine length m >= 1")
            if self.terminal_type is None or not 1 <= self.terminal_type <= self.dimension:
                raise InvalidArgumentError(f"fern terminal type must lie in [1..{self.dimension}]")

    @property
    def leaf_count(self) -> int:
        return len(self.leaves) if self.planar else sum(self.leaves)

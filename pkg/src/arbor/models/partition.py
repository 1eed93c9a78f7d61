# src/arbor/models/partition.py

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from arbor.errors import InvalidArgumentError
from arbor.models.multi_index import LabelSlot


@dataclass(frozen=True)
class SetPartition:
    """
    A set partition of a finite ground set of label slots.

    Blocks are stored as sorted tuples, ordered by their least element, so two
    partitions of the same ground set are equal iff they have the same blocks.
    """

    blocks: tuple[tuple[LabelSlot, ...], ...]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[LabelSlot]]) -> "SetPartition":
        normalized = [tuple(sorted(block)) for block in blocks]
        if any(not block for block in normalized):
            raise InvalidArgumentError("set partitions cannot contain empty blocks")
        seen: set[LabelSlot] = set()
        for block in normalized:
            if seen.intersection(block):
                raise InvalidArgumentError("set partition blocks must be pairwise disjoint")
            seen.update(block)
        return cls(tuple(sorted(normalized, key=lambda block: block[0])))

    @property
    def size(self) -> int:
        """Number of blocks, #π."""
        return len(self.blocks)

    @property
    def ground(self) -> tuple[LabelSlot, ...]:
        return tuple(sorted(slot for block in self.blocks for slot in block))

    def block_sizes(self) -> list[int]:
        return [len(block) for block in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


def ordered_blocks(ground: Sequence[LabelSlot], assignment: Sequence[int], parts: int) -> tuple[tuple[LabelSlot, ...], ...]:
    """Group ``ground`` into ``parts`` possibly-empty parts following ``assignment``."""
    grouped: list[list[LabelSlot]] = [[] for _ in range(parts)]
    for slot, part in zip(ground, assignment):
        grouped[part].append(slot)
    return tuple(tuple(part) for part in grouped)

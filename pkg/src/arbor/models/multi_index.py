# src/arbor/models/multi_index.py

"""
Multi-indices, label slots and words.

A ``MultiIndex`` is an exponent vector α of N non-negative integers. Positions
are 0-based internally, but every public helper that names a *component* or a
*letter* (``basis``, ``LabelSlot.component``, word letters) uses 1-based values
in ``[1..N]``.

``MultiIndex`` subclasses ``tuple`` so it hashes and compares equal to the
plain tuple with the same entries; ``+``/``-`` are intentionally not
overridden (tuple concatenation stays tuple concatenation). Use ``plus`` and
``minus`` for vector arithmetic.
"""

from __future__ import annotations

from math import comb, factorial, prod
from typing import Iterable, NamedTuple, Sequence

from arbor.errors import DimensionMismatchError, InvalidArgumentError

Word = tuple[int, ...]


class MultiIndex(tuple):
    __slots__ = ()

    def __new__(cls, exponents: Iterable[int] = ()):
        values = tuple(exponents)
        for value in values:
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise InvalidArgumentError(f"multi-index entries must be non-negative integers, got {values}")
        return super().__new__(cls, values)

    @property
    def dimension(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return sum(self)

    def plus(self, other: Sequence[int]) -> "MultiIndex":
        _check_same_length(self, other)
        return MultiIndex(a + b for a, b in zip(self, other))

    def minus(self, other: Sequence[int]) -> "MultiIndex":
        _check_same_length(self, other)
        if not self.dominates(other):
            raise InvalidArgumentError(f"{tuple(other)} is not below {tuple(self)}")
        return MultiIndex(a - b for a, b in zip(self, other))

    def dominates(self, other: Sequence[int]) -> bool:
        """Componentwise ``other <= self``."""
        return all(b <= a for a, b in zip(self, other))

    def is_zero(self) -> bool:
        return not any(self)

    def graded_key(self) -> tuple:
        """Sort key for graded-lex order: by degree, then larger leading exponents first."""
        return (self.degree, tuple(-a for a in self))

    def first_component(self) -> int:
        """1-based index of the first non-zero entry."""
        for position, value in enumerate(self):
            if value:
                return position + 1
        raise InvalidArgumentError("zero multi-index has no leading component")

    def __repr__(self) -> str:
        return f"MultiIndex({tuple(self)})"


class LabelSlot(NamedTuple):
    """Element ``(i, a)`` of the label set [α], with 1 <= a <= α_i."""

    component: int
    index: int


def _check_same_length(left: Sequence[int], right: Sequence[int]) -> None:
    if len(left) != len(right):
        raise DimensionMismatchError(f"multi-indices of lengths {len(left)} and {len(right)}")


def zero(dimension: int) -> MultiIndex:
    return MultiIndex((0,) * dimension)


def basis(dimension: int, component: int) -> MultiIndex:
    """The unit multi-index e_i for 1-based ``component``."""
    if not 1 <= component <= dimension:
        raise InvalidArgumentError(f"component {component} outside [1..{dimension}]")
    return MultiIndex(1 if position == component - 1 else 0 for position in range(dimension))


def mi_factorial(alpha: Sequence[int]) -> int:
    """α! = ∏ α_i!"""
    return prod(factorial(a) for a in alpha)


def mi_binomial(alpha: Sequence[int], beta: Sequence[int]) -> int:
    """C(α, β) = ∏ C(α_i, β_i); zero unless β <= α."""
    return prod(comb(a, b) for a, b in zip(alpha, beta))


def label_set(alpha: Sequence[int]) -> tuple[LabelSlot, ...]:
    """The label set [α] in sorted order."""
    return tuple(
        LabelSlot(position + 1, index)
        for position, count in enumerate(alpha)
        for index in range(1, count + 1)
    )


def multi_index_of(slots: Iterable[LabelSlot], dimension: int) -> MultiIndex:
    """The multi-index #S counting slots per component."""
    counts = [0] * dimension
    for slot in slots:
        counts[slot.component - 1] += 1
    return MultiIndex(counts)


def types_to_multi_index(types: Iterable[int], dimension: int) -> MultiIndex:
    """Multiset of 1-based types as a multi-index (the outdegree μ)."""
    counts = [0] * dimension
    for vertex_type in types:
        counts[vertex_type - 1] += 1
    return MultiIndex(counts)


def validate_word(word: Iterable[int], dimension: int) -> Word:
    letters = tuple(word)
    for letter in letters:
        if isinstance(letter, bool) or not isinstance(letter, int) or not 1 <= letter <= dimension:
            raise InvalidArgumentError(f"word {letters} has a letter outside [1..{dimension}]")
    return letters


def word_key(word: Word) -> tuple:
    """Length-then-lex order for words."""
    return (len(word), word)


def abelianize(word: Iterable[int], dimension: int) -> MultiIndex:
    """Collapse a word to the multi-index counting its letters."""
    return types_to_multi_index(word, dimension)

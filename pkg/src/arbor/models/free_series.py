# src/arbor/models/free_series.py

"""
Truncated power series in N non-commuting indeterminates.

Coefficients are plain (no factorial normalization): ``coeffs[κ]`` multiplies
the monomial ``X_{κ_1} ... X_{κ_k}``. Words are tuples of 1-based letters; the
empty word holds the constant term. Keys are kept in length-then-lex order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping, Sequence

from arbor.errors import DimensionMismatchError, InvalidArgumentError, TruncationMismatchError
from arbor.models.coefficient_table import CoefficientTable
from arbor.models.multi_index import Word, validate_word, word_key


def _normalize(dimension: int, truncation: int, coeffs: Mapping) -> dict[Word, Fraction]:
    cleaned: dict[Word, Fraction] = {}
    for key, value in coeffs.items():
        word = validate_word(key, dimension)
        if len(word) > truncation:
            raise InvalidArgumentError(f"word {word} is longer than truncation {truncation}")
        value = Fraction(value)
        if value:
            cleaned[word] = cleaned.get(word, Fraction(0)) + value
    return {word: cleaned[word] for word in sorted(cleaned, key=word_key) if cleaned[word]}


@dataclass(frozen=True)
class FreeSeries:
    dimension: int
    truncation: int
    coeffs: Mapping[Word, Fraction]

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidArgumentError(f"dimension must be >= 1, got {self.dimension}")
        if self.truncation < 0:
            raise InvalidArgumentError(f"truncation must be >= 0, got {self.truncation}")
        object.__setattr__(
            self, "coeffs", MappingProxyType(_normalize(self.dimension, self.truncation, self.coeffs))
        )

    __hash__ = None

    @classmethod
    def zero(cls, dimension: int, truncation: int) -> "FreeSeries":
        return cls(dimension, truncation, {})

    @classmethod
    def constant(cls, dimension: int, truncation: int, value: Fraction | int = 1) -> "FreeSeries":
        return cls(dimension, truncation, {(): Fraction(value)})

    @classmethod
    def variable(cls, dimension: int, truncation: int, letter: int) -> "FreeSeries":
        if truncation < 1:
            return cls.zero(dimension, truncation)
        return cls(dimension, truncation, {(letter,): Fraction(1)})

    def coefficient(self, word: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(word), Fraction(0))

    def terms(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self.coeffs.items())

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient(())

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, truncation: int) -> "FreeSeries":
        if truncation > self.truncation:
            raise TruncationMismatchError(
                f"cannot raise truncation from {self.truncation} to {truncation}"
            )
        return FreeSeries(
            self.dimension,
            truncation,
            {word: value for word, value in self.coeffs.items() if len(word) <= truncation},
        )


@dataclass(frozen=True)
class FreeMap:
    components: tuple[FreeSeries, ...]

    def __post_init__(self):
        components = tuple(self.components)
        if not components:
            raise InvalidArgumentError("a map needs at least one component")
        dimension = components[0].dimension
        truncation = components[0].truncation
        for series in components:
            if series.dimension != dimension:
                raise DimensionMismatchError("all components must share one dimension")
            if series.truncation != truncation:
                raise TruncationMismatchError("all components must share one truncation")
        if len(components) != dimension:
            raise DimensionMismatchError(
                f"a map on {dimension} letters needs {dimension} components, got {len(components)}"
            )
        object.__setattr__(self, "components", components)

    __hash__ = None

    @classmethod
    def from_coefficients(
        cls, dimension: int, truncation: int, coefficients: Mapping[tuple[int, Sequence[int]], Fraction]
    ) -> "FreeMap":
        """Build from ``{(i, κ): F_{i,κ}}`` with 1-based ``i``."""
        buckets: list[dict] = [{} for _ in range(dimension)]
        for (component, word), value in coefficients.items():
            if not 1 <= component <= dimension:
                raise InvalidArgumentError(f"component {component} outside [1..{dimension}]")
            buckets[component - 1][tuple(word)] = value
        return cls(tuple(FreeSeries(dimension, truncation, bucket) for bucket in buckets))

    @property
    def dimension(self) -> int:
        return self.components[0].dimension

    @property
    def truncation(self) -> int:
        return self.components[0].truncation

    def component(self, i: int) -> FreeSeries:
        return self.components[i - 1]

    def coefficient(self, i: int, word: Sequence[int]) -> Fraction:
        return self.components[i - 1].coefficient(word)

    def terms(self) -> Iterator[tuple[int, Word, Fraction]]:
        for i, series in enumerate(self.components, start=1):
            for word, value in series.terms():
                yield i, word, value

    def as_table(self) -> CoefficientTable:
        return CoefficientTable(
            {(i, word): value for i, word, value in self.terms()}, dimension=self.dimension
        )

    def truncate(self, truncation: int) -> "FreeMap":
        return FreeMap(tuple(series.truncate(truncation) for series in self.components))

    def has_zero_constant_term(self) -> bool:
        return all(series.constant_term == 0 for series in self.components)

# src/arbor/models/comm_series.py

"""
Truncated power series in N commuting indeterminates, and N-tuples of them.

Coefficients follow the divided-power convention: ``coeffs[α] = F_α`` stands
for the monomial ``F_α / α! · X^α``. Storage is sparse (zeros are dropped) and
keys are kept in graded-lex order, which is also the serialization order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from arbor.errors import DimensionMismatchError, InvalidArgumentError, TruncationMismatchError
from arbor.models.coefficient_table import CoefficientTable
from arbor.models.multi_index import MultiIndex, basis, zero


def _normalize(dimension: int, truncation: int, coeffs: Mapping) -> dict[MultiIndex, Fraction]:
    cleaned: dict[MultiIndex, Fraction] = {}
    for key, value in coeffs.items():
        alpha = MultiIndex(key)
        if len(alpha) != dimension:
            raise DimensionMismatchError(f"multi-index {tuple(alpha)} in a series of dimension {dimension}")
        if alpha.degree > truncation:
            raise InvalidArgumentError(
                f"multi-index {tuple(alpha)} has degree {alpha.degree} above truncation {truncation}"
            )
        value = Fraction(value)
        if value:
            cleaned[alpha] = cleaned.get(alpha, Fraction(0)) + value
    return {alpha: cleaned[alpha] for alpha in sorted(cleaned, key=MultiIndex.graded_key) if cleaned[alpha]}


@dataclass(frozen=True)
class CommSeries:
    dimension: int
    truncation: int
    coeffs: Mapping[MultiIndex, Fraction]

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
    def zero(cls, dimension: int, truncation: int) -> "CommSeries":
        return cls(dimension, truncation, {})

    @classmethod
    def constant(cls, dimension: int, truncation: int, value: Fraction | int = 1) -> "CommSeries":
        return cls(dimension, truncation, {zero(dimension): Fraction(value)})

    @classmethod
    def variable(cls, dimension: int, truncation: int, component: int) -> "CommSeries":
        """The series X_i (1-based ``component``)."""
        if truncation < 1:
            return cls.zero(dimension, truncation)
        return cls(dimension, truncation, {basis(dimension, component): Fraction(1)})

    @classmethod
    def univariate(cls, coefficients: Sequence[Fraction | int]) -> "CommSeries":
        """One-variable series from divided-power coefficients ``[f_0, f_1, ..., f_D]``."""
        return cls(1, len(coefficients) - 1, {(k,): value for k, value in enumerate(coefficients)})

    def coefficient(self, alpha: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(alpha), Fraction(0))

    def terms(self) -> Iterator[tuple[MultiIndex, Fraction]]:
        return iter(self.coeffs.items())

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.dimension)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def max_degree(self) -> int:
        """Largest degree carrying a non-zero coefficient (-1 for the zero series)."""
        return max((alpha.degree for alpha in self.coeffs), default=-1)

    def truncate(self, truncation: int) -> "CommSeries":
        if truncation > self.truncation:
            raise TruncationMismatchError(
                f"cannot raise truncation from {self.truncation} to {truncation}"
            )
        return CommSeries(
            self.dimension,
            truncation,
            {alpha: value for alpha, value in self.coeffs.items() if alpha.degree <= truncation},
        )


@dataclass(frozen=True)
class LinearTerm:
    """N×N matrix; for a map F, entry (i, j) is F_{i,e_j}."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(value) for value in row) for row in self.rows)
        if any(len(row) != len(rows) for row in rows):
            raise DimensionMismatchError("linear term must be a square matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, dimension: int) -> "LinearTerm":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(dimension)) for i in range(dimension)))

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def entry(self, row: int, column: int) -> Fraction:
        """1-based access."""
        return self.rows[row - 1][column - 1]

    def is_identity(self) -> bool:
        return self == LinearTerm.identity(self.dimension)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(row) for row in self.rows]


@dataclass(frozen=True)
class CommMap:
    """An N-tuple of series sharing dimension N and truncation D."""

    components: tuple[CommSeries, ...]

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
                f"a map on {dimension} variables needs {dimension} components, got {len(components)}"
            )
        object.__setattr__(self, "components", components)

    __hash__ = None

    @classmethod
    def from_coefficients(
        cls, dimension: int, truncation: int, coefficients: Mapping[tuple[int, Sequence[int]], Fraction]
    ) -> "CommMap":
        """Build from ``{(i, α): F_{i,α}}`` with 1-based ``i``."""
        buckets: list[dict] = [{} for _ in range(dimension)]
        for (component, alpha), value in coefficients.items():
            if not 1 <= component <= dimension:
                raise InvalidArgumentError(f"component {component} outside [1..{dimension}]")
            buckets[component - 1][tuple(alpha)] = value
        return cls(tuple(CommSeries(dimension, truncation, bucket) for bucket in buckets))

    @classmethod
    def univariate(cls, coefficients: Sequence[Fraction | int]) -> "CommMap":
        return cls((CommSeries.univariate(coefficients),))

    @property
    def dimension(self) -> int:
        return self.components[0].dimension

    @property
    def truncation(self) -> int:
        return self.components[0].truncation

    def component(self, i: int) -> CommSeries:
        return self.components[i - 1]

    def coefficient(self, i: int, alpha: Sequence[int]) -> Fraction:
        return self.components[i - 1].coefficient(alpha)

    def terms(self) -> Iterator[tuple[int, MultiIndex, Fraction]]:
        for i, series in enumerate(self.components, start=1):
            for alpha, value in series.terms():
                yield i, alpha, value

    def as_table(self) -> CoefficientTable:
        """``(i, α) -> F_{i,α}`` with zero default."""
        return CoefficientTable(
            {(i, alpha): value for i, alpha, value in self.terms()}, dimension=self.dimension
        )

    def truncate(self, truncation: int) -> "CommMap":
        return CommMap(tuple(series.truncate(truncation) for series in self.components))

    def has_zero_constant_term(self) -> bool:
        return all(series.constant_term == 0 for series in self.components)

    def max_degree(self) -> int:
        return max(series.max_degree for series in self.components)


def common_dimension(items: Iterable) -> int:
    dimensions = {item.dimension for item in items}
    if len(dimensions) != 1:
        raise DimensionMismatchError(f"operands have different dimensions: {sorted(dimensions)}")
    return dimensions.pop()

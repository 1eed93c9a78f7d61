# src/arbor/models/polynomial.py

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence


@dataclass(frozen=True)
class IntPolynomial:
    """Single-variable polynomial with exact rational coefficients, stored sparsely by degree."""

    coefficients: Mapping[int, Fraction]

    def __post_init__(self):
        cleaned = {int(k): Fraction(v) for k, v in self.coefficients.items() if Fraction(v) != 0}
        object.__setattr__(self, "coefficients", MappingProxyType(dict(sorted(cleaned.items()))))

    __hash__ = None

    @classmethod
    def from_list(cls, coefficients: Sequence[Fraction | int]) -> "IntPolynomial":
        """Lowest degree first."""
        return cls({k: value for k, value in enumerate(coefficients)})

    @property
    def degree(self) -> int:
        return max(self.coefficients, default=-1)

    def coefficient(self, k: int) -> Fraction:
        return self.coefficients.get(k, Fraction(0))

    def to_list(self) -> list[Fraction]:
        """Dense coefficients, lowest degree first; ``[0]`` for the zero polynomial."""
        return [self.coefficient(k) for k in range(max(self.degree, 0) + 1)]

    def __call__(self, x: Fraction | int) -> Fraction:
        return sum((value * Fraction(x) ** k for k, value in self.coefficients.items()), Fraction(0))

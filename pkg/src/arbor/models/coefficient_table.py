# src/arbor/models/coefficient_table.py

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional


class CoefficientTable(dict):
    """
    Table of coefficients keyed by ``(type, index)``.

    ``index`` is a multi-index for commutative tables and a word for free
    tables. Tables derived from a truncated series read absent entries as
    zero; explicit tables built with ``default_zero=False`` raise ``KeyError``
    so energy evaluation can report the missing pair.
    """

    def __init__(
        self,
        entries: Mapping[tuple[int, Hashable], Fraction] | Iterable = (),
        *,
        dimension: Optional[int] = None,
        default_zero: bool = True,
    ):
        super().__init__(entries)
        self.dimension = dimension
        self.default_zero = default_zero

    def __missing__(self, key):
        if self.default_zero:
            return Fraction(0)
        raise KeyError(key)

    def nonzero(self) -> dict:
        return {key: value for key, value in self.items() if value != 0}

# src/arbor/services/abelianization.py

"""
Collapse free series onto commutative ones by letting the indeterminates commute.

A word κ collapses to the multi-index counting its letters; the plain
coefficient sum over all words with the same count becomes a divided-power
coefficient after multiplying by α!. Composition and inversion commute with
this map, which makes it a cross-check between the two algebras.
"""

from __future__ import annotations

from fractions import Fraction

from arbor.models.comm_series import CommMap, CommSeries
from arbor.models.free_series import FreeMap, FreeSeries
from arbor.models.multi_index import MultiIndex, abelianize, mi_factorial


def abelianize_series(f: FreeSeries) -> CommSeries:
    """F_α = α! · Σ_{κ ↦ α} f_κ."""
    sums: dict[MultiIndex, Fraction] = {}
    for word, value in f.terms():
        alpha = abelianize(word, f.dimension)
        sums[alpha] = sums.get(alpha, Fraction(0)) + value
    return CommSeries(
        f.dimension, f.truncation, {alpha: value * mi_factorial(alpha) for alpha, value in sums.items()}
    )


def abelianize_map(mapping: FreeMap) -> CommMap:
    return CommMap(tuple(abelianize_series(series) for series in mapping.components))

# src/arbor/utils/rational.py

"""Exact rational parsing and canonical rendering ("p/q", denominator omitted when 1)."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from arbor.errors import MalformedInputError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

RationalLike = Union[Fraction, int, str]


def parse_rational(value: RationalLike) -> Fraction:
    """
    Parse an exact rational.

    Accepts ints, Fractions and strings of the form ``"p"`` or ``"p/q"``.
    Floats and decimal strings are refused: they cannot be represented exactly.
    """
    if isinstance(value, bool):
        raise MalformedInputError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if match:
            numerator, denominator = match.group(1), match.group(2)
            if denominator is not None and int(denominator) == 0:
                raise MalformedInputError(f"zero denominator in {value!r}")
            return Fraction(int(numerator), int(denominator) if denominator else 1)
    raise MalformedInputError(f"not an exact rational: {value!r}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"

# src/arbor/services/series_codec.py

"""
Wire format for series and maps.

Documents are JSON (YAML accepted on input) validated with pydantic. Every
document names its coefficient convention explicitly: ``divided-power`` for
commutative data, ``plain`` for free data. Output is canonical: fixed key
order, graded-lex (commutative) or length-then-lex (free) term order, compact
separators, rationals rendered as ``"p/q"`` strings with the denominator
omitted when it is 1. Re-reading emitted output yields the same document.
"""

from __future__ import annotations

import json
import logging
from typing import Annotated, Any, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, TypeAdapter, ValidationError

from arbor.errors import MalformedInputError
from arbor.models.comm_series import CommMap, CommSeries
from arbor.models.free_series import FreeMap, FreeSeries
from arbor.utils.file_utils import detect_file_type
from arbor.utils.rational import format_rational, parse_rational

logger = logging.getLogger(__name__)

RationalValue = Union[StrictStr, StrictInt]


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CommTerm(_Document):
    alpha: list[StrictInt]
    value: RationalValue


class FreeTerm(_Document):
    word: list[StrictInt]
    value: RationalValue


class CommComponent(_Document):
    coeffs: list[CommTerm] = Field(default_factory=list)


class FreeComponent(_Document):
    coeffs: list[FreeTerm] = Field(default_factory=list)


class CommMapDocument(_Document):
    kind: Literal["comm"]
    convention: Literal["divided-power"]
    dimension: StrictInt
    truncation: StrictInt
    components: list[CommComponent]


class CommSeriesDocument(_Document):
    kind: Literal["comm-series"]
    convention: Literal["divided-power"]
    dimension: StrictInt
    truncation: StrictInt
    coeffs: list[CommTerm] = Field(default_factory=list)


class FreeSeriesDocument(_Document):
    kind: Literal["free-series"]
    convention: Literal["plain"]
    dimension: StrictInt
    truncation: StrictInt
    coeffs: list[FreeTerm] = Field(default_factory=list)


class FreeMapDocument(_Document):
    kind: Literal["free"]
    convention: Literal["plain"]
    dimension: StrictInt
    truncation: StrictInt
    components: list[FreeComponent]


SeriesDocument = Annotated[
    Union[CommMapDocument, CommSeriesDocument, FreeMapDocument, FreeSeriesDocument], Field(discriminator="kind")
]
_document_adapter = TypeAdapter(SeriesDocument)

Decoded = Union[CommMap, CommSeries, FreeMap, FreeSeries]


# -- decoding ---------------------------------------------------------------

def parse_document(raw: bytes | str, filename: Optional[str] = None) -> Any:
    """Parse raw JSON or YAML bytes into Python data."""
    raw_bytes = raw.encode("utf-8") if isinstance(raw, str) else raw
    file_type = detect_file_type(filename, raw_bytes)
    try:
        text = raw_bytes.decode("utf-8")
        if file_type == "yaml":
            return yaml.safe_load(text)
        return json.loads(text)
    except (UnicodeDecodeError, ValueError, yaml.YAMLError) as exc:
        logger.info("Rejecting unparseable document %s: %s", filename or "<stdin>", exc)
        raise MalformedInputError(f"cannot parse {filename or 'input'}: {exc}") from exc


def _comm_terms(terms: list[CommTerm]) -> dict:
    coeffs: dict = {}
    for term in terms:
        key = tuple(term.alpha)
        if key in coeffs:
            raise MalformedInputError(f"duplicate multi-index {list(key)}")
        coeffs[key] = parse_rational(term.value)
    return coeffs


def _free_terms(terms: list[FreeTerm]) -> dict:
    coeffs: dict = {}
    for term in terms:
        key = tuple(term.word)
        if key in coeffs:
            raise MalformedInputError(f"duplicate word {list(key)}")
        coeffs[key] = parse_rational(term.value)
    return coeffs


def decode(data: Any) -> Decoded:
    try:
        document = _document_adapter.validate_python(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise MalformedInputError(f"invalid series document at {location or '<root>'}: {first['msg']}") from exc

    if isinstance(document, CommSeriesDocument):
        return CommSeries(document.dimension, document.truncation, _comm_terms(document.coeffs))
    if isinstance(document, FreeSeriesDocument):
        return FreeSeries(document.dimension, document.truncation, _free_terms(document.coeffs))
    if isinstance(document, CommMapDocument):
        return CommMap(
            tuple(
                CommSeries(document.dimension, document.truncation, _comm_terms(component.coeffs))
                for component in document.components
            )
        )
    return FreeMap(
        tuple(
            FreeSeries(document.dimension, document.truncation, _free_terms(component.coeffs))
            for component in document.components
        )
    )


def load(raw: bytes | str, filename: Optional[str] = None) -> Decoded:
    return decode(parse_document(raw, filename))


def load_comm_map(raw: bytes | str, filename: Optional[str] = None) -> CommMap:
    value = load(raw, filename)
    if not isinstance(value, CommMap):
        raise MalformedInputError(f"{filename or 'input'}: expected a document of kind 'comm'")
    return value


def load_comm_series(raw: bytes | str, filename: Optional[str] = None) -> CommSeries:
    value = load(raw, filename)
    if not isinstance(value, CommSeries):
        raise MalformedInputError(f"{filename or 'input'}: expected a document of kind 'comm-series'")
    return value


def load_free_series(raw: bytes | str, filename: Optional[str] = None) -> FreeSeries:
    value = load(raw, filename)
    if not isinstance(value, FreeSeries):
        raise MalformedInputError(f"{filename or 'input'}: expected a document of kind 'free-series'")
    return value


def load_free_map(raw: bytes | str, filename: Optional[str] = None) -> FreeMap:
    value = load(raw, filename)
    if not isinstance(value, FreeMap):
        raise MalformedInputError(f"{filename or 'input'}: expected a document of kind 'free'")
    return value


# -- encoding ---------------------------------------------------------------

def _comm_coeffs(series: CommSeries) -> list[dict]:
    return [{"alpha": list(alpha), "value": format_rational(value)} for alpha, value in series.terms()]


def _free_coeffs(series: FreeSeries) -> list[dict]:
    return [{"word": list(word), "value": format_rational(value)} for word, value in series.terms()]


def encode(value: Decoded) -> dict:
    if isinstance(value, CommSeries):
        return {
            "kind": "comm-series",
            "convention": "divided-power",
            "dimension": value.dimension,
            "truncation": value.truncation,
            "coeffs": _comm_coeffs(value),
        }
    if isinstance(value, CommMap):
        return {
            "kind": "comm",
            "convention": "divided-power",
            "dimension": value.dimension,
            "truncation": value.truncation,
            "components": [{"coeffs": _comm_coeffs(series)} for series in value.components],
        }
    if isinstance(value, FreeMap):
        return {
            "kind": "free",
            "convention": "plain",
            "dimension": value.dimension,
            "truncation": value.truncation,
            "components": [
                {"coeffs": _free_coeffs(series)} for series in value.components
            ],
        }
    if isinstance(value, FreeSeries):
        return {
            "kind": "free-series",
            "convention": "plain",
            "dimension": value.dimension,
            "truncation": value.truncation,
            "coeffs": _free_coeffs(value),
        }
    raise TypeError(f"cannot encode {type(value).__name__}")


def canonical_dumps(payload: Any) -> str:
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False)


def dumps(value: Decoded) -> str:
    return canonical_dumps(encode(value))

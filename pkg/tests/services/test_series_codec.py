# tests/services/test_series_codec.py
import json
from fractions import Fraction

import pytest

from arbor.errors import DimensionMismatchError, MalformedInputError
from arbor.models.comm_series import CommMap, CommSeries
from arbor.models.free_series import FreeMap, FreeSeries
from arbor.services import series_codec
from arbor.services.series_codec import canonical_dumps, dumps, encode, load


COMM_MAP = {
    "kind": "comm",
    "convention": "divided-power",
    "dimension": 2,
    "truncation": 2,
    "components": [
        {"coeffs": [{"alpha": [0, 2], "value": "1/2"}, {"alpha": [1, 0], "value": 1}]},
        {"coeffs": [{"alpha": [0, 1], "value": "1"}]},
    ],
}


class TestDecoding:
    def test_comm_map(self):
        mapping = series_codec.decode(COMM_MAP)
        assert isinstance(mapping, CommMap)
        assert mapping.coefficient(1, (0, 2)) == Fraction(1, 2)
        assert mapping.coefficient(2, (0, 1)) == 1

    def test_free_series(self):
        series = load('{"kind":"free-series","convention":"plain","dimension":2,"truncation":2,'
                      '"coeffs":[{"word":[2,1],"value":"-3"}]}')
        assert series == FreeSeries(2, 2, {(2, 1): -3})

    def test_yaml_input(self):
        text = """
kind: comm-series
convention: divided-power
dimension: 1
truncation: 3
coeffs:
  - {alpha: [3], value: "2/3"}
"""
        assert load(text, "series.yaml") == CommSeries(1, 3, {(3,): Fraction(2, 3)})

    def test_typed_loaders_check_kind(self):
        with pytest.raises(MalformedInputError, match="kind 'free'"):
            series_codec.load_free_map(json.dumps(COMM_MAP))
        assert isinstance(series_codec.load_comm_map(json.dumps(COMM_MAP)), CommMap)

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda doc: doc.update(convention="plain"),
            lambda doc: doc.update(kind="matrix"),
            lambda doc: doc.update(extra=True),
            lambda doc: doc["components"][0]["coeffs"][0].update(value=0.5),
            lambda doc: doc["components"][0]["coeffs"][0].update(value="0.5"),
            lambda doc: doc["components"][0]["coeffs"].append({"alpha": [0, 2], "value": "1"}),
        ],
        ids=["convention", "kind", "extra-key", "float", "decimal-string", "duplicate"],
    )
    def test_rejects_malformed_documents(self, mutate):
        document = json.loads(json.dumps(COMM_MAP))
        mutate(document)
        with pytest.raises(MalformedInputError):
            series_codec.decode(document)

    def test_unparseable_bytes(self):
        with pytest.raises(MalformedInputError):
            load(b"{not json", "map.json")

    def test_component_count_must_match_dimension(self):
        document = json.loads(json.dumps(COMM_MAP))
        document["components"].pop()
        with pytest.raises(DimensionMismatchError):
            series_codec.decode(document)


class TestEncoding:
    def test_canonical_order_and_values(self):
        series = CommSeries(2, 2, {(0, 2): 1, (1, 0): Fraction(-1, 2), (2, 0): 4})
        assert dumps(series) == (
            '{"kind":"comm-series","convention":"divided-power","dimension":2,"truncation":2,'
            '"coeffs":[{"alpha":[1,0],"value":"-1/2"},{"alpha":[2,0],"value":"4"},{"alpha":[0,2],"value":"1"}]}'
        )

    def test_reencoding_is_a_fixed_point(self, random_series):
        values = [
            random_series.comm_map(2, 3, linear="random"),
            random_series.comm_series(3, 2),
            random_series.free_map(2, 3),
            random_series.free_series(2, 3),
        ]
        for value in values:
            text = dumps(value)
            assert load(text) == value
            assert dumps(load(text)) == text

    def test_free_map_words_in_length_then_lex_order(self):
        mapping = FreeMap.from_coefficients(2, 2, {(1, (2, 1)): 1, (1, (1, 2)): 1, (1, (2,)): 1, (2, (1,)): 1})
        words = [term["word"] for term in encode(mapping)["components"][0]["coeffs"]]
        assert words == [[2], [1, 2], [2, 1]]

    def test_canonical_dumps_is_compact(self):
        assert canonical_dumps({"a": [1, 2]}) == '{"a":[1,2]}'

# tests/conftest.py
import random
from fractions import Fraction
from pathlib import Path

import pytest

from arbor.config import reset_settings
from arbor.models.comm_series import CommMap, CommSeries
from arbor.models.free_series import FreeMap, FreeSeries
from arbor.services.combinatorics import iter_multi_indices, iter_words

FIXTURES = Path(__file__).parent / "fixtures"

ARBOR_ENV = (
    "ARBOR_MAX_LEAVES",
    "ARBOR_MAX_PARTITION_GROUND",
    "ARBOR_MAX_DEGREE",
    "ARBOR_MAX_CELLS",
    "ARBOR_TRACE_EXPORT",
    "LOG_LEVEL",
)


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Each test starts from default limits, whatever the shell exports."""
    for name in ARBOR_ENV:
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def _random_value(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2, 3)))


def _random_matrix(rng: random.Random, dimension: int) -> list[list[Fraction]]:
    # unit lower-triangular times unit upper-triangular: always invertible
    lower = [[Fraction(int(i == j)) if i <= j else Fraction(rng.randint(-2, 2)) for j in range(dimension)]
             for i in range(dimension)]
    upper = [[Fraction(rng.choice((1, 2, -1))) if i == j else Fraction(rng.randint(-1, 2)) if i < j else Fraction(0)
              for j in range(dimension)] for i in range(dimension)]
    return [
        [sum((lower[i][k] * upper[k][j] for k in range(dimension)), Fraction(0)) for j in range(dimension)]
        for i in range(dimension)
    ]


def make_comm_map(
    rng: random.Random,
    dimension: int,
    truncation: int,
    *,
    linear: str = "identity",
    density: float = 0.6,
    min_degree: int = 2,
) -> CommMap:
    """
    Random map with zero constant term.

    ``linear`` is ``identity``, ``invertible`` (a random invertible P) or
    ``random`` (any linear part, possibly singular).
    """
    coefficients = {}
    for i in range(1, dimension + 1):
        for alpha in iter_multi_indices(dimension, truncation, min_degree=max(min_degree, 2)):
            if rng.random() < density:
                coefficients[(i, alpha)] = _random_value(rng)
    if truncation >= 1:
        if linear == "identity":
            rows = [[Fraction(int(i == j)) for j in range(dimension)] for i in range(dimension)]
        elif linear == "invertible":
            rows = _random_matrix(rng, dimension)
        else:
            rows = [[_random_value(rng) for _ in range(dimension)] for _ in range(dimension)]
        for i in range(dimension):
            for j in range(dimension):
                alpha = tuple(int(position == j) for position in range(dimension))
                coefficients[(i + 1, alpha)] = rows[i][j]
    return CommMap.from_coefficients(dimension, truncation, coefficients)


def make_nonlinear_map(rng: random.Random, dimension: int, truncation: int, density: float = 0.6) -> CommMap:
    """Random H carrying only terms of degree >= 2."""
    coefficients = {
        (i, alpha): _random_value(rng)
        for i in range(1, dimension + 1)
        for alpha in iter_multi_indices(dimension, truncation, min_degree=2)
        if rng.random() < density
    }
    return CommMap.from_coefficients(dimension, truncation, coefficients)


def make_comm_series(rng: random.Random, dimension: int, truncation: int, density: float = 0.6) -> CommSeries:
    return CommSeries(
        dimension,
        truncation,
        {alpha: _random_value(rng) for alpha in iter_multi_indices(dimension, truncation) if rng.random() < density},
    )


def make_free_map(
    rng: random.Random,
    dimension: int,
    truncation: int,
    *,
    linear: str = "identity",
    density: float = 0.5,
) -> FreeMap:
    coefficients = {}
    for i in range(1, dimension + 1):
        for word in iter_words(dimension, truncation, min_length=2):
            if rng.random() < density:
                coefficients[(i, word)] = _random_value(rng)
    if truncation >= 1:
        if linear == "identity":
            rows = [[Fraction(int(i == j)) for j in range(dimension)] for i in range(dimension)]
        elif linear == "invertible":
            rows = _random_matrix(rng, dimension)
        else:
            rows = [[_random_value(rng) for _ in range(dimension)] for _ in range(dimension)]
        for i in range(dimension):
            for j in range(dimension):
                coefficients[(i + 1, (j + 1,))] = rows[i][j]
    return FreeMap.from_coefficients(dimension, truncation, coefficients)


def make_free_series(rng: random.Random, dimension: int, truncation: int, density: float = 0.5) -> FreeSeries:
    return FreeSeries(
        dimension,
        truncation,
        {word: _random_value(rng) for word in iter_words(dimension, truncation) if rng.random() < density},
    )


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


class RandomSeries:
    """Seeded factories bound to one generator."""

    def __init__(self, rng: random.Random):
        self.rng = rng

    def comm_map(self, dimension: int, truncation: int, **options) -> CommMap:
        return make_comm_map(self.rng, dimension, truncation, **options)

    def nonlinear(self, dimension: int, truncation: int, **options) -> CommMap:
        return make_nonlinear_map(self.rng, dimension, truncation, **options)

    def comm_series(self, dimension: int, truncation: int, **options) -> CommSeries:
        return make_comm_series(self.rng, dimension, truncation, **options)

    def free_map(self, dimension: int, truncation: int, **options) -> FreeMap:
        return make_free_map(self.rng, dimension, truncation, **options)

    def free_series(self, dimension: int, truncation: int, **options) -> FreeSeries:
        return make_free_series(self.rng, dimension, truncation, **options)

    def shape(self, max_dimension: int, max_truncation: int, min_truncation: int = 2) -> tuple[int, int]:
        return self.rng.randint(1, max_dimension), self.rng.randint(min_truncation, max_truncation)


@pytest.fixture
def random_series(rng) -> RandomSeries:
    return RandomSeries(rng)

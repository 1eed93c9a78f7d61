# src/arbor/services/free_inversion.py

"""
Compositional inversion of truncated free maps.

F_i = Σ_j P_ij X_j − Σ_{|κ|>=2} H_{i,κ} X_κ. With P = I the inverse sums
E_H over planar proper trees, or solves G_i = X_i + Σ_σ H_{i,σ} G_{σ_1}...G_{σ_r}
word by word. A general invertible P goes through planar alternating trees
with Q = P⁻¹, or through the reduction G = Q∘inv(F∘Q).
"""

from __future__ import annotations

import logging
from fractions import Fraction

from opentelemetry import trace

from arbor.config import get_settings
from arbor.errors import InvalidArgumentError, NonIdentityLinearTermError, NonzeroConstantTermError
from arbor.metrics import inversion_duration_seconds, inversions_total
from arbor.models.coefficient_table import CoefficientTable
from arbor.models.free_series import FreeMap
from arbor.models.multi_index import Word
from arbor.models.tree import TreeFamily, TreeFamilySpec
from arbor.services.combinatorics import iter_words
from arbor.services.comm_inversion import GENERAL_PATHS, IDENTITY_PATHS, InversionPath
from arbor.services.free_arithmetic import free_apply_linear, free_jacobian_at_zero, free_linear_map
from arbor.services.free_composition import free_compose_direct
from arbor.services.linear_algebra import invert_matrix
from arbor.services.tree_energy import planar_alt_energy, planar_energy
from arbor.services.tree_enumeration import TreeEnumerator, check_leaf_limit, iter_trees
from arbor.utils.limits import enforce_limit

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


def free_nonlinear_table(mapping: FreeMap) -> CoefficientTable:
    """H_{i,κ} = −F_{i,κ} for |κ| >= 2."""
    return CoefficientTable(
        {(i, word): -value for i, word, value in mapping.terms() if len(word) >= 2},
        dimension=mapping.dimension,
    )


class _RecursiveFreeInverter:
    """
    Word-level recursion: ``segment_sum(σ, κ)`` is the coefficient of X_κ in
    G_{σ_1} ... G_{σ_r}, split on the length of the first factor's word.
    """

    def __init__(self, dimension: int, nonlinear: CoefficientTable, max_cells: int):
        self.dimension = dimension
        self.max_cells = max_cells
        self.terms: list[list[tuple[Word, Fraction]]] = [[] for _ in range(dimension)]
        for (i, word), value in nonlinear.items():
            if value:
                self.terms[i - 1].append((tuple(word), Fraction(value)))
        self._g: dict[tuple[int, Word], Fraction] = {}
        self._segments: dict[tuple[Word, Word], Fraction] = {}

    def _remember(self, memo: dict, key, value: Fraction) -> Fraction:
        memo[key] = value
        enforce_limit("memo_cells", len(self._g) + len(self._segments), self.max_cells)
        return value

    def coefficient(self, i: int, word: Word) -> Fraction:
        key = (i, word)
        cached = self._g.get(key)
        if cached is not None:
            return cached
        value = Fraction(1) if word == (i,) else Fraction(0)
        if len(word) >= 2:
            for sigma, h_value in self.terms[i - 1]:
                if len(sigma) <= len(word):
                    value += h_value * self.segment_sum(sigma, word)
        return self._remember(self._g, key, value)

    def segment_sum(self, sigma: Word, word: Word) -> Fraction:
        if not sigma:
            return Fraction(1) if not word else Fraction(0)
        if len(sigma) > len(word):
            return Fraction(0)
        key = (sigma, word)
        cached = self._segments.get(key)
        if cached is not None:
            return cached
        total = Fraction(0)
        for cut in range(1, len(word) - len(sigma) + 2):
            g_value = self.coefficient(sigma[0], word[:cut])
            if g_value:
                remainder = self.segment_sum(sigma[1:], word[cut:])
                if remainder:
                    total += g_value * remainder
        return self._remember(self._segments, key, total)


def _require_zero_constant(mapping: FreeMap) -> None:
    if not mapping.has_zero_constant_term():
        raise NonzeroConstantTermError("only maps with F(0) = 0 can be inverted")


def free_invert(mapping: FreeMap, path: InversionPath = InversionPath.RECURSIVE) -> FreeMap:
    """Two-sided inverse of a free map with identity linear term."""
    path = InversionPath(path)
    if path not in IDENTITY_PATHS:
        raise InvalidArgumentError(f"path {path.value!r} applies to free_invert_general, not free_invert")
    with tracer.start_as_current_span("freeseries.free_invert") as span, \
            inversion_duration_seconds.labels(algebra="free", path=path.value).time():
        dimension, truncation = mapping.dimension, mapping.truncation
        span.set_attribute("arbor.dimension", dimension)
        span.set_attribute("arbor.truncation", truncation)
        span.set_attribute("arbor.path", path.value)
        _require_zero_constant(mapping)
        if not free_jacobian_at_zero(mapping).is_identity():
            raise NonIdentityLinearTermError(
                "linear term is not the identity matrix; use free_invert_general for an arbitrary invertible linear term"
            )

        table = free_nonlinear_table(mapping)
        coefficients: dict[tuple[int, Word], Fraction] = {}
        if path is InversionPath.TREE_SUM:
            check_leaf_limit(truncation)
            enumerator = TreeEnumerator(dimension)
            for i in range(1, dimension + 1):
                for word in iter_words(dimension, truncation, min_length=1):
                    spec = TreeFamilySpec(TreeFamily.PROPER, i, word, dimension, planar=True)
                    coefficients[(i, word)] = sum(
                        (planar_energy(tree, table) for tree in iter_trees(spec, enumerator)),
                        Fraction(0),
                    )
        else:
            settings = get_settings()
            enforce_limit("degree", truncation, settings.max_degree)
            inverter = _RecursiveFreeInverter(dimension, table, settings.max_cells)
            for i in range(1, dimension + 1):
                for word in iter_words(dimension, truncation, min_length=1):
                    coefficients[(i, word)] = inverter.coefficient(i, word)

        inversions_total.labels(algebra="free", path=path.value).inc()
        logger.info("Inverted free map N=%s D=%s via %s", dimension, truncation, path.value)
        return FreeMap.from_coefficients(dimension, truncation, coefficients)


def free_invert_general(mapping: FreeMap, path: InversionPath = InversionPath.REDUCTION) -> FreeMap:
    """Inverse of a free map whose linear term P is invertible; G's linear term is P⁻¹."""
    path = InversionPath(path)
    if path not in GENERAL_PATHS:
        raise InvalidArgumentError(f"path {path.value!r} applies to free_invert, not free_invert_general")
    with tracer.start_as_current_span("freeseries.free_invert_general") as span, \
            inversion_duration_seconds.labels(algebra="free", path=path.value).time():
        dimension, truncation = mapping.dimension, mapping.truncation
        span.set_attribute("arbor.dimension", dimension)
        span.set_attribute("arbor.truncation", truncation)
        span.set_attribute("arbor.path", path.value)
        _require_zero_constant(mapping)
        inverse_linear = invert_matrix(free_jacobian_at_zero(mapping))

        if path is InversionPath.REDUCTION:
            reduced = free_compose_direct(mapping, free_linear_map(inverse_linear, truncation))
            result = free_apply_linear(inverse_linear, free_invert(reduced, InversionPath.RECURSIVE))
        else:
            check_leaf_limit(truncation)
            table = free_nonlinear_table(mapping)
            q = inverse_linear.rows
            enumerator = TreeEnumerator(dimension)
            coefficients: dict[tuple[int, Word], Fraction] = {}
            for i in range(1, dimension + 1):
                for word in iter_words(dimension, truncation, min_length=1):
                    spec = TreeFamilySpec(TreeFamily.ALTERNATING, i, word, dimension, planar=True)
                    coefficients[(i, word)] = sum(
                        (planar_alt_energy(tree, table, q) for tree in iter_trees(spec, enumerator)),
                        Fraction(0),
                    )
            result = FreeMap.from_coefficients(dimension, truncation, coefficients)

        inversions_total.labels(algebra="free", path=path.value).inc()
        logger.info("Inverted free map N=%s D=%s via %s", dimension, truncation, path.value)
        return result

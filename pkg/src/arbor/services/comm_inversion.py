# src/arbor/services/comm_inversion.py

"""
Compositional inversion of truncated commutative maps.

Write F_i = Σ_j P_ij X_j − Σ_{|α|>=2} H_{i,α}/α! X^α. Then:

- with P = I, the inverse has G_{i,α} = Σ over proper trees of E_H(T)
  (``InversionPath.TREE_SUM``), or equivalently solves
  G = X + H(G) degree by degree (``InversionPath.RECURSIVE``)
- for invertible P with Q = P⁻¹, G_{i,α} = Σ over alternating trees of the
  alternating energy (``InversionPath.ALTERNATING``), or G = Q∘inv(F∘Q)
  (``InversionPath.REDUCTION``)

``phi_involution`` maps the H-table of F = X − H to the H-table of its inverse.
"""

from __future__ import annotations

import logging
from enum import Enum
from fractions import Fraction
from itertools import product

from opentelemetry import trace

from arbor.config import get_settings
from arbor.errors import InvalidArgumentError, NonIdentityLinearTermError, NonzeroConstantTermError
from arbor.metrics import inversion_duration_seconds, inversions_total
from arbor.models.coefficient_table import CoefficientTable
from arbor.models.comm_series import CommMap, LinearTerm
from arbor.models.multi_index import MultiIndex, basis, mi_binomial
from arbor.models.tree import TreeFamily, TreeFamilySpec
from arbor.services.comm_arithmetic import apply_linear, jacobian_linear_term, linear_map
from arbor.services.comm_composition import compose_direct
from arbor.services.combinatorics import iter_multi_indices
from arbor.services.linear_algebra import invert_matrix
from arbor.services.tree_energy import alt_tree_energy, tree_energy
from arbor.services.tree_enumeration import TreeEnumerator, check_leaf_limit, iter_trees
from arbor.utils.limits import enforce_limit

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


class InversionPath(str, Enum):
    TREE_SUM = "tree"
    RECURSIVE = "recursive"
    ALTERNATING = "alt"
    REDUCTION = "reduce"


IDENTITY_PATHS = (InversionPath.TREE_SUM, InversionPath.RECURSIVE)
GENERAL_PATHS = (InversionPath.ALTERNATING, InversionPath.REDUCTION)


def nonlinear_table(mapping: CommMap) -> CoefficientTable:
    """H_{i,α} = −F_{i,α} for |α| >= 2."""
    return CoefficientTable(
        {(i, alpha): -value for i, alpha, value in mapping.terms() if alpha.degree >= 2},
        dimension=mapping.dimension,
    )


def map_from_nonlinear(
    nonlinear: CommMap, linear: LinearTerm | None = None
) -> CommMap:
    """F = P·X − H, with P the identity unless given; ``nonlinear`` holds H."""
    dimension, truncation = nonlinear.dimension, nonlinear.truncation
    linear = linear or LinearTerm.identity(dimension)
    coefficients: dict = {(i, alpha): -value for i, alpha, value in nonlinear.terms()}
    if truncation >= 1:
        for i in range(1, dimension + 1):
            for j in range(1, dimension + 1):
                key = (i, basis(dimension, j))
                coefficients[key] = coefficients.get(key, Fraction(0)) + linear.entry(i, j)
    return CommMap.from_coefficients(dimension, truncation, coefficients)


class _RecursiveInverter:
    """
    Solves G_i = X_i + Σ_β H_{i,β}/β! G^β coefficient by coefficient.

    ``block_sum(β, α)`` is the divided-power coefficient at α of G^β/β!: a sum
    over partitions of [α] into |β| blocks typed by β. Placing the leading
    label first gives the recursion used below. Memo state is confined to one
    instance.
    """

    def __init__(self, dimension: int, nonlinear: CoefficientTable, max_cells: int):
        self.dimension = dimension
        self.max_cells = max_cells
        self.terms: list[list[tuple[MultiIndex, Fraction]]] = [[] for _ in range(dimension)]
        for (i, beta), value in nonlinear.items():
            if value:
                self.terms[i - 1].append((MultiIndex(beta), Fraction(value)))
        self._g: dict[tuple[int, MultiIndex], Fraction] = {}
        self._blocks: dict[tuple[MultiIndex, MultiIndex], Fraction] = {}

    def _remember(self, memo: dict, key, value: Fraction) -> Fraction:
        memo[key] = value
        enforce_limit("memo_cells", len(self._g) + len(self._blocks), self.max_cells)
        return value

    def coefficient(self, i: int, alpha: MultiIndex) -> Fraction:
        key = (i, alpha)
        cached = self._g.get(key)
        if cached is not None:
            return cached
        value = Fraction(1) if alpha == basis(self.dimension, i) else Fraction(0)
        if alpha.degree >= 2:
            for beta, h_value in self.terms[i - 1]:
                if 2 <= beta.degree <= alpha.degree:
                    value += h_value * self.block_sum(beta, alpha)
        return self._remember(self._g, key, value)

    def block_sum(self, beta: MultiIndex, alpha: MultiIndex) -> Fraction:
        if beta.is_zero():
            return Fraction(1) if alpha.is_zero() else Fraction(0)
        if beta.degree > alpha.degree:
            return Fraction(0)
        key = (beta, alpha)
        cached = self._blocks.get(key)
        if cached is not None:
            return cached
        leading = basis(self.dimension, alpha.first_component())
        rest = alpha.minus(leading)
        total = Fraction(0)
        for j in range(1, self.dimension + 1):
            if not beta[j - 1]:
                continue
            beta_rest = beta.minus(basis(self.dimension, j))
            for gamma_rest in product(*(range(r + 1) for r in rest)):
                gamma = leading.plus(gamma_rest)
                # the other |β|−1 blocks need at least one label each
                if alpha.degree - gamma.degree < beta_rest.degree:
                    continue
                g_value = self.coefficient(j, gamma)
                if not g_value:
                    continue
                remainder = self.block_sum(beta_rest, alpha.minus(gamma))
                if remainder:
                    total += mi_binomial(rest, gamma_rest) * g_value * remainder
        return self._remember(self._blocks, key, total)


def _require_zero_constant(mapping: CommMap) -> None:
    if not mapping.has_zero_constant_term():
        raise NonzeroConstantTermError("only maps with F(0) = 0 can be inverted")


def invert_identity_linear(mapping: CommMap, path: InversionPath = InversionPath.RECURSIVE) -> CommMap:
    """Inverse of a map whose linear term is the identity matrix."""
    path = InversionPath(path)
    if path not in IDENTITY_PATHS:
        raise InvalidArgumentError(f"path {path.value!r} applies to invert_general, not invert_identity_linear")
    with tracer.start_as_current_span("commseries.invert_identity_linear") as span, \
            inversion_duration_seconds.labels(algebra="comm", path=path.value).time():
        dimension, truncation = mapping.dimension, mapping.truncation
        span.set_attribute("arbor.dimension", dimension)
        span.set_attribute("arbor.truncation", truncation)
        span.set_attribute("arbor.path", path.value)
        _require_zero_constant(mapping)
        if not jacobian_linear_term(mapping).is_identity():
            raise NonIdentityLinearTermError(
                "linear term is not the identity matrix; use invert_general for an arbitrary invertible linear term"
            )

        table = nonlinear_table(mapping)
        coefficients: dict[tuple[int, MultiIndex], Fraction] = {}
        if path is InversionPath.TREE_SUM:
            check_leaf_limit(truncation)
            enumerator = TreeEnumerator(dimension)
            for i in range(1, dimension + 1):
                for alpha in iter_multi_indices(dimension, truncation, min_degree=1):
                    spec = TreeFamilySpec(TreeFamily.PROPER, i, alpha, dimension)
                    coefficients[(i, alpha)] = sum(
                        (tree_energy(tree, table, dimension) for tree in iter_trees(spec, enumerator)),
                        Fraction(0),
                    )
        else:
            settings = get_settings()
            enforce_limit("degree", truncation, settings.max_degree)
            inverter = _RecursiveInverter(dimension, table, settings.max_cells)
            for i in range(1, dimension + 1):
                for alpha in iter_multi_indices(dimension, truncation, min_degree=1):
                    coefficients[(i, alpha)] = inverter.coefficient(i, alpha)

        inversions_total.labels(algebra="comm", path=path.value).inc()
        logger.info("Inverted map N=%s D=%s via %s", dimension, truncation, path.value)
        return CommMap.from_coefficients(dimension, truncation, coefficients)


def invert_general(mapping: CommMap, path: InversionPath = InversionPath.REDUCTION) -> CommMap:
    """Inverse of a map with an invertible linear term P; G's linear term is Q = P⁻¹."""
    path = InversionPath(path)
    if path not in GENERAL_PATHS:
        raise InvalidArgumentError(f"path {path.value!r} applies to invert_identity_linear, not invert_general")
    with tracer.start_as_current_span("commseries.invert_general") as span, \
            inversion_duration_seconds.labels(algebra="comm", path=path.value).time():
        dimension, truncation = mapping.dimension, mapping.truncation
        span.set_attribute("arbor.dimension", dimension)
        span.set_attribute("arbor.truncation", truncation)
        span.set_attribute("arbor.path", path.value)
        _require_zero_constant(mapping)
        inverse_linear = invert_matrix(jacobian_linear_term(mapping))

        if path is InversionPath.REDUCTION:
            reduced = compose_direct(mapping, linear_map(inverse_linear, truncation))
            result = apply_linear(inverse_linear, invert_identity_linear(reduced, InversionPath.RECURSIVE))
        else:
            check_leaf_limit(truncation)
            table = nonlinear_table(mapping)
            q = inverse_linear.rows
            enumerator = TreeEnumerator(dimension)
            coefficients: dict[tuple[int, MultiIndex], Fraction] = {}
            for i in range(1, dimension + 1):
                for alpha in iter_multi_indices(dimension, truncation, min_degree=1):
                    spec = TreeFamilySpec(TreeFamily.ALTERNATING, i, alpha, dimension)
                    coefficients[(i, alpha)] = sum(
                        (alt_tree_energy(tree, table, q, dimension) for tree in iter_trees(spec, enumerator)),
                        Fraction(0),
                    )
            result = CommMap.from_coefficients(dimension, truncation, coefficients)

        inversions_total.labels(algebra="comm", path=path.value).inc()
        logger.info("Inverted map N=%s D=%s via %s", dimension, truncation, path.value)
        return result


def phi_involution(nonlinear: CommMap, path: InversionPath = InversionPath.RECURSIVE) -> CommMap:
    """
    Φ(H)_{i,α} = −Σ over proper trees of E_H(T): the H-table of the inverse of X − H.

    ``nonlinear`` stores H_{i,α} (|α| >= 2 only) in divided-power coordinates.
    """
    with tracer.start_as_current_span("commseries.phi_involution") as span:
        span.set_attribute("arbor.dimension", nonlinear.dimension)
        span.set_attribute("arbor.truncation", nonlinear.truncation)
        for i, alpha, _ in nonlinear.terms():
            if alpha.degree < 2:
                raise InvalidArgumentError(
                    f"Φ is defined on nonlinear tables only; entry ({i}, {tuple(alpha)}) has degree {alpha.degree}"
                )
        if nonlinear.truncation < 2:
            return nonlinear
        inverse = invert_identity_linear(map_from_nonlinear(nonlinear), path)
        return CommMap.from_coefficients(
            nonlinear.dimension,
            nonlinear.truncation,
            {(i, alpha): -value for i, alpha, value in inverse.terms() if alpha.degree >= 2},
        )

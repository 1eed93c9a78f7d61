# src/arbor/services/tree_energy.py

"""
Energy functionals over trees.

The energy of a tree is the product, over its internal vertices v, of a
coefficient looked up by ``(type(v), outdegree(v))``: the outdegree is a
multi-index for labelled trees and the child-type word for planar trees.
Alternating energies read even-generation vertices from a matrix Q instead,
indexed by the vertex type and the type of its only child.

Tables may be any mapping keyed by ``(type, index)``. A ``CoefficientTable``
built from a series reads absent entries as zero; a plain dict raises
``MissingCoefficientError`` naming the missing pair.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Sequence

from arbor.errors import DimensionMismatchError, InvalidArgumentError, MissingCoefficientError
from arbor.models.tree import LabelledTree, PlanarTree

Matrix = Sequence[Sequence[Fraction]]


def _resolve_dimension(table: Mapping, tree: LabelledTree, dimension: Optional[int]) -> int:
    """The map dimension: given explicitly or carried by the table, never guessed from the tree."""
    declared = getattr(table, "dimension", None)
    if dimension and declared and dimension != declared:
        raise DimensionMismatchError(f"table has dimension {declared}, energy asked for {dimension}")
    dimension = dimension or declared
    if not declared:
        lengths = {len(index) for _, index in table}
        if dimension is None and len(lengths) == 1:
            dimension = lengths.pop()
        elif lengths - {dimension}:
            raise DimensionMismatchError(f"table mixes indices of lengths {sorted(lengths)}")
    if not dimension:
        raise InvalidArgumentError("cannot tell the map dimension; pass it explicitly")
    top = max(vertex.type for vertex, _ in tree.vertices())
    if top > dimension:
        raise DimensionMismatchError(f"tree has a vertex of type {top} in dimension {dimension}")
    return dimension


def _lookup(table: Mapping, vertex_type: int, index) -> Fraction:
    try:
        return Fraction(table[(vertex_type, index)])
    except KeyError:
        raise MissingCoefficientError(vertex_type, index) from None


def _q_entry(q: Matrix, row: int, column: int) -> Fraction:
    try:
        return Fraction(q[row - 1][column - 1])
    except IndexError:
        raise InvalidArgumentError(f"matrix Q has no entry ({row}, {column})") from None


def tree_energy(tree: LabelledTree, table: Mapping, dimension: Optional[int] = None) -> Fraction:
    """E_H(T) = ∏ over internal v of H[τ(v), μ(v)]; 1 for a bare leaf."""
    dimension = _resolve_dimension(table, tree, dimension)
    energy = Fraction(1)
    for vertex, _ in tree.internal_vertices():
        energy *= _lookup(table, vertex.type, vertex.outdegree(dimension))
    return energy


def final_tree_energy(tree: LabelledTree, tables: Sequence[Mapping], dimension: Optional[int] = None) -> Fraction:
    """Generation-wise energy: internal vertices in generation l read ``tables[l]``."""
    dimension = _resolve_dimension(tables[0], tree, dimension)
    energy = Fraction(1)
    for vertex, generation in tree.internal_vertices():
        if generation >= len(tables):
            raise InvalidArgumentError(f"tree has internal vertices below generation {len(tables) - 1}")
        energy *= _lookup(tables[generation], vertex.type, vertex.outdegree(dimension))
    return energy


def alt_tree_energy(
    tree: LabelledTree, table: Mapping, q: Matrix, dimension: Optional[int] = None
) -> Fraction:
    """Even vertices contribute Q[τ(v), τ(child)], odd internal vertices H[τ(v), μ(v)]."""
    dimension = _resolve_dimension(table, tree, dimension)
    energy = Fraction(1)
    for vertex, generation in tree.vertices():
        if generation % 2 == 0:
            if len(vertex.children) != 1:
                raise InvalidArgumentError(
                    f"not alternating: generation {generation} vertex has {len(vertex.children)} children"
                )
            energy *= _q_entry(q, vertex.type, vertex.children[0].type)
        elif len(vertex.children) == 1:
            raise InvalidArgumentError(f"not alternating: generation {generation} vertex has one child")
        elif vertex.children:
            energy *= _lookup(table, vertex.type, vertex.outdegree(dimension))
    return energy


def planar_energy(tree: PlanarTree, table: Mapping) -> Fraction:
    energy = Fraction(1)
    for vertex, _ in tree.internal_vertices():
        energy *= _lookup(table, vertex.type, vertex.free_outdegree())
    return energy


def planar_final_energy(tree: PlanarTree, tables: Sequence[Mapping]) -> Fraction:
    energy = Fraction(1)
    for vertex, generation in tree.internal_vertices():
        if generation >= len(tables):
            raise InvalidArgumentError(f"tree has internal vertices below generation {len(tables) - 1}")
        energy *= _lookup(tables[generation], vertex.type, vertex.free_outdegree())
    return energy


def planar_alt_energy(tree: PlanarTree, table: Mapping, q: Matrix) -> Fraction:
    energy = Fraction(1)
    for vertex, generation in tree.vertices():
        if generation % 2 == 0:
            if len(vertex.children) != 1:
                raise InvalidArgumentError(
                    f"not alternating: generation {generation} vertex has {len(vertex.children)} children"
                )
            energy *= _q_entry(q, vertex.type, vertex.children[0].type)
        elif len(vertex.children) == 1:
            raise InvalidArgumentError(f"not alternating: generation {generation} vertex has one child")
        elif vertex.children:
            energy *= _lookup(table, vertex.type, vertex.free_outdegree())
    return energy


def canonical_encode(tree: LabelledTree) -> bytes:
    """Key that is equal for two trees exactly when they are isomorphic."""
    return tree.encoding

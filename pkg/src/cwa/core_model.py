"""Cores and the spaces built from them: iterated suspensions and cones.

Every attached cell of type ``A`` is a copy of ``C S^{n-1} A`` glued along
``S^{n-1} A``; this module supplies those two complexes and the inclusion
between them, with provenance back to the cells of ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .chains import ChainComplex, ChainMap, Matrix, check_complex, mapping_cone


@dataclass(frozen=True)
class DerivedCell:
    origin: str
    kind: str  # "suspended" or "coned"
    shift: int

    def degree(self, core: "CorePresentation") -> int:
        return core.chain.degree_of(self.origin) + self.shift + (self.kind == "coned")


@dataclass(frozen=True, eq=False)
class CorePresentation:
    """A core ``A`` given by its reduced cellular chain complex.

    ``provenance`` is filled in for cores derived from another one and maps
    each cell to its origin in ``root``.
    """

    name: str
    chain: ChainComplex
    provenance: Mapping[str, DerivedCell] = field(default_factory=dict)
    root: "CorePresentation | None" = None

    def __post_init__(self):
        check_complex(self.chain)

    @property
    def dim(self) -> int | None:
        """Top degree with cells; ``None`` for the empty core."""
        return self.chain.top if self.chain.top >= 0 else None

    @property
    def empty(self) -> bool:
        return self.chain.top < 0

    def cells(self, d: int) -> tuple[str, ...]:
        return self.chain.cells(d)

    def all_cells(self) -> list[str]:
        return self.chain.all_cells()

    def degree_of(self, cell: str) -> int:
        return self.chain.degree_of(cell)

    def boundary_of(self, cell: str) -> dict[str, int]:
        return self.chain.boundary_of(cell)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CorePresentation):
            return NotImplemented
        return self.name == other.name and self.chain == other.chain

    def __hash__(self):
        return hash((self.name, self.chain))

    def __repr__(self) -> str:
        return f"CorePresentation({self.name!r}, {self.chain!r})"


def sphere_core(m: int = 0, name: str | None = None) -> CorePresentation:
    """``S^m``: one cell in degree ``m``."""
    return CorePresentation(name or f"S{m}", ChainComplex({m: ["s"]}))


def empty_core(name: str = "pt") -> CorePresentation:
    return CorePresentation(name, ChainComplex.empty())


def _origin(a: CorePresentation, cell: str) -> tuple[CorePresentation, DerivedCell]:
    root = a.root or a
    prov = a.provenance.get(cell)
    if prov is None:
        return root, DerivedCell(cell, "suspended", 0)
    return root, prov


def suspend_core(a: CorePresentation, k: int = 1) -> CorePresentation:
    """``S^k A``: every cell moves up ``k`` degrees, matrices unchanged."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return a
    rename = {c: f"s{k}({c})" for c in a.all_cells()}
    prov = {}
    root = None
    for c, new in rename.items():
        root, o = _origin(a, c)
        prov[new] = DerivedCell(o.origin, o.kind, o.shift + k)
    chain = a.chain.renamed(rename).shifted(k)
    return CorePresentation(f"S^{k}{a.name}", chain, prov, root)


def cone_label(cell: str) -> str:
    return f"C({cell})"


def cone_core(a: CorePresentation) -> CorePresentation:
    """Reduced cone ``C A``: the cells of ``A`` plus one coned cell per cell,
    with ``d coned(e) = e - coned(de)`` (just ``e`` for 0-cells)."""
    chain = mapping_cone(ChainMap.identity(a.chain), label=cone_label)
    prov = {}
    root = a.root or a
    for c in a.all_cells():
        _, o = _origin(a, c)
        prov[c] = o
        if o.kind == "suspended":
            prov[cone_label(c)] = DerivedCell(o.origin, "coned", o.shift)
        else:
            # cone of an already-coned cell is tracked relative to ``a``
            prov[cone_label(c)] = DerivedCell(c, "coned", 0)
    return CorePresentation(f"C{a.name}", chain, prov, root)


def boundary_inclusion(a: CorePresentation, k: int) -> ChainMap:
    """``S^k A -> C S^k A``, the identity onto the non-coned cells."""
    s = suspend_core(a, k)
    c = cone_core(s)
    return ChainMap.from_images(s.chain, c.chain, {x: {x: 1} for x in s.all_cells()})


def core_direct_sum(a: CorePresentation, b: CorePresentation, name: str | None = None) -> CorePresentation:
    """Wedge of two cores (direct sum of reduced chains)."""
    from .chains import direct_sum

    s, _, _ = direct_sum(a.chain, b.chain)
    return CorePresentation(name or f"{a.name}v{b.name}", s)


def chain_from_matrices(cells: Mapping[int, list[str]], boundary: Mapping[int, list[list[int]]]) -> ChainComplex:
    """Convenience constructor from nested lists."""
    bd = {}
    for d, rows in boundary.items():
        bd[d] = Matrix(len(cells.get(d - 1, [])), len(cells.get(d, [])), rows)
    return ChainComplex(cells, bd)

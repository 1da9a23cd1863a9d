"""CW(A)-presentations and the constructions that act on them.

A presentation is a finite list of attached A-cells.  An A-cell ``a`` of
A-dimension ``n`` contributes one chain cell ``(a, c)`` of degree
``deg(c) + n`` for every core cell ``c``.  For ``n >= 1`` its boundary is

    d(a, c) = g_a(c) - sum_c' dA[c', c] * (a, c'),

where ``g_a`` sends each core cell (read as a cell of the ``(n-1)``-fold
suspension of the core) to a chain on strictly earlier cells.  A-0-cells are
wedge summands, copies of the core with ``d(a, c) = (a, dA c)``.

Attaching data is kept sparse, keyed by chain cells, so constructions never
depend on a particular matrix basis; :func:`attach_map` materialises the
matrix form when needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .chains import ChainComplex, ChainMap, Violation, check_complex, validate_complex
from .core_model import CorePresentation, suspend_core

ChainCell = tuple[str, str]
Chain = dict[ChainCell, int]


class PresentationError(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(str(violation))
        self.violation = violation


def _freeze(attach: Mapping[str, Mapping[ChainCell, int]] | None):
    if not attach:
        return ()
    out = []
    for c in sorted(attach):
        img = tuple(sorted((tuple(k), int(v)) for k, v in attach[c].items() if v))
        if img:
            out.append((c, img))
    return tuple(out)


@dataclass(frozen=True)
class AttachedCell:
    """An A-cell.  ``attach`` maps core cells to chains on earlier cells;
    absent entries are zero, and A-0-cells carry no attaching data."""

    id: str
    a_dim: int
    layer: int
    attach: tuple = ()

    def __init__(self, id: str, a_dim: int, layer: int | None = None,
                 attach: Mapping[str, Mapping[ChainCell, int]] | tuple | None = None):
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "a_dim", a_dim)
        object.__setattr__(self, "layer", a_dim if layer is None else layer)
        if isinstance(attach, tuple):
            attach = {c: dict(img) for c, img in attach}
        object.__setattr__(self, "attach", _freeze(attach))

    def image(self, core_cell: str) -> Chain:
        for c, img in self.attach:
            if c == core_cell:
                return dict(img)
        return {}

    def images(self) -> dict[str, Chain]:
        return {c: dict(img) for c, img in self.attach}

    def support(self) -> set[str]:
        """Cells whose chain cells carry a nonzero attaching coefficient."""
        return {cell for _, img in self.attach for (cell, _), v in img if v}

    def replace(self, **kw) -> AttachedCell:
        args = dict(id=self.id, a_dim=self.a_dim, layer=self.layer, attach=self.images())
        args.update(kw)
        return AttachedCell(**args)


def _add(chain: Chain, key: ChainCell, k: int) -> None:
    if k:
        v = chain.get(key, 0) + k
        if v:
            chain[key] = v
        else:
            chain.pop(key, None)


@dataclass(frozen=True, eq=False)
class CwaPresentation:
    """Cells over a core, stored in canonical ``(layer, id)`` order.

    The presentation is *proper* (a CW(A)-structure) when every cell sits in
    the layer equal to its A-dimension; otherwise it is a generalized
    presentation whose layers may mix A-dimensions.
    """

    core: CorePresentation
    cells: tuple[AttachedCell, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(sorted(self.cells, key=lambda a: (a.layer, a.id))))

    @property
    def proper(self) -> bool:
        return all(a.layer == a.a_dim for a in self.cells)

    @property
    def layers(self) -> dict[int, tuple[AttachedCell, ...]]:
        out: dict[int, list[AttachedCell]] = {}
        for a in self.cells:
            out.setdefault(a.layer, []).append(a)
        return {k: tuple(v) for k, v in sorted(out.items())}

    def cell(self, cid: str) -> AttachedCell:
        idx = self._cache.get("index")
        if idx is None:
            idx = {a.id: a for a in self.cells}
            self._cache["index"] = idx
        return idx[cid]

    def ids(self) -> list[str]:
        return [a.id for a in self.cells]

    def __contains__(self, cid) -> bool:
        return any(a.id == cid for a in self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CwaPresentation):
            return NotImplemented
        return self.core.chain == other.core.chain and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self) -> str:
        return f"CwaPresentation(core={self.core.name!r}, cells={len(self.cells)})"

    def chain_cells(self, a: AttachedCell) -> list[ChainCell]:
        return [(a.id, c) for c in self.core.all_cells()]

    def chain_degree(self, key: ChainCell) -> int:
        return self.core.degree_of(key[1]) + self.cell(key[0]).a_dim

    def boundary_chain(self, key: ChainCell) -> Chain:
        """Boundary of one chain cell as a sparse chain."""
        a = self.cell(key[0])
        c = key[1]
        out: Chain = {}
        sign = 1 if a.a_dim == 0 else -1
        for c2, k in self.core.boundary_of(c).items():
            _add(out, (a.id, c2), sign * k)
        if a.a_dim >= 1:
            for t, k in a.image(c).items():
                _add(out, t, k)
        return out

    def with_cells(self, cells: Iterable[AttachedCell]) -> CwaPresentation:
        return CwaPresentation(self.core, tuple(cells))


def underlying_chain(x: CwaPresentation) -> ChainComplex:
    """Reduced cellular chains of ``x``; chain cells are ``(a_cell, core_cell)``."""
    cached = x._cache.get("chain")
    if cached is not None:
        return cached
    by_deg: dict[int, list[ChainCell]] = {}
    for a in x.cells:
        for c in x.core.all_cells():
            by_deg.setdefault(x.core.degree_of(c) + a.a_dim, []).append((a.id, c))
    top = max(by_deg, default=-1)
    cells = [by_deg.get(d, []) for d in range(top + 1)]
    pos = {key: (d, i) for d, cs in enumerate(cells) for i, key in enumerate(cs)}
    from .chains import Matrix

    bd = {}
    for d in range(1, top + 1):
        rows = [[0] * len(cells[d]) for _ in range(len(cells[d - 1]))]
        for j, key in enumerate(cells[d]):
            for t, k in x.boundary_chain(key).items():
                dt, i = pos.get(t, (None, None))
                if dt != d - 1:
                    raise PresentationError(Violation(
                        "bad-attach-degree", d - 1, detail=f"{key} hits {t}"))
                rows[i][j] += k
        bd[d] = Matrix(len(cells[d - 1]), len(cells[d]), rows)
    out = ChainComplex(cells, bd)
    x._cache["chain"] = out
    return out


def provenance(x: CwaPresentation) -> dict[ChainCell, tuple[str, str]]:
    """Chain cell -> (A-cell, core cell).  Chain cells are named by that pair."""
    return {key: key for key in underlying_chain(x).all_cells()}


def validate(x: CwaPresentation) -> Violation | None:
    """``None`` when ``x`` is a valid presentation, else the first violation.

    Kinds: ``duplicate-id``, ``bad-layering``, ``unknown-reference``,
    ``forward-reference``, ``bad-attach-degree``, ``non-commuting-attach``.
    """
    seen = set()
    for a in x.cells:
        if a.id in seen:
            return Violation("duplicate-id", detail=f"cell {a.id!r}")
        seen.add(a.id)
    for a in x.cells:
        if a.a_dim < 0 or a.layer < 0:
            return Violation("bad-layering", detail=f"cell {a.id!r} has dim {a.a_dim} layer {a.layer}")
        if a.a_dim == 0 and a.attach:
            return Violation("bad-layering", detail=f"A-0-cell {a.id!r} carries attaching data")
    layer = {a.id: a.layer for a in x.cells}
    core_cells = set(x.core.all_cells())
    for a in x.cells:
        for c, img in a.attach:
            if c not in core_cells:
                return Violation("unknown-reference", detail=f"{a.id!r} attaches core cell {c!r}")
            want = x.core.degree_of(c) + a.a_dim - 1
            for (b, c2), _ in img:
                if b not in layer or c2 not in core_cells:
                    return Violation("unknown-reference", detail=f"{a.id!r} references {(b, c2)!r}")
                if layer[b] >= a.layer:
                    return Violation("forward-reference", detail=f"{a.id!r} (layer {a.layer}) "
                                     f"references {b!r} (layer {layer[b]})")
                got = x.core.degree_of(c2) + x.cell(b).a_dim
                if got != want:
                    return Violation("bad-attach-degree", want,
                                     detail=f"{a.id!r}: image of {c!r} hits {(b, c2)!r} in degree {got}")
    for a in x.cells:
        if a.a_dim == 0:
            continue
        for c in x.core.all_cells():
            deg = x.core.degree_of(c) + a.a_dim - 1
            if deg < 1:
                continue
            lhs: Chain = {}
            for t, k in a.image(c).items():
                for t2, k2 in x.boundary_chain(t).items():
                    _add(lhs, t2, k * k2)
            rhs: Chain = {}
            for c2, k in x.core.boundary_of(c).items():
                for t, k2 in a.image(c2).items():
                    _add(rhs, t, k * k2)
            if lhs != rhs:
                bad = sorted(set(lhs) ^ set(rhs) | {t for t in lhs if lhs.get(t) != rhs.get(t)})
                return Violation("non-commuting-attach", deg,
                                 detail=f"cell {a.id!r}, core cell {c!r}, chain cell {bad[0]!r}")
    v = validate_complex(underlying_chain(x))
    if v is not None:
        return v
    return None


def check(x: CwaPresentation) -> CwaPresentation:
    v = validate(x)
    if v is not None:
        raise PresentationError(v)
    return x


def attach_map(x: CwaPresentation, cid: str) -> ChainMap:
    """The attaching map of ``cid`` as a ChainMap from the suspended core into
    the chains of the layers below it."""
    a = x.cell(cid)
    if a.a_dim == 0:
        raise ValueError(f"A-0-cell {cid!r} has no attaching map")
    s = suspend_core(x.core, a.a_dim - 1)
    prev = underlying_chain(layer_prefix(x, a.layer - 1))
    name = {c: s_c for c, s_c in zip(x.core.all_cells(), s.all_cells())}
    return ChainMap.from_images(s.chain, prev, {name[c]: a.image(c) for c in x.core.all_cells()})


def empty(core: CorePresentation) -> CwaPresentation:
    return CwaPresentation(core, ())


def layer_prefix(x: CwaPresentation, k: int) -> CwaPresentation:
    return x.with_cells(a for a in x.cells if a.layer <= k)


def skeleton(x: CwaPresentation, n: int) -> CwaPresentation:
    """Cells of A-dimension at most ``n``; ``n = -1`` gives the point."""
    if not x.proper:
        raise ValueError("skeleton requires a proper CW(A)-presentation")
    if n < -1:
        raise ValueError("skeleton index must be >= -1")
    return x.with_cells(a for a in x.cells if a.a_dim <= n)


def dimension(x: CwaPresentation) -> int:
    """Largest A-dimension, -1 for the empty presentation.  The value belongs
    to this structure, not to the underlying space."""
    if not x.proper:
        raise ValueError("dimension is defined for proper CW(A)-presentations")
    return max((a.a_dim for a in x.cells), default=-1)


def is_face_closed(x: CwaPresentation, cells: Iterable[str]) -> bool:
    keep = set(cells)
    return all(x.cell(c).support() <= keep for c in keep)


def subpresentation(x: CwaPresentation, cells: Iterable[str]) -> CwaPresentation:
    keep = set(cells)
    unknown = keep - set(x.ids())
    if unknown:
        raise ValueError(f"unknown cells {sorted(unknown)}")
    if not is_face_closed(x, keep):
        raise ValueError("cell set is not face-closed")
    return x.with_cells(a for a in x.cells if a.id in keep)


@dataclass(frozen=True)
class FacePoset:
    """``(face, cell)`` pairs: ``immediate`` from attaching support, ``relation``
    its transitive closure."""

    immediate: frozenset
    relation: frozenset

    def faces_of(self, cid: str) -> set[str]:
        return {f for f, c in self.relation if c == cid}

    def is_acyclic(self) -> bool:
        return all(f != c for f, c in self.relation)


def face_poset(x: CwaPresentation) -> FacePoset:
    """Immediate faces approximated by nonzero attaching coefficients; an
    incidence that cancels to zero is not seen."""
    imm = {(b, a.id) for a in x.cells for b in a.support()}
    faces = {a.id: {b for b, c in imm if c == a.id} for a in x.cells}
    closure: dict[str, set[str]] = {}
    for a in x.cells:  # canonical order puts faces first
        acc = set()
        for b in faces[a.id]:
            acc.add(b)
            acc |= closure.get(b, set())
        closure[a.id] = acc
    rel = {(b, a) for a, fs in closure.items() for b in fs}
    return FacePoset(frozenset(imm), frozenset(rel))


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def _rename_cells(cells: Iterable[AttachedCell], rename: Mapping[str, str]) -> list[AttachedCell]:
    out = []
    for a in cells:
        imgs = {c: {(rename.get(b, b), c2): k for (b, c2), k in img.items()}
                for c, img in a.images().items()}
        out.append(a.replace(id=rename.get(a.id, a.id), attach=imgs))
    return out


def _same_core(x: CwaPresentation, y: CwaPresentation) -> None:
    if x.core.chain != y.core.chain:
        raise ValueError(f"presentations have different cores ({x.core.name!r}, {y.core.name!r})")


def wedge(x: CwaPresentation, y: CwaPresentation) -> CwaPresentation:
    """``x v y``; cells of ``y`` are primed where their ids collide."""
    _same_core(x, y)
    taken = set(x.ids())
    rename = {b: _fresh(b, taken) for b in y.ids()}
    return x.with_cells(list(x.cells) + _rename_cells(y.cells, rename))


def _eps(a_dim: int, core: CorePresentation, c: str) -> int:
    # orientation twist between a cell's chains and the standard cone model
    return 1 if a_dim == 0 else (-1) ** core.degree_of(c)


def cone_cell_id(cid: str) -> str:
    return f"C{cid}"


def cone_names(x: CwaPresentation) -> dict[str, str]:
    """Id of the cone cell that :func:`cone` adds over each cell of ``x``."""
    taken = set(x.ids())
    return {a.id: _fresh(cone_cell_id(a.id), taken) for a in x.cells}


def cone(x: CwaPresentation) -> CwaPresentation:
    """Reduced cone ``C x``: the cells of ``x`` verbatim plus, for every
    A-(n-1)-cell, an A-n-cell whose attaching map is ``f u C g``."""
    if not x.proper:
        raise ValueError("cone requires a proper CW(A)-presentation")
    cname = cone_names(x)
    core = x.core
    new = []
    for a in x.cells:
        imgs = {}
        for c in core.all_cells():
            e = _eps(a.a_dim, core, c)
            img: Chain = {(a.id, c): e}
            for (b, c2), k in a.image(c).items():
                _add(img, (cname[b], c2), -e * k * _eps(x.cell(b).a_dim, core, c2))
            imgs[c] = img
        new.append(AttachedCell(cname[a.id], a.a_dim + 1, a.a_dim + 1, imgs))
    return x.with_cells(list(x.cells) + new)


def suspend(x: CwaPresentation) -> CwaPresentation:
    """Apply the suspension to every cell: A-dimensions and layers go up by
    one.  The result does not contain ``x`` as a subcomplex."""
    if not x.proper:
        raise ValueError("suspend requires a proper CW(A)-presentation")
    core = x.core
    out = []
    for a in x.cells:
        imgs = {}
        for c, img in a.images().items():
            imgs[c] = {(b, c2): k * _theta(x.cell(b).a_dim, core, c2) for (b, c2), k in img.items()}
        out.append(AttachedCell(a.id, a.a_dim + 1, a.layer + 1, imgs))
    return x.with_cells(out)


def _theta(a_dim: int, core: CorePresentation, c: str) -> int:
    # wedge summands flip orientation when suspended into genuine cells
    return (-1) ** core.degree_of(c) if a_dim == 0 else 1


def suspension_signs(x: CwaPresentation) -> dict[ChainCell, int]:
    """Signs ``s`` such that ``(a, c) -> s * (a, c)`` is a chain isomorphism
    from the shifted chains of ``x`` onto the chains of ``suspend(x)``."""
    return {(a.id, c): _theta(a.a_dim, x.core, c) for a in x.cells for c in x.core.all_cells()}


def paste(x: CwaPresentation, b: Iterable[str], f: ChainMap, y: CwaPresentation) -> CwaPresentation:
    """Pushout of ``y <-f- b -> x`` for a face-closed ``b`` in ``x``.

    ``f`` runs from the chains of the sub-presentation on ``b`` to the chains
    of ``y`` and must not raise layers.  The cells of ``y`` are kept verbatim;
    every other cell of ``x`` has the ``b``-part of its attaching map pushed
    through ``f``.
    """
    _same_core(x, y)
    b = set(b)
    sub = subpresentation(x, b)
    sc, yc = underlying_chain(sub), underlying_chain(y)
    if not (f.source.same_shape(sc) and f.source.all_cells() == sc.all_cells()):
        raise ValueError("map source is not the chain complex of the subcomplex")
    if not (f.target.same_shape(yc) and f.target.all_cells() == yc.all_cells()):
        raise ValueError("map target is not the chain complex of y")
    from .chains import validate_map

    v = validate_map(f)
    if v is not None:
        raise PresentationError(v)
    images = {key: f.image(key) for key in sc.all_cells()}
    for key, img in images.items():
        src_layer = x.cell(key[0]).layer
        for t in img:
            if y.cell(t[0]).layer > src_layer:
                raise ValueError(f"map is not cellular: {key} (layer {src_layer}) hits "
                                 f"{t} (layer {y.cell(t[0]).layer})")
    taken = set(y.ids())
    rename = {a.id: _fresh(a.id, taken) for a in x.cells if a.id not in b}
    new = []
    for a in x.cells:
        if a.id in b:
            continue
        imgs = {}
        for c, img in a.images().items():
            out: Chain = {}
            for key, k in img.items():
                if key[0] in b:
                    for t, k2 in images[key].items():
                        _add(out, t, k * k2)
                else:
                    _add(out, (rename[key[0]], key[1]), k)
            imgs[c] = out
        new.append(AttachedCell(rename[a.id], a.a_dim, a.layer, imgs))
    return y.with_cells(list(y.cells) + new)


def quotient(x: CwaPresentation, b: Iterable[str]) -> CwaPresentation:
    """``x / b``: paste along the map collapsing ``b`` to the base point."""
    b = set(b)
    sub = subpresentation(x, b)
    pt = empty(x.core)
    f = ChainMap.zero(underlying_chain(sub), underlying_chain(pt))
    return paste(x, b, f, pt)


def relabel_layers(x: CwaPresentation, layer_of: Mapping[str, int]) -> CwaPresentation:
    return x.with_cells(a.replace(layer=layer_of[a.id]) for a in x.cells)


def assert_valid_chain(x: CwaPresentation) -> ChainComplex:
    return check_complex(underlying_chain(x))

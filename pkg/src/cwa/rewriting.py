"""Rewriting a presentation: flattening, layer ordering and change of core.

Flattening replaces the core ``A`` by a core ``B`` over which ``A`` is
itself presented.  An A-n-cell of ``x`` is then a copy of the relative
complex (cone, base) of the ``(n-1)``-fold suspension of that presentation,
and its B-cells are the cone cells, glued along the attaching map of the
A-cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .chains import (
    ChainHomotopy,
    ChainMap,
    compose,
    homotopy_violation,
    validate_map,
)
from .complexes import (
    AttachedCell,
    Chain,
    ChainCell,
    CwaPresentation,
    PresentationError,
    _add,
    _fresh,
    check,
    cone,
    cone_names,
    relabel_layers,
    suspend,
    suspension_signs,
    underlying_chain,
    validate,
)
from .core_model import CorePresentation


class CoreMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class FlattenedComplex:
    """Output of :func:`flatten`.

    ``provenance`` sends each chain cell of the new presentation to the chain
    cell of ``x`` it came from and the sign of the identification; ``origin``
    records the (A-cell, cell of the core's presentation) behind each new
    cell, and ``pairs`` the (ambient layer, layer inside the cone) pair used
    for ordering.
    """

    presentation: CwaPresentation
    provenance: dict[ChainCell, tuple[ChainCell, int]]
    origin: dict[str, tuple[str, str]]
    pairs: dict[str, tuple[int, int]]
    source: CwaPresentation = field(repr=False)

    @property
    def classical(self) -> bool:
        """True when the new core is S^0, i.e. this is an ordinary CW structure."""
        core = self.presentation.core
        return core.chain.top == 0 and core.chain.rank(0) == 1

    def chain_isomorphism(self) -> ChainMap:
        """The signed bijection from the chains of ``x`` to the new chains."""
        images: dict[ChainCell, dict[ChainCell, int]] = {}
        for new, (old, sign) in self.provenance.items():
            images[old] = {new: sign}
        return ChainMap.from_images(underlying_chain(self.source),
                                    underlying_chain(self.presentation), images)


def default_identification(core: CorePresentation, a_as: CwaPresentation) -> dict[str, ChainCell]:
    """Match cells degree by degree in stored order."""
    target = underlying_chain(a_as)
    out = {}
    for d in range(max(core.chain.top, target.top) + 1):
        mine, theirs = core.cells(d), target.cells(d)
        if len(mine) != len(theirs):
            raise CoreMismatchError(f"core has {len(mine)} cells in degree {d}, "
                                    f"the presentation of it has {len(theirs)}")
        out.update(zip(mine, theirs))
    return out


def _check_identification(core: CorePresentation, a_as: CwaPresentation,
                          ident: Mapping[str, ChainCell]) -> None:
    target = underlying_chain(a_as)
    if sorted(map(repr, ident.values())) != sorted(map(repr, target.all_cells())) \
            or set(ident) != set(core.all_cells()):
        raise CoreMismatchError("identification is not a bijection of cells")
    for c in core.all_cells():
        if core.degree_of(c) != target.degree_of(ident[c]):
            raise CoreMismatchError(f"cell {c!r} changes degree under the identification")
        mine = {ident[c2]: k for c2, k in core.boundary_of(c).items()}
        if mine != target.boundary_of(ident[c]):
            raise CoreMismatchError(f"boundary of {c!r} differs from that of {ident[c]!r}")


def _sign(n: int, a_dim: int, deg: int) -> int:
    # suspension sign times the cone orientation twist, see ``suspension_signs``
    theta = (-1) ** deg if (a_dim == 0 and n >= 2) else 1
    eps = 1 if a_dim + n - 1 == 0 else (-1) ** deg
    return theta * eps


def flatten(x: CwaPresentation, a_as: CwaPresentation,
            identification: Mapping[str, ChainCell] | None = None) -> FlattenedComplex:
    """Present ``x`` over the core of ``a_as``.

    ``a_as`` must be a proper presentation whose chains match ``x.core``; by
    default cells are matched in stored order per degree.
    """
    if not a_as.proper:
        raise ValueError("the presentation of the core must be proper")
    check(a_as)
    ident = dict(identification) if identification is not None else \
        default_identification(x.core, a_as)
    _check_identification(x.core, a_as, ident)
    back = {v: k for k, v in ident.items()}
    b_core = a_as.core

    taken: set[str] = set()
    fid = {(a.id, g.id): _fresh(f"{a.id}.{g.id}", taken) for a in x.cells for g in a_as.cells}
    sign_of: dict[tuple[str, str], int] = {}  # (x cell, core cell) -> sign
    for a in x.cells:
        for c in x.core.all_cells():
            g, b = ident[c]
            if a.a_dim == 0:
                sign_of[(a.id, c)] = 1
            else:
                sign_of[(a.id, c)] = _sign(a.a_dim, a_as.cell(g).a_dim, b_core.degree_of(b))

    def push(chain: Chain, k: int, out: Chain) -> None:
        for (beta, c), k2 in chain.items():
            g, b = ident[c]
            _add(out, (fid[(beta, g)], b), k * k2 * sign_of[(beta, c)])

    susp: dict[int, tuple[CwaPresentation, dict[ChainCell, int]]] = {}

    def suspended(n: int):
        if n not in susp:
            s, theta = a_as, {key: 1 for key in underlying_chain(a_as).all_cells()}
            for _ in range(n - 1):
                signs = suspension_signs(s)
                theta = {key: theta[key] * signs[key] for key in theta}
                s = suspend(s)
            susp[n] = (s, theta)
        return susp[n]

    new: list[tuple[str, int, int, dict]] = []  # (id, a_dim, x layer, attach)
    origin, pairs = {}, {}
    for a in x.cells:
        n = a.a_dim
        if n == 0:
            for g in a_as.cells:
                imgs = {b: {(fid[(a.id, g2)], b2): k for (g2, b2), k in img.items()}
                        for b, img in g.images().items()}
                new.append((fid[(a.id, g.id)], g.a_dim, a.layer, imgs))
        else:
            s, theta = suspended(n)
            t = cone(s)
            cn = cone_names(s)
            uncone = {v: k for k, v in cn.items()}
            for g in a_as.cells:
                cell = t.cell(cn[g.id])
                imgs = {}
                for b, img in cell.images().items():
                    out: Chain = {}
                    for (d, b2), k in img.items():
                        if d in uncone:
                            _add(out, (fid[(a.id, uncone[d])], b2), k)
                        else:
                            c2 = back[(d, b2)]
                            push(a.image(c2), k * theta[(d, b2)], out)
                    imgs[b] = out
                new.append((fid[(a.id, g.id)], cell.a_dim, a.layer, imgs))
        for g in a_as.cells:
            origin[fid[(a.id, g.id)]] = (a.id, g.id)

    # each ambient layer gets a block of consecutive new layers
    base, offset = 0, {}
    for lay in sorted({a.layer for a in x.cells}):
        offset[lay] = base
        base += 1 + max((d for _, d, l, _ in new if l == lay), default=0)
    cells = []
    for nid, d, lay, imgs in new:
        cells.append(AttachedCell(nid, d, offset[lay] + d, imgs))
        pairs[nid] = (lay, d)
    out = CwaPresentation(b_core, tuple(cells))
    v = validate(out)
    if v is not None:
        raise PresentationError(v)

    prov = {}
    for a in x.cells:
        for c in x.core.all_cells():
            g, b = ident[c]
            prov[(fid[(a.id, g)], b)] = ((a.id, c), sign_of[(a.id, c)])
    return FlattenedComplex(out, prov, origin, pairs, x)


class CyclicSupportError(ValueError):
    def __init__(self, cycle: list):
        super().__init__("cyclic support: " + " -> ".join(map(str, cycle)))
        self.cycle = cycle


@dataclass(frozen=True)
class LayerOrder:
    """Cumulative layers ``J_1 <= J_2 <= ...``.

    ``level[e]`` is the first k with ``e`` in ``J_k``.  ``lex_violations``
    lists (face, cell) pairs whose ordering pairs fail to decrease, and is
    empty when no pairs were supplied.
    """

    layers: tuple[frozenset, ...]
    level: dict
    lex_violations: tuple = ()

    @property
    def covered(self) -> frozenset:
        return self.layers[-1] if self.layers else frozenset()

    @property
    def increments(self) -> list[frozenset]:
        out, prev = [], frozenset()
        for j in self.layers:
            out.append(j - prev)
            prev = j
        return out


def layer_order(supports: Mapping[Hashable, Iterable[Hashable]],
                pairs: Mapping[Hashable, tuple[int, int]] | None = None) -> LayerOrder:
    """Layer cells by support: ``J_1`` holds the cells with empty support and
    ``J_k`` those supported in ``J_{k-1}``.  Raises :class:`CyclicSupportError`
    if some cell is never reached."""
    sup = {e: frozenset(s) for e, s in supports.items()}
    for e, s in sup.items():
        unknown = s - sup.keys()
        if unknown:
            raise ValueError(f"cell {e!r} is supported on unknown cells {sorted(map(str, unknown))}")
    level: dict = {}
    layers: list[frozenset] = []
    reached: frozenset = frozenset()
    while True:
        nxt = reached | {e for e, s in sup.items() if e not in reached and s <= reached}
        if nxt == reached:
            break
        for e in nxt - reached:
            level[e] = len(layers) + 1
        layers.append(frozenset(nxt))
        reached = nxt
    if len(reached) < len(sup):
        raise CyclicSupportError(_find_cycle(sup, reached))
    bad = []
    if pairs is not None:
        for e in sorted(sup, key=repr):
            for f in sorted(sup[e], key=repr):
                if not tuple(pairs[f]) < tuple(pairs[e]):
                    bad.append((f, e))
    return LayerOrder(tuple(layers), level, tuple(bad))


def _find_cycle(sup: Mapping, reached: frozenset) -> list:
    # every unreached cell has an unreached support element, so walking from
    # any of them repeats
    start = min((e for e in sup if e not in reached), key=repr)
    path, seen = [start], {start: 0}
    while True:
        e = path[-1]
        f = min((f for f in sup[e] if f not in reached), key=repr)
        if f in seen:
            return path[seen[f]:] + [f]
        seen[f] = len(path)
        path.append(f)


def order_presentation(x: CwaPresentation,
                       pairs: Mapping[str, tuple[int, int]] | None = None) -> LayerOrder:
    return layer_order({a.id: a.support() for a in x.cells}, pairs)


def order_flattened(flat: FlattenedComplex) -> LayerOrder:
    return order_presentation(flat.presentation, flat.pairs)


def apply_layer_order(x: CwaPresentation, order: LayerOrder) -> CwaPresentation:
    """Re-layer ``x`` so that cell ``e`` sits in layer ``level[e]``."""
    return check(relabel_layers(x, order.level))


class CoreChangeError(ValueError):
    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


@dataclass(frozen=True)
class CoreChange:
    presentation: CwaPresentation
    phi: ChainMap
    psi: ChainMap | None = None


def _check_pair(x: CwaPresentation, alpha: ChainMap, beta: ChainMap) -> None:
    a = x.core.chain
    if not (alpha.source.same_shape(a) and alpha.source.all_cells() == a.all_cells()):
        raise CoreChangeError("alpha does not start at the core of x")
    if not (beta.target.same_shape(a) and beta.target.all_cells() == a.all_cells()):
        raise CoreChangeError("beta does not end at the core of x")
    b = alpha.target
    if not (beta.source.same_shape(b) and beta.source.all_cells() == b.all_cells()):
        raise CoreChangeError("beta does not start where alpha ends")
    for name, f in (("alpha", alpha), ("beta", beta)):
        v = validate_map(f)
        if v is not None:
            raise CoreChangeError(f"{name} is not a chain map: {v}", v.degree)


def _new_core(alpha: ChainMap, core: CorePresentation | None) -> CorePresentation:
    if core is None:
        return CorePresentation("B", alpha.target)
    if core.chain != alpha.target:
        raise CoreChangeError("alpha does not land in the given core")
    return core


def _rebuild(x: CwaPresentation, b_core: CorePresentation, alpha: ChainMap, beta: ChainMap,
             h: ChainHomotopy | None) -> tuple[CwaPresentation, ChainMap]:
    """Cells of ``x`` over the new core, and the comparison map ``phi``.

    ``phi(g, c) = (g, alpha c) + phi(attach_g(h c))`` on cells of positive
    A-dimension; the correction vanishes for a retract.
    """
    phi: dict[ChainCell, Chain] = {}

    def phi_chain(chain: Chain) -> Chain:
        out: Chain = {}
        for key, k in chain.items():
            for t, k2 in phi[key].items():
                _add(out, t, k * k2)
        return out

    cells = []
    for a in x.cells:
        imgs = {}
        if a.a_dim >= 1:
            for b in b_core.all_cells():
                src: Chain = {}
                for c, k in beta.image(b).items():
                    for t, k2 in a.image(c).items():
                        _add(src, t, k * k2)
                imgs[b] = phi_chain(src)
        cells.append(AttachedCell(a.id, a.a_dim, a.layer, imgs))
        for c in x.core.all_cells():
            img: Chain = {}
            for b, k in alpha.image(c).items():
                _add(img, (a.id, b), k)
            if a.a_dim >= 1 and h is not None:
                corr: Chain = {}
                for c2, k in h.image(c).items():
                    for t, k2 in a.image(c2).items():
                        _add(corr, t, k * k2)
                for t, k in phi_chain(corr).items():
                    _add(img, t, k)
            phi[(a.id, c)] = img
    y = check(CwaPresentation(b_core, tuple(cells)))
    return y, ChainMap.from_images(underlying_chain(x), underlying_chain(y), phi)


def change_core_retract(x: CwaPresentation, alpha: ChainMap, beta: ChainMap,
                        core: CorePresentation | None = None) -> CoreChange:
    """Rebuild ``x`` over ``B`` along a retraction ``beta alpha = id`` of cores.

    Returns ``y`` with the same cells, ``phi: C(x) -> C(y)`` and
    ``psi: C(y) -> C(x)`` with ``psi phi = id`` exactly.
    """
    _check_pair(x, alpha, beta)
    ba = compose(beta, alpha)
    if not ba.is_identity():
        for d in range(ba.top + 1):
            if ba.matrix(d) != ChainMap.identity(x.core.chain).matrix(d):
                raise CoreChangeError(f"beta alpha is not the identity in degree {d}", d)
    b_core = _new_core(alpha, core)
    y, phi = _rebuild(x, b_core, alpha, beta, None)
    psi_img = {}
    for a in x.cells:
        for b in b_core.all_cells():
            psi_img[(a.id, b)] = {(a.id, c): k for c, k in beta.image(b).items()}
    psi = ChainMap.from_images(underlying_chain(y), underlying_chain(x), psi_img)
    if not compose(psi, phi).is_identity():
        raise AssertionError("psi phi is not the identity")
    return CoreChange(y, phi, psi)


def change_core_equivalence(x: CwaPresentation, alpha: ChainMap, beta: ChainMap,
                            h_a: ChainHomotopy, h_b: ChainHomotopy,
                            core: CorePresentation | None = None) -> CoreChange:
    """Rebuild ``x`` over ``B`` along a chain homotopy equivalence of cores.

    ``h_a`` must satisfy ``id - beta alpha = d h_a + h_a d`` on ``A`` and
    ``h_b`` the same for ``alpha beta`` on ``B``; both are checked exactly.
    """
    _check_pair(x, alpha, beta)
    for name, h, f in (("h_a", h_a, compose(beta, alpha)), ("h_b", h_b, compose(alpha, beta))):
        v = homotopy_violation(h, ChainMap.identity(f.source), f)
        if v is not None:
            raise CoreChangeError(f"{name} does not witness the homotopy ({v})", v.degree)
    b_core = _new_core(alpha, core)
    y, phi = _rebuild(x, b_core, alpha, beta, h_a)
    return CoreChange(y, phi)

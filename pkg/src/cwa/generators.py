"""Seeded random cores, presentations and core-change data for testing.

Attaching maps are drawn as a few inclusions of earlier, freely attached
cells (which is how spheres and Moore spaces arise) plus a null-homotopic
term ``d h + h d``; both are chain maps by construction.  All stored entries
stay within ``[-bound, bound]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .chains import ChainComplex, ChainHomotopy, ChainMap, Matrix, direct_sum, integer_kernel
from .complexes import AttachedCell, Chain, CwaPresentation, _add, underlying_chain
from .core_model import CorePresentation, cone_core, cone_label, empty_core, sphere_core

BOUND = 3


def _rand_entry(rng: random.Random, bound: int, density: float) -> int:
    if rng.random() >= density:
        return 0
    return rng.choice([k for k in range(-bound, bound + 1) if k])


def random_chain_complex(rng: random.Random, n_cells: int, max_degree: int = 2,
                         bound: int = BOUND, prefix: str = "e") -> ChainComplex:
    """Random complex with ``d^2 = 0``; later columns are drawn from the kernel
    of the previous boundary so the relation holds exactly."""
    degrees = sorted(rng.randint(0, max_degree) for _ in range(n_cells))
    cells: dict[int, list[str]] = {}
    for i, d in enumerate(degrees):
        cells.setdefault(d, []).append(f"{prefix}{i}")
    top = max(cells, default=-1)
    bd: dict[int, Matrix] = {}
    for d in range(1, top + 1):
        rows, cols = len(cells.get(d - 1, [])), len(cells.get(d, []))
        if rows == 0 or cols == 0:
            continue
        prev = bd.get(d - 1)
        if prev is None:
            m = [[_rand_entry(rng, bound, 0.6) for _ in range(cols)] for _ in range(rows)]
        else:
            ker = integer_kernel(prev)
            m_cols = []
            for _ in range(cols):
                col = [0] * rows
                for _ in range(8):
                    trial = [0] * rows
                    for j in range(ker.ncols):
                        r = rng.randint(-2, 2)
                        for i in range(rows):
                            trial[i] += r * ker.rows[i][j]
                    if all(abs(v) <= bound for v in trial):
                        col = trial
                        break
                m_cols.append(col)
            m = [[m_cols[j][i] for j in range(cols)] for i in range(rows)]
        bd[d] = Matrix(rows, cols, m)
    return ChainComplex(cells, bd)


def random_core(rng: random.Random, max_cells: int = 4, max_degree: int = 2,
                bound: int = BOUND, name: str = "A", allow_empty: bool = False) -> CorePresentation:
    n = rng.randint(0 if allow_empty else 1, max_cells)
    return CorePresentation(name, random_chain_complex(rng, n, max_degree, bound))


def _inclusion_image(x: CwaPresentation, beta: AttachedCell, c: str) -> Chain:
    # suspended core cell -> chain cell of a freely attached cell
    if beta.a_dim == 0:
        return {(beta.id, c): 1}
    return {(beta.id, c): (-1) ** x.core.degree_of(c)}


def random_attach(rng: random.Random, prev: CwaPresentation, n: int,
                  bound: int = BOUND, tries: int = 10) -> dict[str, Chain]:
    """A chain map from the (n-1)-fold suspended core into ``prev``."""
    core = prev.core
    by_deg: dict[int, list] = {}
    for a in prev.cells:
        for c in core.all_cells():
            by_deg.setdefault(core.degree_of(c) + a.a_dim, []).append((a.id, c))
    free = [b for b in prev.cells if not b.attach and
            ((b.a_dim == 0 and n == 1) or (b.a_dim == n - 1 >= 1))]
    for _ in range(tries):
        g: dict[str, Chain] = {c: {} for c in core.all_cells()}
        for b in rng.sample(free, min(len(free), rng.randint(0, 2))):
            k = _rand_entry(rng, bound, 1.0)
            for c in core.all_cells():
                for t, v in _inclusion_image(prev, b, c).items():
                    _add(g[c], t, k * v)
        h: dict[str, Chain] = {}
        for c in core.all_cells():
            h[c] = {}
            for t in by_deg.get(core.degree_of(c) + n, []):
                _add(h[c], t, _rand_entry(rng, 1, 0.3))
        for c in core.all_cells():
            for t, k in h[c].items():
                for t2, k2 in prev.boundary_chain(t).items():
                    _add(g[c], t2, k * k2)
            for c2, k in core.boundary_of(c).items():
                for t, k2 in h[c2].items():
                    _add(g[c], t, k * k2)
        if all(abs(v) <= bound for img in g.values() for v in img.values()):
            return {c: img for c, img in g.items() if img}
    return {}


def random_presentation(rng: random.Random, core: CorePresentation, max_cells: int = 12,
                        max_dim: int = 3, proper: bool = True, bound: int = BOUND,
                        min_cells: int = 1, zero_prob: float = 0.3) -> CwaPresentation:
    """Random valid presentation.  With ``proper=False`` layers are drawn
    independently of A-dimensions."""
    n = rng.randint(min_cells, max_cells)
    if proper:
        shape = sorted((d, d) for d in (rng.randint(0, max_dim) for _ in range(n)))
    else:
        layer, shape = 0, []
        for _ in range(n):
            layer += rng.random() < 0.5
            shape.append((rng.randint(0, max_dim), layer))
    x = CwaPresentation(core, ())
    cells: list[AttachedCell] = []
    for i, (d, layer) in enumerate(shape):
        prev = x.with_cells(a for a in cells if a.layer < layer)
        attach = {}
        if d >= 1 and rng.random() >= zero_prob:
            attach = random_attach(rng, prev, d, bound)
        cells.append(AttachedCell(f"x{i}", d, layer, attach))
    return x.with_cells(cells)


def random_cw_s0(rng: random.Random, max_cells: int = 4, max_dim: int = 2) -> CwaPresentation:
    return random_presentation(rng, sphere_core(0), max_cells, max_dim)


def core_of(a_as: CwaPresentation, name: str = "A") -> CorePresentation:
    """The chains of ``a_as`` as a core, cells named ``cell`` or ``cell.core_cell``."""
    chain = underlying_chain(a_as)
    single = len(a_as.core.all_cells()) == 1
    return CorePresentation(name, chain.renamed({k: k[0] if single else f"{k[0]}.{k[1]}"
                                                 for k in chain.all_cells()}))


@dataclass(frozen=True)
class FlattenCase:
    x: CwaPresentation
    a_as: CwaPresentation


def random_flatten_case(rng: random.Random, base: CorePresentation | None = None,
                        max_cells: int = 8, proper: bool = True) -> FlattenCase:
    base = base or sphere_core(0)
    a_as = random_presentation(rng, base, 4 if base.chain.rank(0) == 1 and base.chain.top == 0 else 2,
                               max_dim=2)
    a = core_of(a_as)
    x = random_presentation(rng, a, max_cells, max_dim=2, proper=proper)
    return FlattenCase(x, a_as)


def _null_homotopic(rng: random.Random, src: ChainComplex, dst: ChainComplex) -> ChainMap:
    top = max(src.top, dst.top)
    h = {d: Matrix(dst.rank(d + 1), src.rank(d),
                   [[_rand_entry(rng, 1, 0.3) for _ in range(src.rank(d))]
                    for _ in range(dst.rank(d + 1))]) for d in range(top + 1)}
    mats = {}
    for d in range(top + 1):
        m = dst.boundary(d + 1) @ h[d] if d + 1 <= dst.top else Matrix.zeros(dst.rank(d), src.rank(d))
        if d >= 1:
            m = m + h[d - 1] @ src.boundary(d)
        mats[d] = m
    return ChainMap(src, dst, mats)


@dataclass(frozen=True)
class RetractCase:
    x: CwaPresentation
    core: CorePresentation
    alpha: ChainMap
    beta: ChainMap


def random_retract_case(rng: random.Random, max_cells: int = 8) -> RetractCase:
    """``B = A + D``, ``beta alpha = id``.  ``D`` is either a random complex or
    a copy of ``A`` mapped isomorphically."""
    a = random_core(rng, 3)
    copy = rng.random() < 0.5
    if copy:
        d = a.chain.renamed({c: f"d{c}" for c in a.all_cells()})
    else:
        d = random_chain_complex(rng, rng.randint(1, 3), prefix="d")
    b, i1, i2 = direct_sum(a.chain, d)
    p1 = _projection(b, a.chain, i1)
    p2 = _projection(b, d, i2)
    iso = ChainMap(a.chain, d, {k: Matrix.identity(a.chain.rank(k)) for k in range(a.chain.top + 1)}) \
        if copy else ChainMap.zero(a.chain, d)
    t = rng.randint(-3, 3)
    from .chains import compose

    if rng.random() < 0.5:
        k = _null_homotopic(rng, d, a.chain)
        if copy:
            k = k + _scale(_inverse_copy(iso), t)
        alpha = i1
        beta = p1 + compose(k, p2)
    else:
        m = _null_homotopic(rng, a.chain, d)
        if copy:
            m = m + _scale(iso, t)
        alpha = i1 + compose(i2, m)
        beta = p1
    core = CorePresentation("B", b)
    x = random_presentation(rng, a, max_cells, max_dim=2)
    return RetractCase(x, core, alpha, beta)


def _scale(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(f.source, f.target, {d: f.matrix(d).scale(k) for d in range(f.top + 1)})


def _inverse_copy(iso: ChainMap) -> ChainMap:
    return ChainMap(iso.target, iso.source, {d: iso.matrix(d).T for d in range(iso.top + 1)})


def _projection(total: ChainComplex, part: ChainComplex, inc: ChainMap) -> ChainMap:
    return ChainMap(total, part, {d: inc.matrix(d).T for d in range(total.top + 1)})


@dataclass(frozen=True)
class Expansion:
    core: CorePresentation
    inclusion: ChainMap
    retraction: ChainMap
    homotopy: ChainHomotopy  # on the expanded core, id - inclusion retraction


def elementary_expansion(rng: random.Random, a: CorePresentation, tag: str = "") -> Expansion:
    """Add ``u`` in degree k and ``w`` in degree k+1 with ``dw = u - c`` and
    ``du = dc`` for a random k-chain ``c``."""
    k = rng.randint(0, max(a.chain.top, 0) + 1)
    cs = a.cells(k)
    c = {e: rng.randint(-2, 2) for e in cs}
    u, w = f"u{tag}", f"w{tag}"
    cells = {d: list(a.cells(d)) for d in range(a.chain.top + 1)}
    cells.setdefault(k, []).append(u)
    cells.setdefault(k + 1, []).append(w)
    top = max(cells)
    bd = {}
    for d in range(1, top + 1):
        rows, cols = len(cells.get(d - 1, [])), len(cells.get(d, []))
        m = [[0] * cols for _ in range(rows)]
        for j, e in enumerate(cells.get(d, [])):
            if e == u:
                img: dict[str, int] = {}
                for e2, v in c.items():
                    for t, v2 in a.boundary_of(e2).items():
                        img[t] = img.get(t, 0) + v * v2
            elif e == w:
                img = {u: 1}
                for e2, v in c.items():
                    img[e2] = img.get(e2, 0) - v
            else:
                img = a.boundary_of(e)
            for i, t in enumerate(cells.get(d - 1, [])):
                m[i][j] = img.get(t, 0)
        bd[d] = Matrix(rows, cols, m)
    b = CorePresentation(a.name + "+", ChainComplex(cells, bd))
    inc = ChainMap.from_images(a.chain, b.chain, {e: {e: 1} for e in a.all_cells()})
    ret_img = {e: {e: 1} for e in a.all_cells()}
    ret_img[u] = {e: v for e, v in c.items() if v}
    ret_img[w] = {}
    ret = ChainMap.from_images(b.chain, a.chain, ret_img)
    hm = {}
    for d in range(top + 1):
        m = [[0] * b.chain.rank(d) for _ in range(b.chain.rank(d + 1))]
        if d == k:
            m[b.chain.position(w)][b.chain.position(u)] = 1
        hm[d] = Matrix(b.chain.rank(d + 1), b.chain.rank(d), m)
    return Expansion(b, inc, ret, ChainHomotopy(b.chain, b.chain, hm))


@dataclass(frozen=True)
class EquivalenceCase:
    x: CwaPresentation
    core: CorePresentation
    alpha: ChainMap
    beta: ChainMap
    h_a: ChainHomotopy
    h_b: ChainHomotopy


def random_equivalence_case(rng: random.Random, max_cells: int = 8) -> EquivalenceCase:
    """Expansion or collapse of the core, chosen at random."""
    a = random_core(rng, 3)
    e = elementary_expansion(rng, a)
    if rng.random() < 0.5:
        x = random_presentation(rng, a, max_cells, max_dim=2)
        return EquivalenceCase(x, e.core, e.inclusion, e.retraction,
                               ChainHomotopy.zero(a.chain), e.homotopy)
    x = random_presentation(rng, e.core, max_cells, max_dim=2)
    return EquivalenceCase(x, a, e.retraction, e.inclusion, e.homotopy, ChainHomotopy.zero(a.chain))


@dataclass(frozen=True)
class ContractibleCase:
    x: CwaPresentation
    contraction: ChainHomotopy


def random_contractible_case(rng: random.Random, max_cells: int = 8) -> ContractibleCase:
    """Presentation over the cone on a random core, with the contraction
    ``e -> C(e)`` of that cone."""
    a = random_core(rng, 2)
    ca = cone_core(a)
    hm = {}
    for d in range(ca.chain.top + 1):
        rows, cols = ca.chain.rank(d + 1), ca.chain.rank(d)
        m = [[0] * cols for _ in range(rows)]
        for j, e in enumerate(ca.cells(d)):
            if e in a.chain:
                m[ca.chain.position(cone_label(e))][j] = 1
        hm[d] = Matrix(rows, cols, m)
    x = random_presentation(rng, ca, max_cells, max_dim=2)
    return ContractibleCase(x, ChainHomotopy(ca.chain, ca.chain, hm))


def to_empty_core(case: ContractibleCase) -> tuple[CorePresentation, ChainMap, ChainMap]:
    pt = empty_core()
    a = case.x.core.chain
    return pt, ChainMap.zero(a, pt.chain), ChainMap.zero(pt.chain, a)

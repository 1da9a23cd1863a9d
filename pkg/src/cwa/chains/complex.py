"""Free graded integer chain complexes, chain maps and their homology.

All complexes here are *reduced*: the base point is never a cell, so a
wedge of spaces is the direct sum of their complexes and the point is the
complex with no cells at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .matrix import Matrix, block
from .snf import smith_normal_form

CellId = Hashable


class InvalidComplexError(ValueError):
    def __init__(self, violation: "Violation"):
        super().__init__(str(violation))
        self.violation = violation


@dataclass(frozen=True)
class Violation:
    """First failing invariant of a complex or map.

    ``entry`` is the (row, column) of the offending matrix entry when the
    failure is entry-level.
    """

    kind: str
    degree: int | None = None
    entry: tuple[int, int] | None = None
    detail: str = ""

    def __str__(self) -> str:
        parts = [self.kind]
        if self.degree is not None:
            parts.append(f"degree {self.degree}")
        if self.entry is not None:
            parts.append(f"entry {self.entry}")
        if self.detail:
            parts.append(self.detail)
        return ": ".join(parts[:1]) + (" (" + ", ".join(parts[1:]) + ")" if parts[1:] else "")


class ChainComplex:
    """Cells per degree plus integer boundary matrices.

    ``boundary(d)`` has rows indexed by the degree ``d-1`` cells and columns
    by the degree ``d`` cells, in the stored order.  Degrees are dense from
    0 to ``top``; missing matrices are zero of the recorded shape.
    """

    __slots__ = ("_cells", "_boundary", "_index")

    def __init__(self, cells: Mapping[int, Sequence[CellId]] | Sequence[Sequence[CellId]],
                 boundary: Mapping[int, Matrix] | None = None):
        if isinstance(cells, Mapping):
            top = max((d for d, cs in cells.items() if len(cs)), default=-1)
            if any(d < 0 for d in cells):
                raise ValueError("negative degree")
            dense = [tuple(cells.get(d, ())) for d in range(top + 1)]
        else:
            dense = [tuple(cs) for cs in cells]
            while dense and not dense[-1]:
                dense.pop()
        self._cells: tuple[tuple[CellId, ...], ...] = tuple(dense)
        bd = {}
        for d, m in (boundary or {}).items():
            if 1 <= d <= self.top:
                bd[d] = m
            elif not m.is_zero():
                bd[d] = m
        for d in range(1, self.top + 1):
            if d not in bd:
                bd[d] = Matrix.zeros(len(self._cells[d - 1]), len(self._cells[d]))
        self._boundary = bd
        self._index = {}
        for d, cs in enumerate(self._cells):
            for i, c in enumerate(cs):
                self._index.setdefault(c, (d, i))

    @classmethod
    def empty(cls) -> ChainComplex:
        return cls([])

    @property
    def top(self) -> int:
        """Largest degree carrying a cell, -1 for the empty complex."""
        return len(self._cells) - 1

    def cells(self, d: int) -> tuple[CellId, ...]:
        if 0 <= d < len(self._cells):
            return self._cells[d]
        return ()

    @property
    def by_degree(self) -> dict[int, tuple[CellId, ...]]:
        return {d: cs for d, cs in enumerate(self._cells)}

    def all_cells(self) -> list[CellId]:
        return [c for cs in self._cells for c in cs]

    def rank(self, d: int) -> int:
        return len(self.cells(d))

    def boundary(self, d: int) -> Matrix:
        if d in self._boundary:
            return self._boundary[d]
        return Matrix.zeros(self.rank(d - 1) if d >= 1 else 0, self.rank(d))

    @property
    def boundaries(self) -> dict[int, Matrix]:
        return dict(self._boundary)

    def degree_of(self, cell: CellId) -> int:
        return self._index[cell][0]

    def position(self, cell: CellId) -> int:
        return self._index[cell][1]

    def __contains__(self, cell) -> bool:
        return cell in self._index

    def boundary_of(self, cell: CellId) -> dict[CellId, int]:
        d, j = self._index[cell]
        if d == 0:
            return {}
        m = self.boundary(d)
        faces = self.cells(d - 1)
        return {faces[i]: m.rows[i][j] for i in range(m.nrows) if m.rows[i][j]}

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self._cells == other._cells and all(
            self.boundary(d) == other.boundary(d) for d in range(1, self.top + 1))

    def __hash__(self):
        return hash(self._cells)

    def __repr__(self) -> str:
        counts = ",".join(str(len(cs)) for cs in self._cells)
        return f"ChainComplex(ranks=[{counts}])"

    def same_shape(self, other: ChainComplex) -> bool:
        return [len(c) for c in self._cells] == [len(c) for c in other._cells]

    def renamed(self, mapping) -> ChainComplex:
        """Relabel cells through ``mapping`` (a dict or a callable)."""
        f = mapping if callable(mapping) else (lambda c: mapping.get(c, c))
        return ChainComplex([[f(c) for c in cs] for cs in self._cells], self._boundary)

    def shifted(self, k: int) -> ChainComplex:
        """Degree shift by ``k >= 0`` with matrices carried unchanged."""
        if k < 0:
            raise ValueError("shift must be non-negative")
        cells = [()] * k + list(self._cells)
        return ChainComplex(cells, {d + k: m for d, m in self._boundary.items()})


@dataclass(frozen=True)
class DegreeHomology:
    betti: int = 0
    torsion: tuple[int, ...] = ()

    @property
    def trivial(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.betti == 1:
            parts.append("Z")
        elif self.betti > 1:
            parts.append(f"Z^{self.betti}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, eq=False)
class HomologySummary:
    """Reduced integral homology per degree.

    Equality ignores degrees whose group is trivial, so summaries of
    complexes with different top degrees compare by content.
    """

    by_degree: Mapping[int, DegreeHomology] = field(default_factory=dict)

    def __getitem__(self, d: int) -> DegreeHomology:
        return self.by_degree.get(d, DegreeHomology())

    def betti(self, d: int) -> int:
        return self[d].betti

    def torsion(self, d: int) -> tuple[int, ...]:
        return self[d].torsion

    def nontrivial(self) -> dict[int, DegreeHomology]:
        return {d: h for d, h in sorted(self.by_degree.items()) if not h.trivial}

    @property
    def trivial(self) -> bool:
        return not self.nontrivial()

    @property
    def top(self) -> int:
        return max(self.by_degree, default=-1)

    def shifted(self, k: int) -> HomologySummary:
        return HomologySummary({d + k: h for d, h in self.by_degree.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomologySummary):
            return NotImplemented
        return self.nontrivial() == other.nontrivial()

    def __hash__(self):
        return hash(tuple(self.nontrivial().items()))

    def lines(self, max_degree: int | None = None) -> list[str]:
        top = self.top if max_degree is None else max_degree
        return [f"H~_{d} = {self[d]}" for d in range(top + 1)]

    def __str__(self) -> str:
        return "\n".join(self.lines()) or "H~ = 0"


class ChainMap:
    """Degree-0 map: ``matrix(d)`` has rows = target d-cells, cols = source d-cells."""

    __slots__ = ("source", "target", "_mats")

    def __init__(self, source: ChainComplex, target: ChainComplex,
                 by_degree: Mapping[int, Matrix] | None = None):
        self.source = source
        self.target = target
        top = max(source.top, target.top)
        mats = {}
        for d in range(top + 1):
            m = (by_degree or {}).get(d)
            mats[d] = m if m is not None else Matrix.zeros(target.rank(d), source.rank(d))
        for d, m in (by_degree or {}).items():
            if d not in mats and not m.is_zero():
                mats[d] = m
        self._mats = mats

    def matrix(self, d: int) -> Matrix:
        if d in self._mats:
            return self._mats[d]
        return Matrix.zeros(self.target.rank(d), self.source.rank(d))

    @property
    def by_degree(self) -> dict[int, Matrix]:
        return dict(self._mats)

    @property
    def top(self) -> int:
        return max(self.source.top, self.target.top)

    @classmethod
    def identity(cls, c: ChainComplex) -> ChainMap:
        return cls(c, c, {d: Matrix.identity(c.rank(d)) for d in range(c.top + 1)})

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> ChainMap:
        return cls(source, target)

    @classmethod
    def from_images(cls, source: ChainComplex, target: ChainComplex,
                    images: Mapping[CellId, Mapping[CellId, int]]) -> ChainMap:
        """Build from sparse images ``{source cell: {target cell: coeff}}``."""
        rows = {d: [[0] * source.rank(d) for _ in range(target.rank(d))]
                for d in range(max(source.top, target.top) + 1)}
        for s, img in images.items():
            d, j = source.degree_of(s), source.position(s)
            for t, k in img.items():
                if not k:
                    continue
                dt, i = target.degree_of(t), target.position(t)
                if dt != d:
                    raise ValueError(f"image of {s!r} (degree {d}) hits {t!r} in degree {dt}")
                rows[d][i][j] += k
        return cls(source, target, {d: Matrix(target.rank(d), source.rank(d), r)
                                    for d, r in rows.items()})

    def image(self, cell: CellId) -> dict[CellId, int]:
        d, j = self.source.degree_of(cell), self.source.position(cell)
        m = self.matrix(d)
        tc = self.target.cells(d)
        return {tc[i]: m.rows[i][j] for i in range(m.nrows) if m.rows[i][j]}

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        top = max(self.top, other.top)
        return all(self.matrix(d) == other.matrix(d) for d in range(top + 1))

    def __hash__(self):
        return hash(tuple(self.matrix(d) for d in range(self.top + 1)))

    def __add__(self, other: ChainMap) -> ChainMap:
        return ChainMap(self.source, self.target,
                        {d: self.matrix(d) + other.matrix(d) for d in range(self.top + 1)})

    def __sub__(self, other: ChainMap) -> ChainMap:
        return ChainMap(self.source, self.target,
                        {d: self.matrix(d) - other.matrix(d) for d in range(self.top + 1)})

    def __neg__(self) -> ChainMap:
        return ChainMap(self.source, self.target, {d: -m for d, m in self._mats.items()})

    def is_identity(self) -> bool:
        if not self.source.same_shape(self.target):
            return False
        return all(self.matrix(d) == Matrix.identity(self.source.rank(d))
                   for d in range(self.source.top + 1))

    def __repr__(self) -> str:
        return f"ChainMap({self.source!r} -> {self.target!r})"


def validate_complex(c: ChainComplex) -> Violation | None:
    """``None`` if ``c`` satisfies every invariant, else the first violation."""
    seen = set()
    for d in range(c.top + 1):
        for cell in c.cells(d):
            if cell in seen:
                return Violation("duplicate-cell", d, detail=f"cell {cell!r}")
            seen.add(cell)
    for d in range(1, c.top + 1):
        m = c.boundary(d)
        if m.shape != (c.rank(d - 1), c.rank(d)):
            return Violation("shape-mismatch", d,
                             detail=f"boundary is {m.nrows}x{m.ncols}, "
                                    f"cells give {c.rank(d - 1)}x{c.rank(d)}")
    for d, m in c.boundaries.items():
        if d > c.top and not m.is_zero():
            return Violation("shape-mismatch", d, detail="boundary above top degree")
    for d in range(2, c.top + 1):
        prod = c.boundary(d - 1) @ c.boundary(d)
        nz = prod.first_nonzero()
        if nz is not None:
            return Violation("boundary-squared-nonzero", d, nz,
                             detail=f"value {prod[nz]}")
    return None


def check_complex(c: ChainComplex) -> ChainComplex:
    v = validate_complex(c)
    if v is not None:
        raise InvalidComplexError(v)
    return c


def validate_map(f: ChainMap) -> Violation | None:
    for d in range(f.top + 1):
        m = f.matrix(d)
        if m.shape != (f.target.rank(d), f.source.rank(d)):
            return Violation("shape-mismatch", d,
                             detail=f"map is {m.nrows}x{m.ncols}, expected "
                                    f"{f.target.rank(d)}x{f.source.rank(d)}")
    for d in range(1, f.top + 1):
        lhs = f.target.boundary(d) @ f.matrix(d)
        rhs = f.matrix(d - 1) @ f.source.boundary(d)
        nz = (lhs - rhs).first_nonzero()
        if nz is not None:
            return Violation("non-commuting", d, nz)
    return None


def check_map(f: ChainMap) -> ChainMap:
    v = validate_map(f)
    if v is not None:
        raise InvalidComplexError(v)
    return f


def homology(c: ChainComplex, max_degree: int | None = None) -> HomologySummary:
    """Reduced homology: Betti numbers and torsion coefficients per degree."""
    check_complex(c)
    top = c.top if max_degree is None else max_degree
    forms = {d: smith_normal_form(c.boundary(d)) for d in range(1, min(c.top, top + 1) + 1)}
    out = {}
    for d in range(top + 1):
        rk_in = forms[d].rank if d in forms else 0
        nxt = forms.get(d + 1)
        rk_out = nxt.rank if nxt else 0
        torsion = tuple(t for t in nxt.factors if t > 1) if nxt else ()
        out[d] = DegreeHomology(c.rank(d) - rk_in - rk_out, torsion)
    return HomologySummary(out)


def _fresh(name, taken: set) -> CellId:
    while name in taken:
        name = f"{name}'"
    taken.add(name)
    return name


def mapping_cone(f: ChainMap, label=lambda s: f"cone({s})") -> ChainComplex:
    """Cone of ``f``: target d-cells followed by shifted source (d-1)-cells.

    A shifted source cell ``s`` has boundary ``f(s) - shift(ds)``.
    """
    check_map(f)
    src, tgt = f.source, f.target
    taken = set(tgt.all_cells())
    names = {s: _fresh(label(s), taken) for s in src.all_cells()}
    top = max(tgt.top, src.top + 1)
    cells = [list(tgt.cells(d)) + [names[s] for s in src.cells(d - 1)]
             for d in range(top + 1)]
    bd = {}
    for d in range(1, top + 1):
        t_d, t_d1 = tgt.rank(d), tgt.rank(d - 1)
        s_d1, s_d2 = src.rank(d - 1), src.rank(d - 2) if d >= 2 else 0
        bd[d] = block([
            [tgt.boundary(d), f.matrix(d - 1)],
            [Matrix.zeros(s_d2, t_d), -src.boundary(d - 1) if d >= 2
             else Matrix.zeros(0, s_d1)],
        ])
        assert bd[d].shape == (t_d1 + s_d2, t_d + s_d1)
    return check_complex(ChainComplex(cells, bd))


def compose(f: ChainMap, g: ChainMap) -> ChainMap:
    """``f o g``: apply ``g`` first."""
    if not g.target.same_shape(f.source):
        raise ValueError("maps are not composable")
    top = max(g.source.top, f.target.top)
    return ChainMap(g.source, f.target, {d: f.matrix(d) @ g.matrix(d) for d in range(top + 1)})


def direct_sum(c1: ChainComplex, c2: ChainComplex) -> tuple[ChainComplex, ChainMap, ChainMap]:
    """Block-diagonal sum with its two injections; ``c2`` cells are renamed
    (primed) where they collide with ``c1``."""
    taken = set(c1.all_cells())
    rename = {c: _fresh(c, taken) for c in c2.all_cells()}
    c2r = c2.renamed(rename)
    top = max(c1.top, c2.top)
    cells = [list(c1.cells(d)) + list(c2r.cells(d)) for d in range(top + 1)]
    bd = {}
    for d in range(1, top + 1):
        bd[d] = block([
            [c1.boundary(d), Matrix.zeros(c1.rank(d - 1), c2.rank(d))],
            [Matrix.zeros(c2.rank(d - 1), c1.rank(d)), c2.boundary(d)],
        ])
    s = ChainComplex(cells, bd)
    i1 = ChainMap(c1, s, {d: block([[Matrix.identity(c1.rank(d))],
                                    [Matrix.zeros(c2.rank(d), c1.rank(d))]])
                          for d in range(top + 1)})
    i2 = ChainMap(c2, s, {d: block([[Matrix.zeros(c1.rank(d), c2.rank(d))],
                                    [Matrix.identity(c2.rank(d))]])
                          for d in range(top + 1)})
    return s, i1, i2


def is_subcomplex(c: ChainComplex, cells: Iterable[CellId]) -> bool:
    keep = set(cells)
    return all(set(c.boundary_of(x)) <= keep for x in keep)


def restrict(c: ChainComplex, cells: Iterable[CellId]) -> ChainComplex:
    """Sub-basis spanned by ``cells``, keeping the ambient order."""
    keep = set(cells)
    idx = [[i for i, x in enumerate(c.cells(d)) if x in keep] for d in range(c.top + 1)]
    out_cells = [[c.cells(d)[i] for i in idx[d]] for d in range(c.top + 1)]
    bd = {d: c.boundary(d).submatrix(idx[d - 1], idx[d]) for d in range(1, c.top + 1)}
    return ChainComplex(out_cells, bd)


def quotient_complex(c: ChainComplex, sub: Iterable[CellId]) -> ChainComplex:
    """``c`` modulo the subcomplex spanned by ``sub``."""
    sub = set(sub)
    if not is_subcomplex(c, sub):
        raise ValueError("cells do not span a subcomplex")
    return restrict(c, [x for x in c.all_cells() if x not in sub])


def inclusion(sub: ChainComplex, ambient: ChainComplex) -> ChainMap:
    """Identity onto the cells of ``sub`` inside ``ambient`` (matched by id)."""
    return ChainMap.from_images(sub, ambient, {x: {x: 1} for x in sub.all_cells()})


def euler_characteristic(c: ChainComplex) -> int:
    """Alternating cell count."""
    return sum((-1) ** d * c.rank(d) for d in range(c.top + 1))


class ChainHomotopy:
    """Degree +1 map: ``matrix(d)`` sends source d-cells to target (d+1)-cells."""

    __slots__ = ("source", "target", "_mats")

    def __init__(self, source: ChainComplex, target: ChainComplex,
                 by_degree: Mapping[int, Matrix] | None = None):
        self.source = source
        self.target = target
        self._mats = dict(by_degree or {})

    def matrix(self, d: int) -> Matrix:
        m = self._mats.get(d)
        if m is None:
            return Matrix.zeros(self.target.rank(d + 1), self.source.rank(d))
        return m

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex | None = None) -> ChainHomotopy:
        return cls(source, source if target is None else target)

    def image(self, cell: CellId) -> dict[CellId, int]:
        d, j = self.source.degree_of(cell), self.source.position(cell)
        m = self.matrix(d)
        tc = self.target.cells(d + 1)
        return {tc[i]: m.rows[i][j] for i in range(m.nrows) if m.rows[i][j]}


def homotopy_violation(h: ChainHomotopy, f: ChainMap, g: ChainMap) -> Violation | None:
    """``None`` when ``f - g = d h + h d`` holds exactly in every degree."""
    top = max(f.top, g.top, h.source.top, h.target.top)
    for d in range(top + 1):
        m = h.matrix(d)
        if m.shape != (h.target.rank(d + 1), h.source.rank(d)):
            return Violation("shape-mismatch", d, detail="homotopy matrix")
        lhs = f.matrix(d) - g.matrix(d)
        rhs = h.target.boundary(d + 1) @ m
        if d >= 1:
            rhs = rhs + h.matrix(d - 1) @ h.source.boundary(d)
        nz = (lhs - rhs).first_nonzero()
        if nz is not None:
            return Violation("homotopy-equation", d, nz)
    return None

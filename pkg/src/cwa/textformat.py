"""Line-oriented text format for cores, presentations, maps and homotopies.

::

    # reduced chains of S^0: one cell in degree 0
    [core S0]
    cell s dim=0

    [complex rp2 core=S0]
    cell e dim=1 layer=1
    cell f dim=2 layer=2
    attach f deg 1: 1 x 1
      2

    [map f from=x[a,b] to=y]
    deg 0: 1 x 2
      1 -1

    [homotopy h on=A]
    deg 0: 1 x 1
      1

In a core, ``deg d: r x c`` is the boundary from degree ``d`` to ``d-1``.
For a complex, ``attach <cell> deg d`` gives the attaching map in chain
degree ``d``: columns are the core cells of degree ``d - n + 1`` and rows
are the degree-``d`` chain cells of the layers below the cell, both in
stored order.  Map and homotopy matrices have rows indexed by target cells.
Zero matrices may be omitted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .chains import ChainComplex, ChainHomotopy, ChainMap, Matrix, Violation, validate_complex, validate_map
from .complexes import (
    AttachedCell,
    CwaPresentation,
    is_face_closed,
    layer_prefix,
    subpresentation,
    underlying_chain,
    validate,
)
from .core_model import CorePresentation


class FormatError(ValueError):
    """Syntax error at a 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line, self.col, self.message = line, col, message


class DocumentError(ValueError):
    """A well-formed document that does not make sense: ``name`` is the
    offending name, ``line`` the section or row it came from."""

    def __init__(self, message: str, name: str, line: int | None = None):
        prefix = f"{line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.name, self.line = name, line


class DanglingReferenceError(DocumentError):
    """A name that does not resolve."""


@dataclass(frozen=True)
class Ref:
    """A complex or core by name, optionally restricted to some cells."""

    name: str
    cells: tuple[str, ...] | None = None

    def __str__(self) -> str:
        if self.cells is None:
            return self.name
        return f"{self.name}[{','.join(self.cells)}]"


@dataclass(frozen=True, eq=False)
class MapEntry:
    source: Ref
    target: Ref
    map: ChainMap

    def __eq__(self, other):
        return (isinstance(other, MapEntry) and self.source == other.source
                and self.target == other.target and self.map == other.map)


@dataclass(frozen=True, eq=False)
class HomotopyEntry:
    on: Ref
    target: Ref
    homotopy: ChainHomotopy

    def __eq__(self, other):
        if not isinstance(other, HomotopyEntry) or (self.on, self.target) != (other.on, other.target):
            return False
        top = max(self.homotopy.source.top, other.homotopy.source.top) + 1
        return all(self.homotopy.matrix(d) == other.homotopy.matrix(d) for d in range(top + 1))


@dataclass
class DocumentModel:
    cores: dict[str, CorePresentation] = field(default_factory=dict)
    complexes: dict[str, CwaPresentation] = field(default_factory=dict)
    maps: dict[str, MapEntry] = field(default_factory=dict)
    homotopies: dict[str, HomotopyEntry] = field(default_factory=dict)

    def names(self) -> list[str]:
        return [*self.cores, *self.complexes, *self.maps, *self.homotopies]

    def chain(self, ref: Ref) -> ChainComplex:
        if ref.name in self.cores:
            if ref.cells is not None:
                raise DocumentError(f"core {ref.name!r} cannot be restricted", ref.name)
            return self.cores[ref.name].chain
        if ref.name in self.complexes:
            x = self.complexes[ref.name]
            if ref.cells is not None:
                unknown = [c for c in ref.cells if c not in x]
                if unknown:
                    raise DanglingReferenceError(f"unknown cell {unknown[0]!r} of {ref.name!r}", unknown[0])
                if not is_face_closed(x, ref.cells):
                    raise DocumentError(f"cells {list(ref.cells)} of {ref.name!r} are not face-closed",
                                        ref.name)
                x = subpresentation(x, ref.cells)
            return underlying_chain(x)
        raise DanglingReferenceError(f"unknown complex or core {ref.name!r}", ref.name)

    def merged(self, other: DocumentModel) -> DocumentModel:
        """Union of two documents; equal cores may repeat, other names may not."""
        out = DocumentModel(dict(self.cores), dict(self.complexes), dict(self.maps), dict(self.homotopies))
        for name, c in other.cores.items():
            if name in out.cores and out.cores[name] != c:
                raise DocumentError(f"core {name!r} is defined differently in two documents", name)
            out.cores[name] = c
        for attr in ("complexes", "maps", "homotopies"):
            mine = getattr(out, attr)
            for name, v in getattr(other, attr).items():
                if name in out.names():
                    raise DocumentError(f"name {name!r} is defined twice", name)
                mine[name] = v
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, DocumentModel):
            return NotImplemented
        return (self.cores == other.cores
                and self.maps == other.maps and self.homotopies == other.homotopies
                and list(self.complexes) == list(other.complexes)
                and all(self.complexes[k] == other.complexes[k]
                        and self.complexes[k].core.name == other.complexes[k].core.name
                        for k in self.complexes))


_HEADER = re.compile(r"\[(\w+)\s+([^\s\[\]]+)((?:\s+[^\s=]+=\S+)*)\s*\]\s*$")
_NAME = re.compile(r"[^\s\[\],=:#]+$")
_INT = re.compile(r"[+-]?\d+$")
_REF = re.compile(r"([^\s\[\],=:#]+)(?:\[([^\]]*)\])?$")


def _tokens(text: str):
    for m in re.finditer(r"\S+", text):
        yield m.group(0), m.start() + 1


class _Pending:
    def __init__(self, rows: int, cols: int, line: int, store):
        self.rows, self.cols, self.line, self.store = rows, cols, line, store
        self.values: list[int] = []

    @property
    def done(self) -> bool:
        return len(self.values) >= self.rows * self.cols

    def finish(self):
        v = self.values
        self.store(Matrix(self.rows, self.cols, [v[i * self.cols:(i + 1) * self.cols] for i in range(self.rows)]))


@dataclass
class _Section:
    kind: str
    name: str
    attrs: dict[str, str]
    line: int
    cells: list[tuple[str, int, int | None, int]] = field(default_factory=list)  # id, dim, layer, line
    mats: dict[int, Matrix] = field(default_factory=dict)
    attach: list[tuple[str, int, Matrix, int]] = field(default_factory=list)


_ALLOWED = {"core": set(), "complex": {"core"}, "map": {"from", "to"}, "homotopy": {"on", "to"}}
_REQUIRED = {"core": set(), "complex": {"core"}, "map": {"from", "to"}, "homotopy": {"on"}}


def _scan(text: str) -> list[_Section]:
    sections: list[_Section] = []
    pending: _Pending | None = None
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if pending is not None and not pending.done:
            for tok, col in _tokens(body):
                if not _INT.match(tok):
                    raise FormatError(f"expected an integer matrix entry, got {tok!r}", ln, col)
                if pending.done:
                    raise FormatError("too many matrix entries", ln, col)
                pending.values.append(int(tok))
            if pending.done:
                pending.finish()
                pending = None
            continue
        stripped = body.strip()
        col0 = len(body) - len(body.lstrip()) + 1
        if stripped.startswith("["):
            m = _HEADER.match(stripped)
            if not m:
                raise FormatError("malformed section header", ln, col0)
            kind, name, rest = m.group(1), m.group(2), m.group(3)
            if kind not in _ALLOWED:
                raise FormatError(f"unknown section kind {kind!r}", ln, col0 + 1)
            attrs = {}
            for tok, col in _tokens(rest):
                key, _, val = tok.partition("=")
                if key not in _ALLOWED[kind]:
                    raise FormatError(f"unknown attribute {key!r} for {kind}", ln, col0 + m.start(3) + col - 1)
                attrs[key] = val
            missing = _REQUIRED[kind] - attrs.keys()
            if missing:
                raise FormatError(f"{kind} section needs {sorted(missing)[0]}=", ln, col0)
            sections.append(_Section(kind, name, attrs, ln))
            continue
        if not sections:
            raise FormatError("content before the first section", ln, col0)
        sec = sections[-1]
        toks = list(_tokens(body))
        head = toks[0][0]
        if head == "cell":
            pending = None
            sec.cells.append(_parse_cell(sec, toks, ln))
        elif head in ("deg", "attach"):
            pending = _parse_matrix_header(sec, toks, ln)
            if pending.done:
                pending.finish()
                pending = None
        else:
            raise FormatError(f"unexpected {head!r}", ln, toks[0][1])
    if pending is not None and not pending.done:
        raise FormatError(f"matrix needs {pending.rows * pending.cols} entries, "
                          f"got {len(pending.values)}", pending.line, 1)
    return sections


def _parse_cell(sec: _Section, toks, ln: int):
    if sec.kind not in ("core", "complex"):
        raise FormatError(f"cells are not allowed in a {sec.kind} section", ln, toks[0][1])
    if len(toks) < 3:
        raise FormatError("expected 'cell <id> dim=<n>'", ln, toks[0][1])
    cid, col = toks[1]
    if not _NAME.match(cid):
        raise FormatError(f"bad cell id {cid!r}", ln, col)
    dim = layer = None
    for tok, col in toks[2:]:
        key, _, val = tok.partition("=")
        if key not in ("dim", "layer") or (key == "layer" and sec.kind == "core"):
            raise FormatError(f"unexpected {tok!r}", ln, col)
        if not _INT.match(val):
            raise FormatError(f"{key} must be an integer", ln, col + len(key) + 1)
        if key == "dim":
            dim = int(val)
        else:
            layer = int(val)
    if dim is None:
        raise FormatError("cell needs dim=", ln, toks[0][1])
    return (cid, dim, layer, ln)


def _parse_matrix_header(sec: _Section, toks, ln: int) -> _Pending:
    words = [t for t, _ in toks]
    cols = [c for _, c in toks]
    target = None
    if words[0] == "attach":
        if sec.kind != "complex":
            raise FormatError("attach rows belong in a complex section", ln, cols[0])
        if len(words) < 2:
            raise FormatError("attach needs a cell id", ln, cols[0])
        target = words[1]
        words, cols = words[2:], cols[2:]
    elif sec.kind == "complex":
        raise FormatError("use 'attach <cell> deg ...' in a complex section", ln, cols[0])
    if len(words) != 5 or words[0] != "deg" or not words[1].endswith(":") or words[3] != "x":
        raise FormatError("expected 'deg <d>: <rows> x <cols>'", ln, cols[0] if cols else 1)
    for i in (2, 4):
        if not _INT.match(words[i]) or int(words[i]) < 0:
            raise FormatError("matrix size must be a non-negative integer", ln, cols[i])
    dtok = words[1][:-1]
    if not _INT.match(dtok):
        raise FormatError("degree must be an integer", ln, cols[1])
    d, r, c = int(dtok), int(words[2]), int(words[4])
    if target is None:
        if d in sec.mats:
            raise FormatError(f"degree {d} given twice", ln, cols[0])
        store = lambda m, d=d: sec.mats.__setitem__(d, m)
    else:
        store = lambda m, d=d, t=target: sec.attach.append((t, d, m, ln))
    return _Pending(r, c, ln, store)


def _parse_ref(text: str, line: int) -> Ref:
    m = _REF.match(text)
    if not m:
        raise FormatError(f"bad reference {text!r}", line, 1)
    cells = None
    if m.group(2) is not None:
        cells = tuple(c for c in m.group(2).split(",") if c)
    return Ref(m.group(1), cells)


def parses(text: str) -> DocumentModel:
    """Parse text into a document.

    Syntax errors raise :class:`FormatError`, unresolved names
    :class:`DanglingReferenceError` and other inconsistencies
    :class:`DocumentError`.  Validity of complexes and maps is checked
    separately by :func:`validate_document`.
    """
    doc = DocumentModel()
    for sec in _scan(text):
        if sec.name in doc.names():
            raise DocumentError(f"name {sec.name!r} is defined twice", sec.name, sec.line)
        if sec.kind == "core":
            doc.cores[sec.name] = _build_core(sec)
        elif sec.kind == "complex":
            core = doc.cores.get(sec.attrs["core"])
            if core is None:
                raise DanglingReferenceError(f"complex {sec.name!r} refers to unknown core {sec.attrs['core']!r}",
                                             sec.attrs["core"], sec.line)
            doc.complexes[sec.name] = _build_complex(sec, core)
        elif sec.kind == "map":
            src, dst = _parse_ref(sec.attrs["from"], sec.line), _parse_ref(sec.attrs["to"], sec.line)
            s, t = _resolve(doc, src, sec.line), _resolve(doc, dst, sec.line)
            _check_sizes(sec, lambda d: (t.rank(d), s.rank(d)))
            doc.maps[sec.name] = MapEntry(src, dst, ChainMap(s, t, sec.mats))
        else:
            on = _parse_ref(sec.attrs["on"], sec.line)
            dst = _parse_ref(sec.attrs.get("to", sec.attrs["on"]), sec.line)
            s, t = _resolve(doc, on, sec.line), _resolve(doc, dst, sec.line)
            _check_sizes(sec, lambda d: (t.rank(d + 1), s.rank(d)))
            doc.homotopies[sec.name] = HomotopyEntry(on, dst, ChainHomotopy(s, t, sec.mats))
    return doc


def _resolve(doc: DocumentModel, ref: Ref, line: int) -> ChainComplex:
    try:
        return doc.chain(ref)
    except DocumentError as e:
        raise type(e)(str(e), e.name, line) from None


def _check_sizes(sec: _Section, want) -> None:
    for d, m in sec.mats.items():
        if m.shape != want(d):
            raise DocumentError(f"{sec.kind} {sec.name!r}: degree {d} matrix is "
                                f"{m.nrows} x {m.ncols}, expected {want(d)[0]} x {want(d)[1]}",
                                sec.name, sec.line)


class CoreError(DocumentError):
    def __init__(self, name: str, violation: Violation):
        super().__init__(f"core {name!r}: {violation}", name)
        self.violation = violation


def _build_core(sec: _Section) -> CorePresentation:
    cells: dict[int, list[str]] = {}
    for cid, dim, _, ln in sec.cells:
        if dim < 0:
            raise FormatError("core cells need a non-negative degree", ln, 1)
        cells.setdefault(dim, []).append(cid)
    top = max(cells, default=-1)
    for d, m in sec.mats.items():
        want = (len(cells.get(d - 1, [])), len(cells.get(d, [])))
        if d < 1 or d > top or m.shape != want:
            raise DocumentError(f"core {sec.name!r}: boundary in degree {d} should be "
                                f"{want[0]} x {want[1]}", sec.name, sec.line)
    chain = ChainComplex(cells, sec.mats)
    v = validate_complex(chain)
    if v is not None:
        raise CoreError(sec.name, v)
    return CorePresentation(sec.name, chain)


def _build_complex(sec: _Section, core: CorePresentation) -> CwaPresentation:
    info = {}
    for cid, dim, layer, ln in sec.cells:
        info[cid] = (dim, dim if layer is None else layer)
    imgs: dict[str, dict] = {cid: {} for cid in info}
    # rows of an attach matrix: degree-d chain cells of the lower layers
    skeleton = CwaPresentation(core, tuple(AttachedCell(c, d, l) for c, (d, l) in info.items()))
    for cid, d, m, ln in sec.attach:
        if cid not in info:
            raise DanglingReferenceError(f"attach for unknown cell {cid!r}", cid, ln)
        n, layer = info[cid]
        src = [c for c in core.all_cells() if core.degree_of(c) + n - 1 == d]
        rows = underlying_chain(layer_prefix(skeleton, layer - 1)).cells(d)
        if m.shape != (len(rows), len(src)):
            raise DocumentError(f"attach {cid} deg {d}: matrix is {m.nrows} x {m.ncols}, "
                                f"expected {len(rows)} x {len(src)}", cid, ln)
        for j, c in enumerate(src):
            img = imgs[cid].setdefault(c, {})
            for i, r in enumerate(rows):
                if m.rows[i][j]:
                    img[r] = img.get(r, 0) + m.rows[i][j]
    cells = [AttachedCell(cid, d, l, imgs[cid]) for cid, (d, l) in info.items()]
    return CwaPresentation(core, tuple(cells))


def parse(path: str | Path) -> DocumentModel:
    return parses(Path(path).read_text())


def validate_document(doc: DocumentModel) -> list[tuple[str, Violation]]:
    """Every (name, first violation) in the document."""
    out = []
    for name, x in doc.complexes.items():
        if x.core.name not in doc.cores:
            out.append((name, Violation("unknown-reference", detail=f"core {x.core.name!r}")))
            continue
        v = validate(x)
        if v is not None:
            out.append((name, v))
    for name, e in doc.maps.items():
        v = validate_map(e.map)
        if v is not None:
            out.append((name, v))
    return out


def _fmt_matrix(head: str, m: Matrix) -> list[str]:
    out = [f"{head}: {m.nrows} x {m.ncols}"]
    for row in m.rows:
        out.append("  " + " ".join(str(v) for v in row))
    return out


def serialize(doc: DocumentModel) -> str:
    """Canonical text: cores, complexes, maps, homotopies.  Complex cells
    keep their stored order, core cells go by degree; zero matrices are
    omitted."""
    lines: list[str] = []
    for name, core in doc.cores.items():
        lines.append(f"[core {name}]")
        for d in range(core.chain.top + 1):
            for c in core.cells(d):
                lines.append(f"cell {c} dim={d}")
        for d in range(1, core.chain.top + 1):
            m = core.chain.boundary(d)
            if m.nrows and m.ncols and not m.is_zero():
                lines += _fmt_matrix(f"deg {d}", m)
        lines.append("")
    for name, x in doc.complexes.items():
        lines.append(f"[complex {name} core={x.core.name}]")
        for a in x.cells:
            lines.append(f"cell {a.id} dim={a.a_dim} layer={a.layer}")
        core = x.core
        for a in x.cells:
            if not a.attach:
                continue
            prev = underlying_chain(layer_prefix(x, a.layer - 1))
            for d in range(core.chain.top + a.a_dim):
                src = [c for c in core.all_cells() if core.degree_of(c) + a.a_dim - 1 == d]
                rows = prev.cells(d)
                m = [[a.image(c).get(r, 0) for c in src] for r in rows]
                mat = Matrix(len(rows), len(src), m)
                if mat.nrows and mat.ncols and not mat.is_zero():
                    lines += _fmt_matrix(f"attach {a.id} deg {d}", mat)
        lines.append("")
    for name, e in doc.maps.items():
        lines.append(f"[map {name} from={e.source} to={e.target}]")
        for d in range(e.map.top + 1):
            m = e.map.matrix(d)
            if m.nrows and m.ncols and not m.is_zero():
                lines += _fmt_matrix(f"deg {d}", m)
        lines.append("")
    for name, e in doc.homotopies.items():
        to = "" if e.target == e.on else f" to={e.target}"
        lines.append(f"[homotopy {name} on={e.on}{to}]")
        h = e.homotopy
        for d in range(max(h.source.top, h.target.top) + 1):
            m = h.matrix(d)
            if m.nrows and m.ncols and not m.is_zero():
                lines += _fmt_matrix(f"deg {d}", m)
        lines.append("")
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"

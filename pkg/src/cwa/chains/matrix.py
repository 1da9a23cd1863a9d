"""Immutable dense integer matrices with exact (arbitrary-precision) entries."""

from __future__ import annotations

from typing import Iterable, Sequence


class Matrix:
    """A dense ``nrows x ncols`` matrix of Python ints.

    Shapes with a zero dimension are legal and keep their recorded shape, so
    a boundary between an empty degree and a populated one is still a
    well-formed ``0 x n`` or ``n x 0`` matrix.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[Sequence[int]] = ()):
        data = tuple(tuple(int(v) for v in row) for row in rows)
        if not data:
            data = tuple((0,) * ncols for _ in range(nrows))
        if len(data) != nrows or any(len(r) != ncols for r in data):
            raise ValueError(f"matrix data does not match shape {nrows}x{ncols}")
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, nrows: int, ncols: int, diag: Sequence[int]) -> Matrix:
        out = [[0] * ncols for _ in range(nrows)]
        for i, d in enumerate(diag):
            out[i][i] = d
        return cls(nrows, ncols, out)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> Matrix:
        return Matrix(self.ncols, self.nrows, list(zip(*self.rows)) if self.nrows else [])

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.rows for v in r)

    def first_nonzero(self) -> tuple[int, int] | None:
        for i, r in enumerate(self.rows):
            for j, v in enumerate(r):
                if v:
                    return (i, j)
        return None

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.T.rows if other.ncols else ()
        out = []
        for r in self.rows:
            nz = [(k, v) for k, v in enumerate(r) if v]
            out.append([sum(v * c[k] for k, v in nz) for c in cols])
        return Matrix(self.nrows, other.ncols, out)

    def _check_same_shape(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same_shape(other)
        return Matrix(self.nrows, self.ncols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same_shape(other)
        return Matrix(self.nrows, self.ncols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> Matrix:
        return Matrix(self.nrows, self.ncols, [[-a for a in r] for r in self.rows])

    def scale(self, k: int) -> Matrix:
        return Matrix(self.nrows, self.ncols, [[k * a for a in r] for r in self.rows])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}, {self.ncols}, {self.to_lists()!r})"

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> Matrix:
        return Matrix(len(row_idx), len(col_idx),
                      [[self.rows[i][j] for j in col_idx] for i in row_idx])

    def max_abs(self) -> int:
        return max((abs(v) for r in self.rows for v in r), default=0)


def block(blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a block matrix; every block row must share a height and every
    block column a width."""
    heights = [row[0].nrows for row in blocks]
    widths = [m.ncols for m in blocks[0]] if blocks else []
    for bi, row in enumerate(blocks):
        if len(row) != len(widths):
            raise ValueError("ragged block matrix")
        for bj, m in enumerate(row):
            if m.shape != (heights[bi], widths[bj]):
                raise ValueError(f"block ({bi},{bj}) has shape {m.shape}, "
                                 f"expected {(heights[bi], widths[bj])}")
    out = []
    for bi, row in enumerate(blocks):
        for i in range(heights[bi]):
            line: list[int] = []
            for m in row:
                line.extend(m.rows[i])
            out.append(line)
    return Matrix(sum(heights), sum(widths), out)


def format_matrix(m: Matrix) -> list[str]:
    """Row-major signed decimal text, one line per row."""
    return [" ".join(str(v) for v in r) for r in m.rows]


def parse_matrix(nrows: int, ncols: int, tokens: Sequence[str]) -> Matrix:
    if len(tokens) != nrows * ncols:
        raise ValueError(f"expected {nrows * ncols} integers, got {len(tokens)}")
    vals = [int(t) for t in tokens]
    return Matrix(nrows, ncols, [vals[i * ncols:(i + 1) * ncols] for i in range(nrows)])

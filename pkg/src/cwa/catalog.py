"""Standard small examples, mostly over the classical core S^0."""

from __future__ import annotations

from .chains import ChainComplex
from .complexes import AttachedCell, CwaPresentation, suspend
from .core_model import CorePresentation, sphere_core


def circle() -> CwaPresentation:
    return CwaPresentation(sphere_core(0), (AttachedCell("e", 1),))


def sphere(n: int) -> CwaPresentation:
    """``S^n`` for ``n >= 1`` as an iterated suspension of the circle."""
    if n < 1:
        raise ValueError("n must be at least 1")
    x = circle()
    for _ in range(n - 1):
        x = suspend(x)
    return x


def projective_plane() -> CwaPresentation:
    return CwaPresentation(sphere_core(0), (
        AttachedCell("e", 1),
        AttachedCell("f", 2, attach={"s": {("e", "s"): 2}}),
    ))


def torus() -> CwaPresentation:
    # the commutator attaching map is zero on chains
    return CwaPresentation(sphere_core(0), (
        AttachedCell("a", 1), AttachedCell("b", 1), AttachedCell("f", 2),
    ))


def klein_bottle() -> CwaPresentation:
    return CwaPresentation(sphere_core(0), (
        AttachedCell("a", 1), AttachedCell("b", 1),
        AttachedCell("f", 2, attach={"s": {("b", "s"): 2}}),
    ))


def wedge_of_circles(k: int) -> CwaPresentation:
    return CwaPresentation(sphere_core(0), tuple(AttachedCell(f"e{i}", 1) for i in range(k)))


def interval_core() -> CorePresentation:
    """Reduced chains of the interval: one 0-cell and one 1-cell bounding it."""
    return CorePresentation("D1", ChainComplex({0: ["p"], 1: ["i"]}, {1: _m([[1]])}))


def moore_core(m: int, k: int) -> CorePresentation:
    """Chains of the Moore space with ``H~_m = Z/k``."""
    return CorePresentation(f"M{k}_{m}", ChainComplex({m: ["u"], m + 1: ["w"]}, {m + 1: _m([[k]])}))


def disk_over_interval(n: int) -> CwaPresentation:
    """``D^n`` over the core ``D^1`` with one A-cell in each dimension
    ``0..n-1``; the ``r``-skeleton is ``D^(r+1)``."""
    core = interval_core()
    x = CwaPresentation(core, (AttachedCell("d0", 0),))
    for r in range(1, n):
        prev = (f"d{r - 1}", "i")
        # the top cell goes identically onto the previous disk, the 0-cell
        # onto its boundary
        top = {prev: 1}
        x = x.with_cells(x.cells + (AttachedCell(f"d{r}", r, attach={
            "i": top, "p": x.boundary_chain(prev)}),))
    return x


def _m(rows):
    from .chains import Matrix

    return Matrix.from_rows(rows)

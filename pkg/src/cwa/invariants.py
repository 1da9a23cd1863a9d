"""Euler characteristics and checkers for the consequences of the
constructions.  Checkers recompute everything from the inputs."""

from __future__ import annotations

from dataclasses import dataclass

from .chains import ChainMap, compose, euler_characteristic as chain_euler, homology, validate_map
from .complexes import CwaPresentation, cone, dimension, quotient, suspend, underlying_chain


def euler_characteristic(x: CwaPresentation) -> int:
    """Reduced Euler characteristic from the cell count: every A-n-cell adds
    ``(-1)^n`` copies of the core."""
    core = chain_euler(x.core.chain)
    return core * sum((-1) ** a.a_dim for a in x.cells)


def euler_by_chain_count(x: CwaPresentation) -> int:
    return chain_euler(underlying_chain(x))


def euler_by_homology(x: CwaPresentation) -> int:
    h = homology(underlying_chain(x))
    return sum((-1) ** d * dh.betti for d, dh in h.by_degree.items())


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    degree: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        out = f"{self.name}: {status}"
        if self.degree is not None:
            out += f" (degree {self.degree})"
        if self.detail:
            out += f" {self.detail}"
        return out


def _first_difference(h1, h2) -> int | None:
    for d in sorted(set(h1.by_degree) | set(h2.by_degree)):
        if h1[d] != h2[d]:
            return d
    return None


def check_cone_acyclic(x: CwaPresentation) -> Verdict:
    h = homology(underlying_chain(cone(x)))
    bad = sorted(h.nontrivial())
    if bad:
        return Verdict("cone-acyclic", False, bad[0], f"H~ = {h.nontrivial()[bad[0]]}")
    return Verdict("cone-acyclic", True)


def check_suspension_shift(x: CwaPresentation) -> Verdict:
    """``H~(S x)`` is ``H~(x)`` one degree up, and ``C x / x`` has the same
    homology as ``S x``."""
    hx = homology(underlying_chain(x))
    hs = homology(underlying_chain(suspend(x)))
    d = _first_difference(hs, hx.shifted(1))
    if d is not None:
        return Verdict("suspension-shift", False, d, f"{hs[d]} vs {hx.shifted(1)[d]}")
    hq = homology(underlying_chain(quotient(cone(x), x.ids())))
    d = _first_difference(hq, hs)
    if d is not None:
        return Verdict("suspension-shift", False, d, f"cone quotient gives {hq[d]}, suspension {hs[d]}")
    return Verdict("suspension-shift", True)


def check_retract_summand(x: CwaPresentation, y: CwaPresentation, phi: ChainMap,
                          psi: ChainMap) -> Verdict:
    for name, f in (("phi", phi), ("psi", psi)):
        v = validate_map(f)
        if v is not None:
            return Verdict("retract-summand", False, v.degree, f"{name} is not a chain map")
    pp = compose(psi, phi)
    top = max(pp.top, underlying_chain(x).top)
    ident = ChainMap.identity(underlying_chain(x))
    for d in range(top + 1):
        if pp.matrix(d) != ident.matrix(d):
            return Verdict("retract-summand", False, d, "psi phi is not the identity")
    hx = homology(underlying_chain(x))
    hy = homology(underlying_chain(y))
    for d in sorted(hx.by_degree):
        if hy.betti(d) < hx.betti(d):
            return Verdict("retract-summand", False, d, f"betti {hy.betti(d)} < {hx.betti(d)}")
    return Verdict("retract-summand", True)


def check_homology_equal(x: CwaPresentation, y: CwaPresentation, name: str = "homology-equal") -> Verdict:
    hx = homology(underlying_chain(x))
    hy = homology(underlying_chain(y))
    d = _first_difference(hx, hy)
    if d is not None:
        return Verdict(name, False, d, f"{hx[d]} vs {hy[d]}")
    return Verdict(name, True)


def touches_top_core_cell(x: CwaPresentation) -> bool:
    """Whether some top-dimensional cell attaches nontrivially on a core cell
    of top degree."""
    if not x.cells or x.core.empty:
        return False
    n, top = dimension(x), x.core.chain.top
    tops = set(x.core.cells(top))
    return any(a.a_dim == n and any(c in tops and img for c, img in a.attach) for a in x.cells)


def check_dimension_additivity(x: CwaPresentation, a_as: CwaPresentation) -> Verdict:
    """The flattened presentation has top cell dimension ``dim x + dim a_as``."""
    from .rewriting import flatten

    if not x.cells or not a_as.cells:
        return Verdict("dimension-additivity", True, detail="(empty, vacuous)")
    flat = flatten(x, a_as).presentation
    got = max(a.a_dim for a in flat.cells)
    want = dimension(x) + dimension(a_as)
    if got != want:
        return Verdict("dimension-additivity", False, got, f"expected {want}")
    return Verdict("dimension-additivity", True)


def check_contractible_core(x: CwaPresentation) -> Verdict:
    """An acyclic core forces the whole complex to be acyclic."""
    if not homology(x.core.chain).trivial:
        return Verdict("contractible-core", True, detail="(core not acyclic, vacuous)")
    h = homology(underlying_chain(x))
    bad = sorted(h.nontrivial())
    if bad:
        return Verdict("contractible-core", False, bad[0], str(h.nontrivial()[bad[0]]))
    return Verdict("contractible-core", True)


def check_euler(x: CwaPresentation) -> Verdict:
    counts = (euler_characteristic(x), euler_by_chain_count(x), euler_by_homology(x))
    if len(set(counts)) != 1:
        return Verdict("euler", False, detail=f"formula {counts[0]}, count {counts[1]}, homology {counts[2]}")
    return Verdict("euler", True)

import pytest

from cwa.chains import ChainComplex, DegreeHomology, InvalidComplexError, Matrix, check_map, homology
from cwa.core_model import (
    CorePresentation,
    DerivedCell,
    boundary_inclusion,
    chain_from_matrices,
    cone_core,
    core_direct_sum,
    empty_core,
    sphere_core,
    suspend_core,
)


def moore(k):
    return CorePresentation("M", chain_from_matrices({1: ["u"], 2: ["w"]}, {2: [[k]]}))


def test_sphere_and_empty():
    assert homology(sphere_core(3).chain).nontrivial() == {3: DegreeHomology(1)}
    assert empty_core().empty and empty_core().dim is None
    assert sphere_core(0).dim == 0


def test_invalid_core_rejected():
    with pytest.raises(InvalidComplexError):
        CorePresentation("bad", ChainComplex({0: ["a"], 1: ["b"], 2: ["c"]},
                                             {1: Matrix.from_rows([[1]]), 2: Matrix.from_rows([[1]])}))


def test_suspend_shifts_homology_and_tracks_origin():
    a = moore(3)
    s = suspend_core(suspend_core(a, 1), 2)
    assert homology(s.chain) == homology(a.chain).shifted(3)
    prov = {s.provenance[c] for c in s.all_cells()}
    assert prov == {DerivedCell("u", "suspended", 3), DerivedCell("w", "suspended", 3)}
    assert all(p.degree(a) == s.degree_of(c) for c, p in s.provenance.items())
    assert suspend_core(a, 0) is a
    with pytest.raises(ValueError):
        suspend_core(a, -1)


def test_cone_core_is_acyclic_with_provenance():
    for a in (sphere_core(0), sphere_core(2), moore(2), moore(4)):
        c = cone_core(a)
        assert homology(c.chain).trivial
        kinds = sorted(p.kind for p in c.provenance.values())
        assert kinds.count("coned") == len(a.all_cells())
        assert c.boundary_of("C(s)" if "s" in a.all_cells() else "C(u)")


def test_boundary_inclusion_is_chain_map():
    a = moore(5)
    for k in range(3):
        check_map(boundary_inclusion(a, k))


def test_direct_sum_of_cores():
    s = core_direct_sum(sphere_core(0), sphere_core(0))
    assert s.chain.cells(0) == ("s", "s'")
    assert homology(s.chain)[0].betti == 2

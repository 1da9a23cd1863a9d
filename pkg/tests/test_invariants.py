import random

from cwa.catalog import circle, disk_over_interval, moore_core, projective_plane, sphere, torus
from cwa.complexes import AttachedCell, CwaPresentation, cone, wedge
from cwa.core_model import sphere_core
from cwa.generators import random_contractible_case, random_core, random_flatten_case, random_presentation, \
    random_retract_case
from cwa.invariants import (
    Verdict,
    check_contractible_core,
    check_cone_acyclic,
    check_dimension_additivity,
    check_euler,
    check_homology_equal,
    check_retract_summand,
    check_suspension_shift,
    euler_by_chain_count,
    euler_by_homology,
    euler_characteristic,
    touches_top_core_cell,
)
from cwa.rewriting import change_core_retract


def test_euler_examples():
    assert euler_characteristic(circle()) == -1
    # a 0-cell with a 1-cell on it: 1 - 1
    two_cells = CwaPresentation(sphere_core(0), (
        AttachedCell("v", 0), AttachedCell("e", 1, attach={"s": {("v", "s"): 1}})))
    assert euler_characteristic(two_cells) == 0
    assert euler_characteristic(sphere(2)) == 1
    assert euler_characteristic(projective_plane()) == 0
    assert euler_characteristic(torus()) == -1


def test_euler_of_wedge_of_cores_is_additive():
    core = moore_core(1, 3)
    for k in range(4):
        x = CwaPresentation(core, tuple(AttachedCell(f"v{i}", 0) for i in range(k)))
        assert euler_characteristic(x) == k * euler_by_chain_count(CwaPresentation(core, (AttachedCell("v", 0),)))


def test_euler_three_ways_and_cone_zero():
    rng = random.Random(3)
    for _ in range(80):
        x = random_presentation(rng, random_core(rng), 10, proper=rng.random() < 0.7)
        f = euler_characteristic(x)
        assert f == euler_by_chain_count(x) == euler_by_homology(x)
        assert check_euler(x).passed
        if x.proper:
            assert euler_characteristic(cone(x)) == 0


def test_checkers_pass_on_constructions():
    rng = random.Random(5)
    for _ in range(30):
        x = random_presentation(rng, random_core(rng), 8)
        assert check_cone_acyclic(x)
        assert check_suspension_shift(x)
        case = random_retract_case(rng)
        res = change_core_retract(case.x, case.alpha, case.beta, case.core)
        assert check_retract_summand(case.x, res.presentation, res.phi, res.psi)
        fc = random_flatten_case(rng)
        assert check_dimension_additivity(fc.x, fc.a_as)
        assert check_contractible_core(random_contractible_case(rng).x)


def test_checkers_fail_with_degree():
    x = circle()
    y = sphere(2)
    v = check_homology_equal(x, y)
    assert not v and v.degree == 1
    # wrong psi: zero map cannot split phi
    res = change_core_retract(x, *(_id_pair()), sphere_core(0))
    zero = res.psi - res.psi
    v = check_retract_summand(x, res.presentation, res.phi, zero)
    assert not v and v.degree == 1 and "identity" in v.detail
    assert str(v).startswith("retract-summand: FAIL (degree 1)")


def _id_pair():
    from cwa.chains import ChainMap

    i = ChainMap.identity(sphere_core(0).chain)
    return i, i


def test_contractible_checker_vacuous_and_real():
    assert "vacuous" in check_contractible_core(circle()).detail
    d = disk_over_interval(3)
    assert check_contractible_core(d).passed and not check_contractible_core(d).detail


def test_touches_top_core_cell():
    core = moore_core(1, 2)
    free = CwaPresentation(core, (AttachedCell("b", 1),))
    assert not touches_top_core_cell(free)
    hit = wedge(free, CwaPresentation(core, ()))
    hit = hit.with_cells(hit.cells + (AttachedCell("g", 2, attach={"w": {("b", "w"): 2}, "u": {("b", "u"): -2}}),))
    assert touches_top_core_cell(hit)


def test_verdict_text():
    assert str(Verdict("x", True)) == "x: pass"
    assert bool(Verdict("x", False)) is False

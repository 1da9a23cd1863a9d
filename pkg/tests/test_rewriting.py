import random

import pytest

from cwa.catalog import circle, projective_plane, sphere, torus, wedge_of_circles
from cwa.chains import (
    ChainComplex,
    ChainHomotopy,
    ChainMap,
    DegreeHomology,
    Matrix,
    compose,
    homology,
    mapping_cone,
    validate_map,
)
from cwa.complexes import AttachedCell, CwaPresentation, face_poset, underlying_chain, validate
from cwa.core_model import CorePresentation, empty_core, sphere_core
from cwa.generators import (
    core_of,
    elementary_expansion,
    random_contractible_case,
    random_core,
    random_equivalence_case,
    random_flatten_case,
    random_presentation,
    random_retract_case,
    to_empty_core,
)
from cwa.rewriting import (
    CoreChangeError,
    CoreMismatchError,
    CyclicSupportError,
    apply_layer_order,
    change_core_equivalence,
    change_core_retract,
    flatten,
    layer_order,
    order_flattened,
    order_presentation,
)

S0 = sphere_core(0)


def H(x):
    return homology(underlying_chain(x))


def test_flatten_one_cell_over_circle():
    a = core_of(circle(), "S1")
    x = CwaPresentation(a, (AttachedCell("a", 1),))
    flat = flatten(x, circle())
    assert flat.classical
    assert [(c.id, c.a_dim) for c in flat.presentation.cells] == [("a.e", 2)]
    assert H(flat.presentation).nontrivial() == {2: DegreeHomology(1)}
    assert H(flat.presentation) == H(x)


@pytest.mark.parametrize("m, n", [(1, 1), (1, 3), (2, 2), (3, 1), (2, 0)])
def test_cell_over_sphere_is_one_classical_cell(m, n):
    a = core_of(sphere(m))
    x = CwaPresentation(a, (AttachedCell("a", n),))
    cells = flatten(x, sphere(m)).presentation.cells
    assert [c.a_dim for c in cells] == [m + n]


def test_flatten_over_s0_is_identity_rewrite():
    point = CwaPresentation(S0, (AttachedCell("v", 0),))
    rng = random.Random(0)
    for _ in range(30):
        x = random_presentation(rng, core_of(point), 8)
        flat = flatten(x, point).presentation
        rename = {f"{a.id}.v": a.id for a in x.cells}
        assert [(rename[c.id], c.a_dim) for c in flat.cells] == [(a.id, a.a_dim) for a in x.cells]
        for c in flat.cells:
            # the S^0 cell "s" plays the role of the core cell "v"
            imgs = {"v": {(rename[b], "v"): k for (b, _), k in img.items()}
                    for _, img in c.images().items()}
            assert imgs == {k: dict(img) for k, img in x.cell(rename[c.id]).images().items()}


def _is_signed_bijection(f: ChainMap) -> bool:
    for d in range(f.top + 1):
        m = f.matrix(d)
        if m.nrows != m.ncols:
            return False
        for row in m.rows:
            if sorted(map(abs, row)) != [0] * (m.ncols - 1) + [1]:
                return False
        for j in range(m.ncols):
            if sum(abs(m.rows[i][j]) for i in range(m.nrows)) != 1:
                return False
    return True


def test_flatten_random_pairs_chain_isomorphism():
    rng = random.Random(21)
    for i in range(80):
        base = S0 if i % 2 == 0 else random_core(rng, 2, name="B")
        case = random_flatten_case(rng, base, proper=rng.random() < 0.6)
        flat = flatten(case.x, case.a_as)
        assert validate(flat.presentation) is None
        iso = flat.chain_isomorphism()
        assert validate_map(iso) is None
        assert _is_signed_bijection(iso)
        assert H(flat.presentation) == H(case.x)
        assert flat.classical == (base.chain.top == 0 and base.chain.rank(0) == 1)


def test_flatten_with_explicit_identification():
    a_as = wedge_of_circles(2)
    a = core_of(a_as)  # cells e0, e1 in degree 1
    x = CwaPresentation(a, (AttachedCell("p", 1), AttachedCell("q", 2, attach={"e0": {("p", "e1"): 2}})))
    swapped = {"e0": ("e1", "s"), "e1": ("e0", "s")}
    flat = flatten(x, a_as, swapped)
    assert validate_map(flat.chain_isomorphism()) is None
    assert H(flat.presentation) == H(x)
    assert flat.provenance[("p.e1", "s")] == (("p", "e0"), 1)
    assert flat.presentation.cell("q.e1").image("s") == {("p.e0", "s"): 2}


def test_flatten_errors():
    x = CwaPresentation(core_of(torus()), (AttachedCell("a", 1),))
    with pytest.raises(CoreMismatchError):
        flatten(x, circle())
    gen = CwaPresentation(S0, (AttachedCell("e", 1, layer=2),))
    with pytest.raises(ValueError):
        flatten(CwaPresentation(core_of(circle()), ()), gen)
    bad = {"e": ("e", "s"), "f": ("f", "s")}
    with pytest.raises(CoreMismatchError):
        flatten(CwaPresentation(core_of(circle()), ()), circle(), bad)


def test_flatten_origin_covers_all_pairs():
    rng = random.Random(4)
    case = random_flatten_case(rng)
    flat = flatten(case.x, case.a_as)
    assert sorted(flat.origin.values()) == sorted((a.id, g.id) for a in case.x.cells for g in case.a_as.cells)


def test_layer_order_trivial_cases():
    order = layer_order({"a": [], "b": [], "c": []})
    assert order.layers == (frozenset("abc"),)
    chain = layer_order({"c1": [], "c2": ["c1"], "c3": ["c2"]})
    assert [sorted(j) for j in chain.increments] == [["c1"], ["c2"], ["c3"]]
    assert chain.level == {"c1": 1, "c2": 2, "c3": 3}


def test_layer_order_reports_cycle():
    with pytest.raises(CyclicSupportError) as err:
        layer_order({"a": [], "b": ["a", "d"], "c": ["b"], "d": ["c"]})
    cyc = err.value.cycle
    assert cyc[0] == cyc[-1] and set(cyc) == {"b", "c", "d"}
    with pytest.raises(ValueError):
        layer_order({"a": ["missing"]})


def test_layer_order_records_lex_violations():
    order = layer_order({"a": [], "b": ["a"]}, {"a": (1, 1), "b": (1, 0)})
    assert order.lex_violations == (("a", "b"),)


def _face_chains(x):
    faces = {a.id: a.support() for a in x.cells}
    stack = [[a.id] for a in x.cells]
    while stack:
        path = stack.pop()
        yield path
        for f in faces[path[-1]]:
            stack.append(path + [f])


def test_flatten_output_orders_with_decreasing_pairs():
    rng = random.Random(17)
    for _ in range(40):
        case = random_flatten_case(rng, proper=rng.random() < 0.5)
        flat = flatten(case.x, case.a_as)
        order = order_flattened(flat)
        assert order.covered == frozenset(flat.presentation.ids())
        assert order.lex_violations == ()
        for path in _face_chains(flat.presentation):
            pairs = [flat.pairs[c] for c in path]
            assert all(p > q for p, q in zip(pairs, pairs[1:]))
        relayered = apply_layer_order(flat.presentation, order)
        assert validate(relayered) is None
        for a in relayered.cells:
            assert all(relayered.cell(b).layer < a.layer for b in a.support())


def test_order_presentation_matches_face_poset():
    x = projective_plane()
    order = order_presentation(x)
    assert order.level == {"e": 1, "f": 2}
    assert face_poset(x).faces_of("f") == {"e"}


def _two_point_core():
    return CorePresentation("S0vS0", ChainComplex({0: ["s", "t"]}))


def test_retract_identity_gives_same_complex():
    x = projective_plane()
    ident = ChainMap.identity(S0.chain)
    res = change_core_retract(x, ident, ident, S0)
    assert res.presentation == x
    assert res.phi.is_identity() and res.psi.is_identity()


def test_retract_onto_two_point_core():
    b = _two_point_core()
    alpha = ChainMap(S0.chain, b.chain, {0: Matrix.from_rows([[1], [0]])})
    beta = ChainMap(b.chain, S0.chain, {0: Matrix.from_rows([[1, 0]])})
    # oracle: beta alpha = [1 0] [1 0]^T = [1]
    assert compose(beta, alpha).matrix(0) == Matrix.from_rows([[1]])
    res = change_core_retract(circle(), alpha, beta, b)
    assert H(res.presentation).betti(1) >= 1
    assert res.phi.matrix(1) == Matrix.from_rows([[1], [0]])
    assert res.psi.matrix(1) == Matrix.from_rows([[1, 0]])
    assert compose(res.psi, res.phi).is_identity()


def test_retract_random_cases():
    rng = random.Random(23)
    for _ in range(60):
        case = random_retract_case(rng)
        res = change_core_retract(case.x, case.alpha, case.beta, case.core)
        assert validate_map(res.phi) is None and validate_map(res.psi) is None
        assert compose(res.psi, res.phi).is_identity()
        hx, hy = H(case.x), H(res.presentation)
        for d in range(underlying_chain(res.presentation).top + 1):
            assert hy.betti(d) >= hx.betti(d)
        assert [a.id for a in res.presentation.cells] == [a.id for a in case.x.cells]


def test_retract_rejects_non_retraction():
    b = _two_point_core()
    alpha = ChainMap(S0.chain, b.chain, {0: Matrix.from_rows([[1], [0]])})
    beta = ChainMap(b.chain, S0.chain, {0: Matrix.from_rows([[2, 0]])})
    with pytest.raises(CoreChangeError) as err:
        change_core_retract(circle(), alpha, beta, b)
    assert err.value.degree == 0


def test_equivalence_identity():
    x = torus()
    ident = ChainMap.identity(S0.chain)
    res = change_core_equivalence(x, ident, ident, ChainHomotopy.zero(S0.chain), ChainHomotopy.zero(S0.chain), S0)
    assert res.presentation == x


def test_equivalence_random_expansions():
    rng = random.Random(29)
    for _ in range(60):
        case = random_equivalence_case(rng)
        res = change_core_equivalence(case.x, case.alpha, case.beta, case.h_a, case.h_b, case.core)
        assert validate_map(res.phi) is None
        assert homology(mapping_cone(res.phi)).trivial
        assert H(res.presentation) == H(case.x)


def test_equivalence_rejects_bad_homotopy_with_degree():
    rng = random.Random(31)
    a = random_core(rng, 3)
    e = elementary_expansion(rng, a)
    x = random_presentation(rng, a, 4)
    with pytest.raises(CoreChangeError) as err:
        change_core_equivalence(x, e.inclusion, e.retraction, ChainHomotopy.zero(a.chain),
                                ChainHomotopy.zero(e.core.chain), e.core)
    assert err.value.degree is not None


def test_retract_that_is_also_an_equivalence():
    rng = random.Random(37)
    for _ in range(40):
        a = random_core(rng, 3)
        e = elementary_expansion(rng, a)
        x = random_presentation(rng, a, 8)
        res = change_core_retract(x, e.inclusion, e.retraction, e.core)
        assert compose(res.psi, res.phi).is_identity()
        assert H(res.presentation) == H(x)
        eq = change_core_equivalence(x, e.inclusion, e.retraction, ChainHomotopy.zero(a.chain),
                                     e.homotopy, e.core)
        assert eq.presentation == res.presentation


def test_contractible_core_to_point():
    rng = random.Random(41)
    for _ in range(40):
        case = random_contractible_case(rng)
        assert H(case.x).trivial
        pt, alpha, beta = to_empty_core(case)
        res = change_core_equivalence(case.x, alpha, beta, case.contraction, ChainHomotopy.zero(pt.chain), pt)
        assert underlying_chain(res.presentation).top == -1
        assert homology(mapping_cone(res.phi)).trivial


def test_core_change_shape_errors():
    ident = ChainMap.identity(sphere_core(1).chain)
    with pytest.raises(CoreChangeError):
        change_core_retract(circle(), ident, ident)
    with pytest.raises(CoreChangeError):
        change_core_retract(circle(), ChainMap.identity(S0.chain), ChainMap.identity(S0.chain), empty_core())

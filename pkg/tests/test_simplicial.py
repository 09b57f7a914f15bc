import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mccalc.dgla import Dgla, DegreeMismatch, bch, curvature, gauge_act
from mccalc.forms import PolyForm, face as form_face, parse_form, volume_form, volume_primitive
from mccalc.fuzz import random_algebra, random_element, random_gauge_simplex, random_lieform, random_mc
from mccalc.scalar_linear import Vec, solve_columns
from mccalc.selftest import closed_element
from mccalc.simplicial import (
    FormAlgebra,
    HornProblem,
    IncompatibleHorn,
    LieForm,
    NotNonNegativelyGraded,
    SimplicialGroup,
    audit_filler,
    constant_include,
    deligne_compare,
    discreteness_check,
    gauge_act_level,
    gauge_solve_to_vertex,
    mc_check,
    mc_horn_filler,
    moore_filler,
    parse_lieform,
    simplicial_op,
    vertex_evaluate,
)

seeds = st.integers(0, 10**6)


def xab():
    return Dgla.build([("x", 0), ("a", 1), ("b", 1)], differential={"x": {"a": 1}}, brackets={("x", "a"): {"b": 1}})


def k_model(k):
    return Dgla.build([("x", -k)])


def horn_of(xi, k):
    return HornProblem(xi.level, k, {j: xi.face(j) for j in range(xi.level + 1) if j != k})


# -- the dg Lie structure on L-valued forms ------------------------------------


@given(seeds)
def test_lieform_dgla_identities(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, 4)
    n = rng.randint(0, 3)
    a, b, c = (random_lieform(rng, L, n, rng.randint(-1, 2), terms=2) for _ in range(3))
    p, q, r = ((v.degree or 0) % 2 for v in (a, b, c))
    assert not a.d().d()
    assert a.bracket(b) == -(b.bracket(a)) * (-1) ** (p * q)
    assert a.bracket(b).d() == a.d().bracket(b) + a.bracket(b.d()) * (-1) ** p
    jac = a.bracket(b.bracket(c)) * (-1) ** (p * r) + b.bracket(c.bracket(a)) * (-1) ** (q * p) + c.bracket(a.bracket(b)) * (-1) ** (r * q)
    assert not jac


@given(seeds)
def test_faces_commute_with_d_and_bracket(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, 4)
    n = rng.randint(1, 3)
    a, b = (random_lieform(rng, L, n, rng.randint(-1, 2), terms=2) for _ in range(2))
    for i in range(n + 1):
        assert a.d().face(i) == a.face(i).d()
        assert a.bracket(b).face(i) == a.face(i).bracket(b.face(i))
        assert a.bracket(b).degeneracy(i) == a.degeneracy(i).bracket(b.degeneracy(i))


def test_constant_forms_match_algebra():
    L = xab()
    x, a = L.e("x"), L.e("a")
    X, A = LieForm.constant(L, x, 2), LieForm.constant(L, a, 2)
    assert X.bracket(A) == LieForm.constant(L, L.bracket(x, a), 2)
    assert X.d() == LieForm.constant(L, L.d(x), 2)


# -- MC simplices --------------------------------------------------------------


def test_mc_check_examples():
    L = xab()
    tau = L.element({"a": -1, "b": Fraction(-1, 2)})
    assert mc_check(L, LieForm.constant(L, tau, 2))[0]
    K = k_model(1)
    sphere = LieForm.constant(K, K.zero(), 2) - LieForm.of(K, volume_form(2), K.e("x"))
    assert mc_check(K, sphere)[0]
    bad = LieForm.of(L, parse_form("t1", 1), L.e("a"))
    ok, witness = mc_check(L, bad)
    assert not ok and witness
    with pytest.raises(DegreeMismatch):
        mc_check(L, LieForm.constant(L, L.e("x"), 1))


@given(seeds)
def test_mc_preserved_by_simplicial_ops_and_gauge(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, 4)
    tau = random_mc(rng, L)
    n = rng.randint(1, 3)
    _, xi = random_gauge_simplex(rng, L, n, tau, terms=2)
    assert mc_check(L, xi)[0]
    for i in range(n + 1):
        assert mc_check(L, xi.face(i))[0]
        assert mc_check(L, xi.degeneracy(i))[0]
    g = random_lieform(rng, L, n, 0, terms=2)
    moved = gauge_act_level(L, g, xi)
    assert mc_check(L, moved)[0]
    for i in range(n + 1):
        assert gauge_act_level(L, g.face(i), xi.face(i)) == moved.face(i)


@given(seeds)
def test_levelwise_action_law(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, 4)
    n = rng.randint(1, 2)
    _, xi = random_gauge_simplex(rng, L, n, random_mc(rng, L), terms=2)
    g, h = (random_lieform(rng, L, n, 0, terms=2) for _ in range(2))
    alg = FormAlgebra(L, n)
    assert gauge_act_level(L, bch(alg, g, h), xi) == gauge_act_level(L, g, gauge_act_level(L, h, xi))


def test_simplicial_op_words():
    L = xab()
    xi = LieForm.of(L, parse_form("t1", 2), L.e("x"))
    assert simplicial_op(xi, "d0") == LieForm.of(L, parse_form("1 - t1", 1), L.e("x"))
    # words act left to right
    assert simplicial_op(xi, "s1 d1") == xi
    assert simplicial_op(LieForm.of(L, parse_form("dt1", 1), L.e("b")), "s1") == LieForm.of(L, parse_form("dt1 + dt2", 2), L.e("b"))


def test_vertex_maps():
    L = xab()
    tau = L.element({"a": -1, "b": Fraction(-1, 2)})
    assert vertex_evaluate(constant_include(L, tau, 3)) == tau
    K = k_model(0)
    sphere = LieForm.constant(K, K.zero(), 1) - LieForm.of(K, volume_form(1), K.e("x"))
    assert not vertex_evaluate(sphere)


# -- gauge solving -------------------------------------------------------------


def test_gauge_solve_constant():
    L = xab()
    tau = L.element({"a": -1, "b": Fraction(-1, 2)})
    assert not gauge_solve_to_vertex(L, LieForm.constant(L, tau, 2))


@pytest.mark.parametrize("k", [0, 1, 2])
def test_explicit_witness(k):
    L = k_model(k)
    x = L.e("x")
    n = k + 1
    target = LieForm.constant(L, L.zero(), n) - LieForm.of(L, volume_form(n), x)
    g = -LieForm.of(L, volume_primitive(k), x)
    assert gauge_act_level(L, g, LieForm.constant(L, L.zero(), n)) == target
    h = gauge_solve_to_vertex(L, target)
    assert not h.evaluate_vertex()
    assert gauge_act_level(L, h, LieForm.constant(L, target.evaluate_vertex(), n)) == target


@given(seeds)
def test_gauge_solve_round_trip(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, rng.randint(3, 5))
    tau = random_mc(rng, L)
    n = rng.randint(1, 3)
    _, xi = random_gauge_simplex(rng, L, n, tau, terms=2)
    v = rng.randint(0, n)
    g = gauge_solve_to_vertex(L, xi, vertex=v)
    assert not g.evaluate_vertex(v)
    assert gauge_act_level(L, g, LieForm.constant(L, xi.evaluate_vertex(v), n)) == xi


# -- horn filling --------------------------------------------------------------


def test_moore_identity_horn():
    L = xab()
    G = SimplicialGroup(L, "G")
    horn = HornProblem(3, 1, {j: G.identity(2) for j in (0, 2, 3)})
    assert not moore_filler(G, horn)


def test_incompatible_horn():
    L = xab()
    a = LieForm.constant(L, L.e("x"), 1)
    horn = HornProblem(2, 1, {0: a, 2: LieForm.zero(L, 1)})
    with pytest.raises(IncompatibleHorn):
        horn.check_compatible()
    with pytest.raises(IncompatibleHorn):
        moore_filler(SimplicialGroup(L, "G"), horn)


@given(seeds)
def test_moore_filler_g(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, 4)
    n = rng.randint(1, 4)
    g = random_lieform(rng, L, n, 0, terms=2, max_poly=1)
    horn = horn_of(g, rng.randint(0, n))
    f = moore_filler(SimplicialGroup(L, "G"), horn)
    assert all(audit_filler(horn, f).values())


@given(seeds)
def test_moore_filler_exp(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, 4)
    n = rng.randint(1, 3)
    g = random_lieform(rng, L, n, -1, terms=2, max_poly=1).d()
    E = SimplicialGroup(L, "exp")
    horn = horn_of(g, rng.randint(0, n))
    f = moore_filler(E, horn)
    assert E.contains(f)
    assert all(audit_filler(horn, f).values())


def test_moore_filler_xab_level_two():
    L = xab()
    g = LieForm.of(L, parse_form("t1*t2", 2), L.e("x")) + LieForm.of(L, parse_form("t1", 2), L.e("x"))
    horn = horn_of(g, 1)
    assert all(audit_filler(horn, moore_filler(SimplicialGroup(L, "G"), horn)).values())


def _linear_filler(L, horn, poly_bound=2):
    """Solve for a degree-0 L-valued form with the prescribed faces directly."""
    n = horn.level
    monos = [m for m in itertools.product(range(poly_bound + 1), repeat=n) if sum(m) <= poly_bound]
    cols, keys = [], []
    for b in L.basis.in_degree(0):
        for m in monos:
            w = PolyForm.monomial(n, m, (), 1)
            col = {}
            for j in horn.faces:
                for key, c in form_face(w, j).terms.items():
                    col[(j, b, key)] = c
            cols.append(col)
            keys.append((b, m))
    target = {}
    for j, f in horn.faces.items():
        for b, form in f.comps.items():
            for key, c in form.terms.items():
                target[(j, b, key)] = c
    sol = solve_columns(cols, target)
    out = LieForm.zero(L, n)
    for idx, c in sol.items():
        b, m = keys[idx]
        out = out + LieForm.of(L, PolyForm.monomial(n, m, (), c), Vec.basis(b))
    return out


@given(seeds)
def test_abelian_moore_agrees_with_linear_filler(seed):
    rng = random.Random(seed)
    L = Dgla.build([("u", 0), ("v", 0)])
    n = 2
    g = random_lieform(rng, L, n, 0, terms=3, max_poly=1)
    horn = horn_of(g, rng.randint(0, n))
    f = moore_filler(SimplicialGroup(L, "G"), horn)
    lin = _linear_filler(L, horn)
    for j in horn.faces:
        assert f.face(j) == lin.face(j) == horn.faces[j]


def test_mc_filler_constant_horn():
    L = xab()
    tau = L.element({"a": -1, "b": Fraction(-1, 2)})
    c = LieForm.constant(L, tau, 1)
    horn = HornProblem(2, 0, {1: c, 2: c})
    assert mc_horn_filler(L, horn) == LieForm.constant(L, tau, 2)


@given(seeds)
def test_mc_horn_filler(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, rng.randint(3, 4))
    tau = random_mc(rng, L)
    n = rng.randint(1, 3)
    _, xi = random_gauge_simplex(rng, L, n, tau, terms=2)
    horn = horn_of(xi, rng.randint(0, n))
    f = mc_horn_filler(L, horn)
    assert mc_check(L, f)[0]
    assert all(audit_filler(horn, f).values())


@given(seeds)
def test_mc_filler_abelian(seed):
    rng = random.Random(seed)
    L = Dgla.build([("u", 0), ("v", 1), ("w", 1)], differential={"u": {"v": 1}})
    _, xi = random_gauge_simplex(rng, L, 2, L.e("w"), terms=3)
    horn = horn_of(xi, rng.randint(0, 2))
    f = mc_horn_filler(L, horn)
    assert mc_check(L, f)[0] and all(audit_filler(horn, f).values())


# -- Deligne comparison and discreteness ---------------------------------------


def test_deligne_degree_zero():
    L = Dgla.build([("p", 0), ("q", 0), ("z", 0)], brackets={("p", "q"): {"z": 1}})
    rng = random.Random(5)
    gs = [random_lieform(rng, L, n, 0, terms=3) for n in (1, 2, 2, 3)]
    rep = deligne_compare(L, gs, L.zero())
    assert rep.ok


def test_deligne_rejects_negative_degrees():
    with pytest.raises(NotNonNegativelyGraded):
        deligne_compare(k_model(1), [], k_model(1).zero())


@pytest.mark.parametrize("k", [1, 2, 3])
def test_discreteness_witness(k):
    L = k_model(k)
    r = discreteness_check(L)
    assert not r.discrete
    w = parse_form("t0", k)
    for i in range(1, k):
        w = w * parse_form(f"dt{i}", k)
    assert r.witness == LieForm.of(L, w, L.e("x")).d()
    assert r.witness.level == k


def test_discreteness_positive():
    assert discreteness_check(xab()).discrete


def test_parse_lieform_round_trip():
    L = xab()
    xi = LieForm.of(L, parse_form("t1*dt2 - 3", 2), L.e("a")) + LieForm.of(L, parse_form("t2", 2), L.e("x"))
    assert parse_lieform(L, xi.format(), 2) == xi

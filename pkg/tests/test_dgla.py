import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mccalc.dgla import (
    Dgla,
    NotMaurerCartan,
    OracleFailure,
    PreconditionFailed,
    ValidationError,
    bch,
    cone,
    curvature,
    gauge_act,
    gauge_lift,
    lower_central_series,
    stabilizer_check,
    twist,
    twisted_d,
    validate,
)
from mccalc.fuzz import matrix_algebra, random_algebra, random_element, random_mc
from mccalc.scalar_linear import Vec, cohomology

seeds = st.integers(0, 10**6)


def xab(db=None):
    d = {"x": {"a": 1}}
    if db:
        d["b"] = db
    return Dgla.build([("x", 0), ("a", 1), ("b", 1), ("c", 2)] if db else [("x", 0), ("a", 1), ("b", 1)],
                      differential=d, brackets={("x", "a"): {"b": 1}}, check=False)


def heisenberg():
    return Dgla.build([("p", 0), ("q", 0), ("z", 0)], brackets={("p", "q"): {"z": 1}})


# -- validation and filtration -------------------------------------------------


def test_abelian_validates():
    L = Dgla.build([("u", 0), ("v", -1)])
    rep = validate(L)
    assert rep.ok and rep.nilpotency_class == 1


def test_xab_validates():
    rep = validate(xab())
    assert rep.ok and rep.nilpotency_class == 2


def test_broken_derivation_has_witness():
    rep = validate(xab(db={"c": 1}))
    bad = rep["derivation"]
    assert not bad.passed
    assert set(bad.witness) >= {"x", "a"}
    with pytest.raises(ValidationError):
        Dgla.build([("x", 0), ("a", 1), ("b", 1), ("c", 2)], differential={"x": {"a": 1}, "b": {"c": 1}},
                   brackets={("x", "a"): {"b": 1}})


def test_lower_central_series():
    L = xab()
    layers = lower_central_series(L)
    assert [len(f) for f in layers[:2]] == [3, 1]
    assert layers[1][0] == L.e("b")
    assert len(lower_central_series(heisenberg())[1]) == 1
    A = Dgla.build([("u", 0)])
    assert len(lower_central_series(A)) < 2 or not lower_central_series(A)[1]


# -- MC elements and twisting --------------------------------------------------


def test_curvature_examples():
    L = xab()
    assert not curvature(L, L.zero())
    tau = L.element({"a": -1, "b": Fraction(-1, 2)})
    assert not curvature(L, tau)
    A = Dgla.build([("u", 0), ("v", 1)], differential={"u": {"v": 1}})
    assert not curvature(A, A.e("v"))


def test_twist():
    L = xab()
    tau = L.element({"a": -1, "b": Fraction(-1, 2)})
    T = twist(L, tau)
    assert validate(T).ok
    assert T.d(L.e("x")) == L.d(L.e("x")) + L.bracket(tau, L.e("x"))
    for i in range(T.dim):
        assert not T.d(T.d(Vec.basis(i)))
    A = Dgla.build([("u", 1), ("w", 2)], differential={"u": {"w": 1}})
    with pytest.raises(NotMaurerCartan):
        twist(A, A.e("u"))


@given(seeds)
def test_twisted_d_squares_to_zero(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, 4)
    tau = random_mc(rng, L)
    assert not curvature(L, tau)
    for i in range(L.dim):
        v = Vec.basis(i)
        assert not twisted_d(L, tau, twisted_d(L, tau, v))


# -- BCH -----------------------------------------------------------------------


def _free_series(c):
    """``log(exp X exp Y)`` truncated at word length ``c`` as {word: coeff}."""

    def mul(a, b):
        out = {}
        for u, x in a.items():
            for v, y in b.items():
                if len(u) + len(v) <= c:
                    out[u + v] = out.get(u + v, 0) + x * y
        return {k: v for k, v in out.items() if v}

    def exp(w):
        out, term = {"": Fraction(1)}, {"": Fraction(1)}
        for n in range(1, c + 1):
            term = {k: v / n for k, v in mul(term, w).items()}
            for k, v in term.items():
                out[k] = out.get(k, 0) + v
        return out

    z = mul(exp({"X": Fraction(1)}), exp({"Y": Fraction(1)}))
    z = {k: v for k, v in z.items() if k}
    out, power = {}, {"": Fraction(1)}
    for n in range(1, c + 1):
        power = mul(power, z)
        for k, v in power.items():
            out[k] = out.get(k, 0) + v * Fraction((-1) ** (n + 1), n)
    return {k: v for k, v in out.items() if v}


def _evaluate_lie_series(L, series, x, y):
    # Dynkin–Specht–Wever: a homogeneous Lie polynomial P of length n equals
    # (1/n) times the left-normed bracketing of its words
    val = {"X": x, "Y": y}
    out = L.zero()
    for w, c in series.items():
        t = val[w[-1]]
        for ch in reversed(w[:-1]):
            t = L.bracket(val[ch], t)
        out = out + t * (c / len(w))
    return out


@given(seeds)
def test_bch_matches_free_exp_log(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, rng.randint(3, 5), degrees=(0, 0, 1))
    c = max(L.nilpotency_class, 1)
    x, y = random_element(rng, L, 0), random_element(rng, L, 0)
    assert bch(L, x, y) == _evaluate_lie_series(L, _free_series(c), x, y)


def _matrix(L, v, m):
    M = [[Fraction(0)] * m for _ in range(m)]
    for k, c in v.items():
        s = L.basis.symbols[k]
        M[int(s[1])][int(s[2])] = c
    return M


def _mm(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _mexp(A):
    n = len(A)
    out = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    term = [row[:] for row in out]
    for k in range(1, n):
        term = [[e / k for e in row] for row in _mm(term, A)]
        out = [[a + b for a, b in zip(r, s)] for r, s in zip(out, term)]
    return out


def _mlog(U):
    n = len(U)
    N = [[U[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    out = [[Fraction(0)] * n for _ in range(n)]
    power = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n):
        power = _mm(power, N)
        out = [[a + Fraction((-1) ** (k + 1), k) * b for a, b in zip(r, s)] for r, s in zip(out, power)]
    return out


@given(seeds)
def test_bch_matches_matrix_exp_log(seed):
    rng = random.Random(seed)
    m = rng.randint(2, 5)
    L = matrix_algebra([0] * m)
    x, y = random_element(rng, L, 0), random_element(rng, L, 0)
    z = bch(L, x, y)
    assert _matrix(L, z, m) == _mlog(_mm(_mexp(_matrix(L, x, m)), _mexp(_matrix(L, y, m))))


def test_bch_examples():
    A = Dgla.build([("u", 0), ("v", 0)])
    assert bch(A, A.e("u"), A.e("v")) == A.e("u") + A.e("v")
    H = heisenberg()
    p, q = H.e("p"), H.e("q")
    assert bch(H, p, q) == p + q + H.e("z") * Fraction(1, 2)
    assert not bch(H, p + q, -(p + q))


@given(seeds)
def test_bch_group_laws(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, 5, degrees=(0, 0, 1))
    x, y, z = (random_element(rng, L, 0) for _ in range(3))
    assert bch(L, bch(L, x, y), z) == bch(L, x, bch(L, y, z))
    assert bch(L, x, L.zero()) == x == bch(L, L.zero(), x)
    assert not bch(L, x, -x)


# -- gauge action --------------------------------------------------------------


def test_gauge_examples():
    L = xab()
    assert gauge_act(L, L.e("x"), L.zero()) == L.element({"a": -1, "b": Fraction(-1, 2)})
    A = Dgla.build([("u", 0), ("v", 1)], differential={"u": {"v": 1}})
    assert gauge_act(A, A.e("u") * 3, A.zero()) == A.e("v") * -3
    assert stabilizer_check(L, L.zero(), L.zero())
    assert not stabilizer_check(L, L.e("x"), L.zero())


@given(seeds)
def test_gauge_action_law(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, rng.randint(3, 5))
    tau = random_mc(rng, L)
    x, y = random_element(rng, L, 0), random_element(rng, L, 0)
    assert not curvature(L, gauge_act(L, x, tau))
    assert gauge_act(L, L.zero(), tau) == tau
    assert gauge_act(L, bch(L, x, y), tau) == gauge_act(L, x, gauge_act(L, y, tau))


@given(seeds, st.booleans())
def test_stabilizer_equivalence(seed, closed):
    from mccalc.selftest import closed_element

    rng = random.Random(seed)
    L = random_algebra(rng, 5)
    tau = random_mc(rng, L)
    x = closed_element(rng, L, twist(L, tau).diff, 0) if closed else random_element(rng, L, 0)
    assert stabilizer_check(L, x, tau) == (not twisted_d(L, tau, x))
    assert stabilizer_check(L, x, tau) == (gauge_act(L, x, tau) == tau)


# -- gauge lift ----------------------------------------------------------------


def test_gauge_lift_identity():
    L = xab()
    y = L.e("x") * 2
    tau = gauge_act(L, y, L.zero())
    x = gauge_lift(L, lambda v: v, lambda v: v, L, lambda n, r: None, tau, L.zero(), y)
    assert x == y


def test_gauge_lift_abelian_quotient():
    # L = span{u, c, dc}, I = span{c, dc} acyclic, f kills I
    L = Dgla.build([("u", 0), ("c", 0), ("w", 1), ("v", 1)], differential={"c": {"w": 1}})
    Q = Dgla.build([("u", 0), ("w", 1), ("v", 1)])

    def f(v):
        keep = {0: 0, 3: 2}
        return Vec({keep[k]: a for k, a in v.items() if k in keep})

    def section(v):
        back = {0: 0, 2: 3}
        return Vec({back[k]: a for k, a in v.items()})

    def oracle(n, r):
        # r lies in I^1 = span{w} and d(c) = w
        if set(r) - {2}:
            return None
        return Vec({1: r[2]})

    rho = L.e("v")
    tau = rho + L.e("w") * 5
    x = gauge_lift(L, f, section, Q, oracle, tau, rho, Q.zero())
    assert gauge_act(L, x, rho) == tau and not f(x)
    with pytest.raises(PreconditionFailed):
        gauge_lift(L, f, section, Q, oracle, tau + L.e("v"), rho, Q.zero())
    with pytest.raises(OracleFailure):
        gauge_lift(L, f, section, Q, lambda n, r: None, tau, rho, Q.zero())


# -- cone ----------------------------------------------------------------------


def test_cone_of_abelian_point():
    L = Dgla.build([("x", 0)])
    C = cone(L)
    assert validate(C).ok
    assert C.d(C.e("sx")) == C.e("x")
    assert all(cohomology(C.complex(), k).dimension == 0 for k in (-1, 0))
    assert C.nilpotency_class == L.nilpotency_class


def test_cone_of_xab():
    L = xab()
    C = cone(L)
    assert validate(C).ok
    assert C.d(C.e("sx")) == C.e("x") - C.e("sa")
    # L sits inside as a dg Lie subalgebra
    for s in ("x", "a", "b"):
        for t in ("x", "a", "b"):
            assert C.bracket(C.e(s), C.e(t)) == C.element(L.format(L.bracket(L.e(s), L.e(t))) or "0")


@given(seeds)
def test_cone_cycles_match_degree_zero(seed):
    rng = random.Random(seed)
    L = random_algebra(rng, 4)
    C = cone(L)
    assert validate(C).ok
    cx = C.complex()
    z0 = len(C.basis.in_degree(0)) - _rank([cx.differential[i] for i in C.basis.in_degree(0)])
    assert z0 == len(L.basis.in_degree(0))


def _rank(cols):
    from mccalc.scalar_linear import nullspace_columns

    return len(cols) - len(nullspace_columns(cols))

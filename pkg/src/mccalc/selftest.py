"""The property ledger behind ``mccalc selftest``.

Each entry runs a family of exact checks on seeded random input and on the
bundled corpus, and yields ``(name, passed, detail)``.
"""

from __future__ import annotations

import random
from typing import Iterator

from .dgla import bch, curvature, gauge_act, stabilizer_check, twist, twisted_d, validate
from .dold_kan import ChainElement, boundary, integration_I, normalize, shuffle_bracket
from .forms import (
    PolyForm,
    alternating_face_sum,
    contract_h,
    degeneracy,
    evaluate_vertex,
    face,
    integrate,
    volume_form,
)
from .fuzz import (
    random_algebra,
    random_element,
    random_form,
    random_gauge_simplex,
    random_lieform,
    random_mc,
    random_scalar,
)
from .scalar_linear import Vec, cohomology, nullspace_columns
from .simplicial import (
    HornProblem,
    LieForm,
    SimplicialGroup,
    audit_filler,
    discreteness_check,
    gauge_solve_to_vertex,
    mc_check,
    mc_horn_filler,
    moore_filler,
)

__all__ = ["run_selftest", "closed_element", "random_chain"]


def closed_element(rng: random.Random, L, diff, degree: int) -> Vec:
    """A random element of the kernel of ``diff`` in the given degree."""
    here = L.basis.in_degree(degree)
    rels = nullspace_columns([diff[i] for i in here])
    out = Vec()
    for r in rels:
        c = random_scalar(rng)
        out = out + Vec({here[j]: a * c for j, a in r.items()})
    return out


def random_chain(rng: random.Random, L, n: int) -> LieForm:
    """A random normalized chain at level ``n`` (closed, total degree 0)."""
    xi = random_lieform(rng, L, n, -1, terms=2).d() if n > 0 else LieForm.zero(L, 0)
    if n > 0:
        # ω^n⊗x + ω̃^(n-1)⊗dx is closed for any x, so I(ξ) = x need not be a cycle
        x = random_element(rng, L, -n)
        xi = xi + LieForm.of(L, volume_form(n), x) + LieForm.of(L, _prim(n - 1), L.d(x))
    else:
        x = closed_element(rng, L, L.diff, 0)
        xi = xi + LieForm.constant(L, x, 0)
    z = closed_element(rng, L, L.diff, 0)
    if z:
        xi = xi + LieForm.constant(L, z, n)
    return normalize(xi)


def _corpus():
    from .cli import corpus_names, load_algebra

    return [load_algebra(f"corpus:{n}")[0] for n in corpus_names()]


def run_selftest(seed: int = 0, quick: bool = False) -> Iterator[tuple[str, bool, str]]:
    rng = random.Random(seed)
    scale = 1 if quick else 3
    corpus = _corpus()

    yield "corpus-validates", all(validate(L).ok for L in corpus), f"n={len(corpus)}"

    n = 20 * scale
    mc = law = stab = 0
    for _ in range(n):
        L = random_algebra(rng, rng.randint(3, 5))
        tau = random_mc(rng, L)
        x, y = random_element(rng, L, 0), random_element(rng, L, 0)
        mc += not curvature(L, gauge_act(L, x, tau))
        law += gauge_act(L, bch(L, x, y), tau) == gauge_act(L, x, gauge_act(L, y, tau))
        z = closed_element(rng, L, twist(L, tau, check=False).diff, 0) if rng.random() < 0.5 else x
        stab += stabilizer_check(L, z, tau) == (not twisted_d(L, tau, z))
    yield "gauge-preserves-mc", mc == n, f"n={n}"
    yield "gauge-action-law", law == n, f"n={n}"
    yield "stabilizer-iff-closed", stab == n, f"n={n}"

    n = 8 * scale
    ok = 0
    for _ in range(n):
        L = random_algebra(rng, rng.randint(3, 4))
        tau = random_mc(rng, L)
        lvl = rng.randint(1, 3)
        _, xi = random_gauge_simplex(rng, L, lvl, tau, terms=2)
        g = gauge_solve_to_vertex(L, xi)
        rho = LieForm.constant(L, xi.evaluate_vertex(), lvl)
        ok += gauge_act(_alg(L, lvl), g, rho) == xi and not g.evaluate_vertex()
    yield "gauge-solve-round-trip", ok == n, f"n={n}"

    ok = tot = 0
    for L in corpus:
        tau = L.zero()
        for k in range(0, 3):
            x = closed_element(rng, L, L.diff, -k)
            if not x:
                continue
            tot += 1
            g = LieForm.of(L, _prim(k), x)
            target = LieForm.constant(L, tau, k + 1) - LieForm.of(L, volume_form(k + 1), x)
            ok += gauge_act(_alg(L, k + 1), -g, LieForm.constant(L, tau, k + 1)) == target
    yield "witness-identity", ok == tot, f"n={tot}"

    n = 10 * scale
    ok = 0
    for _ in range(n):
        lvl = rng.randint(1, 3)
        w = random_form(rng, lvl)
        good = True
        for i in range(lvl + 1):
            good &= face(w.d(), i) == face(w, i).d() or lvl == 0
            good &= degeneracy(w.d(), i) == degeneracy(w, i).d()
            for j in range(i + 1, lvl + 1):
                if lvl >= 2:
                    good &= face(face(w, j), i) == face(face(w, i), j - 1)
        top = random_form(rng, lvl, lvl - 1)
        good &= integrate(top.d()) == integrate(alternating_face_sum(top))
        v = rng.randint(0, lvl)
        good &= contract_h(w, v).d() + contract_h(w.d(), v) == w - PolyForm.constant(lvl, evaluate_vertex(w, v))
        ok += good
    good = all(integrate(volume_form(k)) == 1 for k in range(5))
    yield "forms-identities", ok == n and good, f"n={n}"

    n = 6 * scale
    ok = 0
    for _ in range(n):
        L = random_algebra(rng, rng.randint(3, 4))
        lvl = rng.randint(1, 4)
        k = rng.randint(0, lvl)
        g = random_lieform(rng, L, lvl, 0, terms=2, max_poly=1)
        horn = HornProblem(lvl, k, {j: g.face(j) for j in range(lvl + 1) if j != k})
        ok += all(audit_filler(horn, moore_filler(SimplicialGroup(L, "G"), horn)).values())
    yield "moore-filler", ok == n, f"n={n}"

    ok = 0
    for _ in range(n):
        L = random_algebra(rng, rng.randint(3, 4))
        tau = random_mc(rng, L)
        lvl = rng.randint(1, 3)
        k = rng.randint(0, lvl)
        _, xi = random_gauge_simplex(rng, L, lvl, tau, terms=2)
        horn = HornProblem(lvl, k, {j: xi.face(j) for j in range(lvl + 1) if j != k})
        f = mc_horn_filler(L, horn)
        ok += all(audit_filler(horn, f).values()) and mc_check(L, f)[0]
    yield "mc-horn-filler", ok == n, f"n={n}"

    from .homotopy import homotopy_groups, samelson

    ok = True
    for L in corpus:
        hg = homotopy_groups(L, L.zero(), 3)
        T = twist(L, L.zero())
        ok &= all(hg.homology[k].dimension == cohomology(T.complex(), -k).dimension for k in range(4))
        ok &= hg.representatives_mc
    yield "homotopy-dimensions", ok, f"n={len(corpus)}"

    ok = tot = 0
    for L in corpus:
        for k1 in range(1, 3):
            for k2 in range(1, 4 - k1):
                x = closed_element(rng, L, L.diff, -k1)
                y = closed_element(rng, L, L.diff, -k2)
                if not x or not y:
                    continue
                tot += 1
                ok += samelson(L, x, y).ok
    yield "samelson-triangle", ok == tot, f"n={tot}"

    n = 10 * scale
    ok = 0
    for _ in range(n):
        L = random_algebra(rng, rng.randint(3, 5), degrees=(-1, 0, 1, 2))
        p = rng.randint(0, 2)
        q = rng.randint(0, 3 - p)
        a, b = random_chain(rng, L, p), random_chain(rng, L, q)
        ChainElement(a)
        ChainElement(b)
        good = p == 0 or integration_I(boundary(a)) == L.d(integration_I(a))
        good &= integration_I(shuffle_bracket(a, b)) == L.bracket(integration_I(a), integration_I(b))
        x = random_element(rng, L, -p)
        good &= integration_I(LieForm.of(L, volume_form(p), x), check=False) == x
        ok += good
    yield "integration-map", ok == n, f"n={n}"

    ok = True
    for L in corpus:
        r = discreteness_check(L)
        ok &= r.discrete == L.is_nonnegatively_graded()
        ok &= r.discrete or r.witness is not None
    yield "discreteness-criterion", ok, f"n={len(corpus)}"


def _alg(L, level):
    from .simplicial import FormAlgebra

    return FormAlgebra(L, level)


def _prim(k):
    from .forms import volume_primitive

    return volume_primitive(k)

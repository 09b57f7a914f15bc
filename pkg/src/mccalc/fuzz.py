"""Seeded random generators for algebras, elements and forms.

Random algebras are strictly upper triangular endomorphisms of a small graded
vector space ``V`` with the graded commutator bracket and differential
``[δ, -]`` for a strictly upper triangular ``δ`` of degree 1 with ``δ² = 0``.
They are nilpotent of class at most ``dim V - 1`` and satisfy every dg Lie
identity by construction, which makes them a useful independent source of
test cases.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from .dgla import Dgla, curvature, gauge_act
from .forms import PolyForm
from .scalar_linear import GradedBasis, Vec
from .simplicial import FormAlgebra, LieForm

__all__ = [
    "random_scalar",
    "matrix_algebra",
    "random_algebra",
    "random_element",
    "random_mc",
    "random_form",
    "random_lieform",
    "random_gauge_simplex",
]


def random_scalar(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        c = Fraction(rng.randint(-3, 3), rng.choice((1, 1, 1, 2, 3)))
        if c or not nonzero:
            return c


def matrix_algebra(vdegrees: Sequence[int], delta: dict[tuple[int, int], Fraction] | None = None, name: str = "") -> Dgla:
    """Strictly upper triangular ``End(V)`` for ``V`` with the given degrees.

    ``E_ij`` (``i < j``) sends ``v_j`` to ``v_i`` and has degree ``d_i - d_j``.
    ``delta`` lists the entries of ``δ``; it must have degree 1 and square 0.
    """
    m = len(vdegrees)
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    pairs.sort(key=lambda ij: (ij[1] - ij[0], ij))
    idx = {p: n for n, p in enumerate(pairs)}
    deg = [vdegrees[i] - vdegrees[j] for i, j in pairs]
    basis = GradedBasis(tuple(f"e{i}{j}" for i, j in pairs), tuple(deg))
    delta = {k: Fraction(v) for k, v in (delta or {}).items() if v}
    for (i, j) in delta:
        if not i < j or vdegrees[i] - vdegrees[j] != 1:
            raise ValueError("δ must be strictly upper triangular of degree 1")
    for (i, j), a in delta.items():
        for (j2, k), b in delta.items():
            if j == j2:
                raise ValueError("δ must square to zero")

    def commutator(A: dict, dA: int, B: dict, dB: int) -> dict:
        out: dict = {}
        for (i, j), a in A.items():
            for (j2, k), b in B.items():
                if j == j2:
                    out[(i, k)] = out.get((i, k), 0) + a * b
        sign = -1 if (dA * dB) % 2 else 1
        for (i, j), b in B.items():
            for (j2, k), a in A.items():
                if j == j2:
                    out[(i, k)] = out.get((i, k), 0) - sign * a * b
        return {k: v for k, v in out.items() if v}

    table = {}
    for p in pairs:
        for q in pairs:
            if idx[p] < idx[q]:
                c = commutator({p: 1}, deg[idx[p]], {q: 1}, deg[idx[q]])
                if c:
                    table[(idx[p], idx[q])] = Vec({idx[k]: v for k, v in c.items()})
    diff = []
    for p in pairs:
        c = commutator(delta, 1, {p: 1}, deg[idx[p]])
        diff.append(Vec({idx[k]: v for k, v in c.items()}))
    return Dgla(basis, diff, table, name=name or f"end{m}")


def random_algebra(rng: random.Random, dim_v: int | None = None, degrees: Sequence[int] = (-1, 0, 1)) -> Dgla:
    m = dim_v or rng.randint(2, 5)
    vdeg = [rng.choice(degrees) for _ in range(m)]
    delta: dict = {}
    used: set[int] = set()
    cands = [(i, j) for i in range(m) for j in range(i + 1, m) if vdeg[i] - vdeg[j] == 1]
    rng.shuffle(cands)
    for i, j in cands:
        # a matching keeps δ² = 0
        if i in used or j in used or rng.random() < 0.3:
            continue
        delta[(i, j)] = random_scalar(rng, nonzero=True)
        used.update((i, j))
    return matrix_algebra(vdeg, delta)


def random_element(rng: random.Random, L: Dgla, degree: int, density: float = 0.6) -> Vec:
    return Vec({i: random_scalar(rng) for i in L.basis.in_degree(degree) if rng.random() < density})


def random_mc(rng: random.Random, L: Dgla, tries: int = 8) -> Vec:
    """An MC element: a random one when one is found quickly, then moved by a random gauge."""
    base = L.zero()
    for _ in range(tries):
        t = random_element(rng, L, 1, density=0.4)
        if t and not curvature(L, t):
            base = t
            break
    return gauge_act(L, random_element(rng, L, 0), base)


def random_form(rng: random.Random, level: int, degree: int | None = None, terms: int = 3, max_poly: int = 2) -> PolyForm:
    out = PolyForm.zero(level)
    for _ in range(terms):
        p = rng.randint(0, level) if degree is None else degree
        if p > level:
            continue
        dts = tuple(sorted(rng.sample(range(1, level + 1), p)))
        budget = rng.randint(0, max_poly)
        mono = [0] * level
        for _ in range(budget):
            if level:
                mono[rng.randrange(level)] += 1
        out = out + PolyForm.monomial(level, mono, dts, random_scalar(rng))
    return out


def random_lieform(rng: random.Random, L: Dgla, level: int, total_degree: int, terms: int = 3, max_poly: int = 2) -> LieForm:
    out = LieForm.zero(L, level)
    deg = L.basis.degrees
    choices = [b for b in range(L.dim) if 0 <= total_degree - deg[b] <= level]
    if not choices:
        return out
    for _ in range(terms):
        b = rng.choice(choices)
        f = random_form(rng, level, total_degree - deg[b], terms=1, max_poly=max_poly)
        out = out + LieForm.of(L, f, Vec.basis(b))
    return out


def random_gauge_simplex(rng: random.Random, L: Dgla, level: int, tau: Vec, terms: int = 3) -> tuple[LieForm, LieForm]:
    """``(g, g·(τ⊗1))`` for a random ``g`` in ``Ω^0_n(L)``."""
    g = random_lieform(rng, L, level, 0, terms=terms)
    xi = gauge_act(FormAlgebra(L, level), g, LieForm.constant(L, tau, level))
    return g, xi

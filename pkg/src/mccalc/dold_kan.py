"""Normalized chains of ``Z^0 Ω_•(L)``, the shuffle bracket and integration.

A chain at level ``n`` is a closed Lie-valued form of total degree 0 whose
faces ``∂_1, ..., ∂_n`` vanish.  Boundary, bracket and integration are

* ``∂ξ = Σ_i (-1)^i ∂_i ξ``  (only ``∂_0`` survives)
* ``[ξ, ζ] = Σ_(μ,ν) sgn(μ,ν) [s_ν ξ, s_μ ζ]``
* ``I(ξ) = ∫_{Δ^n} ξ``

With the form conventions of :mod:`mccalc.simplicial` this makes ``I`` a map
of dg Lie algebras with ``I(ω^n⊗x) = x``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dgla import Dgla, DglaError
from .forms import PolyForm, face as form_face
from .scalar_linear import NoSolution, Vec, solve_columns
from .simplicial import FormAlgebra, LieForm

__all__ = [
    "NotNormalized",
    "NotAChain",
    "ShufflePair",
    "ChainElement",
    "shuffles",
    "apply_degeneracies",
    "shuffle_sum",
    "shuffle_bracket",
    "alternating_face_sum",
    "boundary",
    "integration_I",
    "normalize",
    "is_normalized",
    "bounding_form",
]


class NotNormalized(DglaError, ValueError):
    pass


class NotAChain(DglaError, ValueError):
    pass


@dataclass(frozen=True)
class ShufflePair:
    mu: tuple[int, ...]
    nu: tuple[int, ...]
    sign: int


def _parity(perm: Sequence[int]) -> int:
    inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
    return -1 if inv % 2 else 1


def shuffles(p: int, q: int) -> list[ShufflePair]:
    """All ``(p, q)``-shuffles in lexicographic order of ``μ``."""
    if p < 0 or q < 0:
        raise ValueError("p and q must be nonnegative")
    out = []
    for mu in itertools.combinations(range(p + q), p):
        nu = tuple(i for i in range(p + q) if i not in mu)
        out.append(ShufflePair(mu, nu, _parity(mu + nu)))
    return out


def apply_degeneracies(x: LieForm, idx: Sequence[int]) -> LieForm:
    """``s_{i_k} ... s_{i_1} x`` for increasing ``idx`` (``s_{i_1}`` acts first)."""
    for i in idx:
        x = x.degeneracy(i)
    return x


def is_normalized(xi: LieForm) -> bool:
    return all(not xi.face(i) for i in range(1, xi.level + 1))


@dataclass(frozen=True)
class ChainElement:
    """Normalized chain: closed, total degree 0, ``∂_i = 0`` for ``i >= 1``."""

    form: LieForm

    def __post_init__(self) -> None:
        xi = self.form
        if xi and xi.degree != 0:
            raise NotAChain(f"total degree {xi.degree} != 0")
        if xi.d():
            raise NotAChain("form is not closed")
        if not is_normalized(xi):
            raise NotNormalized("some face ∂_i with i >= 1 is nonzero")

    @property
    def level(self) -> int:
        return self.form.level


def _form(x) -> LieForm:
    return x.form if isinstance(x, ChainElement) else x


def shuffle_sum(x, y) -> LieForm:
    """``Σ sgn(μ,ν) [s_ν x, s_μ y]`` taken literally."""
    x, y = _form(x), _form(y)
    p, q = x.level, y.level
    out = LieForm.zero(x.L, p + q)
    for sh in shuffles(p, q):
        term = apply_degeneracies(x, sh.nu).bracket(apply_degeneracies(y, sh.mu))
        out = out + term if sh.sign > 0 else out - term
    return out


def shuffle_bracket(x, y, check: bool = True) -> LieForm:
    """Bracket of normalized chains."""
    fx, fy = _form(x), _form(y)
    if check:
        for f in (fx, fy):
            if not is_normalized(f):
                raise NotNormalized("shuffle bracket needs normalized chains")
    return shuffle_sum(fx, fy)


def alternating_face_sum(x) -> LieForm:
    x = _form(x)
    out = LieForm.zero(x.L, x.level - 1)
    for i in range(x.level + 1):
        f = x.face(i)
        out = out + f if i % 2 == 0 else out - f
    return out


def boundary(x) -> LieForm:
    """``Σ (-1)^i ∂_i``; zero at level 0."""
    x = _form(x)
    if x.level == 0:
        return LieForm.zero(x.L, 0)
    return alternating_face_sum(x)


def integration_I(x, check: bool = True) -> Vec:
    x = _form(x)
    if check and not is_normalized(x):
        raise NotNormalized("integration is defined on normalized chains")
    return x.integrate()


def normalize(x: LieForm) -> LieForm:
    """Project onto the joint kernel of ``∂_1, ..., ∂_n``.

    Applies ``1 - s_{j-1} ∂_j`` for ``j = n, ..., 1``; idempotent, and it
    commutes with ``d`` because faces and degeneracies do.
    """
    for j in range(x.level, 0, -1):
        f = x.face(j)
        if f:
            x = x - f.degeneracy(j - 1)
    return x


def bounding_form(theta: PolyForm, max_extra: int = 3) -> PolyForm:
    """Closed ``α ∈ Ω^n_{n+1}`` with ``∂_0 α = θ`` and ``∂_i α = 0`` for ``i >= 1``.

    ``θ`` must be a top-degree form at level ``n`` with ``∫ θ = 0``.  The
    search runs over polynomial degree bounds ``deg θ + 1, ...``; raises
    :class:`NoSolution` if none is found within ``max_extra`` extra degrees.
    """
    n = theta.level
    m = n + 1
    base = theta.poly_degree()
    target = {(0, key): c for key, c in theta.terms.items()}
    for bound in range(base + 1, base + 2 + max_extra):
        monos = [mo for mo in itertools.product(range(bound + 1), repeat=m) if sum(mo) <= bound]
        basis = [(mo, dts) for dts in itertools.combinations(range(1, m + 1), n) for mo in monos]
        cols = []
        for key in basis:
            a = PolyForm._wrap(m, {key: Fraction(1)})
            # row -1 holds dα, rows 0..m hold the faces
            col = {(-1, k): c for k, c in a.d().terms.items()}
            for i in range(m + 1):
                for k, c in form_face(a, i).terms.items():
                    col[(i, k)] = c
            cols.append(col)
        try:
            sol = solve_columns(cols, target)
        except NoSolution:
            continue
        return PolyForm._wrap(m, {basis[j]: c for j, c in sol.items()})
    raise NoSolution("no bounding form within the degree bound")

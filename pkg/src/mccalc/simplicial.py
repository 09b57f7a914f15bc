"""Lie-valued forms and the simplicial objects built from them.

A :class:`LieForm` at level ``n`` is an element of ``Ω_n ⊗ L``, stored as one
polynomial form per basis vector of ``L``.  Writing ``ω⊗x`` with ``|ω| = p``
and ``|x| = j``, the conventions used throughout are

* ``d(ω⊗x) = ω⊗dx - (-1)^(p+j) dω⊗x``
* ``[ω⊗x, η⊗y] = (-1)^(p·(|η|+|y|)) ωη⊗[x,y]``

This is the usual Koszul structure on ``Ω_n ⊗ L`` transported along the
automorphism ``ω⊗x ↦ (-1)^(p(p+1)/2 + pj) ω⊗x``.  It is the identity on
constant forms, so ``τ⊗1`` means the same thing in either structure, and it
is the choice under which ``∫`` is a strict left inverse of ``x ↦ ω^n⊗x`` on
normalized chains (see :mod:`mccalc.dold_kan`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .dgla import (
    Dgla,
    DglaError,
    DegreeMismatch,
    NotMaurerCartan,
    OracleFailure,
    bch,
    curvature,
    gauge_act,
    twist,
)
from .forms import (
    LevelMismatch,
    LevelZero,
    PolyForm,
    bary,
    contract_h,
    degeneracy,
    evaluate_vertex,
    face,
    integrate,
    parse_form,
    render,
)
from .scalar_linear import Vec, frac, nullspace_columns
from .textfmt import ParseError

__all__ = [
    "LieForm",
    "FormAlgebra",
    "IncompatibleHorn",
    "NotNonNegativelyGraded",
    "HornProblem",
    "SimplicialGroup",
    "mc_check",
    "simplicial_op",
    "gauge_act_level",
    "vertex_evaluate",
    "constant_include",
    "gauge_solve_to_vertex",
    "moore_filler",
    "fill_partial",
    "mc_horn_filler",
    "audit_filler",
    "deligne_compare",
    "discreteness_check",
    "parse_lieform",
]


class IncompatibleHorn(DglaError, ValueError):
    def __init__(self, i: int, j: int):
        self.faces = (i, j)
        super().__init__(f"faces {i} and {j} violate the simplicial identities")


class NotNonNegativelyGraded(DglaError, ValueError):
    pass


def _acc(d: dict, key, form: PolyForm) -> None:
    if not form:
        return
    cur = d.get(key)
    s = form if cur is None else cur + form
    if s:
        d[key] = s
    else:
        d.pop(key, None)


class LieForm:
    """Element of ``Ω_n(L) = Ω_n ⊗ L``."""

    __slots__ = ("L", "level", "comps")

    def __init__(self, L: Dgla, level: int, comps: Mapping[int, PolyForm] | None = None):
        self.L = L
        self.level = level
        d = {}
        for b, f in (comps or {}).items():
            if f.level != level:
                raise LevelMismatch(f"component at level {f.level}, expected {level}")
            if f:
                d[b] = f
        self.comps = d

    @classmethod
    def _wrap(cls, L: Dgla, level: int, comps: dict) -> "LieForm":
        x = cls.__new__(cls)
        x.L = L
        x.level = level
        x.comps = comps
        return x

    @classmethod
    def zero(cls, L: Dgla, level: int) -> "LieForm":
        return cls._wrap(L, level, {})

    @classmethod
    def of(cls, L: Dgla, form: PolyForm, v: Mapping) -> "LieForm":
        """``form ⊗ v``."""
        return cls._wrap(L, form.level, {b: form.scale(c) for b, c in v.items() if c and form})

    @classmethod
    def constant(cls, L: Dgla, v: Mapping, level: int) -> "LieForm":
        return cls.of(L, PolyForm.constant(level), v)

    # -- vector space ---------------------------------------------------------

    def _check(self, other: "LieForm") -> None:
        if other.level != self.level:
            raise LevelMismatch(f"levels {self.level} and {other.level} differ")

    def __add__(self, other: "LieForm") -> "LieForm":
        if not isinstance(other, LieForm):
            return NotImplemented
        self._check(other)
        d = dict(self.comps)
        for b, f in other.comps.items():
            _acc(d, b, f)
        return LieForm._wrap(self.L, self.level, d)

    def __neg__(self) -> "LieForm":
        return LieForm._wrap(self.L, self.level, {b: -f for b, f in self.comps.items()})

    def __sub__(self, other: "LieForm") -> "LieForm":
        if not isinstance(other, LieForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, s) -> "LieForm":
        if isinstance(s, (LieForm, PolyForm)):
            return NotImplemented
        s = frac(s)
        if not s:
            return LieForm.zero(self.L, self.level)
        return LieForm._wrap(self.L, self.level, {b: f.scale(s) for b, f in self.comps.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, LieForm):
            return self.level == other.level and self.comps == other.comps
        if other == 0:
            return not self.comps
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.level, frozenset(self.comps.items())))

    def __bool__(self) -> bool:
        return bool(self.comps)

    def __repr__(self) -> str:
        return f"LieForm({self.level}, {self.format()})"

    def format(self) -> str:
        if not self.comps:
            return "0"
        sym = self.L.basis.symbols
        return "; ".join(f"{sym[b]}: {render(self.comps[b])}" for b in sorted(self.comps))

    __str__ = format

    # -- grading ---------------------------------------------------------------

    def total_degrees(self) -> set[int]:
        deg = self.L.basis.degrees
        return {p + deg[b] for b, f in self.comps.items() for p in f.degrees()}

    @property
    def degree(self) -> int | None:
        ds = self.total_degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise DegreeMismatch(f"inhomogeneous Lie-valued form with degrees {sorted(ds)}")
        return ds.pop()

    def polynomial_degree(self) -> int:
        return max((f.poly_degree() for f in self.comps.values()), default=0)

    # -- dg Lie structure -------------------------------------------------------

    def d(self, diff: Sequence[Vec] | None = None) -> "LieForm":
        L = self.L
        diff = L.diff if diff is None else diff
        deg = L.basis.degrees
        out: dict = {}
        for b, f in self.comps.items():
            for k, c in diff[b].items():
                _acc(out, k, f.scale(c))
            ev, od = f.parity_split()
            # -(-1)^(p+j) dω ⊗ e_b
            if deg[b] % 2 == 0:
                _acc(out, b, od.d() - ev.d())
            else:
                _acc(out, b, ev.d() - od.d())
        return LieForm._wrap(L, self.level, out)

    def bracket(self, other: "LieForm") -> "LieForm":
        self._check(other)
        L = self.L
        deg = L.basis.degrees
        by_left = L._by_left
        out: dict = {}
        osplit = {b: g.parity_split() for b, g in other.comps.items()}
        for a, f in self.comps.items():
            rows = by_left.get(a)
            if not rows:
                continue
            fe, fo = f.parity_split()
            for b, w in rows:
                if b not in osplit:
                    continue
                ge, go = osplit[b]
                prod = PolyForm.zero(self.level)
                if fe:
                    prod = prod + fe.wedge(ge + go)
                if fo:
                    # sign (-1)^(|η| + |e_b|)
                    g_even_total = ge if deg[b] % 2 == 0 else go
                    g_odd_total = go if deg[b] % 2 == 0 else ge
                    prod = prod + fo.wedge(g_even_total) - fo.wedge(g_odd_total)
                if not prod:
                    continue
                for k, c in w.items():
                    _acc(out, k, prod.scale(c))
        return LieForm._wrap(L, self.level, out)

    def contract(self, vertex: int | None = None) -> "LieForm":
        """``H(ω⊗x) = (-1)^(p+j) hω⊗x``; satisfies ``dH + Hd = 1 - η ε_vertex``."""
        deg = self.L.basis.degrees
        out: dict = {}
        for b, f in self.comps.items():
            ev, od = f.parity_split()
            hf = contract_h(ev, vertex) - contract_h(od, vertex)
            _acc(out, b, hf if deg[b] % 2 == 0 else -hf)
        return LieForm._wrap(self.L, self.level, out)

    # -- simplicial structure ----------------------------------------------------

    def face(self, i: int) -> "LieForm":
        if self.level == 0:
            raise LevelZero("no faces at level 0")
        return LieForm._wrap(self.L, self.level - 1, _clean({b: face(f, i) for b, f in self.comps.items()}))

    def degeneracy(self, i: int) -> "LieForm":
        return LieForm._wrap(self.L, self.level + 1, _clean({b: degeneracy(f, i) for b, f in self.comps.items()}))

    def evaluate_vertex(self, vertex: int | None = None) -> Vec:
        return Vec({b: evaluate_vertex(f, vertex) for b, f in self.comps.items()})

    def integrate(self) -> Vec:
        """``Σ_b (∫ ω_b) e_b`` over the top-degree components."""
        return Vec({b: integrate(f) for b, f in self.comps.items()})

    def map_forms(self, fn) -> "LieForm":
        return LieForm(self.L, self.level, _clean({b: fn(f) for b, f in self.comps.items()}))


def _clean(d: dict) -> dict:
    return {b: f for b, f in d.items() if f}


def parse_lieform(L: Dgla, text: str, level: int) -> LieForm:
    """Inverse of :meth:`LieForm.format`: ``"x: t1*dt1; a: 1 - t1"``."""
    text = text.strip()
    if text == "0":
        return LieForm.zero(L, level)
    comps: dict = {}
    for chunk in text.split(";"):
        if ":" not in chunk:
            raise ParseError(f"expected 'symbol: form' in {chunk.strip()!r}")
        sym, body = chunk.split(":", 1)
        sym = sym.strip()
        if sym not in L.basis.symbols:
            raise ParseError(f"unknown symbol {sym!r}")
        _acc(comps, L.basis.index(sym), parse_form(body, level))
    return LieForm._wrap(L, level, comps)


class FormAlgebra:
    """``Ω_n(L)`` presented through the same interface as :class:`Dgla`.

    The generic routines of :mod:`mccalc.dgla` (curvature, BCH, gauge action)
    run unchanged on it; its nilpotency class is that of ``L``.
    """

    def __init__(self, L: Dgla, level: int):
        self.L = L
        self.level = level

    @property
    def nilpotency_class(self) -> int:
        return self.L.nilpotency_class

    def zero(self) -> LieForm:
        return LieForm.zero(self.L, self.level)

    def degree_of(self, v: LieForm) -> int | None:
        return v.degree

    def d(self, v: LieForm) -> LieForm:
        return v.d()

    def bracket(self, u: LieForm, v: LieForm) -> LieForm:
        return u.bracket(v)


# -- Maurer–Cartan simplices -----------------------------------------------------


def mc_check(L: Dgla, xi: LieForm) -> tuple[bool, LieForm]:
    """Whether ``xi`` lies in ``MC_n(L)``, with the curvature as witness."""
    curv = curvature(FormAlgebra(L, xi.level), xi)
    return (not curv), curv


_OP = {"d": "face", "s": "degeneracy"}


def simplicial_op(xi: LieForm | PolyForm, word: str | Iterable[str]) -> LieForm | PolyForm:
    """Apply a word such as ``"d0 s1"`` left to right."""
    ops = word.split() if isinstance(word, str) else list(word)
    for op in ops:
        kind, idx = op[:1], op[1:]
        if kind not in _OP or not idx.isdigit():
            raise ValueError(f"bad simplicial operator {op!r}")
        xi = getattr(xi, _OP[kind])(int(idx))
    return xi


def gauge_act_level(L: Dgla, g: LieForm, xi: LieForm, check: bool = False) -> LieForm:
    if g.level != xi.level:
        raise LevelMismatch("gauge element and simplex live at different levels")
    return gauge_act(FormAlgebra(L, xi.level), g, xi, check=check)


def vertex_evaluate(xi: LieForm) -> Vec:
    """``ε_n``: evaluation at the vertex selected by ``∂_0^n``."""
    return xi.evaluate_vertex()


def constant_include(L: Dgla, v: Mapping, level: int) -> LieForm:
    """``η_n``: ``v ↦ v⊗1``."""
    return LieForm.constant(L, v, level)


def gauge_solve_to_vertex(L: Dgla, xi: LieForm, vertex: int | None = None, check: bool = True) -> LieForm:
    """Return ``g`` with ``xi = g·(ε(xi)⊗1)`` and ``ε(g) = 0``.

    ``ε`` is evaluation at ``vertex`` (default: the vertex of ``∂_0^n``).  The
    correction at each step is ``H`` applied to the current residual, where
    ``H`` is the contraction towards that vertex.
    """
    n = xi.level
    if check:
        ok, _ = mc_check(L, xi)
        if not ok:
            raise NotMaurerCartan("simplex is not Maurer–Cartan")
    alg = FormAlgebra(L, n)
    rho = LieForm.constant(L, xi.evaluate_vertex(vertex), n)
    x = alg.zero()
    for _ in range(L.nilpotency_class + 2):
        r = gauge_act(alg, x, rho) - xi
        if not r:
            return x
        x = x + r.contract(vertex)
    raise OracleFailure("gauge solve did not converge within the nilpotency class")


# -- simplicial groups and horns --------------------------------------------------


class SimplicialGroup:
    """``G_•(L) = exp(Ω^0_•(L))`` (``kind="G"``) or ``exp_•(L)`` (``kind="exp"``).

    ``exp_•`` keeps only ``d``-closed elements, with ``d`` the differential of
    ``L`` (pass a twisted algebra for a stabilizer group).  The product is BCH.
    """

    def __init__(self, L: Dgla, kind: str = "G"):
        if kind not in ("G", "exp"):
            raise ValueError("kind must be 'G' or 'exp'")
        self.L = L
        self.kind = kind

    def identity(self, level: int) -> LieForm:
        return LieForm.zero(self.L, level)

    def mul(self, a: LieForm, b: LieForm) -> LieForm:
        if a.level != b.level:
            raise LevelMismatch("levels differ")
        return bch(FormAlgebra(self.L, a.level), a, b)

    def inv(self, a: LieForm) -> LieForm:
        return -a

    def face(self, a: LieForm, i: int) -> LieForm:
        return a.face(i)

    def degeneracy(self, a: LieForm, i: int) -> LieForm:
        return a.degeneracy(i)

    def contains(self, a: LieForm) -> bool:
        if a.L.basis != self.L.basis:
            return False
        if a.degree not in (None, 0):
            return False
        if self.kind == "exp":
            return not a.d(self.L.diff)
        return True

    def _rebase(self, a: LieForm) -> LieForm:
        return a if a.L is self.L else LieForm._wrap(self.L, a.level, a.comps)


@dataclass
class HornProblem:
    """Faces ``y_j`` (``j != missing``) of a would-be ``level``-simplex."""

    level: int
    missing: int
    faces: dict[int, LieForm]

    def __post_init__(self) -> None:
        n, k = self.level, self.missing
        if n < 1:
            raise ValueError("horns start at level 1")
        if not 0 <= k <= n:
            raise ValueError(f"missing face {k} out of range")
        if set(self.faces) != set(range(n + 1)) - {k}:
            raise ValueError(f"a horn at level {n} missing face {k} needs faces {sorted(set(range(n + 1)) - {k})}")
        for j, y in self.faces.items():
            if y.level != n - 1:
                raise LevelMismatch(f"face {j} lives at level {y.level}, expected {n - 1}")

    def check_compatible(self) -> None:
        _check_pairwise(self.faces)


def _check_pairwise(faces: Mapping[int, LieForm]) -> None:
    idx = sorted(faces)
    if not idx or faces[idx[0]].level == 0:
        return
    for a, i in enumerate(idx):
        for j in idx[a + 1 :]:
            if faces[j].face(i) != faces[i].face(j - 1):
                raise IncompatibleHorn(i, j)


def moore_filler(group: SimplicialGroup, horn: HornProblem, max_level: int = 4) -> LieForm:
    """Fill a compatible horn in a simplicial group.

    First ``g ← g·s_r((∂_r g)^{-1} y_r)`` for ``r = 0..k-1``, then
    ``g ← g·s_{r-1}((∂_r g)^{-1} y_r)`` for ``r = n..k+1``; each step fixes one
    face and leaves the earlier ones untouched.
    """
    n, k = horn.level, horn.missing
    if n > max_level:
        raise ValueError(f"horn level {n} exceeds the cap {max_level}")
    horn.check_compatible()
    faces = {j: group._rebase(y) for j, y in horn.faces.items()}
    g = group.identity(n)
    for r in range(k):
        u = group.mul(group.inv(g.face(r)), faces[r])
        if u:
            g = group.mul(g, u.degeneracy(r))
    for r in range(n, k, -1):
        u = group.mul(group.inv(g.face(r)), faces[r])
        if u:
            g = group.mul(g, u.degeneracy(r - 1))
    return g


def fill_partial(group: SimplicialGroup, level: int, faces: Mapping[int, LieForm]) -> LieForm:
    """Simplex with the prescribed faces, at least one index being free.

    Missing faces other than the smallest free index are first built
    recursively from the simplicial identities, then Moore's filler finishes.
    """
    faces = dict(faces)
    free = sorted(set(range(level + 1)) - set(faces))
    if not free:
        raise ValueError("at least one face must be free")
    if not faces:
        return group.identity(level)
    _check_pairwise(faces)
    k = free[0]
    for f in free[1:]:
        sub = {}
        for i, y in faces.items():
            if i < f:
                sub[i] = y.face(f - 1)
            else:
                sub[i - 1] = y.face(f)
        faces[f] = fill_partial(group, level - 1, sub) if level > 1 else group.identity(0)
    return moore_filler(group, HornProblem(level, k, faces), max_level=level)


def audit_filler(horn: HornProblem, filler: LieForm) -> dict[int, bool]:
    """Face-by-face comparison, independent of how the filler was built."""
    return {j: filler.face(j) == y for j, y in sorted(horn.faces.items())}


def mc_horn_filler(L: Dgla, horn: HornProblem, max_level: int = 3) -> LieForm:
    """Fill a compatible horn in ``MC_•(L)``.

    The base point is vertex ``k`` (opposite the missing face), which every
    given face contains.  Each face is written as ``g_j·(τ_0⊗1)``; the ``g_j``
    are corrected by elements of the stabilizer ``exp_•(L_{τ_0})`` until they
    form a compatible horn in ``G_•(L)``, which is then filled and applied to
    ``τ_0⊗1``.
    """
    n, k = horn.level, horn.missing
    if n > max_level:
        raise ValueError(f"horn level {n} exceeds the cap {max_level}")
    horn.check_compatible()
    for j, y in horn.faces.items():
        ok, _ = mc_check(L, y)
        if not ok:
            raise NotMaurerCartan(f"face {j} is not Maurer–Cartan")
    present = sorted(horn.faces)
    local = {j: (k if k < j else k - 1) for j in present}
    if n == 1:
        (j,) = present
        return horn.faces[j].degeneracy(0)
    tau0 = horn.faces[present[0]].evaluate_vertex(local[present[0]])
    G = SimplicialGroup(L, "G")
    stab = SimplicialGroup(twist(L, tau0), "exp")
    g0 = {j: gauge_solve_to_vertex(L, horn.faces[j], vertex=local[j], check=False) for j in present}
    s: dict[int, LieForm] = {}
    corrected: dict[int, LieForm] = {}
    for j in present:
        prescribed = {}
        for i in present:
            if i >= j:
                break
            c = G.mul(G.inv(g0[j].face(i)), g0[i].face(j - 1))
            if not stab.contains(stab._rebase(c)):
                raise OracleFailure(f"transition between faces {i} and {j} does not fix the base point")
            prescribed[i] = stab.mul(stab._rebase(c), s[i].face(j - 1))
        s[j] = fill_partial(stab, n - 1, prescribed)
        corrected[j] = G.mul(g0[j], G._rebase(s[j]))
    g = moore_filler(G, HornProblem(n, k, corrected))
    return gauge_act(FormAlgebra(L, n), g, LieForm.constant(L, tau0, n))


# -- Deligne groupoid comparison ------------------------------------------------------


@dataclass
class DiscretenessResult:
    discrete: bool
    witness: LieForm | None
    witness_symbol: str | None
    closed_dims: dict[tuple[int, int], int]
    constant_dim: int


def _closed_degree_zero_dim(L: Dgla, level: int, poly_bound: int) -> int:
    """``dim Z^0`` of the span of ``t^a dt_I ⊗ e_b`` with ``|a| <= poly_bound``."""
    import itertools

    deg = L.basis.degrees
    monos = [m for m in itertools.product(range(poly_bound + 1), repeat=level) if sum(m) <= poly_bound]
    cols = []
    for b in range(L.dim):
        p = -deg[b]
        if p < 0 or p > level:
            continue
        for dts in itertools.combinations(range(1, level + 1), p):
            for m in monos:
                w = LieForm._wrap(L, level, {b: PolyForm._wrap(level, {(m, dts): Fraction(1)})})
                img = w.d()
                col = {}
                for c, f in img.comps.items():
                    for key, v in f.terms.items():
                        col[(c, key)] = v
                cols.append(col)
    return len(nullspace_columns(cols))


def discreteness_check(L: Dgla, levels: Sequence[int] = (1, 2), poly_bound: int = 2) -> DiscretenessResult:
    """Whether ``Z^0 Ω_•(L)`` is a constant simplicial set.

    When some ``x`` has degree ``-k < 0`` the closed, non-constant element
    ``d(t_0 dt_1 ... dt_{k-1} ⊗ x)`` at level ``k`` is returned as witness.
    Truncated counts of ``dim Z^0 Ω_n(L)`` are reported next to ``dim Z^0(L)``.
    """
    deg = L.basis.degrees
    z0 = _closed_degree_zero_dim(L, 0, 0)
    dims = {(n, poly_bound): _closed_degree_zero_dim(L, n, poly_bound) for n in levels}
    neg = [b for b in range(L.dim) if deg[b] < 0]
    if not neg:
        return DiscretenessResult(True, None, None, dims, z0)
    b = max(neg, key=lambda i: (deg[i], -i))
    k = -deg[b]
    f = bary(k, 0)
    for i in range(1, k):
        f = f.wedge(PolyForm.dt(k, i))
    w = LieForm.of(L, f, Vec.basis(b)).d()
    if not w or w.d() or w.degree != 0:
        raise OracleFailure("discreteness witness is not a nonzero closed degree-0 form")
    if all(fm.degrees() == {0} and fm.poly_degree() == 0 for fm in w.comps.values()):
        raise OracleFailure("discreteness witness is constant")
    return DiscretenessResult(False, w, L.basis.symbols[b], dims, z0)


@dataclass
class DeligneReport:
    samples: int
    vertex_ok: list[bool] = field(default_factory=list)
    unique_ok: list[bool] = field(default_factory=list)
    reproduce_ok: list[bool] = field(default_factory=list)
    discreteness: DiscretenessResult | None = None

    @property
    def ok(self) -> bool:
        d = self.discreteness is None or self.discreteness.discrete
        return all(self.vertex_ok) and all(self.unique_ok) and all(self.reproduce_ok) and d


def deligne_compare(L: Dgla, gs: Sequence[LieForm], tau: Vec, check_discreteness: bool = True) -> DeligneReport:
    """Compare ``(g, τ) ↦ g·(τ⊗1)`` with its inverse through ``gauge_solve_to_vertex``.

    For ``L`` in degrees ``>= 0`` the returned ``h`` must equal ``g * η(ε g)^{-1}``
    (the unique representative with ``ε(h) = 0``), and ``ε(g·τ) = ε(g)·τ``.
    """
    if not L.is_nonnegatively_graded():
        raise NotNonNegativelyGraded("the Deligne comparison needs L concentrated in degrees >= 0")
    if curvature(L, tau):
        raise NotMaurerCartan("τ is not Maurer–Cartan")
    rep = DeligneReport(len(gs))
    for g in gs:
        n = g.level
        alg = FormAlgebra(L, n)
        xi = gauge_act(alg, g, LieForm.constant(L, tau, n))
        e = g.evaluate_vertex()
        h = gauge_solve_to_vertex(L, xi, check=False)
        rep.vertex_ok.append(xi.evaluate_vertex() == gauge_act(L, e, tau))
        rep.unique_ok.append(h == bch(alg, g, -LieForm.constant(L, e, n)))
        rep.reproduce_ok.append(gauge_act(alg, h, LieForm.constant(L, xi.evaluate_vertex(), n)) == xi)
    if check_discreteness:
        rep.discreteness = discreteness_check(L)
    return rep

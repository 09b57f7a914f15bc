"""Nilpotent dg Lie algebras given by structure constants.

Conventions used throughout the package:

* degrees are cohomological; ``d`` has degree +1;
* a bracket table entry ``(i, j)`` means ``[e_i, e_j]``, and the opposite
  order is filled in by graded antisymmetry
  ``[e_j, e_i] = -(-1)^{|e_i||e_j|} [e_i, e_j]``;
* ``ad_x(y) = [x, y]`` and ``d_tau = d + ad_tau``.

The generic routines (:func:`curvature`, :func:`bch`, :func:`gauge_act`, ...)
accept any *algebra* object exposing ``d``, ``bracket``, ``zero``,
``degree_of`` and ``nilpotency_class``; both :class:`Dgla` and the
form-valued algebras of :mod:`mccalc.simplicial` qualify.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Mapping, Sequence

from .textfmt import format_combo, parse_combo
from .scalar_linear import (
    CochainComplex,
    Echelon,
    GradedBasis,
    NoSolution,
    Vec,
    frac,
    solve_columns,
)

__all__ = [
    "DglaError",
    "DegreeMismatch",
    "NotNilpotent",
    "NotMaurerCartan",
    "OracleFailure",
    "PreconditionFailed",
    "ValidationError",
    "Dgla",
    "CheckResult",
    "ValidationReport",
    "validate",
    "lower_central_series",
    "curvature",
    "is_maurer_cartan",
    "twisted_d",
    "twist",
    "dynkin_coefficients",
    "bch",
    "gauge_act",
    "stabilizer_check",
    "gauge_lift",
    "cone",
]


class DglaError(Exception):
    pass


class DegreeMismatch(DglaError, ValueError):
    pass


class NotNilpotent(DglaError):
    pass


class NotMaurerCartan(DglaError, ValueError):
    pass


class OracleFailure(DglaError):
    pass


class PreconditionFailed(DglaError, ValueError):
    pass


class ValidationError(DglaError, ValueError):
    def __init__(self, check: str, witness: tuple):
        self.check = check
        self.witness = witness
        super().__init__(f"{check} fails at {witness}")


class Dgla:
    """Finite-dimensional dg Lie algebra over the rationals.

    Construction does not validate; call :func:`validate` (or use
    ``Dgla.build(..., check=True)``) for that.  The optional ``filtration``
    assigns each basis index a weight ``p`` meaning the element lies in
    ``F^p``; when omitted the lower central series is used.
    """

    def __init__(
        self,
        basis: GradedBasis,
        differential: Sequence[Mapping],
        table: Mapping[tuple[int, int], Mapping],
        filtration: Sequence[int] | None = None,
        name: str = "",
    ) -> None:
        self.basis = basis
        self.name = name
        self.diff = tuple(Vec(v) for v in differential)
        if len(self.diff) != len(basis):
            raise ValueError("differential needs one image per basis element")
        full: dict[tuple[int, int], Vec] = {}
        deg = basis.degrees
        for (i, j), v in table.items():
            v = Vec(v)
            if not v:
                continue
            full[(i, j)] = v
            if (j, i) not in table:
                sign = -1 if (deg[i] * deg[j]) % 2 == 0 else 1
                full[(j, i)] = v * sign
        self.table = full
        self._by_left: dict[int, list[tuple[int, Vec]]] = {}
        for (i, j), v in sorted(full.items()):
            self._by_left.setdefault(i, []).append((j, v))
        self.filtration_override = tuple(filtration) if filtration is not None else None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def build(
        cls,
        generators: Sequence[tuple[str, int]],
        differential: Mapping[str, Mapping[str, object]] | None = None,
        brackets: Mapping[tuple[str, str], Mapping[str, object]] | None = None,
        filtration: Mapping[str, int] | None = None,
        name: str = "",
        check: bool = True,
    ) -> "Dgla":
        """Build from symbols and *cohomological* degrees."""
        basis = GradedBasis(tuple(s for s, _ in generators), tuple(d for _, d in generators))
        idx = basis.index
        diff = [Vec() for _ in range(len(basis))]
        for s, img in (differential or {}).items():
            diff[idx(s)] = Vec({idx(t): c for t, c in img.items()})
        table = {}
        for (s, t), img in (brackets or {}).items():
            table[(idx(s), idx(t))] = Vec({idx(u): c for u, c in img.items()})
        filt = None
        if filtration is not None:
            filt = [int(filtration.get(s, 1)) for s in basis.symbols]
        L = cls(basis, diff, table, filt, name=name)
        if check:
            report = validate(L)
            if not report.ok:
                bad = report.first_failure()
                raise ValidationError(bad.name, bad.witness)
        return L

    # -- basic linear structure ------------------------------------------------

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def zero(self) -> Vec:
        return Vec()

    def e(self, symbol: str | int) -> Vec:
        i = symbol if isinstance(symbol, int) else self.basis.index(symbol)
        return Vec.basis(i)

    def element(self, coeffs: Mapping[str, object] | str) -> Vec:
        if isinstance(coeffs, str):
            coeffs = parse_combo(coeffs, set(self.basis.symbols))
        return Vec({self.basis.index(s): c for s, c in coeffs.items()})

    def format(self, v: Mapping) -> str:
        return format_combo({self.basis.symbols[i]: c for i, c in v.items()}, self.basis.symbols)

    def d(self, v: Vec) -> Vec:
        out: dict = {}
        for i, c in v.items():
            for k, a in self.diff[i].items():
                s = out.get(k, 0) + c * a
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return Vec._wrap(out)

    def bracket(self, u: Vec, v: Vec) -> Vec:
        out: dict = {}
        by_left = self._by_left
        for i, a in u.items():
            for j, w in by_left.get(i, ()):
                b = v.coeff(j)
                if not b:
                    continue
                ab = a * b
                for k, c in w.items():
                    s = out.get(k, 0) + ab * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return Vec._wrap(out)

    def degree_of(self, v: Mapping) -> int | None:
        """Degree of a homogeneous vector (``None`` for zero)."""
        degs = {self.basis.degrees[i] for i in v}
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeMismatch(f"inhomogeneous vector with degrees {sorted(degs)}")
        return degs.pop()

    def degree_part(self, v: Mapping, k: int) -> Vec:
        return Vec({i: c for i, c in v.items() if self.basis.degrees[i] == k})

    def complex(self, differential: Sequence[Vec] | None = None) -> CochainComplex:
        return CochainComplex(self.basis, tuple(differential or self.diff))

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.basis.degrees

    def is_nonnegatively_graded(self) -> bool:
        return all(d >= 0 for d in self.basis.degrees)

    # -- filtration ------------------------------------------------------------

    @cached_property
    def lcs(self) -> list[list[Vec]]:
        return lower_central_series(self)

    @property
    def nilpotency_class(self) -> int:
        if self.filtration_override is not None:
            return _class_from_weights(self, self.filtration_override)
        return len(self.lcs) - 1

    @cached_property
    def weights(self) -> tuple[int, ...] | None:
        """Filtration weight per basis element, if the basis is adapted."""
        if self.filtration_override is not None:
            return self.filtration_override
        layers = self.lcs
        w = [1] * self.dim
        for p, layer in enumerate(layers[1:], start=2):
            span = Echelon()
            for n, v in enumerate(layer):
                span.add(v, n)
            members = [i for i in range(self.dim) if span.contains(Vec.basis(i))]
            if len(members) != len(layer):
                return None
            for i in members:
                w[i] = p
        return tuple(w)

    def __repr__(self) -> str:
        return f"Dgla({self.name or 'anonymous'}, dim={self.dim})"


def _class_from_weights(L: Dgla, weights: Sequence[int]) -> int:
    # F^p = span{e_i : w_i >= p}; class is the largest p with F^p nonzero.
    return max(weights) if weights else 0


# -- validation ---------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: tuple = ()
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[CheckResult]
    nilpotency_class: int | None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> CheckResult | None:
        return next((c for c in self.checks if not c.passed), None)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def validate(L: Dgla) -> ValidationReport:
    """Check every dg Lie axiom on basis elements; failures carry witnesses."""
    B = L.basis
    sym = B.symbols
    deg = B.degrees
    n = L.dim
    e = [Vec.basis(i) for i in range(n)]
    checks: list[CheckResult] = []

    def first(name, it):
        for w in it:
            checks.append(CheckResult(name, False, tuple(sym[i] for i in w)))
            return
        checks.append(CheckResult(name, True))

    first("degree", (
        (i,) for i in range(n) if any(deg[k] != deg[i] + 1 for k in L.diff[i])
    ))
    bad_bracket_degree = [
        (i, j) for (i, j), v in sorted(L.table.items()) if any(deg[k] != deg[i] + deg[j] for k in v)
    ]
    first("bracket_degree", iter(bad_bracket_degree))
    first("d_squared", ((i,) for i in range(n) if L.d(L.diff[i])))

    def antisym():
        for (i, j), v in sorted(L.table.items()):
            sign = -1 if (deg[i] * deg[j]) % 2 == 0 else 1
            if L.table.get((j, i), Vec()) != v * sign:
                yield (i, j)

    first("antisymmetry", antisym())

    def derivation():
        for i in range(n):
            for j in range(n):
                lhs = L.d(L.bracket(e[i], e[j]))
                rhs = L.bracket(L.diff[i], e[j]) + L.bracket(e[i], L.diff[j]) * (-1) ** (deg[i] % 2)
                if lhs != rhs:
                    yield (i, j)

    first("derivation", derivation())

    def jacobi():
        for i in range(n):
            for j in range(n):
                xy = L.bracket(e[i], e[j])
                for k in range(n):
                    lhs = L.bracket(e[i], L.bracket(e[j], e[k]))
                    rhs = L.bracket(xy, e[k]) + L.bracket(e[j], L.bracket(e[i], e[k])) * (
                        -1
                    ) ** ((deg[i] * deg[j]) % 2)
                    if lhs != rhs:
                        yield (i, j, k)

    first("jacobi", jacobi())

    cls: int | None = None
    try:
        cls = L.nilpotency_class if L.filtration_override is not None else len(lower_central_series(L)) - 1
        checks.append(CheckResult("nilpotency", True, detail=f"class {cls}"))
    except NotNilpotent as exc:
        checks.append(CheckResult("nilpotency", False, detail=str(exc)))

    if L.filtration_override is not None:
        w = L.filtration_override

        def filt():
            for i in range(n):
                if any(w[k] < w[i] for k in L.diff[i]):
                    yield (i,)
            for (i, j), v in sorted(L.table.items()):
                if any(w[k] < w[i] + w[j] for k in v):
                    yield (i, j)

        first("filtration", filt())
    else:
        # the lower central series satisfies [F^p, F^q] ⊆ F^{p+q} and d F^p ⊆ F^p; verify
        ok = True
        witness: tuple = ()
        if cls is not None:
            layers = L.lcs
            spans = []
            for layer in layers:
                s = Echelon()
                for m, v in enumerate(layer):
                    s.add(v, m)
                spans.append(s)
            for p, lp in enumerate(layers, start=1):
                for v in lp:
                    if not spans[p - 1].contains(L.d(v)):
                        ok, witness = False, (f"d F^{p}",)
                    for q, lq in enumerate(layers, start=1):
                        target = spans[p + q - 1] if p + q - 1 < len(spans) else None
                        for u in lq:
                            b = L.bracket(v, u)
                            if b and (target is None or not target.contains(b)):
                                ok, witness = False, (f"[F^{p},F^{q}]",)
        checks.append(CheckResult("filtration", ok, witness))
    return ValidationReport(checks, cls)


def lower_central_series(L: Dgla) -> list[list[Vec]]:
    """Layers ``F^1 ⊋ F^2 ⊋ ... ⊋ F^{c+1} = 0`` as echelon bases.

    The returned list has ``c + 1`` entries, the last one empty.
    """
    n = L.dim
    current = [Vec.basis(i) for i in range(n)]
    ech = Echelon()
    for m, v in enumerate(current):
        ech.add(v, m)
    layers = [ech.rows()]
    while layers[-1]:
        ech = Echelon()
        m = 0
        for i in range(n):
            ei = Vec.basis(i)
            for v in layers[-1]:
                b = L.bracket(ei, v)
                if b:
                    ech.add(b, m)
                    m += 1
        nxt = ech.rows()
        if len(nxt) == len(layers[-1]):
            raise NotNilpotent(f"lower central series stabilises in dimension {len(nxt)}")
        layers.append(nxt)
    return layers


# -- Maurer–Cartan elements and gauge action -----------------------------------


def curvature(alg, tau):
    """``d tau + 1/2 [tau, tau]``."""
    deg = alg.degree_of(tau)
    if deg is not None and deg != 1:
        raise DegreeMismatch(f"Maurer–Cartan elements have degree 1, got {deg}")
    return alg.d(tau) + alg.bracket(tau, tau) * Fraction(1, 2)


def is_maurer_cartan(alg, tau) -> bool:
    return not curvature(alg, tau)


def twisted_d(alg, tau, x):
    return alg.d(x) + alg.bracket(tau, x)


def twist(L: Dgla, tau: Vec, check: bool = True) -> Dgla:
    """The algebra ``L_tau``: same bracket, differential ``d + ad_tau``."""
    if check and curvature(L, tau):
        raise NotMaurerCartan("twisting element does not satisfy the MC equation")
    diff = [L.diff[i] + L.bracket(tau, Vec.basis(i)) for i in range(L.dim)]
    table = {k: v for k, v in L.table.items()}
    T = Dgla(L.basis, diff, table, L.filtration_override, name=f"{L.name}_tau" if L.name else "")
    if L.filtration_override is None:
        # same bracket, so the lower central series carries over
        T.__dict__["lcs"] = L.lcs
    return T


@lru_cache(maxsize=None)
def dynkin_coefficients(c: int) -> dict[tuple[int, ...], Fraction]:
    """Coefficients of right-nested brackets in the Dynkin series up to length ``c``.

    Keys are words in ``0`` (for x) and ``1`` (for y); the word ``w`` stands for
    ``[w_1, [w_2, [..., w_m]]]``.
    """
    coeffs: dict[tuple[int, ...], Fraction] = {}

    def blocks(m, n):
        if n == 0:
            if m == 0:
                yield ()
            return
        for size in range(1, m - (n - 1) + 1):
            for r in range(size + 1):
                for rest in blocks(m - size, n - 1):
                    yield ((r, size - r),) + rest

    for m in range(1, c + 1):
        for n in range(1, m + 1):
            for bl in blocks(m, n):
                word = tuple(itertools.chain.from_iterable((0,) * r + (1,) * s for r, s in bl))
                if len(word) >= 2 and word[-1] == word[-2]:
                    continue  # ends in [z, z] = 0 for degree-zero z
                denom = m * math.prod(math.factorial(r) * math.factorial(s) for r, s in bl)
                coeffs[word] = coeffs.get(word, Fraction(0)) + Fraction((-1) ** (n - 1), n * denom)
    return {w: a for w, a in coeffs.items() if a}


def bch(alg, x, y):
    """``log(exp x · exp y)`` via the Dynkin series, exact by nilpotency."""
    c = alg.nilpotency_class
    if c <= 1:
        return x + y
    gens = (x, y)
    memo: dict[tuple[int, ...], object] = {}

    def nested(w):
        if w in memo:
            return memo[w]
        if len(w) == 1:
            r = gens[w[0]]
        else:
            inner = nested(w[1:])
            r = alg.bracket(gens[w[0]], inner) if inner else inner
        memo[w] = r
        return r

    z = alg.zero()
    for w, a in sorted(dynkin_coefficients(c).items(), key=lambda kv: (len(kv[0]), kv[0])):
        t = nested(w)
        if t:
            z = z + t * a
    return z


def gauge_act(alg, x, tau, check: bool = False):
    """``x·tau = tau - sum_k ad_x^k(d_tau x)/(k+1)!``."""
    if check and curvature(alg, tau):
        raise NotMaurerCartan("gauge action needs a Maurer–Cartan element")
    term = twisted_d(alg, tau, x)
    out = tau
    k = 0
    limit = max(alg.nilpotency_class, 1) + 1
    while term:
        if k > limit:
            raise NotNilpotent("ad_x did not terminate within the nilpotency class")
        out = out - term * Fraction(1, math.factorial(k + 1))
        term = alg.bracket(x, term)
        k += 1
    return out


def stabilizer_check(alg, x, tau) -> bool:
    """Whether ``x`` fixes ``tau`` under the gauge action."""
    return gauge_act(alg, x, tau) == tau


def gauge_lift(
    alg,
    f: Callable,
    section: Callable,
    target_alg,
    primitive_oracle: Callable,
    tau,
    rho,
    y,
):
    """Find ``x`` with ``tau = x·rho`` and ``f(x) = y`` by filtration induction.

    ``section`` is any linear right inverse of ``f``.  At step ``n`` the oracle
    receives the residual ``x_n·rho - tau``, which lies in ``F^n I`` and is a
    cocycle modulo ``F^{n+1} I``, and must return ``c`` in ``F^n I`` with
    ``dc`` congruent to it; returning ``None`` signals that the vanishing
    hypothesis on ``H^1`` failed.
    """
    if f(tau) != gauge_act(target_alg, y, f(rho)):
        raise PreconditionFailed("f(tau) != y·f(rho)")
    x = section(y)
    steps = max(alg.nilpotency_class, 1) + 1
    for n in range(1, steps + 1):
        residual = gauge_act(alg, x, rho) - tau
        if not residual:
            if f(x) != y:
                raise OracleFailure("oracle primitive left the kernel of f")
            return x
        c = primitive_oracle(n, residual)
        if c is None:
            raise OracleFailure(f"no primitive at filtration step {n}")
        x = x + c
    raise OracleFailure("residual did not vanish within the nilpotency class")


# -- Quillen's cone sL # L ------------------------------------------------------


def cone(L: Dgla) -> Dgla:
    """The dg Lie algebra ``sL # L`` on ``{s e_i} ∪ {e_i}``.

    ``[sx, sy] = 0``, ``[sx, y] = s[x, y]``, ``d(sx) = x - s(dx)`` and ``L``
    sits inside as a dg Lie subalgebra.
    """
    n = L.dim
    syms = tuple(f"s{s}" for s in L.basis.symbols) + L.basis.symbols
    degs = tuple(d - 1 for d in L.basis.degrees) + L.basis.degrees
    basis = GradedBasis(syms, degs)

    def shift(v: Vec) -> Vec:
        return Vec._wrap({i: c for i, c in v.items()})

    def unshift(v: Vec) -> Vec:
        return Vec._wrap({i + n: c for i, c in v.items()})

    diff = [unshift(Vec.basis(i)) - shift(L.diff[i]) for i in range(n)]
    diff += [unshift(L.diff[i]) for i in range(n)]
    table = {}
    for (i, j), v in L.table.items():
        table[(i + n, j + n)] = unshift(v)
        table[(i, j + n)] = shift(v)
    C = Dgla(basis, diff, table, name=f"cone({L.name})" if L.name else "cone")
    return C

"""Polynomial differential forms on the standard simplex.

A form at level ``n`` is stored in canonical coordinates ``t_1, ..., t_n``;
``t_0`` is eliminated through ``t_0 = 1 - (t_1 + ... + t_n)``.  Terms are keyed
by ``(exponents, dts)`` where ``dts`` is a strictly increasing tuple of indices
in ``1..n``.  Faces, degeneracies and the extension operator are all
barycentric substitutions followed by re-canonicalisation, so equality of
forms is plain dictionary equality.

Orientation: ``∫_{Δ^n} dt_1 ... dt_n = 1/n!``, hence ``∫ ω^n = 1`` for the
volume form ``ω^n = n! dt_1 ... dt_n``; with this choice
``∫_{Δ^n} dα = ∫_{Δ^{n-1}} Σ_i (-1)^i ∂_i α``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .scalar_linear import frac
from .textfmt import ParseError, format_scalar

__all__ = [
    "FormError",
    "LevelZero",
    "LevelMismatch",
    "FacesNotZero",
    "PolyForm",
    "bary",
    "volume_form",
    "volume_primitive",
    "face",
    "degeneracy",
    "differential",
    "wedge",
    "integrate",
    "evaluate_vertex",
    "constant_include",
    "extend_nu",
    "contract_h",
    "alternating_face_sum",
    "parse_form",
    "render",
]


class FormError(Exception):
    pass


class LevelZero(FormError, ValueError):
    pass


class LevelMismatch(FormError, ValueError):
    pass


class FacesNotZero(FormError, ValueError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"face {index} of the form is nonzero")


@lru_cache(maxsize=65536)
def _merge(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted index tuple of ``dt_a ∧ dt_b`` (``None`` if it vanishes)."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    if set(a) & set(b):
        return None
    inv = sum(1 for x in a for y in b if x > y)
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


def _add_mono(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


class PolyForm:
    """Element of ``Ω_n``: an exact polynomial differential form."""

    __slots__ = ("level", "terms", "_hash")

    def __init__(self, level: int, terms: Mapping | None = None):
        if level < 0:
            raise ValueError("level must be nonnegative")
        self.level = level
        d: dict = {}
        for (mono, dts), c in (terms or {}).items():
            mono = tuple(mono)
            dts = tuple(dts)
            if len(mono) != level or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} at level {level}")
            if any(not 1 <= i <= level for i in dts):
                raise ValueError(f"dt indices {dts} out of range at level {level}")
            if len(set(dts)) != len(dts):
                continue
            srt = tuple(sorted(dts))
            sign = _perm_sign(dts)
            c = frac(c) * sign
            if c:
                key = (mono, srt)
                s = d.get(key, 0) + c
                if s:
                    d[key] = s
                else:
                    d.pop(key, None)
        self.terms = d
        self._hash = None

    @classmethod
    def _wrap(cls, level: int, d: dict) -> "PolyForm":
        f = cls.__new__(cls)
        f.level = level
        f.terms = d
        f._hash = None
        return f

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, level: int) -> "PolyForm":
        return cls._wrap(level, {})

    @classmethod
    def constant(cls, level: int, c=1) -> "PolyForm":
        c = frac(c)
        return cls._wrap(level, {((0,) * level, ()): c} if c else {})

    @classmethod
    def t(cls, level: int, i: int) -> "PolyForm":
        return bary(level, i)

    @classmethod
    def dt(cls, level: int, i: int) -> "PolyForm":
        return bary(level, i).d()

    @classmethod
    def monomial(cls, level: int, exponents: Sequence[int], dts: Sequence[int] = (), c=1) -> "PolyForm":
        return cls(level, {(tuple(exponents), tuple(dts)): c})

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "PolyForm") -> None:
        if other.level != self.level:
            raise LevelMismatch(f"levels {self.level} and {other.level} differ")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if not isinstance(other, PolyForm):
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(b) > len(a):
            a, b = b, a
        d = dict(a)
        for k, c in b.items():
            s = d.get(k, 0) + c
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return PolyForm._wrap(self.level, d)

    def __neg__(self) -> "PolyForm":
        return PolyForm._wrap(self.level, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "PolyForm":
        s = frac(s)
        if not s:
            return PolyForm.zero(self.level)
        return PolyForm._wrap(self.level, {k: c * s for k, c in self.terms.items()})

    def __mul__(self, other) -> "PolyForm":
        if isinstance(other, PolyForm):
            return self.wedge(other)
        return self.scale(other)

    def __rmul__(self, other) -> "PolyForm":
        return self.scale(other)

    def wedge(self, other: "PolyForm") -> "PolyForm":
        self._check(other)
        d: dict = {}
        for (m1, i1), c1 in self.terms.items():
            for (m2, i2), c2 in other.terms.items():
                mg = _merge(i1, i2)
                if mg is None:
                    continue
                sign, dts = mg
                key = (_add_mono(m1, m2), dts)
                s = d.get(key, 0) + (c1 * c2 if sign > 0 else -c1 * c2)
                if s:
                    d[key] = s
                else:
                    d.pop(key, None)
        return PolyForm._wrap(self.level, d)

    def __pow__(self, k: int) -> "PolyForm":
        out = PolyForm.constant(self.level)
        for _ in range(k):
            out = out.wedge(self)
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, PolyForm):
            return self.level == other.level and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.level, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"PolyForm({self.level}, {self})"

    def __str__(self) -> str:
        return render(self)

    # -- grading ---------------------------------------------------------------

    def degrees(self) -> set[int]:
        return {len(dts) for (_, dts) in self.terms}

    @property
    def degree(self) -> int | None:
        """Form degree of a homogeneous form (``None`` for zero)."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous form with degrees {sorted(ds)}")
        return ds.pop()

    def part(self, k: int) -> "PolyForm":
        return PolyForm._wrap(self.level, {key: c for key, c in self.terms.items() if len(key[1]) == k})

    def parity_split(self) -> tuple["PolyForm", "PolyForm"]:
        ev, od = {}, {}
        for key, c in self.terms.items():
            (od if len(key[1]) % 2 else ev)[key] = c
        return PolyForm._wrap(self.level, ev), PolyForm._wrap(self.level, od)

    def poly_degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=0)

    # -- calculus --------------------------------------------------------------

    def d(self) -> "PolyForm":
        d: dict = {}
        for (mono, dts), c in self.terms.items():
            for j, a in enumerate(mono, start=1):
                if not a or j in dts:
                    continue
                before = sum(1 for i in dts if i < j)
                new_dts = tuple(sorted(dts + (j,)))
                new_mono = mono[: j - 1] + (a - 1,) + mono[j:]
                v = c * a if before % 2 == 0 else -c * a
                key = (new_mono, new_dts)
                s = d.get(key, 0) + v
                if s:
                    d[key] = s
                else:
                    d.pop(key, None)
        return PolyForm._wrap(self.level, d)

    def face(self, i: int) -> "PolyForm":
        return face(self, i)

    def degeneracy(self, i: int) -> "PolyForm":
        return degeneracy(self, i)

    def integrate(self) -> Fraction:
        return integrate(self)


def _perm_sign(seq: Sequence[int]) -> int:
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


@lru_cache(maxsize=None)
def bary(level: int, m: int) -> PolyForm:
    """The barycentric coordinate ``t_m`` as a form at ``level``."""
    if not 0 <= m <= level:
        raise ValueError(f"t_{m} does not exist at level {level}")
    zero = (0,) * level
    if m == 0:
        d = {(zero, ()): Fraction(1)}
        for i in range(level):
            d[(zero[:i] + (1,) + zero[i + 1 :], ())] = Fraction(-1)
        return PolyForm._wrap(level, d)
    return PolyForm._wrap(level, {(zero[: m - 1] + (1,) + zero[m:], ()): Fraction(1)})


def _bary_pullback(form: PolyForm, target: int, images: Sequence[Sequence[int]]) -> PolyForm:
    """Substitute ``T_j -> sum_{m in images[j]} t_m`` (``j = 1..n``) into ``form``."""
    n = form.level
    img = [None] + [_sum_bary(target, tuple(images[j])) for j in range(1, n + 1)]
    dimg = [None] + [img[j].d() for j in range(1, n + 1)]
    powers: dict[tuple[int, int], PolyForm] = {}

    def pw(j: int, a: int) -> PolyForm:
        key = (j, a)
        if key not in powers:
            powers[key] = PolyForm.constant(target) if a == 0 else pw(j, a - 1).wedge(img[j])
        return powers[key]

    out: dict = {}
    for (mono, dts), c in form.terms.items():
        acc = PolyForm.constant(target, c)
        for j, a in enumerate(mono, start=1):
            if a:
                acc = acc.wedge(pw(j, a))
                if not acc:
                    break
        for j in dts:
            if not acc:
                break
            acc = acc.wedge(dimg[j])
        for k, v in acc.terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return PolyForm._wrap(target, out)


@lru_cache(maxsize=None)
def _sum_bary(level: int, idx: tuple[int, ...]) -> PolyForm:
    out = PolyForm.zero(level)
    for m in idx:
        out = out + bary(level, m)
    return out


def _face_images(n: int, i: int) -> list[list[int]]:
    # T_j -> t_j (j < i), 0 (j == i), t_{j-1} (j > i)
    return [[j] if j < i else ([] if j == i else [j - 1]) for j in range(n + 1)]


def _degeneracy_images(n: int, i: int) -> list[list[int]]:
    # T_j -> t_j (j < i), t_i + t_{i+1} (j == i), t_{j+1} (j > i)
    return [[j] if j < i else ([i, i + 1] if j == i else [j + 1]) for j in range(n + 1)]


def face(form: PolyForm, i: int) -> PolyForm:
    """``∂_i ω(t_0..t_{n-1}) = ω(t_0, .., t_{i-1}, 0, t_i, .., t_{n-1})``."""
    n = form.level
    if n == 0:
        raise LevelZero("no faces at level 0")
    if not 0 <= i <= n:
        raise ValueError(f"face index {i} out of range at level {n}")
    return _bary_pullback(form, n - 1, _face_images(n, i))


def degeneracy(form: PolyForm, i: int) -> PolyForm:
    """``s_i η(t_0..t_{n+1}) = η(t_0, .., t_i + t_{i+1}, .., t_{n+1})``."""
    n = form.level
    if not 0 <= i <= n:
        raise ValueError(f"degeneracy index {i} out of range at level {n}")
    return _bary_pullback(form, n + 1, _degeneracy_images(n, i))


def differential(form: PolyForm) -> PolyForm:
    return form.d()


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    return a.wedge(b)


def alternating_face_sum(form: PolyForm) -> PolyForm:
    """``∂ = Σ_i (-1)^i ∂_i``."""
    n = form.level
    out = PolyForm.zero(n - 1)
    for i in range(n + 1):
        f = face(form, i)
        out = out + f if i % 2 == 0 else out - f
    return out


def volume_form(n: int) -> PolyForm:
    """``ω^n = n! dt_1 ... dt_n``."""
    return PolyForm._wrap(n, {((0,) * n, tuple(range(1, n + 1))): Fraction(math.factorial(n))})


def volume_primitive(k: int) -> PolyForm:
    """``ω̃^k = k! Σ_{i=1}^{k+1} (-1)^{i-1} t_i dt_1..^dt_i..dt_{k+1}`` at level ``k+1``.

    Satisfies ``d ω̃^k = ω^{k+1}`` and ``∂ ω̃^k = ω^k``.
    """
    n = k + 1
    d = {}
    for i in range(1, n + 1):
        mono = tuple(1 if j == i else 0 for j in range(1, n + 1))
        dts = tuple(j for j in range(1, n + 1) if j != i)
        d[(mono, dts)] = Fraction((-1) ** (i - 1) * math.factorial(k))
    return PolyForm._wrap(n, d)


def integrate(form: PolyForm, strict: bool = False) -> Fraction:
    """Exact ``∫_{Δ^n}`` of the top-degree part.

    Forms without a top-degree component integrate to zero; with
    ``strict=True`` any lower-degree component raises instead.
    """
    n = form.level
    full = tuple(range(1, n + 1))
    total = Fraction(0)
    for (mono, dts), c in form.terms.items():
        if dts != full:
            if strict:
                raise ValueError(f"form has a component of degree {len(dts)} < {n}")
            continue
        total += c * Fraction(math.prod(math.factorial(a) for a in mono), math.factorial(n + sum(mono)))
    return total


def evaluate_vertex(form: PolyForm, vertex: int | None = None) -> Fraction:
    """Value of the 0-form part at a vertex (default: vertex ``n``, i.e. ``∂_0^n``)."""
    n = form.level
    v = n if vertex is None else vertex
    total = Fraction(0)
    for (mono, dts), c in form.terms.items():
        if dts:
            continue
        if v == 0:
            if not any(mono):
                total += c
        elif all(e == 0 for j, e in enumerate(mono, start=1) if j != v):
            total += c
    return total


def constant_include(c, level: int) -> PolyForm:
    return PolyForm.constant(level, c)


def extend_nu(form: PolyForm) -> PolyForm:
    """Extend a form with vanishing faces to level ``n+1``.

    ``ν = Σ_{j=1}^{n+1} t_j ω(t_1, .., t_{j-1}, t_j + t_0, t_{j+1}, .., t_{n+1})``
    has ``∂_0 ν = ω`` and ``∂_i ν = 0`` for ``0 < i <= n``.
    """
    n = form.level
    if n > 0:
        for i in range(n + 1):
            if face(form, i):
                raise FacesNotZero(i)
    out = PolyForm.zero(n + 1)
    for j in range(1, n + 2):
        # old T_k -> t_{k+1}, except T_{j-1} -> t_j + t_0
        images = [[j, 0] if k == j - 1 else [k + 1] for k in range(n + 1)]
        out = out + bary(n + 1, j).wedge(_bary_pullback(form, n + 1, images))
    return out


def contract_h(form: PolyForm, vertex: int | None = None) -> PolyForm:
    """Scaling homotopy towards a vertex (default: the one picked by ``∂_0^n``).

    Satisfies ``d h ω + h d ω = ω - ε(ω)`` where ``ε`` evaluates the 0-form part
    at that vertex; ``h`` lowers form degree by one and ``ε(h ω) = 0``.
    """
    n = form.level
    v = n if vertex is None else vertex
    out = PolyForm.zero(n)
    if n == 0:
        return out
    one = PolyForm.constant(n)
    w = [None] + [bary(n, i) - one if i == v else bary(n, i) for i in range(1, n + 1)]
    for (mono, dts), c in form.terms.items():
        r = len(dts)
        if r == 0:
            continue
        P = PolyForm.zero(n)
        for p, ip in enumerate(dts):
            rest = dts[:p] + dts[p + 1 :]
            piece = w[ip].wedge(PolyForm._wrap(n, {((0,) * n, rest): Fraction(1)}))
            P = P + piece if p % 2 == 0 else P - piece
        if v == 0:
            base = PolyForm._wrap(n, {(mono, ()): c / (r + sum(mono))})
            out = out + base.wedge(P)
            continue
        av = mono[v - 1]
        others = mono[: v - 1] + (0,) + mono[v:]
        e0 = r - 1 + sum(others)
        Q = PolyForm.zero(n)
        tv1 = w[v]
        power = PolyForm.constant(n)
        for b in range(av + 1):
            Q = Q + power.scale(Fraction(math.comb(av, b), e0 + b + 1))
            power = power.wedge(tv1)
        base = PolyForm._wrap(n, {(others, ()): c})
        out = out + base.wedge(Q).wedge(P)
    return out


def render(form: PolyForm) -> str:
    """Deterministic text such as ``1/2*t1^2*dt1*dt2 - t2``."""
    if not form.terms:
        return "0"
    parts = []
    for (mono, dts), c in sorted(form.terms.items(), key=lambda kv: (len(kv[0][1]), kv[0][1], kv[0][0])):
        factors = []
        for j, a in enumerate(mono, start=1):
            if a == 1:
                factors.append(f"t{j}")
            elif a > 1:
                factors.append(f"t{j}^{a}")
        factors += [f"dt{j}" for j in dts]
        a = abs(c)
        if not factors:
            body = format_scalar(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = format_scalar(a) + "*" + "*".join(factors)
        parts.append((c < 0, body))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


_FACTOR = re.compile(r"(\d+(?:/\d+)?)|dt(\d+)|t(\d+)(?:\^(\d+))?")


def parse_form(text: str, level: int) -> PolyForm:
    """Inverse of :func:`render`; also accepts ``t0`` and ``dt0``."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty form")
    if s[0] not in "+-":
        s = "+" + s
    out = PolyForm.zero(level)
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        term = PolyForm.constant(level, -1 if sign == "-" else 1)
        for factor in body.split("*"):
            m = _FACTOR.fullmatch(factor)
            if not m:
                raise ParseError(f"cannot parse factor {factor!r}")
            num, dti, ti, power = m.groups()
            try:
                if num is not None:
                    term = term.scale(Fraction(num))
                elif dti is not None:
                    term = term.wedge(PolyForm.dt(level, int(dti)))
                else:
                    term = term.wedge(PolyForm.t(level, int(ti)) ** int(power or 1))
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        out = out + term
    if re.sub(r"([+-])([^+-]+)", "", s):
        raise ParseError(f"cannot parse {text!r}")
    return out

"""Exact rational linear algebra: sparse vectors, echelon forms, cohomology.

Everything here works over :class:`fractions.Fraction`; there is no floating
point anywhere.  Vectors are sparse mappings from hashable, mutually sortable
keys to nonzero rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

__all__ = [
    "LinearAlgebraError",
    "NoSolution",
    "DimensionMismatch",
    "NotACocycle",
    "NotAComplex",
    "Vec",
    "Echelon",
    "GradedBasis",
    "CochainComplex",
    "Cohomology",
    "frac",
    "solve_linear",
    "solve_columns",
    "nullspace_columns",
    "cohomology",
]


class LinearAlgebraError(Exception):
    pass


class NoSolution(LinearAlgebraError):
    pass


class DimensionMismatch(LinearAlgebraError, ValueError):
    pass


class NotACocycle(LinearAlgebraError):
    pass


class NotAComplex(LinearAlgebraError):
    pass


def frac(x) -> Fraction:
    """Coerce ints, strings like ``"-3/4"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point scalars are not accepted")
    return Fraction(x)


class Vec(Mapping):
    """Immutable sparse vector with exact coefficients.

    Zero coefficients are never stored, so two vectors are equal exactly when
    their mappings are equal.
    """

    __slots__ = ("_d", "_hash")

    def __init__(self, data: Mapping | Iterable | None = None):
        d: dict = {}
        if data:
            items = data.items() if isinstance(data, Mapping) else data
            for k, c in items:
                c = frac(c)
                if c:
                    d[k] = d.get(k, 0) + c
                    if not d[k]:
                        del d[k]
        self._d = d
        self._hash = None

    @classmethod
    def _wrap(cls, d: dict) -> "Vec":
        v = cls.__new__(cls)
        v._d = d
        v._hash = None
        return v

    @classmethod
    def basis(cls, key: Hashable) -> "Vec":
        return cls._wrap({key: Fraction(1)})

    def __getitem__(self, key):
        return self._d[key]

    def __iter__(self) -> Iterator:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def items(self):
        return self._d.items()

    def keys(self):
        return self._d.keys()

    def coeff(self, key) -> Fraction:
        return self._d.get(key, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._d)

    def __add__(self, other: "Vec") -> "Vec":
        if not isinstance(other, Vec):
            return NotImplemented
        if len(other._d) > len(self._d):
            self, other = other, self
        d = dict(self._d)
        for k, c in other._d.items():
            s = d.get(k, 0) + c
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return Vec._wrap(d)

    def __neg__(self) -> "Vec":
        return Vec._wrap({k: -c for k, c in self._d.items()})

    def __sub__(self, other: "Vec") -> "Vec":
        if not isinstance(other, Vec):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> "Vec":
        if isinstance(scalar, Vec):
            return NotImplemented
        s = frac(scalar)
        if not s:
            return Vec()
        return Vec._wrap({k: c * s for k, c in self._d.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Vec):
            return self._d == other._d
        if other == 0:
            return not self._d
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {c}" for k, c in sorted(self._d.items()))
        return f"Vec({{{inner}}})"

    def dense(self, n: int) -> list[Fraction]:
        return [self._d.get(i, Fraction(0)) for i in range(n)]


class Echelon:
    """Incremental row echelon form that remembers how rows were built.

    Every stored row is kept as a combination of the tagged vectors that were
    added, so solving, rank and kernel queries all come out of the same pass.
    The pivot of a row is its smallest key.
    """

    def __init__(self) -> None:
        self._rows: dict = {}  # pivot -> (row dict, history dict)
        self._order: list = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: Mapping) -> tuple[dict, dict]:
        res = {k: frac(c) for k, c in vec.items() if c}
        hist: dict = {}
        rows = self._rows
        while True:
            hits = [k for k in res if k in rows]
            if not hits:
                return res, hist
            p = min(hits)
            c = res[p]
            row, h = rows[p]
            for k, v in row.items():
                s = res.get(k, 0) - c * v
                if s:
                    res[k] = s
                else:
                    res.pop(k, None)
            for t, v in h.items():
                s = hist.get(t, 0) + c * v
                if s:
                    hist[t] = s
                else:
                    hist.pop(t, None)

    def reduce(self, vec: Mapping) -> tuple[Vec, dict]:
        """Return ``(residual, combo)`` with ``vec = residual + sum combo[t]*v_t``."""
        res, hist = self._reduce(vec)
        return Vec._wrap(res), hist

    def add(self, vec: Mapping, tag: Hashable) -> dict | None:
        """Insert ``vec`` under ``tag``.

        Returns ``None`` when the vector was independent; otherwise returns the
        kernel relation ``{tag: 1, t: -c, ...}`` that it satisfies.
        """
        res, hist = self._reduce(vec)
        h = {t: -v for t, v in hist.items()}
        h[tag] = h.get(tag, 0) + 1
        if not res:
            return {t: v for t, v in h.items() if v}
        p = min(res)
        inv = 1 / res[p]
        self._rows[p] = ({k: v * inv for k, v in res.items()}, {t: v * inv for t, v in h.items() if v})
        self._order.append(p)
        return None

    def contains(self, vec: Mapping) -> bool:
        res, _ = self._reduce(vec)
        return not res

    def pivots(self) -> list:
        return list(self._order)

    def rows(self) -> list[Vec]:
        return [Vec._wrap(dict(self._rows[p][0])) for p in self._order]


def solve_columns(columns: Sequence[Mapping], target: Mapping) -> dict[int, Fraction]:
    """Solve ``sum_j c_j * columns[j] = target``; raise NoSolution if impossible."""
    ech = Echelon()
    for j, col in enumerate(columns):
        ech.add(col, j)
    res, hist = ech._reduce(target)
    if res:
        raise NoSolution("target is not in the span of the columns")
    return {j: c for j, c in hist.items() if c}


def nullspace_columns(columns: Sequence[Mapping]) -> list[dict[int, Fraction]]:
    """Basis of the relations ``sum_j c_j * columns[j] = 0``."""
    ech = Echelon()
    out = []
    for j, col in enumerate(columns):
        rel = ech.add(col, j)
        if rel is not None:
            out.append(rel)
    return out


def solve_linear(matrix: Sequence[Sequence], target: Sequence) -> list[Fraction]:
    """Solve ``matrix @ v = target`` exactly for a dense rational matrix.

    Free variables are set to zero, so the answer is deterministic.
    """
    m = len(matrix)
    if len(target) != m:
        raise DimensionMismatch(f"matrix has {m} rows but target has length {len(target)}")
    n = len(matrix[0]) if m else 0
    if any(len(row) != n for row in matrix):
        raise DimensionMismatch("ragged matrix")
    cols = [{i: matrix[i][j] for i in range(m) if matrix[i][j]} for j in range(n)]
    sol = solve_columns(cols, {i: t for i, t in enumerate(target) if t})
    return [sol.get(j, Fraction(0)) for j in range(n)]


@dataclass(frozen=True)
class GradedBasis:
    """Named basis vectors with cohomological degrees (chain degree k is -k)."""

    symbols: tuple[str, ...]
    degrees: tuple[int, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if len(self.symbols) != len(self.degrees):
            raise DimensionMismatch("one degree per symbol required")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("basis symbols must be unique")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise KeyError(f"unknown symbol {symbol!r}") from None

    def in_degree(self, k: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == k]

    def support(self) -> list[int]:
        return sorted(set(self.degrees))


@dataclass(frozen=True)
class CochainComplex:
    basis: GradedBasis
    differential: tuple[Vec, ...]

    def __post_init__(self) -> None:
        diff = tuple(Vec(v) for v in self.differential)
        object.__setattr__(self, "differential", diff)
        if len(diff) != len(self.basis):
            raise DimensionMismatch("differential needs one image per basis element")
        deg = self.basis.degrees
        for i, v in enumerate(diff):
            for j in v:
                if deg[j] != deg[i] + 1:
                    raise NotAComplex(f"d({self.basis.symbols[i]}) is not of degree +1")
        for i in range(len(diff)):
            if self.apply(diff[i]):
                raise NotAComplex(f"d∘d({self.basis.symbols[i]}) != 0")

    def apply(self, v: Mapping) -> Vec:
        out = Vec()
        for i, c in v.items():
            out = out + self.differential[i] * c
        return out


@dataclass
class Cohomology:
    degree: int
    dimension: int
    representatives: list[Vec]
    _complex: CochainComplex = field(repr=False)

    def decompose(self, z: Mapping) -> tuple[list[Fraction], Vec]:
        """Split a cocycle as ``sum coeffs[i]*rep_i + d(primitive)``."""
        cx = self._complex
        z = Vec(z)
        if cx.apply(z):
            raise NotACocycle("d(z) != 0")
        for k in z:
            if cx.basis.degrees[k] != self.degree:
                raise NotACocycle("z is not homogeneous of the requested degree")
        lower = cx.basis.in_degree(self.degree - 1)
        cols = list(self.representatives) + [cx.differential[i] for i in lower]
        sol = solve_columns(cols, z)
        r = len(self.representatives)
        coeffs = [sol.get(i, Fraction(0)) for i in range(r)]
        prim = Vec({lower[j - r]: c for j, c in sol.items() if j >= r})
        return coeffs, prim


def cohomology(complex: CochainComplex, degree: int) -> Cohomology:
    """Cohomology in one degree with first-pivot representatives."""
    basis = complex.basis
    here = basis.in_degree(degree)
    lower = basis.in_degree(degree - 1)
    cycles = nullspace_columns([complex.differential[i] for i in here])
    cycle_vecs = [Vec({here[j]: c for j, c in rel.items()}) for rel in cycles]
    ech = Echelon()
    for j, i in enumerate(lower):
        ech.add(complex.differential[i], ("b", j))
    reps = []
    for n, z in enumerate(cycle_vecs):
        if ech.add(z, ("z", n)) is None:
            reps.append(z)
    return Cohomology(degree, len(reps), reps, complex)

"""Parsing and rendering of rational linear combinations like ``a - 1/2*b``."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Collection, Mapping, Sequence

from .scalar_linear import frac

__all__ = ["ParseError", "parse_combo", "format_combo", "format_scalar"]


class ParseError(ValueError):
    def __init__(self, reason: str, line: int | None = None):
        self.reason = reason
        self.line = line
        super().__init__(f"line {line}: {reason}" if line is not None else reason)


_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_][A-Za-z0-9_']*)?\s*"
)


def parse_combo(text: str, symbols: Collection[str] | None = None) -> dict[str, Fraction]:
    """Parse ``"x - 1/2*a + 3 b"`` into ``{"x": 1, "a": -1/2, "b": 3}``.

    A bare ``0`` is the empty combination.  Unknown symbols are rejected when
    ``symbols`` is given.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty linear combination")
    out: dict[str, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, num, sym = m.group(1), m.group(2), m.group(3)
        if m.end() == pos or (num is None and sym is None):
            raise ParseError(f"cannot parse {s[pos:]!r}")
        if sign is None and not first:
            raise ParseError(f"missing operator before {s[pos:m.end()].strip()!r}")
        c = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        if sym is None:
            if c != 0:
                raise ParseError(f"constant term {c} is not allowed")
        else:
            if symbols is not None and sym not in symbols:
                raise ParseError(f"unknown symbol {sym!r}")
            out[sym] = out.get(sym, Fraction(0)) + c
        pos = m.end()
        first = False
    return {k: v for k, v in out.items() if v}


def format_scalar(c) -> str:
    c = frac(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_combo(coeffs: Mapping[str, object], order: Sequence[str] | None = None) -> str:
    items = [(s, frac(c)) for s, c in coeffs.items() if frac(c)]
    if order is not None:
        pos = {s: n for n, s in enumerate(order)}
        items.sort(key=lambda sc: pos[sc[0]])
    else:
        items.sort()
    if not items:
        return "0"
    out = []
    for n, (s, c) in enumerate(items):
        a = abs(c)
        body = s if a == 1 else f"{format_scalar(a)}*{s}"
        if n == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f" {'-' if c < 0 else '+'} {body}")
    return "".join(out)

"""Exact rationals, 2-adic valuation and plane vectors over the 2-local integers.

Scalars are plain ``int`` or ``fractions.Fraction``.  Every constructor here
normalises a ``Fraction`` with denominator 1 back to ``int`` so that the
common integer case stays on the fast path.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Union

from .errors import InvalidInput, NotTwoIntegral

Scalar = Union[int, Fraction]

INF = math.inf
"""Valuation of zero; compares greater than every finite valuation."""


def as_scalar(q) -> Scalar:
    """Coerce an int, Fraction or scalar string into a normalised scalar."""
    if isinstance(q, bool):
        raise InvalidInput(f"not a scalar: {q!r}")
    if isinstance(q, int):
        return q
    if isinstance(q, Fraction):
        return q.numerator if q.denominator == 1 else q
    if isinstance(q, str):
        return parse_scalar(q)
    raise InvalidInput(f"not an exact scalar: {q!r}")


def parse_scalar(text: str) -> Scalar:
    """Parse ``"17"``, ``"-3"`` or ``"p/q"``."""
    s = text.strip()
    try:
        if "/" in s:
            p, q = s.split("/")
            num, den = int(p), int(q)
            if den == 0:
                raise InvalidInput(f"zero denominator in {text!r}")
            return as_scalar(Fraction(num, den))
        return int(s)
    except ValueError as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"cannot parse scalar {text!r}") from None


def format_scalar(q: Scalar) -> str:
    q = as_scalar(q)
    if isinstance(q, int):
        return str(q)
    return f"{q.numerator}/{q.denominator}"


def _val2_int(n: int) -> int:
    return (n & -n).bit_length() - 1


def val2(q: Scalar):
    """2-adic valuation; ``INF`` for zero."""
    if q == 0:
        return INF
    if isinstance(q, int):
        return _val2_int(q)
    return _val2_int(q.numerator) - _val2_int(q.denominator)


def is_two_integral(q: Scalar) -> bool:
    return isinstance(q, int) or q.denominator % 2 == 1


def format_valuation(m):
    return "inf" if m == INF else int(m)


def parse_valuation(v):
    if v == "inf":
        return INF
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidInput(f"bad valuation {v!r}")
    return v


class PlaneVector(NamedTuple):
    x: Scalar
    y: Scalar

    @classmethod
    def of(cls, x, y) -> "PlaneVector":
        return cls(as_scalar(x), as_scalar(y))

    def __add__(self, other):
        return PlaneVector(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return PlaneVector(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return PlaneVector(-self.x, -self.y)

    def __mul__(self, t):
        return PlaneVector(as_scalar(self.x * t), as_scalar(self.y * t))

    __rmul__ = __mul__

    def halved(self) -> "PlaneVector":
        return PlaneVector(as_scalar(Fraction(self.x) / 2), as_scalar(Fraction(self.y) / 2))

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def swapped(self) -> "PlaneVector":
        return PlaneVector(self.y, self.x)

    def to_json(self):
        return [format_scalar(self.x), format_scalar(self.y)]

    @classmethod
    def from_json(cls, pair) -> "PlaneVector":
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise InvalidInput(f"expected a coordinate pair, got {pair!r}")
        return cls(as_scalar(pair[0]), as_scalar(pair[1]))


ZERO = PlaneVector(0, 0)


def cross(u: PlaneVector, v: PlaneVector) -> Scalar:
    return as_scalar(u.x * v.y - u.y * v.x)


def is_two_integral_vector(v: PlaneVector) -> bool:
    return is_two_integral(v.x) and is_two_integral(v.y)


def require_two_integral(v: PlaneVector) -> None:
    if not is_two_integral_vector(v):
        raise NotTwoIntegral(f"vector {v.to_json()} has a coordinate with even denominator",
                             vector=v.to_json())


def is_primitive(v: PlaneVector) -> bool:
    """True iff some coordinate is a 2-adic unit."""
    require_two_integral(v)
    return val2(v.x) == 0 or val2(v.y) == 0

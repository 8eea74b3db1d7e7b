"""Submodules of rank at most 2 of the 2-local integer plane.

A lattice is stored as a tuple of 0, 1 or 2 generators.  Equality is
semantic (mutual inclusion), never structural: two different generator
pairs routinely describe the same lattice.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dyadic import (
    INF,
    PlaneVector,
    as_scalar,
    cross,
    is_primitive,
    require_two_integral,
    val2,
)
from .errors import (
    IndexOutOfRange,
    InfiniteMultiplicity,
    InvalidInput,
    MultiplicityZero,
    NotPrimitiveLattice,
)


@dataclass(frozen=True)
class DyadicLattice:
    generators: tuple = ()

    @property
    def rank(self) -> int:
        return len(self.generators)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def to_json(self):
        return {"rank": self.rank, "generators": [g.to_json() for g in self.generators]}

    @classmethod
    def from_json(cls, obj) -> "DyadicLattice":
        try:
            gens = [PlaneVector.from_json(g) for g in obj["generators"]]
            rank = obj["rank"]
        except (KeyError, TypeError):
            raise InvalidInput(f"malformed lattice {obj!r}") from None
        if len(gens) == 2:
            lat = span(*gens)
        elif len(gens) == 1:
            lat = span(gens[0], PlaneVector(0, 0))
        elif not gens:
            lat = DyadicLattice()
        else:
            raise InvalidInput("a lattice has at most two generators")
        if lat.rank != rank:
            raise InvalidInput(f"declared rank {rank} but generators span rank {lat.rank}")
        return lat


FULL = DyadicLattice((PlaneVector(1, 0), PlaneVector(0, 1)))


def _multiple(v: PlaneVector, g: PlaneVector):
    """Return t with v == t*g, or None if v is not on the line through g."""
    if cross(g, v) != 0:
        return None
    if g.x != 0:
        return Fraction(v.x) / g.x
    return Fraction(v.y) / g.y


def span(v1: PlaneVector, v2: PlaneVector) -> DyadicLattice:
    require_two_integral(v1)
    require_two_integral(v2)
    if cross(v1, v2) != 0:
        return DyadicLattice((v1, v2))
    if v1.is_zero() and v2.is_zero():
        return DyadicLattice()
    if v1.is_zero():
        return DyadicLattice((v2,))
    if v2.is_zero():
        return DyadicLattice((v1,))
    # parallel nonzero: the one the other is an integral multiple of
    t = _multiple(v2, v1)
    return DyadicLattice((v1,) if val2(t) >= 0 else (v2,))


def multiplicity(L: DyadicLattice):
    if L.rank < 2:
        return INF
    return val2(cross(*L.generators))


def contains(L: DyadicLattice, v: PlaneVector) -> bool:
    require_two_integral(v)
    if L.rank == 0:
        return v.is_zero()
    if L.rank == 1:
        t = _multiple(v, L.generators[0])
        return t is not None and val2(t) >= 0
    g1, g2 = L.generators
    det = cross(g1, g2)
    a = Fraction(cross(v, g2)) / det
    b = Fraction(cross(g1, v)) / det
    return a.denominator % 2 == 1 and b.denominator % 2 == 1


def includes(L: DyadicLattice, M: DyadicLattice) -> bool:
    return all(contains(L, g) for g in M.generators)


def equals(L: DyadicLattice, M: DyadicLattice) -> bool:
    return includes(L, M) and includes(M, L)


def is_primitive_lattice(L: DyadicLattice) -> bool:
    return any(is_primitive(g) for g in L.generators)


def primitive_generator(L: DyadicLattice) -> PlaneVector:
    for g in L.generators:
        if is_primitive(g):
            return g
    raise NotPrimitiveLattice("lattice contains no primitive vector", lattice=L.to_json())


def _pow2(i: int) -> int:
    return 1 << i


def superlattice_at(L: DyadicLattice, i) -> DyadicLattice:
    """The unique primitive lattice of multiplicity ``i`` containing ``L``."""
    u = primitive_generator(L)
    d = multiplicity(L)
    if i == INF:
        if d != INF:
            raise IndexOutOfRange(f"index inf exceeds multiplicity {d}")
        return L
    if not isinstance(i, int) or i < 0 or i > d:
        raise IndexOutOfRange(f"index {i} outside [0, {d}]")
    if val2(u.x) == 0:
        return span(u, PlaneVector(0, _pow2(i)))
    return span(u, PlaneVector(_pow2(i), 0))


class _Rebased:
    """``L`` written as span(u, (0, 2^d)) with u.x odd, possibly after swapping axes."""

    def __init__(self, L: DyadicLattice):
        if not is_primitive_lattice(L):
            raise NotPrimitiveLattice("trichotomy needs a primitive lattice", lattice=L.to_json())
        d = multiplicity(L)
        if d == INF:
            raise InfiniteMultiplicity("trichotomy needs a rank-2 lattice")
        if d == 0:
            raise MultiplicityZero("the non-primitive part of the full lattice is not of index 2")
        u = primitive_generator(L)
        self.swap = val2(u.x) != 0
        self.u = u.swapped() if self.swap else u
        self.d = d

    def flip(self, v: PlaneVector) -> PlaneVector:
        return v.swapped() if self.swap else v

    def span(self, a: PlaneVector, b: PlaneVector) -> DyadicLattice:
        return span(self.flip(a), self.flip(b))

    def b_coefficient(self, v: PlaneVector):
        """Second coordinate of ``v`` in the basis (u, (0, 2^d))."""
        w = self.flip(v)
        a = Fraction(w.x) / self.u.x
        return as_scalar((w.y - a * self.u.y) / _pow2(self.d))


def index2_trichotomy(L: DyadicLattice):
    """Return (plus, minus, zero): the three sublattices of index 2 in ``L``.

    ``zero`` is the set of non-primitive elements of ``L``; every primitive
    element lies in exactly one of ``plus``/``minus``.  Which half gets
    which label depends on the chosen generator.
    """
    r = _Rebased(L)
    u, d = r.u, r.d
    top = PlaneVector(0, _pow2(d))
    top2 = PlaneVector(0, _pow2(d + 1))
    plus = r.span(u, top2)
    minus = r.span(u + top, top2)
    zero = r.span(u * 2, top)
    return plus, minus, zero


def same_half(L: DyadicLattice, v: PlaneVector, w: PlaneVector) -> bool:
    """Whether two primitive elements of ``L`` lie in the same index-2 half."""
    r = _Rebased(L)
    for z in (v, w):
        if not is_primitive(z) or not contains(L, z):
            raise InvalidInput(f"{z.to_json()} is not a primitive element of the lattice")
    bv, bw = r.b_coefficient(v), r.b_coefficient(w)
    return (val2(bv) >= 1) == (val2(bw) >= 1)

"""Domain types, exact rational arithmetic and elementary cube geometry.

Coordinates are 1-indexed throughout: coordinate i of a binary point lives in
bit i-1 of its code word, so the code of a point is sum(2**(i-1) * v_i).  All
numeric data is held as exact rationals (`fractions.Fraction`); no floating
point is used anywhere on a solve path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import DomainError

# Arbitrary-precision exact rational.  The stdlib type already guarantees
# lowest terms and a positive denominator.
Rational = Fraction

#: Binary points are bit-packed into a single word.
MAX_BINARY_DIM = 64

RationalLike = Union[Fraction, int, str]


def parse_rational(text: RationalLike) -> Fraction:
    """Parse an exact rational from "p", "p/q" or an int.

    Raises DomainError on malformed input or a zero denominator.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise DomainError(f"refusing float {text!r}; pass a 'p/q' string")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Render a rational as "p" or "p/q" (lossless)."""
    return str(value)


@dataclass(frozen=True)
class BinaryPoint:
    """A 0/1 point in dimension n, bit-packed (bit i-1 holds coordinate i)."""

    n: int
    bits: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_BINARY_DIM:
            raise DomainError(f"binary dimension must be in 1..{MAX_BINARY_DIM}, got {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise DomainError(f"bits {self.bits} out of range for dimension {self.n}")

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "BinaryPoint":
        bits = 0
        for i, v in enumerate(coords):
            if v not in (0, 1):
                raise DomainError(f"coordinate {i + 1} is {v!r}, expected 0 or 1")
            bits |= v << i
        return cls(len(coords), bits)

    @classmethod
    def from_string(cls, text: str) -> "BinaryPoint":
        """Parse a bitstring whose leftmost character is coordinate 1."""
        if not text or any(ch not in "01" for ch in text):
            raise DomainError(f"not a bitstring: {text!r}")
        return cls.from_coords([int(ch) for ch in text])

    def coord(self, i: int) -> int:
        """Coordinate i (1-indexed)."""
        if not 1 <= i <= self.n:
            raise DomainError(f"coordinate index {i} out of 1..{self.n}")
        return (self.bits >> (i - 1)) & 1

    def coords(self) -> tuple:
        return tuple((self.bits >> i) & 1 for i in range(self.n))

    def to_string(self) -> str:
        return "".join(str(b) for b in self.coords())

    def hamming(self, other: "BinaryPoint") -> int:
        if other.n != self.n:
            raise DomainError("dimension mismatch")
        return (self.bits ^ other.bits).bit_count()

    def flip(self, i: int) -> "BinaryPoint":
        if not 1 <= i <= self.n:
            raise DomainError(f"coordinate index {i} out of 1..{self.n}")
        return BinaryPoint(self.n, self.bits ^ (1 << (i - 1)))

    def prefix(self, k: int) -> "BinaryPoint":
        """Projection onto the first k coordinates."""
        if not 1 <= k <= self.n:
            raise DomainError(f"prefix length {k} out of 1..{self.n}")
        return BinaryPoint(k, self.bits & ((1 << k) - 1))

    def __repr__(self):
        return f"BinaryPoint({self.to_string()!r})"


@dataclass(frozen=True)
class LatticePoint:
    """An integer point in dimension n (no dimension cap)."""

    n: int
    coords: tuple

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"dimension must be positive, got {self.n}")
        if len(self.coords) != self.n:
            raise DomainError(f"expected {self.n} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(int(v) for v in self.coords))

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "LatticePoint":
        return cls(len(coords), tuple(coords))

    def coord(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise DomainError(f"coordinate index {i} out of 1..{self.n}")
        return self.coords[i - 1]

    def __repr__(self):
        return f"LatticePoint({list(self.coords)})"


Point = Union[BinaryPoint, LatticePoint]


def point_coords(point: Point) -> tuple:
    """Coordinate tuple of either point kind; shared tie-break key."""
    if isinstance(point, BinaryPoint):
        return point.coords()
    return point.coords


@dataclass(frozen=True)
class Objective:
    """A linear objective c over n variables; sense is always minimize."""

    n: int
    c: tuple

    def __post_init__(self):
        if len(self.c) != self.n:
            raise DomainError(f"objective length {len(self.c)} != dimension {self.n}")
        object.__setattr__(self, "c", tuple(parse_rational(v) for v in self.c))

    @classmethod
    def of(cls, terms: Sequence[RationalLike]) -> "Objective":
        return cls(len(terms), tuple(terms))

    def dot(self, point: Point) -> Fraction:
        if point.n != self.n:
            raise DomainError("dimension mismatch")
        return sum(
            (ci * vi for ci, vi in zip(self.c, point_coords(point)) if vi),
            start=Fraction(0),
        )


@dataclass(frozen=True)
class CubeFace:
    """A face of [0,1]^n given by fixing a subset of coordinates to 0/1.

    The empty fixing is the improper face (the whole cube).
    """

    n: int
    fixed: tuple  # sorted tuple of (coordinate index, value) pairs

    def __post_init__(self):
        pairs = self.fixed.items() if isinstance(self.fixed, dict) else self.fixed
        items = tuple(sorted((int(i), int(v)) for i, v in pairs))
        for i, v in items:
            if not 1 <= i <= self.n:
                raise DomainError(f"fixed index {i} out of 1..{self.n}")
            if v not in (0, 1):
                raise DomainError(f"fixed value for coordinate {i} must be 0/1, got {v}")
        if len({i for i, _ in items}) != len(items):
            raise DomainError("coordinate fixed twice")
        object.__setattr__(self, "fixed", items)

    @classmethod
    def of(cls, n: int, fixings: Mapping[int, int]) -> "CubeFace":
        return cls(n, tuple(sorted(fixings.items())))

    @classmethod
    def improper(cls, n: int) -> "CubeFace":
        return cls(n, ())

    @property
    def fixed_map(self) -> dict:
        return dict(self.fixed)

    @property
    def is_improper(self) -> bool:
        return not self.fixed

    def contains(self, point: BinaryPoint) -> bool:
        if point.n != self.n:
            raise DomainError("dimension mismatch")
        return all(point.coord(i) == v for i, v in self.fixed)

    def vertices(self) -> Iterator[BinaryPoint]:
        """All binary points of the face (desk scale)."""
        free = [i for i in range(1, self.n + 1) if i not in self.fixed_map]
        base = 0
        for i, v in self.fixed:
            base |= v << (i - 1)
        for mask in range(1 << len(free)):
            bits = base
            for t, i in enumerate(free):
                bits |= ((mask >> t) & 1) << (i - 1)
            yield BinaryPoint(self.n, bits)


@dataclass(frozen=True)
class LatticeBox:
    """An integer box [l, u]; the restriction passed to integral oracles."""

    l: LatticePoint
    u: LatticePoint

    def __post_init__(self):
        if self.l.n != self.u.n:
            raise DomainError("box corners disagree on dimension")
        if any(lo > hi for lo, hi in zip(self.l.coords, self.u.coords)):
            raise DomainError("box has l > u in some coordinate")

    @classmethod
    def of(cls, l: Sequence[int], u: Sequence[int]) -> "LatticeBox":
        return cls(LatticePoint.from_coords(l), LatticePoint.from_coords(u))

    @property
    def n(self) -> int:
        return self.l.n

    def contains(self, point: LatticePoint) -> bool:
        if point.n != self.n:
            raise DomainError("dimension mismatch")
        return all(lo <= v <= hi for lo, v, hi in
                   zip(self.l.coords, point.coords, self.u.coords))

    def lattice_count(self) -> int:
        out = 1
        for lo, hi in zip(self.l.coords, self.u.coords):
            out *= hi - lo + 1
        return out

    def intersect(self, other: "LatticeBox"):
        """Intersection box, or None when empty."""
        if other.n != self.n:
            raise DomainError("dimension mismatch")
        lo = tuple(max(a, b) for a, b in zip(self.l.coords, other.l.coords))
        hi = tuple(min(a, b) for a, b in zip(self.u.coords, other.u.coords))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return LatticeBox.of(lo, hi)

    def iter_points(self) -> Iterator[LatticePoint]:
        """All lattice points, last coordinate fastest (desk scale only)."""
        def rec(prefix, k):
            if k == self.n:
                yield LatticePoint.from_coords(prefix)
                return
            for v in range(self.l.coords[k], self.u.coords[k] + 1):
                yield from rec(prefix + [v], k + 1)
        yield from rec([], 0)


Relation = str  # one of "<=", "=", ">="

_RELATIONS = ("<=", "=", ">=")


@dataclass(frozen=True)
class HPolytope:
    """Explicit inequality/equality description over n named variables.

    Rows are (coefficient vector, relation, rhs) with exact rational entries.
    The description is intended to be bounded; unboundedness is only detected
    lazily when an LP over it is solved.
    """

    n: int
    rows: tuple  # of (tuple[Fraction,...], relation, Fraction)

    def __post_init__(self):
        norm = []
        for a, rel, b in self.rows:
            if rel not in _RELATIONS:
                raise DomainError(f"unknown relation {rel!r}")
            a = tuple(parse_rational(v) for v in a)
            if len(a) != self.n:
                raise DomainError(f"row has {len(a)} coefficients, expected {self.n}")
            norm.append((a, rel, parse_rational(b)))
        object.__setattr__(self, "rows", tuple(norm))

    @classmethod
    def of(cls, n: int, rows: Iterable) -> "HPolytope":
        return cls(n, tuple(rows))

    def satisfies(self, point: Point) -> bool:
        coords = point_coords(point)
        for a, rel, b in self.rows:
            lhs = sum((ai * vi for ai, vi in zip(a, coords) if vi), start=Fraction(0))
            if rel == "<=" and lhs > b:
                return False
            if rel == ">=" and lhs < b:
                return False
            if rel == "=" and lhs != b:
                return False
        return True


def cube_hrep(n: int) -> HPolytope:
    """The unit cube as 2n explicit rows: x_i >= 0 then x_i <= 1."""
    rows = []
    for i in range(n):
        a = tuple(Fraction(1 if j == i else 0) for j in range(n))
        rows.append((a, ">=", Fraction(0)))
    for i in range(n):
        a = tuple(Fraction(1 if j == i else 0) for j in range(n))
        rows.append((a, "<=", Fraction(1)))
    return HPolytope(n, tuple(rows))


# --- sigma bijection -------------------------------------------------------

def sigma_encode(v: BinaryPoint) -> int:
    """Positional code of a binary point: sum of 2**(i-1) * v_i."""
    return v.bits


def sigma_decode(k: int, n: int) -> BinaryPoint:
    """Binary point whose code is k; inverse of sigma_encode."""
    if not 0 <= k < (1 << n):
        raise DomainError(f"code {k} out of range for dimension {n}")
    return BinaryPoint(n, k)


# --- elementary cube geometry ---------------------------------------------

def hamming_independent(points: Iterable[BinaryPoint]) -> bool:
    """True iff no two distinct points are at Hamming distance exactly 1."""
    pts = list(points)
    if pts and any(p.n != pts[0].n for p in pts):
        raise DomainError("points must share one dimension")
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            if (p.bits ^ q.bits).bit_count() == 1:
                return False
    return True


def no_good_cut(v: BinaryPoint):
    """The inequality cutting off exactly v from the unit cube.

    Returns a single normalized row (a, ">=", b) with integer coefficients:
    sum over zero coordinates of x_i plus sum over one coordinates of (1-x_i)
    is at least 1.  Every other binary point satisfies it; v violates it.
    """
    coeffs = tuple(-1 if (v.bits >> i) & 1 else 1 for i in range(v.n))
    rhs = 1 - v.bits.bit_count()
    return coeffs, ">=", rhs

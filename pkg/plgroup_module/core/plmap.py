# plgroup_module/core/plmap.py
"""
Exact piecewise-linear homeomorphisms of [0,1]

A PLMap is stored as its canonical breakpoint list: starts at (0,0), ends at
(1,1), both coordinates strictly increasing, adjacent segments with distinct
slopes. Equality and hashing use that list only. Maps act on the right, so
``compose(g, h)`` sends x to (xg)h and ``g * h`` means the same thing.
"""

from __future__ import annotations

import bisect
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .errors import DomainError, EndpointError, InputFormatError, MonotonicityError
from ..utils.serialization import format_rational, parse_rational

Point = Tuple[Fraction, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def _collinear(p: Point, q: Point, r: Point) -> bool:
    return (q[1] - p[1]) * (r[0] - q[0]) == (r[1] - q[1]) * (q[0] - p[0])


def _canonical(points: Iterable[Point]) -> Tuple[Point, ...]:
    kept: List[Point] = []
    for point in points:
        while len(kept) >= 2 and _collinear(kept[-2], kept[-1], point):
            kept.pop()
        kept.append(point)
    return tuple(kept)


class PLMap:
    """Element of PL₀(I) in canonical breakpoint form"""

    __slots__ = ("_points", "_xs", "_ys", "_slopes", "_hash")

    def __init__(self, points: Sequence[Point]):
        self._points = _canonical(points)
        self._xs = tuple(p[0] for p in self._points)
        self._ys = tuple(p[1] for p in self._points)
        self._slopes = tuple(
            (self._ys[i + 1] - self._ys[i]) / (self._xs[i + 1] - self._xs[i])
            for i in range(len(self._points) - 1)
        )
        self._hash = hash(self._points)

    # ----- inspection -----

    @property
    def points(self) -> Tuple[Point, ...]:
        return self._points

    @property
    def slopes(self) -> Tuple[Fraction, ...]:
        return self._slopes

    @property
    def breakpoints(self) -> Tuple[Fraction, ...]:
        """Interior x-coordinates where the slope changes"""
        return self._xs[1:-1]

    def is_identity(self) -> bool:
        return len(self._points) == 2

    def segment_index(self, x: Fraction) -> int:
        i = bisect.bisect_right(self._xs, x) - 1
        return min(max(i, 0), len(self._slopes) - 1)

    def slope_right_of(self, x: Fraction) -> Fraction:
        """Slope of the affine piece starting at or containing x, going right"""
        return self._slopes[self.segment_index(x)]

    def slope_left_of(self, x: Fraction) -> Fraction:
        """Slope of the affine piece ending at or containing x, coming from the left"""
        i = bisect.bisect_left(self._xs, x) - 1
        return self._slopes[min(max(i, 0), len(self._slopes) - 1)]

    # ----- evaluation -----

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        if x < ZERO or x > ONE:
            raise DomainError("Point outside [0,1]", x=x)
        i = self.segment_index(x)
        return self._ys[i] + self._slopes[i] * (x - self._xs[i])

    def evaluate_inverse(self, y) -> Fraction:
        y = Fraction(y)
        if y < ZERO or y > ONE:
            raise DomainError("Point outside [0,1]", x=y)
        i = bisect.bisect_right(self._ys, y) - 1
        i = min(max(i, 0), len(self._slopes) - 1)
        return self._xs[i] + (y - self._ys[i]) / self._slopes[i]

    # ----- group operations -----

    def compose(self, other: "PLMap") -> "PLMap":
        """x -> (x self) other"""
        if other.is_identity():
            return self
        if self.is_identity():
            return other
        cuts = set(self._xs)
        cuts.update(self.evaluate_inverse(x) for x in other._xs)
        ordered = sorted(cuts)
        return PLMap([(x, other.evaluate(self.evaluate(x))) for x in ordered])

    def inverse(self) -> "PLMap":
        return PLMap([(y, x) for x, y in self._points])

    def power(self, n: int) -> "PLMap":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = IDENTITY
        while n:
            if n & 1:
                result = result.compose(base)
            n >>= 1
            if n:
                base = base.compose(base)
        return result

    def __mul__(self, other: "PLMap") -> "PLMap":
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.compose(other)

    def __invert__(self) -> "PLMap":
        return self.inverse()

    def __pow__(self, n: int) -> "PLMap":
        return self.power(n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PLMap):
            return NotImplemented
        return self._hash == other._hash and self._points == other._points

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"({format_rational(x)}, {format_rational(y)})" for x, y in self._points)
        return f"PLMap([{body}])"

    # ----- JSON -----

    def to_dict(self) -> dict:
        return {"breakpoints": [[format_rational(x), format_rational(y)] for x, y in self._points]}

    @classmethod
    def from_dict(cls, data) -> "PLMap":
        if not isinstance(data, dict) or not isinstance(data.get("breakpoints"), list):
            raise InputFormatError("PLMap JSON needs a 'breakpoints' list")
        points = []
        for pair in data["breakpoints"]:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise InputFormatError("Each breakpoint must be a [x, y] pair", value=pair)
            points.append((parse_rational(pair[0]), parse_rational(pair[1])))
        return make_plmap(points)


IDENTITY = PLMap([(ZERO, ZERO), (ONE, ONE)])


def make_plmap(points) -> PLMap:
    """Validate a point list and return its canonical PLMap"""
    pts = [(parse_rational(x), parse_rational(y)) for x, y in points]
    if len(pts) < 2 or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
        raise EndpointError("Breakpoints must start at (0,0) and end at (1,1)")
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if not (x0 < x1 and y0 < y1):
            raise MonotonicityError(
                "Breakpoint coordinates must be strictly increasing",
                at=f"{format_rational(x1)},{format_rational(y1)}",
            )
    return PLMap(pts)


def identity() -> PLMap:
    return IDENTITY


def evaluate(g: PLMap, x) -> Fraction:
    return g.evaluate(x)


def compose(g: PLMap, h: PLMap) -> PLMap:
    return g.compose(h)


def inverse(g: PLMap) -> PLMap:
    return g.inverse()


def power(g: PLMap, n: int) -> PLMap:
    return g.power(n)


def conjugate(g: PLMap, h: PLMap) -> PLMap:
    """g^h = h⁻¹gh"""
    if h.is_identity():
        return g
    return h.inverse().compose(g).compose(h)


def commutator(g: PLMap, h: PLMap) -> PLMap:
    """[g,h] = g⁻¹h⁻¹gh"""
    return g.inverse().compose(h.inverse()).compose(g).compose(h)


def double_commutator(h: PLMap, k: PLMap) -> PLMap:
    """[[h,k],k]"""
    return commutator(commutator(h, k), k)


def equals(g: PLMap, h: PLMap) -> bool:
    return g == h


def breakpoints_of(g: PLMap) -> frozenset:
    return frozenset(g.breakpoints)

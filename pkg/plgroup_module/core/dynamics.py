# plgroup_module/core/dynamics.py
"""
Supports, orbitals, fixed sets and fundamental domains of PLMaps

Every computation is exact: fixed points are found by solving xg = x on each
affine piece.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from cachetools import LRUCache, cached

from .errors import (BudgetExceeded, IdentityInput, InputFormatError, NoOrbital,
                     NotAnOrbital, PointOutside, PreconditionError, SearchExhausted,
                     WrongDirection)
from .plmap import ONE, ZERO, PLMap
from .words import EMPTY_WORD, Word, unit_letter_maps
from ..utils.serialization import format_rational, parse_rational


class Direction(Enum):
    RIGHT = "right"
    LEFT = "left"


class Consistency(Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    NOT_BOTH_ENDS = "not_both_ends"


@dataclass(frozen=True, order=True)
class Interval:
    """Open interval (left, right) inside [0,1]"""

    left: Fraction
    right: Fraction

    def __post_init__(self):
        object.__setattr__(self, "left", Fraction(self.left))
        object.__setattr__(self, "right", Fraction(self.right))
        if not (ZERO <= self.left < self.right <= ONE):
            raise InputFormatError("Interval needs 0 <= left < right <= 1",
                                   left=self.left, right=self.right)

    @property
    def midpoint(self) -> Fraction:
        return (self.left + self.right) / 2

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def contains_point(self, x) -> bool:
        return self.left < x < self.right

    def contains_closed(self, left, right) -> bool:
        """[left, right] lies inside the open interval"""
        return self.left < left and right < self.right

    def contains_interval(self, other: "Interval") -> bool:
        return self.left <= other.left and other.right <= self.right

    def overlaps(self, other: "Interval") -> bool:
        return max(self.left, other.left) < min(self.right, other.right)

    def __str__(self) -> str:
        return f"({format_rational(self.left)}, {format_rational(self.right)})"

    def to_dict(self) -> dict:
        return {"left": format_rational(self.left), "right": format_rational(self.right)}

    @classmethod
    def from_dict(cls, data) -> "Interval":
        if not isinstance(data, dict):
            raise InputFormatError("Interval JSON must be an object")
        return cls(parse_rational(data.get("left")), parse_rational(data.get("right")))


@dataclass(frozen=True, order=True)
class ClosedInterval:
    """Closed interval [left, right]; a point when left == right"""

    left: Fraction
    right: Fraction

    def __post_init__(self):
        object.__setattr__(self, "left", Fraction(self.left))
        object.__setattr__(self, "right", Fraction(self.right))
        if self.left > self.right:
            raise InputFormatError("Closed interval needs left <= right",
                                   left=self.left, right=self.right)

    def is_point(self) -> bool:
        return self.left == self.right

    def to_list(self) -> list:
        return [format_rational(self.left), format_rational(self.right)]

    @classmethod
    def from_list(cls, data) -> "ClosedInterval":
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            raise InputFormatError("Closed interval JSON must be a [left, right] pair")
        return cls(parse_rational(data[0]), parse_rational(data[1]))


@dataclass(frozen=True)
class FixedSet:
    components: Tuple[ClosedInterval, ...]

    def hull(self) -> Optional[ClosedInterval]:
        if not self.components:
            return None
        return ClosedInterval(self.components[0].left, self.components[-1].right)


@dataclass(frozen=True)
class HalfOpenInterval:
    """[left, right) when closed_left, else (left, right]"""

    left: Fraction
    right: Fraction
    closed_left: bool

    def contains(self, x) -> bool:
        if self.closed_left:
            return self.left <= x < self.right
        return self.left < x <= self.right

    def __str__(self) -> str:
        lo, hi = format_rational(self.left), format_rational(self.right)
        return f"[{lo}, {hi})" if self.closed_left else f"({lo}, {hi}]"


@dataclass(frozen=True)
class EndRealization:
    left: bool
    right: bool

    @property
    def both(self) -> bool:
        return self.left and self.right

    @property
    def neither(self) -> bool:
        return not self.left and not self.right


# ----- orbitals -----

@cached(cache=LRUCache(maxsize=8192))
def orbitals_of_element(g: PLMap) -> Tuple[Interval, ...]:
    """Maximal open intervals where xg != x, left to right"""
    if g.is_identity():
        return ()
    points = g.points
    samples: List[Tuple[Fraction, Fraction]] = []
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        d0, d1 = y0 - x0, y1 - x1
        samples.append((x0, d0))
        if d0 * d1 < 0:
            samples.append((x0 - d0 * (x1 - x0) / (d1 - d0), ZERO))
    samples.append((ONE, ZERO))

    orbitals = []
    start = None
    for (xa, da), (xb, db) in zip(samples, samples[1:]):
        if da == 0 and db == 0:
            continue
        if start is None:
            start = xa
        if db == 0:
            orbitals.append(Interval(start, xb))
            start = None
    return tuple(orbitals)


def orbital_containing(g: PLMap, x) -> Optional[Interval]:
    for orbital in orbitals_of_element(g):
        if orbital.contains_point(x):
            return orbital
    return None


def support_hull(g: PLMap) -> ClosedInterval:
    """Closed convex hull of supp(g)"""
    orbitals = orbitals_of_element(g)
    if not orbitals:
        raise IdentityInput("Identity has empty support")
    return ClosedInterval(orbitals[0].left, orbitals[-1].right)


def _fixed_components(g: PLMap) -> List[ClosedInterval]:
    components = []
    cursor = ZERO
    for orbital in orbitals_of_element(g):
        components.append(ClosedInterval(cursor, orbital.left))
        cursor = orbital.right
    components.append(ClosedInterval(cursor, ONE))
    return components


def fixed_set_in(g: PLMap, A: Interval) -> FixedSet:
    """Fixed points of g in closure(A) ∩ (0,1), as closed components"""
    kept = []
    for component in _fixed_components(g):
        lo, hi = max(component.left, A.left), min(component.right, A.right)
        if lo > hi:
            continue
        if lo == hi and lo in (ZERO, ONE):
            continue
        kept.append(ClosedInterval(lo, hi))
    return FixedSet(tuple(kept))


def direction_on(g: PLMap, A: Interval) -> Direction:
    if A not in orbitals_of_element(g):
        raise NotAnOrbital(f"{A} is not an orbital of the element")
    mid = A.midpoint
    return Direction.RIGHT if g.evaluate(mid) > mid else Direction.LEFT


def group_support(gens: Sequence[PLMap]) -> Tuple[Interval, ...]:
    """Components of the union of the generator supports"""
    pieces = sorted(o for g in gens for o in orbitals_of_element(g))
    merged: List[Interval] = []
    for piece in pieces:
        if merged and piece.left < merged[-1].right:
            last = merged.pop()
            merged.append(Interval(last.left, max(last.right, piece.right)))
        else:
            merged.append(piece)
    return tuple(merged)


def induced_orbital(A: Interval, h: PLMap) -> Interval:
    return Interval(h.evaluate(A.left), h.evaluate(A.right))


def realizes_end(g: PLMap, A: Interval) -> EndRealization:
    orbitals = orbitals_of_element(g)
    return EndRealization(
        left=any(o.left == A.left for o in orbitals),
        right=any(o.right == A.right for o in orbitals),
    )


def realization_consistency(g: PLMap, A: Interval) -> Consistency:
    if not realizes_end(g, A).both:
        return Consistency.NOT_BOTH_ENDS
    s_left = g.slope_right_of(A.left)
    s_right = g.slope_left_of(A.right)
    if (s_left > 1 and s_right > 1) or (s_left < 1 and s_right < 1):
        return Consistency.INCONSISTENT
    return Consistency.CONSISTENT


def fundamental_domain_at(g: PLMap, A: Interval, x) -> HalfOpenInterval:
    """[x, xg) for right-movers, (xg, x] for left-movers"""
    x = Fraction(x)
    direction = direction_on(g, A)
    if not A.contains_point(x):
        raise PointOutside(f"Point not in {A}", x=x)
    image = g.evaluate(x)
    if direction is Direction.RIGHT:
        return HalfOpenInterval(x, image, closed_left=True)
    return HalfOpenInterval(image, x, closed_left=False)


# ----- clearing -----

def _max_power(max_power):
    if max_power:
        return int(max_power)
    from settings_manager import get_setting
    return int(get_setting("powers.max_power", 2 ** 20))


def min_clearing_power(g: PLMap, x, y, direction: Optional[Direction] = None,
                       max_power=None) -> int:
    """
    Least n >= 1 moving [x, y] entirely past itself.

    Right-movers need x·gⁿ > y, left-movers y·gⁿ < x. Doubling over the
    ladder g, g², g⁴, ... then a binary descent on the same ladder.
    """
    x, y = Fraction(x), Fraction(y)
    if x > y:
        raise PreconditionError("min_clearing_power needs x <= y", x=x, y=y)
    orbital = orbital_containing(g, x)
    if orbital is None or not orbital.contains_point(y):
        raise NoOrbital("Points do not share an orbital", x=x, y=y)
    moving = direction_on(g, orbital)
    if direction is not None and direction is not moving:
        raise WrongDirection(f"Element moves {moving.value} on {orbital}")

    if moving is Direction.RIGHT:
        start = x

        def cleared(point):
            return point > y
    else:
        start = y

        def cleared(point):
            return point < x

    if cleared(g.evaluate(start)):
        return 1
    cap = _max_power(max_power)
    ladder = [g]
    while not cleared(ladder[-1].evaluate(start)):
        if 2 ** len(ladder) > cap:
            raise BudgetExceeded(f"Clearing power exceeds {cap}", x=x, y=y)
        ladder.append(ladder[-1] * ladder[-1])

    top = len(ladder) - 1
    n = 2 ** (top - 1)
    point = ladder[top - 1].evaluate(start)
    for i in range(top - 2, -1, -1):
        candidate = ladder[i].evaluate(point)
        if not cleared(candidate):
            point = candidate
            n += 2 ** i
    return n + 1


def hull_cleared_within(hull: ClosedInterval, upper: PLMap, host: Interval) -> bool:
    """hull inside the orbital host of upper and moved off itself by upper"""
    if not host.contains_closed(hull.left, hull.right):
        return False
    if direction_on(upper, host) is Direction.RIGHT:
        return upper.evaluate(hull.left) >= hull.right
    return upper.evaluate(hull.right) <= hull.left


def hull_cleared_by(lower: PLMap, upper: PLMap) -> bool:
    """supp(lower) lies in a single fundamental domain of upper"""
    if lower.is_identity():
        raise IdentityInput("hull_cleared_by needs a non-trivial lower element")
    hull = support_hull(lower)
    for host in orbitals_of_element(upper):
        if host.contains_closed(hull.left, hull.right):
            return hull_cleared_within(hull, upper, host)
    return False


def pair_cleared(lower: PLMap, upper: PLMap) -> bool:
    """
    Wreath criterion per orbital of upper.

    Every orbital of lower has closure inside an orbital of upper, and in each
    orbital B of upper the hull of supp(lower) ∩ B is cleared by upper.
    Agrees with hull_cleared_by when supp(lower) meets one orbital of upper.
    """
    if lower.is_identity():
        raise IdentityInput("pair_cleared needs a non-trivial lower element")
    hosts = orbitals_of_element(upper)
    grouped: Dict[Interval, List[Interval]] = {}
    for orbital in orbitals_of_element(lower):
        host = next((h for h in hosts if h.contains_closed(orbital.left, orbital.right)), None)
        if host is None:
            return False
        grouped.setdefault(host, []).append(orbital)
    return all(
        hull_cleared_within(ClosedInterval(inner[0].left, inner[-1].right), upper, host)
        for host, inner in grouped.items()
    )


def supports_disjoint(g: PLMap, h: PLMap) -> bool:
    return not any(a.overlaps(b) for a in orbitals_of_element(g) for b in orbitals_of_element(h))


def supports_separated(first: Sequence[PLMap], second: Sequence[PLMap]) -> bool:
    """Union supports of two families are disjoint"""
    left, right = group_support(first), group_support(second)
    return not any(a.overlaps(b) for a in left for b in right)


# ----- transitivity search -----

def spanning_element(gens: Sequence[PLMap], A: Interval, x, y, max_len: int):
    """
    Shortlex-least word θ with xθ > y.

    Points already reached by a shortlex-earlier word are not expanded again;
    their continuations are dominated.

    Returns:
        (Word, PLMap)
    """
    x, y = Fraction(x), Fraction(y)
    if not x < y:
        raise PreconditionError("spanning_element needs x < y", x=x, y=y)
    if not (A.contains_point(x) and A.contains_point(y)):
        raise PreconditionError(f"Points must lie in {A}", x=x, y=y)
    if A not in group_support(gens):
        raise PreconditionError(f"{A} is not a component of the group support")

    letters = unit_letter_maps(gens)
    seen = {x}
    frontier = [(EMPTY_WORD, x)]
    best = x
    for _ in range(max_len):
        next_frontier = []
        for word, point in frontier:
            last = word.last_unit()
            for (gen, sign), letter_map in letters:
                if last is not None and last == (gen, -sign):
                    continue
                image = letter_map.evaluate(point)
                if image in seen:
                    continue
                extended = word.append(gen, sign)
                if image > y:
                    return extended, extended.evaluate(gens)
                seen.add(image)
                best = max(best, image)
                next_frontier.append((extended, image))
        frontier = next_frontier
        if not frontier:
            break
    raise SearchExhausted(f"No word of length <= {max_len} moves x past y",
                          best_point=best, max_len=max_len)


@dataclass(frozen=True)
class SignedOrbital:
    """(A, g) with A an orbital of g"""

    orbital: Interval
    signature: PLMap

    def __post_init__(self):
        if self.orbital not in orbitals_of_element(self.signature):
            raise NotAnOrbital(f"{self.orbital} is not an orbital of the signature")

    @property
    def direction(self) -> Direction:
        return direction_on(self.signature, self.orbital)

    def to_dict(self) -> dict:
        return {"orbital": self.orbital.to_dict(), "signature": self.signature.to_dict()}

    @classmethod
    def from_dict(cls, data) -> "SignedOrbital":
        if not isinstance(data, dict):
            raise InputFormatError("Signed orbital JSON must be an object")
        return cls(Interval.from_dict(data.get("orbital")), PLMap.from_dict(data.get("signature")))

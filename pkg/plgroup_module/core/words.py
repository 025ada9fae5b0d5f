# plgroup_module/core/words.py
"""
Words over a generator list and bounded word-ball enumeration

Letters are (generator index, exponent) pairs with adjacent indices distinct.
Shortlex order compares total length first, then the unit-letter sequence
under g0 < g0⁻¹ < g1 < g1⁻¹ < ...
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Sequence, Tuple

from tqdm import tqdm

from .errors import BudgetExceeded, InputFormatError
from .plmap import IDENTITY, PLMap

Letter = Tuple[int, int]

_SUPERSCRIPTS = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


class Word:
    """Reduced generator-exponent sequence"""

    __slots__ = ("_letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        merged: List[Letter] = []
        for gen, exp in letters:
            if exp == 0:
                continue
            if merged and merged[-1][0] == gen:
                total = merged[-1][1] + exp
                merged.pop()
                if total:
                    merged.append((gen, total))
            else:
                merged.append((int(gen), int(exp)))
        self._letters = tuple(merged)

    @property
    def letters(self) -> Tuple[Letter, ...]:
        return self._letters

    def __len__(self) -> int:
        return sum(abs(exp) for _, exp in self._letters)

    def unit_letters(self) -> Tuple[Letter, ...]:
        units = []
        for gen, exp in self._letters:
            sign = 1 if exp > 0 else -1
            units.extend([(gen, sign)] * abs(exp))
        return tuple(units)

    def shortlex_key(self):
        return len(self), tuple(letter_rank(unit) for unit in self.unit_letters())

    def append(self, gen: int, exp: int = 1) -> "Word":
        return Word(self._letters + ((gen, exp),))

    def last_unit(self):
        if not self._letters:
            return None
        gen, exp = self._letters[-1]
        return gen, (1 if exp > 0 else -1)

    def __invert__(self) -> "Word":
        return Word((gen, -exp) for gen, exp in reversed(self._letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self._letters + other._letters)

    def evaluate(self, gens: Sequence[PLMap]) -> PLMap:
        result = IDENTITY
        for gen, exp in self._letters:
            result = result * gens[gen].power(exp)
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self._letters == other._letters

    def __hash__(self) -> int:
        return hash(self._letters)

    def __lt__(self, other: "Word") -> bool:
        return self.shortlex_key() < other.shortlex_key()

    def __repr__(self) -> str:
        return f"Word({list(self._letters)})"

    def render(self, names: Sequence[str] = ()) -> str:
        """Human-readable form, e.g. α⁻¹β₀³α²"""
        if not self._letters:
            return "e"
        parts = []
        for gen, exp in self._letters:
            name = names[gen] if gen < len(names) else f"g{gen}"
            parts.append(name if exp == 1 else name + str(exp).translate(_SUPERSCRIPTS))
        return "".join(parts)

    def to_dict(self) -> list:
        return [{"gen": gen, "exp": exp} for gen, exp in self._letters]

    @classmethod
    def from_dict(cls, data) -> "Word":
        if not isinstance(data, list):
            raise InputFormatError("Word JSON must be a list of {gen, exp} objects")
        try:
            return cls((int(item["gen"]), int(item["exp"])) for item in data)
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"Invalid word letter: {e}")


EMPTY_WORD = Word()


def letter_rank(unit: Letter) -> int:
    gen, sign = unit
    return 2 * gen + (0 if sign > 0 else 1)


def unit_letter_maps(gens: Sequence[PLMap]) -> List[Tuple[Letter, PLMap]]:
    """Unit letters with their maps in shortlex letter order"""
    maps = []
    for index, g in enumerate(gens):
        maps.append(((index, 1), g))
        maps.append(((index, -1), g.inverse()))
    return maps


def resolve_max_elements(max_elements=None) -> int:
    if max_elements:
        return int(max_elements)
    from config import PLOI_MAX_ELEMENTS
    if PLOI_MAX_ELEMENTS:
        return PLOI_MAX_ELEMENTS
    from settings_manager import get_setting
    return int(get_setting("search.max_elements", 20000))


def enumerate_ball(gens: Sequence[PLMap], radius: int, max_elements=None,
                   progress: bool = False) -> Dict[PLMap, Word]:
    """
    All distinct elements of word length <= radius, each with its
    shortlex-least word. Iteration order of the result is shortlex order.

    Args:
        gens: generator list
        radius: maximal word length
        max_elements: cap on distinct elements (BudgetExceeded beyond it)
        progress: show a tqdm bar per level

    Returns:
        dict mapping canonical element -> Word
    """
    if radius < 0:
        raise InputFormatError("Radius must be non-negative", radius=radius)
    cap = resolve_max_elements(max_elements)
    letters = unit_letter_maps(gens)
    ball: Dict[PLMap, Word] = {IDENTITY: EMPTY_WORD}
    frontier = [(EMPTY_WORD, IDENTITY)]

    for level in tqdm(range(1, radius + 1), desc="ball", unit="level",
                      disable=not progress, leave=False):
        next_frontier = []
        for word, element in frontier:
            last = word.last_unit()
            for (gen, sign), letter_map in letters:
                if last is not None and last == (gen, -sign):
                    continue
                product = element * letter_map
                if product in ball:
                    continue
                extended = word.append(gen, sign)
                ball[product] = extended
                next_frontier.append((extended, product))
                if len(ball) > cap:
                    raise BudgetExceeded(
                        f"Word ball exceeded {cap} elements at radius {level}",
                        radius=level, max_elements=cap,
                    )
        frontier = next_frontier
        logging.debug(f"Ball level {level}: {len(next_frontier)} new, {len(ball)} total")
        if not frontier:
            break
    return ball

# plgroup_module/core/structures.py
"""
Transition chains, towers, exemplarity and mutual efficiency
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .dynamics import (ClosedInterval, Interval, SignedOrbital, group_support,
                       hull_cleared_within, min_clearing_power, orbitals_of_element,
                       realizes_end)
from .errors import BudgetExceeded, InputFormatError, NestingError, NotExemplary, VerificationError
from .plmap import PLMap, commutator
from .words import Word, enumerate_ball


# ----- transition chains -----

def _interlocked(a: Interval, b: Interval) -> bool:
    if (a.left, a.right) > (b.left, b.right):
        a, b = b, a
    return a.left < b.left < a.right < b.right


def is_transition_chain2(p: SignedOrbital, q: SignedOrbital) -> bool:
    return _interlocked(p.orbital, q.orbital)


@dataclass(frozen=True)
class TransitionChainWitness:
    first: SignedOrbital
    second: SignedOrbital
    words: Tuple[Optional[Word], Optional[Word]] = (None, None)

    def __post_init__(self):
        a, b = self.first.orbital, self.second.orbital
        if not a.left < b.left < a.right < b.right:
            raise InputFormatError("Transition chain needs a_l < b_l < a_r < b_r",
                                   first=a, second=b)

    def to_dict(self) -> dict:
        return {
            "kind": "transition_chain2",
            "first": self.first.to_dict(),
            "second": self.second.to_dict(),
            "words": [w.to_dict() if w is not None else None for w in self.words],
        }

    @classmethod
    def from_dict(cls, data) -> "TransitionChainWitness":
        words = tuple(Word.from_dict(w) if w is not None else None
                      for w in data.get("words", [None, None]))
        return cls(SignedOrbital.from_dict(data.get("first")),
                   SignedOrbital.from_dict(data.get("second")),
                   words if len(words) == 2 else (None, None))


def ball_signed_orbitals(ball: Dict[PLMap, Word]) -> List[Tuple[SignedOrbital, Word]]:
    """Signed orbitals of a ball, by shortlex word then leftmost orbital"""
    signed = []
    for element, word in ball.items():
        for orbital in orbitals_of_element(element):
            signed.append((SignedOrbital(orbital, element), word))
    return signed


def find_transition_chain2(gens: Sequence[PLMap], max_len: int,
                           max_elements=None, ball=None) -> Optional[TransitionChainWitness]:
    if ball is None:
        ball = enumerate_ball(gens, max_len, max_elements=max_elements)
    signed = ball_signed_orbitals(ball)
    for i, (p, p_word) in enumerate(signed):
        for q, q_word in signed[i + 1:]:
            if not _interlocked(p.orbital, q.orbital):
                continue
            if (p.orbital.left, p.orbital.right) <= (q.orbital.left, q.orbital.right):
                return TransitionChainWitness(p, q, (p_word, q_word))
            return TransitionChainWitness(q, p, (q_word, p_word))
    logging.debug(f"No transition chain of length two at radius {max_len}")
    return None


# ----- towers -----

def is_tower(entries: Sequence[SignedOrbital]) -> bool:
    for lower, upper in zip(entries, entries[1:]):
        if not upper.orbital.contains_interval(lower.orbital):
            return False
        if lower.orbital == upper.orbital and lower.signature != upper.signature:
            return False
    return True


def exemplary_against(g: PLMap, B: Interval) -> bool:
    """Orbitals of g avoid the ends of B, and none inside B shares an end with it"""
    for orbital in orbitals_of_element(g):
        if orbital.contains_point(B.left) or orbital.contains_point(B.right):
            return False
        if B.contains_interval(orbital) and (orbital.left == B.left or orbital.right == B.right):
            return False
    return True


def is_exemplary(entries: Sequence[SignedOrbital]) -> bool:
    if not is_tower(entries):
        return False
    for i, lower in enumerate(entries):
        for upper in entries[i + 1:]:
            if lower.orbital != upper.orbital and not exemplary_against(lower.signature, upper.orbital):
                return False
    return True


@dataclass(frozen=True)
class Tower:
    entries: Tuple[SignedOrbital, ...]
    words: Tuple[Optional[Word], ...] = field(default=())

    @property
    def height(self) -> int:
        return len(self.entries)

    @property
    def signatures(self) -> Tuple[PLMap, ...]:
        return tuple(entry.signature for entry in self.entries)

    def is_tower(self) -> bool:
        return is_tower(self.entries)

    def is_exemplary(self) -> bool:
        return is_exemplary(self.entries)

    def to_dict(self) -> dict:
        words = list(self.words) + [None] * (len(self.entries) - len(self.words))
        return {
            "kind": "tower",
            "height": self.height,
            "tower": self.is_tower(),
            "exemplary": self.is_exemplary(),
            "entries": [entry.to_dict() for entry in self.entries],
            "words": [w.to_dict() if w is not None else None for w in words],
        }

    @classmethod
    def from_dict(cls, data) -> "Tower":
        if not isinstance(data, dict) or not isinstance(data.get("entries"), list):
            raise InputFormatError("Tower JSON needs an 'entries' list")
        entries = tuple(SignedOrbital.from_dict(e) for e in data["entries"])
        words = tuple(Word.from_dict(w) if w is not None else None for w in data.get("words", []))
        return cls(entries, words)


# ----- mutual efficiency -----

@dataclass(frozen=True)
class EfficiencyReport:
    violations: Tuple[Tuple[Interval, Interval], ...] = ()

    @property
    def efficient(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "efficient": self.efficient,
            "violations": [[host.to_dict(), hull.to_dict()] for host, hull in self.violations],
        }


def check_nesting(h: PLMap, k: PLMap):
    """Raise NestingError on the first interlocked orbital pair"""
    for a in orbitals_of_element(h):
        for b in orbitals_of_element(k):
            if _interlocked(a, b):
                raise NestingError(f"Orbitals {a} and {b} interlock", pair=(a, b))


def _clearing_violations(outer: PLMap, inner: PLMap) -> List[Tuple[Interval, Interval]]:
    violations = []
    inner_orbitals = orbitals_of_element(inner)
    for host in orbitals_of_element(outer):
        inside = [o for o in inner_orbitals if host.contains_interval(o) and o != host]
        if not any(host.contains_closed(o.left, o.right) for o in inside):
            continue
        hull = ClosedInterval(inside[0].left, inside[-1].right)
        if not hull_cleared_within(hull, outer, host):
            violations.append((host, Interval(hull.left, hull.right)))
    return violations


def mutually_efficient(h: PLMap, k: PLMap) -> EfficiencyReport:
    check_nesting(h, k)
    return EfficiencyReport(tuple(_clearing_violations(h, k) + _clearing_violations(k, h)))


def _pairs_with_max(m: int) -> List[Tuple[int, int]]:
    return sorted([(a, m) for a in range(1, m)] + [(m, b) for b in range(1, m + 1)])


def efficiency_powers(h: PLMap, k: PLMap, cap=None) -> Tuple[int, int]:
    """Least (a, b) by max(a, b) then a with hᵃ, kᵇ mutually efficient"""
    check_nesting(h, k)
    if cap is None:
        from settings_manager import get_setting
        cap = get_setting("powers.efficiency_cap", 64)
    h_powers: Dict[int, PLMap] = {1: h}
    k_powers: Dict[int, PLMap] = {1: k}

    def h_pow(a):
        if a not in h_powers:
            h_powers[a] = h.power(a)
        return h_powers[a]

    def k_pow(b):
        if b not in k_powers:
            k_powers[b] = k.power(b)
        return k_powers[b]

    for m in range(1, cap + 1):
        for a, b in _pairs_with_max(m):
            if mutually_efficient(h_pow(a), k_pow(b)).efficient:
                if m > 1:
                    logging.debug(f"Efficiency reached at powers ({a}, {b})")
                return a, b
    raise BudgetExceeded(f"No mutually efficient powers up to {cap}", cap=cap)


def check_dc_facts(h: PLMap, k: PLMap, f: PLMap) -> bool:
    """
    Orbital surgery facts for f = [[h,k],k]: orbitals of h with closure inside
    an orbital of k survive in f, and every orbital of f has closure inside an
    orbital of k that contains an orbital of h.
    """
    k_orbitals = orbitals_of_element(k)
    h_orbitals = orbitals_of_element(h)
    f_orbitals = set(orbitals_of_element(f))
    for a in h_orbitals:
        if any(b.contains_closed(a.left, a.right) for b in k_orbitals) and a not in f_orbitals:
            return False
    for c in f_orbitals:
        host = next((b for b in k_orbitals if b.contains_closed(c.left, c.right)), None)
        if host is None or not any(host.contains_interval(a) for a in h_orbitals):
            return False
    return True


def commutator_orbital_bound(base: SignedOrbital, top: SignedOrbital, max_power=None) -> int:
    """
    Power M after which base.orbital is an orbital of [g₁, g₂ⁿ] for all n >= M.

    Spot-verifies n = M and n = M + 1.
    """
    if base.orbital == top.orbital or not is_exemplary([base, top]):
        raise NotExemplary("commutator_orbital_bound needs an exemplary tower of height two")
    inside = [o for o in orbitals_of_element(base.signature) if top.orbital.contains_interval(o)]
    x, y = inside[0].left, inside[-1].right
    bound = min_clearing_power(top.signature, x, y, max_power=max_power)
    for n in (bound, bound + 1):
        if base.orbital not in orbitals_of_element(commutator(base.signature, top.signature.power(n))):
            raise VerificationError(f"{base.orbital} is not an orbital of the commutator at n={n}")
    return bound


# ----- imbalance -----

@dataclass(frozen=True)
class ImbalanceWitness:
    element: PLMap
    orbital: Interval
    word: Optional[Word] = None

    def verify(self) -> bool:
        ends = realizes_end(self.element, self.orbital)
        return ends.left != ends.right

    def to_dict(self) -> dict:
        return {
            "kind": "imbalance",
            "element": self.element.to_dict(),
            "orbital": self.orbital.to_dict(),
            "word": self.word.to_dict() if self.word is not None else None,
        }


def imbalance_witness_search(gens: Sequence[PLMap], max_len: int,
                             max_elements=None, ball=None) -> Optional[ImbalanceWitness]:
    """Element realizing exactly one end of a group orbital; None means none at this radius"""
    components = group_support(gens)
    if ball is None:
        ball = enumerate_ball(gens, max_len, max_elements=max_elements)
    for element, word in ball.items():
        for component in components:
            ends = realizes_end(element, component)
            if ends.left != ends.right:
                return ImbalanceWitness(element, component, word)
    return None

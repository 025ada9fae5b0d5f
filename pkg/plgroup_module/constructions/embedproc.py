# plgroup_module/constructions/embedproc.py
"""
Constructive embedding procedures

Each "choose a sufficiently high power" step is an exact search: the stated
postcondition is checked for a candidate power and the power grows until it
holds or the configured cap is reached. Drivers record what they chose in a
PipelineTrace and never return a pair that failed its own checks.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..core.dynamics import (ClosedInterval, Consistency, Direction, FixedSet, Interval,
                             SignedOrbital, direction_on, fixed_set_in, group_support,
                             hull_cleared_within, min_clearing_power, orbital_containing,
                             orbitals_of_element, pair_cleared, realization_consistency,
                             realizes_end, spanning_element, supports_separated)
from ..core.errors import (BudgetExceeded, NestingError, NoInconsistentOrbital, NotExemplary,
                           PLGroupError, PreconditionError, VerificationError)
from ..core.plmap import IDENTITY, PLMap, commutator, conjugate, double_commutator
from ..core.structures import (Tower, check_dc_facts, check_nesting, efficiency_powers,
                               find_transition_chain2)
from ..core.words import enumerate_ball
from ..utils.decorators import escalate, track_stage
from .builders import BCertificate, FamilyLabel, GeneratorFamily, assemble_family, bcert_check


def _setting(key, default):
    from settings_manager import get_setting
    return get_setting(key, default)


# ----- orbital census -----

class OrbitalType(Enum):
    AB = "AB"
    Ab = "Ab"
    aB = "aB"
    aabb = "aabb"
    aab = "aab"
    abb = "abb"


INCONSISTENT_TYPES = frozenset({OrbitalType.aabb, OrbitalType.aab, OrbitalType.abb})
NORMAL_TYPES = frozenset({OrbitalType.Ab, OrbitalType.aab})

Census = Dict[Interval, OrbitalType]

_TYPE_TABLE = {
    ("consistent", "consistent"): OrbitalType.AB,
    ("consistent", "neither"): OrbitalType.Ab,
    ("neither", "consistent"): OrbitalType.aB,
    ("inconsistent", "inconsistent"): OrbitalType.aabb,
    ("inconsistent", "neither"): OrbitalType.aab,
    ("neither", "inconsistent"): OrbitalType.abb,
}


def _end_behaviour(g: PLMap, Z: Interval) -> str:
    ends = realizes_end(g, Z)
    if ends.neither:
        return "neither"
    if not ends.both:
        raise PreconditionError(f"Element realizes exactly one end of {Z}; the group is not balanced",
                                orbital=Z)
    if realization_consistency(g, Z) is Consistency.INCONSISTENT:
        return "inconsistent"
    return "consistent"


def classify_orbital_types(a: PLMap, b: PLMap) -> Census:
    """Type of every orbital of ⟨a, b⟩, left to right"""
    census = {}
    for component in group_support([a, b]):
        key = (_end_behaviour(a, component), _end_behaviour(b, component))
        if key not in _TYPE_TABLE:
            raise PreconditionError(f"Orbital {component} has no type", a=key[0], b=key[1])
        census[component] = _TYPE_TABLE[key]
    return census


def census_to_list(census: Census) -> list:
    return [{"orbital": orbital.to_dict(), "type": kind.value} for orbital, kind in census.items()]


# ----- trace -----

@dataclass(frozen=True)
class StageRecord:
    label: str
    powers: Dict[str, int]
    before: Tuple[Tuple[Interval, OrbitalType], ...] = ()
    after: Tuple[Tuple[Interval, OrbitalType], ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "powers": dict(self.powers),
            "before": census_to_list(dict(self.before)),
            "after": census_to_list(dict(self.after)),
            "note": self.note,
        }


@dataclass
class PipelineTrace:
    stages: List[StageRecord] = field(default_factory=list)

    def record(self, label: str, powers: Dict[str, int], before: Optional[Census] = None,
               after: Optional[Census] = None, note: str = ""):
        entry = StageRecord(label, dict(powers), tuple((before or {}).items()),
                            tuple((after or {}).items()), note)
        self.stages.append(entry)
        logging.debug(f"Trace {label}: {entry.powers} {note}".rstrip())

    def __len__(self) -> int:
        return len(self.stages)

    def to_dict(self) -> dict:
        return {"kind": "trace", "stages": [stage.to_dict() for stage in self.stages]}


# ----- shared helpers -----

def _power_cap(max_power=None) -> int:
    return int(max_power) if max_power else int(_setting("powers.max_power", 2 ** 20))


def _least_power(check: Callable[[int], bool], label: str, start: int = 0, max_power=None) -> int:
    """Least n >= start with check(n), for checks that stay true once true"""
    if check(start):
        return start
    cap = _power_cap(max_power)
    low, high = start, max(2 * start, start + 1)
    while not check(high):
        low, high = high, 2 * high
        if high > cap:
            raise BudgetExceeded(f"{label}: no power up to {cap} passes", step=label)
    while high - low > 1:
        mid = (low + high) // 2
        if check(mid):
            high = mid
        else:
            low = mid
    return high


def _inner_fixed(g: PLMap, Z: Interval) -> List[ClosedInterval]:
    """Components of the fixed set of g in Z that stay away from both ends of Z"""
    return [c for c in fixed_set_in(g, Z).components if Z.left < c.left and c.right < Z.right]


def _fixed_hull(g: PLMap, Z: Interval) -> ClosedInterval:
    hull = FixedSet(tuple(_inner_fixed(g, Z))).hull()
    if hull is None:
        raise PreconditionError(f"Element has no interior fixed points in {Z}")
    return hull


def _spanning_orbital(g: PLMap, hull: ClosedInterval) -> Optional[Interval]:
    return next((o for o in orbitals_of_element(g) if o.contains_closed(hull.left, hull.right)), None)


def _closure_in(g: PLMap, Z: Interval) -> Optional[ClosedInterval]:
    inside = [o for o in orbitals_of_element(g) if Z.contains_interval(o)]
    if not inside:
        return None
    return ClosedInterval(inside[0].left, inside[-1].right)


def _inside(outer: Optional[Interval], hull: Optional[ClosedInterval]) -> bool:
    if hull is None:
        return True
    return outer is not None and outer.contains_closed(hull.left, hull.right)


def _hosted_clearing_power(mover: PLMap, pieces: Sequence[ClosedInterval], max_power=None) -> int:
    """Least n moving the pieces off themselves, hull by hull per orbital of mover"""
    grouped: Dict[Interval, List[ClosedInterval]] = {}
    for piece in sorted(pieces):
        host = _spanning_orbital(mover, piece)
        if host is None:
            raise PreconditionError(f"[{piece.left}, {piece.right}] is not inside an orbital of the moving element")
        grouped.setdefault(host, []).append(piece)
    power = 0
    for inside in grouped.values():
        power = max(power, min_clearing_power(mover, inside[0].left, inside[-1].right,
                                              max_power=max_power))
    return power


def _inconsistent_orbitals(a: PLMap, b: PLMap) -> List[Interval]:
    return [Z for Z in group_support([a, b])
            if realization_consistency(a, Z) is Consistency.INCONSISTENT]


def _leading_orbital(g: PLMap, Z: Interval) -> Interval:
    return next(o for o in orbitals_of_element(g) if o.left == Z.left)


def _trailing_orbital(g: PLMap, Z: Interval) -> Interval:
    return next(o for o in orbitals_of_element(g) if o.right == Z.right)


# ----- the commutator mechanism -----

@escalate("mechanism_step")
def mechanism_step(a: PLMap, b: PLMap, a_sign: int = 1, scale: int = 1, max_power=None):
    """
    b' = [a^(±j), b^k] with j, k large enough to move the relevant fixed sets
    off themselves.

    k clears the interior fixed set of a in orbitals of type aabb and aab, the
    interior fixed components of a in type abb and the support of a in type
    aB (all by b); j clears the interior fixed set of b in type abb (by a).

    Returns:
        (b', j, k)
    """
    census = classify_orbital_types(a, b)
    if not any(kind in INCONSISTENT_TYPES for kind in census.values()):
        raise NoInconsistentOrbital("⟨a, b⟩ has no inconsistent orbital")

    fa_pieces, a_support, fb_pieces = [], [], []
    for Z, kind in census.items():
        if kind in INCONSISTENT_TYPES:
            fa_pieces.extend(_inner_fixed(a, Z))
        if kind is OrbitalType.aB:
            a_support.extend(ClosedInterval(o.left, o.right)
                             for o in orbitals_of_element(a) if Z.contains_interval(o))
        if kind is OrbitalType.abb:
            fb_pieces.extend(_inner_fixed(b, Z))

    n1 = _hosted_clearing_power(b, fa_pieces, max_power)
    n2 = _hosted_clearing_power(b, a_support, max_power)
    m = _hosted_clearing_power(a, fb_pieces, max_power)
    j = max(m, 1) * scale
    k = max(n1, n2, 1) * scale

    result = commutator(a.power(a_sign * j), b.power(k))
    for Z, kind in census.items():
        if kind in INCONSISTENT_TYPES:
            for piece in _inner_fixed(a, Z):
                if _spanning_orbital(result, piece) is None:
                    raise VerificationError(f"Fixed component [{piece.left}, {piece.right}] of a is not moved",
                                            j=j, k=k)
    return result, j, k


# ----- census normalization -----

SIGN_SCHEDULE = (1, 1, 1, -1, 1, 1)


def _is_normal(census: Census) -> bool:
    kinds = set(census.values())
    return OrbitalType.aab in kinds and kinds <= NORMAL_TYPES


@escalate("normalization stage")
def _normalization_stage(a: PLMap, b: PLMap, sign: int, scale: int = 1):
    before = classify_orbital_types(a, b)
    result, j, k = mechanism_step(a, b, a_sign=sign, scale=scale)
    after = classify_orbital_types(a, result)
    for Z, kind in before.items():
        if kind in (OrbitalType.aabb, OrbitalType.aab) and after.get(Z) is not OrbitalType.aab:
            raise VerificationError(f"{Z} did not become an orbital of type aab", j=j, k=k)
    return result, j, k, before, after


@track_stage("normalize")
def normalize_orbital_types(a: PLMap, b: PLMap, max_stages=None,
                            trace: Optional[PipelineTrace] = None):
    """
    Repeat the mechanism until every orbital of ⟨a, b⟩ has type Ab or aab

    Returns:
        (a, b', trace)
    """
    trace = trace if trace is not None else PipelineTrace()
    if _is_normal(classify_orbital_types(a, b)):
        return a, b, trace

    cap = int(max_stages or _setting("powers.max_stages", 12))
    for stage in range(cap):
        sign = SIGN_SCHEDULE[stage] if stage < len(SIGN_SCHEDULE) else 1
        try:
            b, j, k, before, after = _normalization_stage(a, b, sign)
        except BudgetExceeded as e:
            raise BudgetExceeded(e.message, trace=trace, stage=stage + 1)
        trace.record(f"normalize.{stage + 1}", {"a_power": sign * j, "b_power": k}, before, after)
        if _is_normal(after):
            return a, b, trace
    raise BudgetExceeded(f"Orbital census still mixed after {cap} stages", trace=trace, max_stages=cap)


# ----- spanning conjugates -----

def spanning_conjugate(a: PLMap, b: PLMap, A: Interval, search_budget=None) -> PLMap:
    """
    Conjugate of b in ⟨a, b⟩ with one orbital containing the fixed set of a in A

    a realizes both ends of A and b neither. Returns b itself when it already
    qualifies.
    """
    budget = int(_setting("search.max_word_length", 8) if search_budget is None else search_budget)
    hull = _fixed_hull(a, A)
    x, y = hull.left, hull.right
    if _spanning_orbital(b, hull) is not None:
        return b

    _, theta = spanning_element([a, b], A, x, y, budget)
    C = orbital_containing(b, x)
    if C is None:
        raise PreconditionError(f"b does not move the fixed point {x} of a", x=x)
    target = theta.evaluate_inverse(x)
    k = 0
    if not C.left < target:
        leading = Interval(A.left, x)
        sign = 1 if direction_on(a, leading) is Direction.LEFT else -1
        mover = a if sign == 1 else a.inverse()
        k = sign * min_clearing_power(mover, target, C.left, direction=Direction.LEFT)

    gamma = conjugate(conjugate(b, a.power(k)), theta)
    if _spanning_orbital(gamma, hull) is None:
        raise VerificationError(f"Conjugate does not span [{x}, {y}]", k=k)
    logging.debug(f"Spanning conjugate found with a-power {k}")
    return gamma


# ----- chain splitting -----

def _squeeze_into_earlier(gammas: List[PLMap], hulls: List[ClosedInterval], orbitals: List[Interval],
                          squeezer: PLMap, i: int) -> int:
    """Power of squeezer pushing the support of gammas[i] into the spanning orbitals before i"""

    def fits(n):
        moved = conjugate(gammas[i], squeezer.power(n))
        return all(_inside(_spanning_orbital(gammas[j], hulls[j]), _closure_in(moved, orbitals[j]))
                   for j in range(i))

    return _least_power(fits, "squeeze")


def _needed_hull(gammas, hulls, orbitals, k) -> ClosedInterval:
    left, right = hulls[k].left, hulls[k].right
    for later in gammas[k + 1:]:
        closure = _closure_in(later, orbitals[k])
        if closure is not None:
            left, right = min(left, closure.left), max(right, closure.right)
    return ClosedInterval(left, right)


def _extend_product(rho: PLMap, gamma: PLMap, D: Interval, needed: ClosedInterval):
    """One inductive step; returns (new product, case) or None when D shares an end with rho"""
    for F in orbitals_of_element(rho):
        if F.contains_point(D.left):
            mover, sign = (gamma, 1) if direction_on(gamma, D) is Direction.RIGHT else (gamma.inverse(), -1)
            n = 0 if F.right > needed.right else min_clearing_power(mover, F.right, needed.right)
            return conjugate(rho, gamma.power(sign * n)), "conjugate"
        if F.contains_point(D.right):
            mover, sign = (gamma, 1) if direction_on(gamma, D) is Direction.LEFT else (gamma.inverse(), -1)
            n = 0 if F.left < needed.left else min_clearing_power(mover, needed.left, F.left)
            return conjugate(rho, gamma.power(sign * n)), "conjugate"
    for o in orbitals_of_element(rho):
        if D.contains_interval(o) and (o.left == D.left or o.right == D.right):
            return None
    return rho * gamma, "product"


def _spanning_product(a1: PLMap, b: PLMap, orbitals: List[Interval], squeezer: PLMap,
                      retries: int, trace: PipelineTrace, label: str) -> Tuple[PLMap, Dict[Interval, Interval]]:
    """
    One element of ⟨a1, b⟩ realizing no group end, with an orbital E_Z containing
    the fixed set of a1 in every Z of orbitals
    """
    hulls = [_fixed_hull(a1, Z) for Z in orbitals]
    gammas = [spanning_conjugate(a1, b, Z) for Z in orbitals]
    for i in range(1, len(gammas)):
        n = _squeeze_into_earlier(gammas, hulls, orbitals, squeezer, i)
        gammas[i] = conjugate(gammas[i], squeezer.power(n))

    rho = gammas[0]
    spans = {orbitals[0]: _spanning_orbital(rho, hulls[0])}
    trace.record(f"{label}.1", {}, note="first spanning conjugate")
    for k in range(1, len(gammas)):
        for attempt in range(retries + 1):
            D = _spanning_orbital(gammas[k], hulls[k])
            needed = _needed_hull(gammas, hulls, orbitals, k)
            step = _extend_product(rho, gammas[k], D, needed)
            if step is not None:
                candidate, case = step
                E = _spanning_orbital(candidate, needed)
                kept = all(S in orbitals_of_element(candidate) for S in spans.values())
                if E is not None and orbitals[k].contains_interval(E) and kept:
                    rho = candidate
                    spans[orbitals[k]] = E
                    trace.record(f"{label}.{k + 1}", {"retries": attempt}, note=case)
                    break
            push = squeezer.power(2 ** attempt)
            gammas[k:] = [conjugate(g, push) for g in gammas[k:]]
        else:
            raise BudgetExceeded(f"{label}: step {k + 1} did not settle after {retries} retries",
                                 trace=trace, retries=retries)
    return rho, spans


def chain_split_checks(a1: PLMap, b1: PLMap, A: Interval) -> Dict[str, bool]:
    """
    The four properties of a split pair: A stays a group orbital, b1 realizes
    no end, each inconsistent orbital is a length-three chain a1 / b1 / a1, and
    a1 moves left on every leading orbital.
    """
    components = group_support([a1, b1])
    checks = {
        "orbital_kept": A in components,
        "no_end_realized": all(realizes_end(b1, Z).neither for Z in components),
        "three_chains": True,
        "leading_left": True,
    }
    for Z in _inconsistent_orbitals(a1, b1):
        leading, trailing = _leading_orbital(a1, Z), _trailing_orbital(a1, Z)
        middle = _spanning_orbital(b1, ClosedInterval(leading.right, trailing.left))
        if leading == trailing or middle is None or not Z.contains_interval(middle):
            checks["three_chains"] = False
        if direction_on(a1, leading) is not Direction.LEFT:
            checks["leading_left"] = False
    return checks


@track_stage("chain_split")
def chain_split(a: PLMap, b: PLMap, max_retries=None, trace: Optional[PipelineTrace] = None):
    """
    Returns:
        (a1, b1, trace) with a1 = a or a⁻¹ and b1 in ⟨a, b⟩
    """
    trace = trace if trace is not None else PipelineTrace()
    retries = int(max_retries if max_retries is not None else _setting("powers.max_retries", 8))
    components = group_support([a, b])
    if not all(realizes_end(b, Z).neither for Z in components):
        raise PreconditionError("b realizes an end of an orbital of ⟨a, b⟩")
    inconsistent = _inconsistent_orbitals(a, b)
    if not inconsistent:
        raise NoInconsistentOrbital("⟨a, b⟩ has no inconsistent orbital")

    A = inconsistent[0]
    flip = direction_on(a, _leading_orbital(a, A)) is not Direction.LEFT
    a1 = a.inverse() if flip else a
    lefts = [Z for Z in inconsistent if direction_on(a1, _leading_orbital(a1, Z)) is Direction.LEFT]
    rights = [Z for Z in inconsistent if Z not in lefts]
    trace.record("split.orient", {"a_sign": -1 if flip else 1},
                 note=f"{len(lefts)} left-leading, {len(rights)} right-leading")

    rho, rho_spans = _spanning_product(a1, b, lefts, a1.inverse(), retries, trace, "split.rho")
    b1 = rho
    if rights:
        psi, psi_spans = _spanning_product(a1, b, rights, a1, retries, trace, "split.psi")

        def shifted(p):
            moved = conjugate(rho, a1.power(p))
            for Z in lefts:
                G = _spanning_orbital(moved, _fixed_hull(a1, Z))
                if not _inside(G, _closure_in(psi, Z)):
                    return False
            return all(_inside(psi_spans[Z], _closure_in(moved, Z)) for Z in rights)

        p = _least_power(shifted, "split.shift")
        rho = conjugate(rho, a1.power(p))
        trace.record("split.shift", {"p": p})

        def spread(q):
            moved = conjugate(rho, psi.power(q))
            for Z in rights:
                closure, hull = _closure_in(moved, Z), _fixed_hull(a1, Z)
                if closure is not None and not (closure.right < hull.left or closure.left > hull.right):
                    return False
            return True

        q = _least_power(spread, "split.spread")
        b1 = conjugate(rho, psi.power(q))
        trace.record("split.spread", {"q": q})

    checks = chain_split_checks(a1, b1, A)
    if not all(checks.values()):
        failed = ", ".join(name for name, ok in checks.items() if not ok)
        raise VerificationError(f"Split pair fails: {failed}")
    return a1, b1, trace


# ----- B extraction -----

def _confine_to_inconsistent(a: PLMap, b: PLMap, trace: PipelineTrace) -> PLMap:
    """Replace b by [bᵐ, (bᵐ)^(aⁿ)] so it lives only in inconsistent orbitals"""
    components = group_support([a, b])
    inconsistent = _inconsistent_orbitals(a, b)
    consistent = [Z for Z in components if Z not in inconsistent]
    hulls = {Z: _fixed_hull(a, Z) for Z in inconsistent}
    closures = {Z: _closure_in(b, Z) for Z in components}

    def spread_ok(n):
        moved = conjugate(b, a.power(n))
        for Z in inconsistent:
            if not _inside(_spanning_orbital(moved, hulls[Z]), closures[Z]):
                return False
        for Z in consistent:
            before, after = closures[Z], _closure_in(moved, Z)
            if before is not None and not (after.left > before.right or after.right < before.left):
                return False
        return True

    n = _least_power(spread_ok, "cleanup.spread", start=1)
    spread = conjugate(b, a.power(n))

    def clear_ok(m):
        upper = spread.power(m)
        return all(hull_cleared_within(closures[Z], upper, _spanning_orbital(spread, hulls[Z]))
                   for Z in inconsistent)

    m = _least_power(clear_ok, "cleanup.clear", start=1)
    bm = b.power(m)
    result = commutator(bm, conjugate(bm, a.power(n)))

    new_components = group_support([a, result])
    for Z in inconsistent:
        if Z not in new_components or _spanning_orbital(result, hulls[Z]) is None:
            raise VerificationError(f"Cleanup lost the spanning orbital in {Z}", n=n, m=m)
    for Z in consistent:
        if _closure_in(result, Z) is not None:
            raise VerificationError(f"Cleanup left support in consistent orbital {Z}", n=n, m=m)
    trace.record("cleanup", {"n": n, "m": m})
    return result


def _find_b(a: PLMap, gamma0: PLMap, trace: PipelineTrace) -> Tuple[PLMap, PLMap, BCertificate]:
    inconsistent = _inconsistent_orbitals(a, gamma0)
    hulls = {Z: _fixed_hull(a, Z) for Z in inconsistent}
    closures = {Z: _closure_in(gamma0, Z) for Z in inconsistent}

    def spread_ok(k):
        moved = conjugate(gamma0, a.power(k))
        return all(_inside(_spanning_orbital(moved, hulls[Z]), closures[Z]) for Z in inconsistent)

    k = _least_power(spread_ok, "find_b.spread", start=1)
    a_new = a.power(k)
    j = _least_power(lambda n: bcert_check(gamma0.power(n), a_new).cleared, "find_b.clear", start=1)
    gamma = gamma0.power(j)
    cert = bcert_check(gamma, a_new)
    if not cert.valid:
        raise VerificationError("B certificate did not clear", k=k, j=j)
    trace.record("find_b", {"k": k, "j": j})
    return a_new, gamma, cert


@track_stage("extract_b")
def extract_b(a: PLMap, b: PLMap, chain_radius=None, max_elements=None, max_stages=None,
              max_retries=None):
    """
    Pair (a', γ₀) in ⟨a, b⟩ generating a copy of B, with its certificate

    Starts from the signatures of a transition chain of length two found in
    the word ball.

    Returns:
        (a', γ₀, BCertificate, PipelineTrace)
    """
    radius = int(chain_radius or _setting("search.radius", 3))
    witness = find_transition_chain2([a, b], radius, max_elements=max_elements)
    if witness is None:
        raise PreconditionError(f"No transition chain of length two within radius {radius}",
                                radius=radius)
    a, b = witness.first.signature, witness.second.signature
    trace = PipelineTrace()
    census = classify_orbital_types(a, b)
    kinds = set(census.values())
    if not kinds & {OrbitalType.aabb, OrbitalType.aab} and OrbitalType.abb in kinds:
        a, b = b, a
        trace.record("swap", {}, census, classify_orbital_types(a, b))

    try:
        a, b, trace = normalize_orbital_types(a, b, max_stages=max_stages, trace=trace)
        a, b, trace = chain_split(a, b, max_retries=max_retries, trace=trace)
        b = _confine_to_inconsistent(a, b, trace)
        a_new, gamma0, cert = _find_b(a, b, trace)
    except BudgetExceeded as e:
        if e.trace is None:
            e.trace = trace
        raise
    logging.info(f"✅ B certificate cleared after {len(trace)} recorded stages")
    return a_new, gamma0, cert, trace


# ----- finite towers to W_n -----

def _cleared_powers(lower: PLMap, upper: PLMap, retries: int):
    """Efficiency powers, then larger upper powers, until the pair clears"""
    p, q = efficiency_powers(lower, upper)
    lower, upper = lower.power(p), upper.power(q)
    for _ in range(retries + 1):
        if pair_cleared(lower, upper):
            return lower, upper
        upper = upper.power(2)
    return None


def _improve_pair(lower: PLMap, upper: PLMap, orbital: Interval, retries: int):
    try:
        improved = _cleared_powers(lower, upper, retries)
    except (NestingError, BudgetExceeded):
        improved = None
    if improved is not None:
        return improved[0], improved[1], False

    surgery = double_commutator(lower, upper)
    if not check_dc_facts(lower, upper, surgery) or orbital not in orbitals_of_element(surgery):
        raise VerificationError(f"Double commutator lost {orbital}")
    improved = _cleared_powers(surgery, upper, retries)
    if improved is None:
        raise BudgetExceeded(f"Pair at {orbital} does not clear after {retries} retries")
    return improved[0], improved[1], True


@track_stage("tower_to_wn")
def tower_to_wn(tower: Tower, max_retries=None) -> GeneratorFamily:
    """
    Top-down pass turning an exemplary tower into generators of W_n

    Each pair that does not already clear is powered to mutual efficiency,
    and replaced by the double commutator with its successor when powering
    alone is not enough.
    """
    if tower.height < 1:
        raise PreconditionError("tower_to_wn needs a tower of height at least one")
    if not tower.is_exemplary():
        raise NotExemplary("tower_to_wn needs an exemplary tower")
    retries = int(max_retries if max_retries is not None else _setting("powers.max_retries", 8))
    levels = list(tower.signatures)
    for lower, upper in zip(levels, levels[1:]):
        check_nesting(lower, upper)

    for i in range(len(levels) - 2, -1, -1):
        if pair_cleared(levels[i], levels[i + 1]):
            continue
        levels[i], levels[i + 1], surgery = _improve_pair(levels[i], levels[i + 1],
                                                          tower.entries[i].orbital, retries)
        logging.debug(f"Level {i} improved{' by double commutator' if surgery else ' by powering'}")

    family = assemble_family(FamilyLabel.WN, [[((i,), g) for i, g in enumerate(levels)]])
    if not family.valid:
        raise BudgetExceeded("Improved tower fails its wreath certificate")
    return family


def confine(h: PLMap, d: PLMap) -> PLMap:
    """Double commutator with d after efficiency powering; support lands inside supp(d)"""
    p, q = efficiency_powers(h, d)
    hp, dq = h.power(p), d.power(q)
    surgery = double_commutator(hp, dq)
    if surgery.is_identity() or not check_dc_facts(hp, dq, surgery):
        raise VerificationError("Confinement failed its orbital checks")
    return surgery


@dataclass(frozen=True)
class WitnessResult:
    families: Tuple[GeneratorFamily, ...]
    report: Dict[str, object]

    def to_dict(self) -> dict:
        return {
            "kind": "witness",
            "families": [f.to_dict() for f in self.families],
            "report": self.report,
        }


def _depth_one_element(ball, components) -> Optional[PLMap]:
    for element in ball:
        if any(o in components for o in orbitals_of_element(element)):
            return element
    return None


def _conjugators(ball, depth_one: Optional[PLMap], bound: int, samples: int) -> List[PLMap]:
    candidates = [IDENTITY]
    if depth_one is not None:
        for p in range(1, bound + 1):
            candidates.extend([depth_one.power(p), depth_one.power(-p)])
    elements = [g for g in ball if not g.is_identity()]
    for p in range(1, bound + 1):
        for g in elements:
            candidates.extend([g.power(p), g.power(-p)])
    if depth_one is None:
        pairs = [(g, h) for i, g in enumerate(elements) for h in elements[i + 1:]][:samples]
        candidates.extend(c for c in (commutator(g, h) for g, h in pairs) if not c.is_identity())
    return candidates


def _confined_tower(tower: Tower, d: PLMap) -> Optional[Tower]:
    host = orbitals_of_element(d)
    entries = []
    for entry in tower.entries:
        signature = entry.signature
        support = group_support([signature])
        if not all(any(o.contains_closed(s.left, s.right) for o in host) for s in support):
            try:
                signature = confine(signature, d)
            except PLGroupError:
                return None
            if entry.orbital not in orbitals_of_element(signature):
                return None
        entries.append(SignedOrbital(entry.orbital, signature))
    confined = Tower(tuple(entries), tower.words)
    return confined if confined.is_exemplary() else None


@track_stage("w_witness")
def w_witness(gens: Sequence[PLMap], heights=None, radius=None, conjugator_power=None,
              max_elements=None) -> WitnessResult:
    """
    Families certifying W_1, ..., W_m with pairwise disjoint supports

    Best effort: heights that cannot be placed are listed in the report.
    """
    from ..analysis.analyzer import tower_search

    m = int(heights or _setting("witness.heights", 3))
    radius = int(radius or _setting("witness.conjugator_radius", 3))
    bound = int(conjugator_power or _setting("witness.conjugator_power", 8))
    samples = int(_setting("search.commutator_samples", 64))
    report: Dict[str, object] = {"requested": m, "radius": radius, "case": "none",
                                 "placed": [], "skipped": []}

    components = group_support(gens)
    if not components:
        report["skipped"] = [{"height": k, "reason": "trivial group"} for k in range(1, m + 1)]
        return WitnessResult((), report)

    ball = enumerate_ball(gens, radius, max_elements=max_elements)
    tower = tower_search(gens, radius, m, ball=ball)
    if tower is None:
        report["skipped"] = [{"height": k, "reason": "no tower in ball"} for k in range(1, m + 1)]
        return WitnessResult((), report)

    depth_one = _depth_one_element(ball, components)
    report["case"] = "depth_one" if depth_one is not None else "sampling"
    candidates = _conjugators(ball, depth_one, bound, samples)

    placed: List[Tuple[int, GeneratorFamily]] = []
    for k in range(min(m, tower.height), 0, -1):
        sub = Tower(tower.entries[:k], tower.words[:k])
        if depth_one is not None:
            sub = _confined_tower(sub, depth_one) or sub
        try:
            family = tower_to_wn(sub)
        except PLGroupError as e:
            report["skipped"].append({"height": k, "reason": str(e)})
            continue
        for conjugator in candidates:
            moved = [conjugate(g, conjugator) for g in family.members]
            if all(supports_separated(moved, other.members) for _, other in placed):
                assembled = assemble_family(FamilyLabel.W_TRUNCATION,
                                            [[((k, i), g) for i, g in enumerate(moved)]])
                if assembled.valid:
                    placed.append((k, assembled))
                    break
        else:
            report["skipped"].append({"height": k, "reason": "no separating conjugator"})
    for k in range(tower.height + 1, m + 1):
        report["skipped"].append({"height": k, "reason": f"tallest tower has height {tower.height}"})

    placed.sort(key=lambda item: item[0])
    report["placed"] = [k for k, _ in placed]
    report["skipped"].sort(key=lambda item: item["height"])
    return WitnessResult(tuple(f for _, f in placed), report)

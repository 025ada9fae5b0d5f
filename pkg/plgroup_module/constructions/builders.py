# plgroup_module/constructions/builders.py
"""
Explicit elements α, β₀, β_k and certified wreath-type constructions

Every family carries its certificates; nothing here is trusted without a
clearing check.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from cachetools import LRUCache, cached

from ..core.dynamics import (ClosedInterval, Interval, group_support, hull_cleared_within,
                             orbitals_of_element, pair_cleared, supports_disjoint,
                             supports_separated)
from ..core.errors import IdentityInput, InputFormatError, PreconditionError
from ..core.plmap import ONE, ZERO, PLMap, conjugate, make_plmap
from ..utils.serialization import require_kind

ALPHA_POINTS = (
    ("0", "0"), ("1/4", "1/16"), ("7/16", "1/4"), ("9/16", "3/4"), ("3/4", "15/16"), ("1", "1"),
)
BETA0_POINTS = (
    ("0", "0"), ("7/16", "7/16"), ("15/32", "1/2"), ("1/2", "17/32"), ("9/16", "9/16"), ("1", "1"),
)
BETA1_POINTS = (
    ("0", "0"), ("1/4", "1/4"), ("3/8", "1/2"), ("1/2", "5/8"), ("3/4", "3/4"), ("1", "1"),
)

# Inserted groups live here; it is a fundamental domain of β₁
INSERTION_TARGET = Interval(Fraction(7, 16), Fraction(9, 16))

_ALPHA = make_plmap(ALPHA_POINTS)
_BETA0 = make_plmap(BETA0_POINTS)


def alpha() -> PLMap:
    return _ALPHA


def beta0() -> PLMap:
    return _BETA0


@cached(cache=LRUCache(maxsize=256))
def beta(k: int) -> PLMap:
    """β_k = β₀^(α^k)"""
    if k == 0:
        return _BETA0
    return conjugate(_BETA0, _ALPHA.power(k))


def rescale_insert(g: PLMap, target: Interval) -> PLMap:
    """
    Copy of g acting on target through the affine bijection [0,1] -> closure(target)

    Identity outside target.
    """
    left, width = target.left, target.length
    points = [(ZERO, ZERO)]
    for x, y in g.points:
        point = (left + width * x, left + width * y)
        if point != points[-1]:
            points.append(point)
    if points[-1] != (ONE, ONE):
        points.append((ONE, ONE))
    return PLMap(points)


# ----- wreath certificates -----

def _level_check(lower: PLMap, upper: PLMap) -> bool:
    try:
        return pair_cleared(lower, upper)
    except IdentityInput:
        return False


@dataclass(frozen=True)
class WreathCert:
    """Adjacent clearing checks for levels listed bottom to top"""

    levels: Tuple[PLMap, ...]
    checks: Tuple[bool, ...]

    @classmethod
    def certify(cls, levels: Sequence[PLMap]) -> "WreathCert":
        levels = tuple(levels)
        checks = tuple(_level_check(lower, upper) for lower, upper in zip(levels, levels[1:]))
        return cls(levels, checks)

    @property
    def valid(self) -> bool:
        if not self.levels or any(level.is_identity() for level in self.levels):
            return False
        return len(self.checks) == len(self.levels) - 1 and all(self.checks)

    def to_dict(self) -> dict:
        return {
            "kind": "wreath",
            "levels": [level.to_dict() for level in self.levels],
            "checks": list(self.checks),
            "valid": self.valid,
        }

    @classmethod
    def from_dict(cls, data) -> "WreathCert":
        data = require_kind(data, "wreath")
        if not isinstance(data.get("levels"), list):
            raise InputFormatError("Wreath certificate needs a 'levels' list")
        levels = tuple(PLMap.from_dict(level) for level in data["levels"])
        return cls(levels, tuple(bool(c) for c in data.get("checks", [])))


def conjugates_commute(lower: PLMap, upper: PLMap, span: int = 2) -> bool:
    """
    Conjugates of lower by distinct powers of upper in [-span, span] have
    disjoint supports and commute
    """
    conjugates = [conjugate(lower, upper.power(j)) for j in range(-span, span + 1)]
    for i, first in enumerate(conjugates):
        for second in conjugates[i + 1:]:
            if not supports_disjoint(first, second):
                return False
            if first * second != second * first:
                return False
    return True


# ----- B certificate -----

@dataclass(frozen=True)
class BCertificate:
    omega0: PLMap
    gamma: PLMap
    omega1: PLMap
    hull: Optional[ClosedInterval]
    cleared: bool
    hulls: Tuple[ClosedInterval, ...] = ()
    trivial: bool = False

    @property
    def valid(self) -> bool:
        return self.cleared and not self.trivial

    def to_dict(self) -> dict:
        return {
            "kind": "b_certificate",
            "omega0": self.omega0.to_dict(),
            "gamma": self.gamma.to_dict(),
            "omega1": self.omega1.to_dict(),
            "hull": self.hull.to_list() if self.hull is not None else None,
            "hulls": [h.to_list() for h in self.hulls],
            "cleared": self.cleared,
            "trivial": self.trivial,
        }

    @classmethod
    def from_dict(cls, data) -> "BCertificate":
        data = require_kind(data, "b_certificate")
        hull = data.get("hull")
        return cls(
            omega0=PLMap.from_dict(data.get("omega0")),
            gamma=PLMap.from_dict(data.get("gamma")),
            omega1=PLMap.from_dict(data.get("omega1")),
            hull=ClosedInterval.from_list(hull) if hull is not None else None,
            cleared=bool(data.get("cleared")),
            hulls=tuple(ClosedInterval.from_list(h) for h in data.get("hulls", [])),
            trivial=bool(data.get("trivial")),
        )


def _component_hulls(omega0: PLMap, gamma: PLMap) -> List[ClosedInterval]:
    """Hull of supp(ω₀) inside each orbital of ⟨ω₀, γ⟩ it meets"""
    hulls = []
    orbitals = orbitals_of_element(omega0)
    for component in group_support([omega0, gamma]):
        inside = [o for o in orbitals if component.contains_interval(o)]
        if inside:
            hulls.append(ClosedInterval(inside[0].left, inside[-1].right))
    return hulls


def _hull_cleared(hull: ClosedInterval, omega1: PLMap) -> bool:
    for host in orbitals_of_element(omega1):
        if host.contains_closed(hull.left, hull.right):
            return hull_cleared_within(hull, omega1, host)
    return False


def bcert_check(omega0: PLMap, gamma: PLMap) -> BCertificate:
    """
    ω₁ = ω₀^γ and whether ω₁ moves the support hull of ω₀ off itself

    With one group orbital this is hull_cleared_by(ω₀, ω₁); otherwise the
    hull is taken per group orbital.
    """
    omega1 = conjugate(omega0, gamma)
    if omega0.is_identity():
        return BCertificate(omega0, gamma, omega1, None, False, (), trivial=True)
    hulls = _component_hulls(omega0, gamma)
    hull = ClosedInterval(hulls[0].left, hulls[-1].right)
    cleared = all(_hull_cleared(h, omega1) for h in hulls)
    return BCertificate(omega0, gamma, omega1, hull, cleared, tuple(hulls))


# ----- generator families -----

class FamilyLabel(Enum):
    GAMMA = "GAMMA"
    UPSILON = "UPSILON"
    BETA = "BETA"
    WN = "WN"
    W_TRUNCATION = "W_TRUNCATION"


@dataclass(frozen=True)
class GeneratorFamily:
    """
    Members grouped into blocks; each block carries a WreathCert and distinct
    blocks must have disjoint supports
    """

    label: FamilyLabel
    members: Tuple[PLMap, ...]
    indices: Tuple[Tuple[int, ...], ...]
    blocks: Tuple[Tuple[int, ...], ...]
    certificates: Tuple[WreathCert, ...]
    disjoint: bool = True

    @property
    def valid(self) -> bool:
        return self.disjoint and all(cert.valid for cert in self.certificates)

    def block_members(self, b: int) -> Tuple[PLMap, ...]:
        return tuple(self.members[i] for i in self.blocks[b])

    def to_dict(self) -> dict:
        return {
            "kind": "family",
            "label": self.label.value,
            "members": [m.to_dict() for m in self.members],
            "indices": [list(i) for i in self.indices],
            "blocks": [list(b) for b in self.blocks],
            "certificates": [c.to_dict() for c in self.certificates],
            "disjoint": self.disjoint,
            "valid": self.valid,
        }

    @classmethod
    def from_dict(cls, data) -> "GeneratorFamily":
        data = require_kind(data, "family")
        try:
            label = FamilyLabel(data.get("label"))
        except ValueError:
            raise InputFormatError("Unknown family label", label=data.get("label"))
        members = tuple(PLMap.from_dict(m) for m in data.get("members", []))
        return cls(
            label=label,
            members=members,
            indices=tuple(tuple(int(v) for v in i) for i in data.get("indices", [])),
            blocks=tuple(tuple(int(v) for v in b) for b in data.get("blocks", [])),
            certificates=tuple(WreathCert.from_dict(c) for c in data.get("certificates", [])),
            disjoint=bool(data.get("disjoint", True)),
        )


def blocks_disjoint(blocks: Sequence[Sequence[PLMap]]) -> bool:
    for i, first in enumerate(blocks):
        for second in blocks[i + 1:]:
            if not supports_separated(first, second):
                return False
    return True


def assemble_family(label: FamilyLabel, blocks: Sequence[Sequence[Tuple[Tuple[int, ...], PLMap]]]) -> GeneratorFamily:
    """Flatten (index, member) blocks and certify each one bottom to top"""
    members, indices, layout, certificates = [], [], [], []
    for block in blocks:
        positions = []
        for index, member in block:
            positions.append(len(members))
            members.append(member)
            indices.append(tuple(index))
        layout.append(tuple(positions))
        certificates.append(WreathCert.certify([member for _, member in block]))
    disjoint = blocks_disjoint([[m for _, m in block] for block in blocks])
    family = GeneratorFamily(label, tuple(members), tuple(indices), tuple(layout),
                             tuple(certificates), disjoint)
    if not family.valid:
        logging.warning(f"⚠️ {label.value} family failed its certificate checks")
    return family


def _require_positive(n: int, name: str):
    if n < 1:
        raise PreconditionError(f"{name} needs n >= 1", n=n)


def wn_generators(n: int) -> GeneratorFamily:
    """β₀, ..., β_{n-1}, generating W_n"""
    _require_positive(n, "wn_generators")
    return assemble_family(FamilyLabel.WN, [[((i,), beta(i)) for i in range(n)]])


def beta_family(ks: Sequence[int]) -> GeneratorFamily:
    """Any distinct β_k, ordered by k"""
    ks = sorted(set(int(k) for k in ks))
    if not ks:
        raise PreconditionError("beta_family needs at least one index")
    return assemble_family(FamilyLabel.BETA, [[((k,), beta(k)) for k in ks]])


def gamma_family(n: int) -> GeneratorFamily:
    """Blocks Γ_j = {β_i^(β_{j+1}) : 1 <= i <= j} for j = 1..n"""
    _require_positive(n, "gamma_family")
    blocks = []
    for j in range(1, n + 1):
        top = beta(j + 1)
        blocks.append([((i, j), conjugate(beta(i), top)) for i in range(1, j + 1)])
    return assemble_family(FamilyLabel.GAMMA, blocks)


def upsilon_family(n: int) -> GeneratorFamily:
    """Blocks Υ_i = {β_{-i+j-2}^(β_{-1}^i) : 1 <= j <= i} for i = 1..n"""
    _require_positive(n, "upsilon_family")
    blocks = []
    for i in range(1, n + 1):
        conjugator = beta(-1).power(i)
        blocks.append([((i, j), conjugate(beta(-i + j - 2), conjugator)) for j in range(1, i + 1)])
    return assemble_family(FamilyLabel.UPSILON, blocks)


@dataclass(frozen=True)
class WreathInsertion:
    """Copies of a group squeezed into a fundamental domain of β₁"""

    inserted: Tuple[PLMap, ...]
    top: PLMap
    checks: Tuple[bool, ...]

    @property
    def valid(self) -> bool:
        return bool(self.checks) and all(self.checks)

    def to_dict(self) -> dict:
        return {
            "kind": "wreath_insertion",
            "inserted": [g.to_dict() for g in self.inserted],
            "top": self.top.to_dict(),
            "checks": list(self.checks),
            "valid": self.valid,
        }


def wreath_insert(gens: Sequence[PLMap]) -> WreathInsertion:
    """⟨rescaled gens, β₁⟩ ≅ ⟨gens⟩ ≀ Z when every check holds"""
    top = beta(1)
    inserted = tuple(rescale_insert(g, INSERTION_TARGET) for g in gens)
    checks = tuple(_level_check(g, top) for g in inserted)
    return WreathInsertion(inserted, top, checks)

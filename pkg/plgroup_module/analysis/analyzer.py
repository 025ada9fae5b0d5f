# plgroup_module/analysis/analyzer.py
"""
Whole-group reports from a bounded word ball

Every absence reported here is an absence within the searched radius only.
Depth is reported as a lower bound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from ..core.dynamics import Interval, group_support, orbitals_of_element
from ..core.errors import InputFormatError
from ..core.plmap import PLMap, commutator, make_plmap
from ..core.structures import (ImbalanceWitness, Tower, TransitionChainWitness,
                               ball_signed_orbitals, exemplary_against, find_transition_chain2,
                               imbalance_witness_search)
from ..core.words import Word, enumerate_ball
from ..utils.serialization import require_kind

REPORT_SCHEMA = "ploi-report/1"

__all__ = ["enumerate_ball", "tower_search", "derived_series_sample", "AnalysisReport", "analyze"]


def _setting(key, default):
    from settings_manager import get_setting
    return get_setting(key, default)


# ----- towers -----

def _settled_in(g: PLMap, B: Interval) -> bool:
    """Every orbital of g has closure inside B"""
    return all(B.contains_closed(o.left, o.right) for o in orbitals_of_element(g))


def tower_search(gens: Sequence[PLMap], radius: int, target_height=None, exemplary: bool = True,
                 max_elements=None, progress: bool = False, ball=None) -> Optional[Tower]:
    """
    Longest chain in the inclusion DAG of signed orbitals of the ball

    Nodes are visited by orbital length, then signature word, then left end,
    which is a topological order for strict inclusion. A node extends the best
    chain of the first predecessor giving the longest result; with
    ``exemplary`` every lower signature must also avoid the new orbital's ends.
    Among chains of equal length, one whose lower signatures are supported
    inside the node's orbital is preferred.

    ``ball`` reuses an already enumerated ball of this radius.

    Returns:
        Tower with witness words, or None when the ball has no orbitals
    """
    if ball is None:
        ball = enumerate_ball(gens, radius, max_elements=max_elements, progress=progress)
    nodes = ball_signed_orbitals(ball)
    nodes.sort(key=lambda node: (node[0].orbital.length, node[1].shortlex_key(), node[0].orbital.left))
    if not nodes:
        return None

    chains: List[List[int]] = []
    settled: List[bool] = []
    best = 0
    for i in tqdm(range(len(nodes)), desc="towers", unit="orbital", disable=not progress, leave=False):
        top = nodes[i][0]
        chain, clean = [i], True
        for j in range(i):
            lower = nodes[j][0]
            if lower.orbital == top.orbital or not top.orbital.contains_interval(lower.orbital):
                continue
            tidy = settled[j] and _settled_in(lower.signature, top.orbital)
            if (len(chains[j]) + 1, tidy) <= (len(chain), clean):
                continue
            if exemplary and not all(exemplary_against(nodes[m][0].signature, top.orbital)
                                     for m in chains[j]):
                continue
            chain, clean = chains[j] + [i], tidy
        chains.append(chain)
        settled.append(clean)
        if len(chain) > len(chains[best]):
            best = i
        if target_height and len(chain) >= target_height:
            best = i
            break

    picked = chains[best][:target_height] if target_height else chains[best]
    tower = Tower(tuple(nodes[m][0] for m in picked), tuple(nodes[m][1] for m in picked))
    logging.debug(f"Tower of height {tower.height} from {len(nodes)} signed orbitals: "
                  f"{', '.join(w.render() for w in tower.words)}")
    return tower


# ----- derived series sampling -----

def derived_series_sample(ball: Dict[PLMap, Word], components: Sequence[Interval],
                          samples: int) -> Dict[str, int]:
    """
    Commutators of ball elements never have a whole group orbital as an orbital

    Pairs are taken in shortlex order up to ``samples``.
    """
    elements = [g for g in ball if not g.is_identity()]
    component_set = set(components)
    checked = violations = 0
    for i, g in enumerate(elements):
        for h in elements[i + 1:]:
            if checked >= samples:
                break
            checked += 1
            if any(o in component_set for o in orbitals_of_element(commutator(g, h))):
                violations += 1
        if checked >= samples:
            break
    return {"samples": checked, "violations": violations}


# ----- report -----

@dataclass(frozen=True)
class AnalysisReport:
    radius: int
    element_count: int
    group_orbitals: Tuple[Interval, ...]
    chain: Optional[TransitionChainWitness]
    tower: Optional[Tower]
    imbalance: Optional[ImbalanceWitness]
    derived_series: Dict[str, int]
    threshold: int
    absences: Tuple[str, ...] = field(default=())

    @property
    def depth_lower_bound(self) -> int:
        return self.tower.height if self.tower is not None else 0

    @property
    def nonsolvable_witness(self) -> bool:
        return self.depth_lower_bound > self.threshold

    def to_dict(self) -> dict:
        return {
            "kind": "report",
            "schema": REPORT_SCHEMA,
            "radius": self.radius,
            "element_count": self.element_count,
            "group_orbitals": [o.to_dict() for o in self.group_orbitals],
            "transition_chain": self.chain.to_dict() if self.chain is not None else None,
            "tower": self.tower.to_dict() if self.tower is not None else None,
            "depth_lower_bound": self.depth_lower_bound,
            "imbalance": self.imbalance.to_dict() if self.imbalance is not None else None,
            "derived_series": dict(self.derived_series),
            "nonsolvability": {"threshold": self.threshold, "witness": self.nonsolvable_witness},
            "absences": list(self.absences),
        }

    @classmethod
    def from_dict(cls, data) -> "AnalysisReport":
        data = require_kind(data, "report")
        if data.get("schema") != REPORT_SCHEMA:
            raise InputFormatError("Unsupported report schema", schema=data.get("schema"))
        imbalance = data.get("imbalance")
        if imbalance is not None:
            word = imbalance.get("word")
            imbalance = ImbalanceWitness(PLMap.from_dict(imbalance["element"]),
                                         Interval.from_dict(imbalance["orbital"]),
                                         Word.from_dict(word) if word is not None else None)
        chain, tower = data.get("transition_chain"), data.get("tower")
        return cls(
            radius=int(data["radius"]),
            element_count=int(data["element_count"]),
            group_orbitals=tuple(Interval.from_dict(o) for o in data.get("group_orbitals", [])),
            chain=TransitionChainWitness.from_dict(chain) if chain is not None else None,
            tower=Tower.from_dict(tower) if tower is not None else None,
            imbalance=imbalance,
            derived_series={k: int(v) for k, v in data.get("derived_series", {}).items()},
            threshold=int(data.get("nonsolvability", {}).get("threshold", 0)),
            absences=tuple(data.get("absences", [])),
        )


def analyze(gens: Sequence[PLMap], radius=None, tower_height=None, threshold=None,
            max_elements=None, progress: bool = False) -> AnalysisReport:
    """
    Run every bounded search on ⟨gens⟩

    Args:
        gens: generator list
        radius: ball radius (settings search.radius)
        tower_height: stop the tower search at this height (settings search.tower_height)
        threshold: depth above which the report flags a non-solvability witness
        max_elements: ball size cap
        progress: tqdm bars on stderr
    """
    radius = int(_setting("search.radius", 3) if radius is None else radius)
    tower_height = int(tower_height or _setting("search.tower_height", 6))
    threshold = int(_setting("search.nonsolvable_threshold", 3) if threshold is None else threshold)
    samples = int(_setting("search.commutator_samples", 64))

    ball = enumerate_ball(gens, radius, max_elements=max_elements, progress=progress)
    components = group_support(gens)
    chain = find_transition_chain2(gens, radius, ball=ball)
    tower = tower_search(gens, radius, tower_height, ball=ball)
    imbalance = imbalance_witness_search(gens, radius, ball=ball)
    derived = derived_series_sample(ball, components, samples)

    absences = []
    if chain is None:
        absences.append(f"transition_chain: none within radius {radius} (bounded search)")
    if imbalance is None:
        absences.append(f"imbalance: none within radius {radius} (bounded search)")
    if tower is None:
        absences.append(f"tower: no orbitals within radius {radius} (bounded search)")
    elif tower.height <= threshold:
        absences.append(f"nonsolvability: tallest tower within radius {radius} has height "
                        f"{tower.height} (bounded search)")

    report = AnalysisReport(radius, len(ball), components, chain, tower, imbalance, derived,
                            threshold, tuple(absences))
    logging.info(f"📊 {len(ball)} elements, depth >= {report.depth_lower_bound}, "
                 f"chain {'found' if chain else 'absent'}")
    return report


def parse_generators(data) -> List[PLMap]:
    """Generator file: a list of PLMap objects or {"generators": [...]}"""
    if isinstance(data, dict):
        data = data.get("generators")
    if not isinstance(data, list) or not data:
        raise InputFormatError("Generator file needs a non-empty list of maps")
    return [PLMap.from_dict(item) if isinstance(item, dict) else make_plmap(item) for item in data]

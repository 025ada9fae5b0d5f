import dataclasses
from fractions import Fraction

import pytest

from certificate_check import verify_certificate
from plgroup_module.constructions import embedproc
from plgroup_module.constructions.builders import FamilyLabel, beta, rescale_insert
from plgroup_module.constructions.embedproc import (OrbitalType, PipelineTrace, chain_split,
                                                    chain_split_checks, classify_orbital_types,
                                                    confine, extract_b, mechanism_step,
                                                    normalize_orbital_types, spanning_conjugate,
                                                    tower_to_wn, w_witness)
from plgroup_module.core.dynamics import Interval, SignedOrbital, group_support, orbitals_of_element
from plgroup_module.core.errors import (BudgetExceeded, NoInconsistentOrbital, NotExemplary,
                                        PreconditionError, SearchExhausted)
from plgroup_module.core.plmap import IDENTITY, commutator, conjugate, double_commutator, make_plmap
from plgroup_module.core.structures import Tower


def I(left, right):
    return Interval(Fraction(left), Fraction(right))


@pytest.fixture
def aabb_partner():
    """Two orbitals (0, 3/8) and (3/8, 1), slopes below one at both ends of [0, 1]"""
    return make_plmap([(0, 0), ("1/4", "1/8"), ("3/8", "3/8"), ("5/8", "3/4"), (1, 1)])


def side_by_side(*pieces):
    """Product of copies of each (map, left, right) on its own block of [0, 1]"""
    result = IDENTITY
    for g, left, right in pieces:
        result = result * rescale_insert(g, I(left, right))
    return result


@pytest.fixture
def opposed_pair(a, b0):
    """α on (0, 1/2) and α⁻¹ on (1/2, 1): one left-leading and one right-leading orbital"""
    return (side_by_side((a, 0, "1/2"), (a.inverse(), "1/2", 1)),
            side_by_side((b0, 0, "1/2"), (b0, "1/2", 1)))


@pytest.fixture
def opposed_triple(a, b0):
    """Two left-leading orbitals before one right-leading orbital"""
    return (side_by_side((a, 0, "1/4"), (a, "1/4", "1/2"), (a.inverse(), "1/2", 1)),
            side_by_side((b0, 0, "1/4"), (b0, "1/4", "1/2"), (b0, "1/2", 1)))


@pytest.fixture
def straddle_pair():
    a = make_plmap([(0, 0), ("1/4", "1/8"), ("3/8", "3/8"), ("7/16", "9/16"), ("5/8", "5/8"),
                    ("3/4", "7/8"), (1, 1)])
    b = make_plmap([(0, 0), ("1/4", "1/4"), ("5/16", "7/16"), ("1/2", "1/2"), ("9/16", "11/16"),
                    ("3/4", "3/4"), (1, 1)])
    return a, b


# ----- orbital census -----

def test_classify_examples(a, b0, b1):
    assert classify_orbital_types(b0, b1) == {I("1/4", "3/4"): OrbitalType.aB}
    assert classify_orbital_types(b0, IDENTITY) == {I("7/16", "9/16"): OrbitalType.Ab}
    assert classify_orbital_types(a, IDENTITY) == {I("0", "1/2"): OrbitalType.Ab,
                                                   I("1/2", "1"): OrbitalType.Ab}
    assert classify_orbital_types(a, b0) == {I("0", "1"): OrbitalType.aab}


def test_classify_aabb(a, aabb_partner):
    assert classify_orbital_types(a, aabb_partner) == {I("0", "1"): OrbitalType.aabb}


def test_classify_refuses_unbalanced_pairs():
    g = make_plmap([(0, 0), ("1/4", "1/8"), ("1/2", "1/2"), (1, 1)])
    h = make_plmap([(0, 0), ("3/8", "3/16"), ("3/4", "3/4"), (1, 1)])
    with pytest.raises(PreconditionError):
        classify_orbital_types(g, h)


# ----- the mechanism and normalization -----

def test_mechanism_moves_the_fixed_point(a, aabb_partner):
    result, j, k = mechanism_step(a, aabb_partner)
    assert j >= 1 and k >= 1
    assert result.evaluate(Fraction(1, 2)) != Fraction(1, 2)
    assert result == commutator(a.power(j), aabb_partner.power(k))


@pytest.mark.parametrize("pair", [("b0", "b1"), ("b0", "identity"), ("identity", "b0")])
def test_mechanism_needs_an_inconsistent_orbital(pair, b0, b1):
    maps = {"b0": b0, "b1": b1, "identity": IDENTITY}
    with pytest.raises(NoInconsistentOrbital):
        mechanism_step(maps[pair[0]], maps[pair[1]])


def test_normal_census_is_left_alone(a, b0):
    a_out, b_out, trace = normalize_orbital_types(a, b0)
    assert (a_out, b_out) == (a, b0)
    assert len(trace) == 0


def test_aabb_census_takes_one_stage(a, aabb_partner):
    a_out, b_out, trace = normalize_orbital_types(a, aabb_partner)
    assert a_out == a
    assert b_out == commutator(a, aabb_partner)
    assert classify_orbital_types(a_out, b_out) == {I("0", "1"): OrbitalType.aab}

    [stage] = trace.stages
    assert stage.label == "normalize.1"
    assert stage.powers == {"a_power": 1, "b_power": 1}
    assert dict(stage.before) == {I("0", "1"): OrbitalType.aabb}
    assert dict(stage.after) == {I("0", "1"): OrbitalType.aab}


# ----- spanning conjugates and splitting -----

def test_spanning_conjugate_returns_b_when_it_already_spans(a, b0):
    assert spanning_conjugate(a, b0, I("0", "1")) == b0


def test_spanning_conjugate_straddles_the_fixed_set(straddle_pair):
    a, b = straddle_pair
    gamma = spanning_conjugate(a, b, I("0", "1"))
    assert any(o.contains_closed(Fraction(3, 8), Fraction(5, 8)) for o in orbitals_of_element(gamma))


def test_spanning_conjugate_budget(straddle_pair):
    a, b = straddle_pair
    with pytest.raises(SearchExhausted):
        spanning_conjugate(a, b, I("0", "1"), search_budget=0)


def test_chain_split_on_a_single_chain(a, b0):
    a1, b1, trace = chain_split(a, b0)
    assert (a1, b1) == (a, b0)
    assert all(chain_split_checks(a1, b1, I("0", "1")).values())
    assert trace.stages[0].label == "split.orient"


def test_chain_split_spreads_off_right_leading_orbitals(opposed_pair, a, b0):
    a_in, b_in = opposed_pair
    a1, b1, trace = chain_split(a_in, b_in)
    assert a1 == a_in
    assert [stage.label for stage in trace.stages] == [
        "split.orient", "split.rho.1", "split.psi.1", "split.shift", "split.spread"]
    assert trace.stages[0].powers == {"a_sign": 1}
    assert trace.stages[3].powers == {"p": 1}
    assert trace.stages[4].powers == {"q": 1}
    assert b1 == conjugate(conjugate(b_in, a1), b_in)

    assert chain_split_checks(a1, b1, I("0", "1/2")) == {
        "orbital_kept": True, "no_end_realized": True, "three_chains": True, "leading_left": True}
    # on the right half the fixed point 3/4 of a1 is no longer moved
    assert I("1/8", "3/8") in orbitals_of_element(b1)
    assert group_support([a1, b1]) == (I("0", "1/2"), I("1/2", "3/4"), I("3/4", "1"))


def test_chain_split_builds_a_product_over_left_orbitals(opposed_triple):
    a_in, b_in = opposed_triple
    a1, b1, trace = chain_split(a_in, b_in)
    assert [stage.label for stage in trace.stages] == [
        "split.orient", "split.rho.1", "split.rho.2", "split.psi.1", "split.shift", "split.spread"]
    assert trace.stages[2].powers == {"retries": 0}
    assert trace.stages[2].note == "conjugate"
    assert all(chain_split_checks(a1, b1, I("0", "1/4")).values())
    assert {I("1/16", "3/16"), I("5/16", "7/16")} <= set(orbitals_of_element(b1))
    assert group_support([a1, b1])[:2] == (I("0", "1/4"), I("1/4", "1/2"))


def test_extract_b_across_opposed_orbitals(opposed_pair):
    a_new, gamma, cert, trace = extract_b(*opposed_pair)
    assert cert.valid
    assert cert.omega0 == gamma and cert.gamma == a_new
    assert trace.stages[-1].label == "find_b"
    assert verify_certificate("b", cert.to_dict())


def test_chain_split_preconditions(a, b0, b1):
    # β₁ realizes both ends of its own group orbital
    with pytest.raises(PreconditionError):
        chain_split(b0, b1)
    with pytest.raises(NoInconsistentOrbital):
        chain_split(b1, b0)


# ----- B extraction -----

def test_extract_b_from_alpha_and_beta0(a, b0, b1):
    a_new, gamma, cert, trace = extract_b(a, b0)
    assert a_new == a
    assert gamma == commutator(b0, b1).power(2)
    assert cert.valid
    labels = [stage.label for stage in trace.stages]
    assert "cleanup" in labels and labels[-1] == "find_b"
    assert trace.stages[-1].powers == {"k": 1, "j": 2}
    assert verify_certificate("b", cert.to_dict())


def test_extract_b_needs_a_chain(b0, b1):
    with pytest.raises(PreconditionError):
        extract_b(b0, b1, chain_radius=2)


def test_extract_b_respects_ball_cap(a, b0):
    with pytest.raises(BudgetExceeded):
        extract_b(a, b0, max_elements=3)


def test_trace_json():
    trace = PipelineTrace()
    trace.record("swap", {}, {I("0", "1"): OrbitalType.aab}, note="swapped")
    trace.record("find_b", {"k": 1, "j": 2})
    data = trace.to_dict()
    assert data["kind"] == "trace"
    assert data["stages"][0]["before"] == [{"orbital": I("0", "1").to_dict(), "type": "aab"}]
    assert data["stages"][0]["after"] == []
    assert data["stages"][1] == {"label": "find_b", "powers": {"k": 1, "j": 2},
                                 "before": [], "after": [], "note": ""}


# ----- towers to W_n -----

def test_beta_tower_is_already_wn():
    tower = Tower(tuple(SignedOrbital(orbitals_of_element(beta(i))[0], beta(i)) for i in range(3)))
    family = tower_to_wn(tower)
    assert family.label is FamilyLabel.WN
    assert family.members == (beta(0), beta(1), beta(2))
    assert family.valid


def test_slow_tower_is_powered(b0, slow_map):
    tower = Tower((SignedOrbital(I("7/16", "9/16"), b0), SignedOrbital(I("1/4", "3/4"), slow_map)))
    family = tower_to_wn(tower)
    assert family.members == (b0, slow_map.power(2))
    assert family.valid


def test_tower_to_wn_preconditions(a):
    with pytest.raises(PreconditionError):
        tower_to_wn(Tower(()))
    top = make_plmap([(0, 0), ("1/2", "1/4"), (1, 1)])
    shared_end = Tower((SignedOrbital(I("0", "1/2"), a), SignedOrbital(I("0", "1"), top)))
    with pytest.raises(NotExemplary):
        tower_to_wn(shared_end)


def test_confine_lands_inside_the_host(b0, b1):
    confined = confine(b0, b1)
    assert confined == double_commutator(b0, b1)
    assert all(I("1/4", "3/4").contains_interval(o) for o in orbitals_of_element(confined))


# ----- witnesses -----

def test_witness_for_trivial_group():
    result = w_witness([IDENTITY], heights=2)
    assert result.families == ()
    assert [s["reason"] for s in result.report["skipped"]] == ["trivial group", "trivial group"]
    assert result.to_dict()["kind"] == "witness"


@pytest.mark.slow
def test_witness_families_are_valid(a, b0):
    result = w_witness([a, b0], heights=2, radius=2)
    report = result.report
    assert report["requested"] == 2
    heights = sorted(report["placed"] + [s["height"] for s in report["skipped"]])
    assert heights == [1, 2]
    assert all(family.valid for family in result.families)


def test_witness_retries_from_the_tower_family(monkeypatch, a, b0):
    real = embedproc.assemble_family
    calls = []

    def reject_first(label, blocks):
        members = [g for block in blocks for _, g in block]
        calls.append(members)
        family = real(label, blocks)
        if len(calls) == 1:
            return dataclasses.replace(family, members=tuple(IDENTITY for _ in members), disjoint=False)
        return family

    monkeypatch.setattr(embedproc, "assemble_family", reject_first)
    result = w_witness([a, b0], heights=1, radius=1)
    assert len(calls) >= 2
    # the next conjugator acts on the tower's members, not on the rejected family
    assert not any(g.is_identity() for g in calls[1])
    assert result.families[0].members == tuple(calls[1])

from fractions import Fraction

import pytest
from hypothesis import given, settings

from plgroup_module.constructions.builders import BETA1_POINTS
from plgroup_module.core.errors import DomainError, EndpointError, InputFormatError, MonotonicityError
from plgroup_module.core.plmap import (IDENTITY, PLMap, breakpoints_of, commutator, compose, conjugate,
                                       double_commutator, equals, inverse, make_plmap, power)
from tests.conftest import plmaps


# ----- the α and β₀ tables -----

@pytest.mark.parametrize("x, y", [
    ("0", "0"), ("1/4", "1/16"), ("7/16", "1/4"), ("9/16", "3/4"), ("3/4", "15/16"), ("1", "1"),
    ("1/8", "1/32"), ("3/8", "3/16"), ("1/2", "1/2"), ("5/8", "13/16"), ("7/8", "31/32"),
])
def test_alpha_table(a, x, y):
    assert a.evaluate(Fraction(x)) == Fraction(y)


@pytest.mark.parametrize("x, y", [
    ("7/16", "7/16"), ("15/32", "1/2"), ("1/2", "17/32"), ("9/16", "9/16"),
    ("1/4", "1/4"), ("29/64", "15/32"), ("17/32", "35/64"), ("3/4", "3/4"),
])
def test_beta0_table(b0, x, y):
    assert b0.evaluate(Fraction(x)) == Fraction(y)


def test_alpha_continuous_at_breakpoints(a):
    for x, y in a.points:
        assert a.evaluate(x) == y
    assert a.breakpoints == (Fraction(1, 4), Fraction(7, 16), Fraction(9, 16), Fraction(3, 4))


def test_breakpoints_of(b0):
    assert breakpoints_of(b0) == {Fraction(7, 16), Fraction(15, 32), Fraction(1, 2), Fraction(9, 16)}
    assert breakpoints_of(IDENTITY) == frozenset()


def test_beta1_is_beta0_conjugated_by_alpha(a, b0, b1):
    assert conjugate(b0, a) == make_plmap(BETA1_POINTS)
    assert b1 == make_plmap(BETA1_POINTS)
    assert b1.evaluate(Fraction(7, 16)) == Fraction(9, 16)


def test_conjugate_is_inverse_then_map_then_conjugator(a, b0):
    expected = a.inverse() * b0 * a
    assert conjugate(b0, a) == expected
    assert conjugate(b0, IDENTITY) == b0


# ----- construction and validation -----

def test_collinear_points_are_dropped():
    g = make_plmap([(0, 0), ("1/2", "1/2"), (1, 1)])
    assert g.is_identity()
    assert g == IDENTITY

    h = make_plmap([(0, 0), ("1/4", "1/8"), ("1/2", "1/4"), (1, 1)])
    assert h.points == ((0, 0), (Fraction(1, 2), Fraction(1, 4)), (1, 1))


def test_endpoint_error():
    with pytest.raises(EndpointError):
        make_plmap([(0, 0), ("1/2", "1/3"), ("1", "9/10")])
    with pytest.raises(EndpointError):
        make_plmap([(1, 1)])


def test_monotonicity_error():
    with pytest.raises(MonotonicityError):
        make_plmap([(0, 0), ("1/2", "1/2"), ("1/2", "3/4"), (1, 1)])
    with pytest.raises(MonotonicityError):
        make_plmap([(0, 0), ("1/2", "1/2"), ("3/4", "1/4"), (1, 1)])


def test_float_input_is_refused():
    with pytest.raises(InputFormatError):
        make_plmap([(0, 0), (0.5, 0.25), (1, 1)])


def test_evaluate_outside_unit_interval(a):
    with pytest.raises(DomainError):
        a.evaluate(Fraction(3, 2))
    with pytest.raises(DomainError):
        a.evaluate_inverse(Fraction(-1, 2))


def test_right_action_order():
    g = make_plmap([(0, 0), ("1/2", "1/4"), (1, 1)])
    h = make_plmap([(0, 0), ("1/4", "1/2"), (1, 1)])
    x = Fraction(1, 2)
    assert compose(g, h).evaluate(x) == h.evaluate(g.evaluate(x))
    assert (g * h) == compose(g, h)
    assert compose(g, h) == IDENTITY


def test_power_and_operators(b0):
    assert power(b0, 0) == IDENTITY
    assert power(b0, 3) == b0 * b0 * b0
    assert power(b0, -2) == inverse(b0) * inverse(b0)
    assert b0 ** -1 == ~b0


def test_commutator_definition(a, b0):
    assert commutator(b0, a) == inverse(b0) * inverse(a) * b0 * a
    assert double_commutator(b0, a) == commutator(commutator(b0, a), a)
    assert commutator(b0, b0) == IDENTITY


def test_json_shape(b0):
    data = b0.to_dict()
    assert data["breakpoints"][1] == ["7/16", "7/16"]
    assert data["breakpoints"][-1] == ["1/1", "1/1"]
    assert PLMap.from_dict(data) == b0


def test_from_dict_rejects_bad_pairs():
    with pytest.raises(InputFormatError):
        PLMap.from_dict({"breakpoints": [["0/1"], ["1/1", "1/1"]]})
    with pytest.raises(InputFormatError):
        PLMap.from_dict({"points": []})


# ----- group axioms -----

@settings(max_examples=1000, deadline=None)
@given(plmaps())
def test_inverse_law(g):
    assert g * g.inverse() == IDENTITY
    assert g.inverse() * g == IDENTITY


@settings(max_examples=1000, deadline=None)
@given(plmaps(max_breaks=3), plmaps(max_breaks=3), plmaps(max_breaks=3))
def test_associativity(f, g, h):
    assert (f * g) * h == f * (g * h)


@settings(max_examples=1000, deadline=None)
@given(plmaps())
def test_canonical_form_is_idempotent(g):
    again = PLMap(g.points)
    assert again.points == g.points
    assert equals(again, g)
    assert hash(again) == hash(g)
    slopes = g.slopes
    assert all(s0 != s1 for s0, s1 in zip(slopes, slopes[1:]))


@given(plmaps(), plmaps())
def test_conjugation_is_a_homomorphism(g, h):
    k = make_plmap([(0, 0), ("1/3", "1/5"), (1, 1)])
    assert conjugate(g * h, k) == conjugate(g, k) * conjugate(h, k)


@given(plmaps())
def test_evaluate_inverse_undoes_evaluate(g):
    for x in (Fraction(1, 7), Fraction(1, 2), Fraction(5, 6)):
        assert g.evaluate_inverse(g.evaluate(x)) == x

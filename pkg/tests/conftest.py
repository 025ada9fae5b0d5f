"""Shared fixtures and hypothesis profiles."""
import os
from datetime import timedelta
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, Verbosity, settings
from hypothesis import strategies as st

from plgroup_module.constructions.builders import alpha, beta, beta0
from plgroup_module.core.plmap import make_plmap
from settings_manager import reset_settings

# register test flags for hypothesis; allows e.g. extended deadlines on CI
# the autouse settings fixture is function scoped but never touched by the examples
QUIET = [HealthCheck.function_scoped_fixture, HealthCheck.too_slow]
settings.register_profile("ci", deadline=timedelta(milliseconds=2000), suppress_health_check=QUIET)
settings.register_profile("dev", max_examples=50, deadline=None, suppress_health_check=QUIET)
settings.register_profile("debug", max_examples=10, verbosity=Verbosity.verbose, deadline=None,
                          suppress_health_check=QUIET)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


@st.composite
def plmaps(draw, max_breaks=4, denominator=64):
    """Random canonical PLMaps with breakpoints on a fixed dyadic grid"""
    n = draw(st.integers(min_value=0, max_value=max_breaks))
    cells = st.integers(min_value=1, max_value=denominator - 1)
    xs = sorted(draw(st.lists(cells, min_size=n, max_size=n, unique=True)))
    ys = sorted(draw(st.lists(cells, min_size=n, max_size=n, unique=True)))
    points = [(0, 0)] + [(Fraction(x, denominator), Fraction(y, denominator))
                         for x, y in zip(xs, ys)] + [(1, 1)]
    return make_plmap(points)


@pytest.fixture(autouse=True)
def default_settings(tmp_path):
    """Every test starts from the built-in defaults"""
    return reset_settings(tmp_path / "no_settings.json")


@pytest.fixture
def a():
    return alpha()


@pytest.fixture
def b0():
    return beta0()


@pytest.fixture
def b1():
    return beta(1)


@pytest.fixture
def slow_map():
    """Right-mover on (1/4, 3/4) that pushes β₀'s support only halfway off itself"""
    return make_plmap([(0, 0), ("1/4", "1/4"), ("7/16", "1/2"), ("1/2", "9/16"),
                       ("3/4", "3/4"), (1, 1)])
from fractions import Fraction

import pytest
from hypothesis import given, settings

from plgroup_module.core.errors import InputFormatError
from plgroup_module.core.plmap import PLMap
from plgroup_module.utils.serialization import (dumps, format_rational, loads, parse_rational,
                                                read_json, require_kind, write_json)
from tests.conftest import plmaps


def test_format_rational_keeps_denominator():
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert format_rational(1) == "1/1"
    assert format_rational(Fraction(-3, 9)) == "-1/3"


@pytest.mark.parametrize("text, value", [
    ("3", Fraction(3)), ("6/8", Fraction(3, 4)), (" 1/2 ", Fraction(1, 2)), (5, Fraction(5)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", [0.5, True, "0.5", "1e3", "", "1/0", "half", None])
def test_parse_rational_refuses(bad):
    with pytest.raises(InputFormatError):
        parse_rational(bad)


def test_dumps_is_sorted_and_unescaped():
    text = dumps({"b": "1/2", "a": [1, 2]})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert "\\/" not in text
    assert loads(text) == {"a": [1, 2], "b": "1/2"}


def test_loads_rejects_bad_json():
    with pytest.raises(InputFormatError):
        loads("{not json")


def test_json_files(tmp_path):
    path = tmp_path / "nested" / "out.json"
    write_json(path, {"kind": "x"})
    assert read_json(path) == {"kind": "x"}
    with pytest.raises(InputFormatError):
        read_json(tmp_path / "missing.json")


def test_require_kind():
    assert require_kind({"kind": "tower"}, "tower") == {"kind": "tower"}
    assert require_kind({}, "tower") == {}
    with pytest.raises(InputFormatError):
        require_kind({"kind": "family"}, "tower")
    with pytest.raises(InputFormatError):
        require_kind([], "tower")


@settings(max_examples=1000, deadline=None)
@given(plmaps())
def test_plmap_text_is_byte_stable(g):
    text = dumps(g.to_dict())
    again = PLMap.from_dict(loads(text))
    assert again == g
    assert dumps(again.to_dict()) == text

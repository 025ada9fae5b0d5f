# plgroup_module/utils/serialization.py
"""
Exact JSON encoding shared by every record type

Rationals cross every boundary as lowest-terms "p/q" strings. Output is
produced with sorted keys and a fixed layout so identical inputs give
byte-identical files.
"""

import logging
from fractions import Fraction
from pathlib import Path

import ujson

from ..core.errors import InputFormatError


def format_rational(value) -> str:
    """Fraction -> "p/q" (denominator always present)"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text) -> Fraction:
    """Parse "p/q" or "p"; integers pass through, floats are refused"""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or isinstance(text, float):
        raise InputFormatError(f"Rational expected, got {type(text).__name__}", value=text)
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputFormatError("Rational must be a 'p/q' string", value=text)
    stripped = text.strip()
    if not stripped or "." in stripped or "e" in stripped.lower():
        raise InputFormatError("Rational must be a 'p/q' string", value=text)
    try:
        return Fraction(stripped)
    except (ValueError, ZeroDivisionError) as e:
        raise InputFormatError(f"Invalid rational: {e}", value=text)


def dumps(data) -> str:
    """Deterministic JSON text"""
    return ujson.dumps(data, sort_keys=True, indent=2, ensure_ascii=False,
                       escape_forward_slashes=False) + "\n"


def loads(text):
    try:
        return ujson.loads(text)
    except ValueError as e:
        raise InputFormatError(f"Invalid JSON: {e}")


def write_json(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(data), encoding="utf-8")
    logging.debug(f"📁 Wrote {path}")


def read_json(path):
    path = Path(path)
    if not path.exists():
        raise InputFormatError(f"File not found: {path}")
    return loads(path.read_text(encoding="utf-8"))


def require_kind(data, kind):
    """Check the tag of a tagged record"""
    if not isinstance(data, dict):
        raise InputFormatError(f"Expected a '{kind}' object")
    found = data.get("kind", kind)
    if found != kind:
        raise InputFormatError(f"Expected kind '{kind}', found '{found}'")
    return data

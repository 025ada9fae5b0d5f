# plgroup_module/utils/__init__.py
"""
JSON encoding, stage decorators and SVG output
"""

from .serialization import dumps, loads, read_json, write_json, format_rational, parse_rational
from .decorators import track_stage, escalate

__all__ = [
    'dumps',
    'loads',
    'read_json',
    'write_json',
    'format_rational',
    'parse_rational',
    'track_stage',
    'escalate',
]

# plgroup_module/__init__.py
"""Exact PL₀(I) toolkit: maps, dynamics, constructions and bounded searches"""

from .core import *  # noqa: F401,F403
from .core import __all__ as _core_all
from .constructions.builders import (alpha, beta, beta0, wn_generators, gamma_family,
                                     upsilon_family, bcert_check, WreathCert, wreath_insert)
from .constructions.embedproc import (classify_orbital_types, extract_b, tower_to_wn,
                                      w_witness, PipelineTrace)
from .analysis.analyzer import analyze, tower_search, AnalysisReport

__all__ = list(_core_all) + [
    'alpha', 'beta', 'beta0', 'wn_generators', 'gamma_family', 'upsilon_family',
    'bcert_check', 'WreathCert', 'wreath_insert',
    'classify_orbital_types', 'extract_b', 'tower_to_wn', 'w_witness', 'PipelineTrace',
    'analyze', 'tower_search', 'AnalysisReport',
]

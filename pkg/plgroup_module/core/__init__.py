# plgroup_module/core/__init__.py
"""
Core value types: maps, words, orbital dynamics and structural searches
"""

from .errors import (
    PLGroupError,
    InputFormatError,
    PreconditionError,
    VerificationError,
    CertificateRejected,
    BudgetExceeded,
    SearchExhausted,
)
from .plmap import PLMap, IDENTITY, make_plmap, compose, inverse, power, conjugate, commutator
from .words import Word, enumerate_ball
from .dynamics import Interval, SignedOrbital, orbitals_of_element, group_support
from .structures import Tower, TransitionChainWitness, find_transition_chain2

__all__ = [
    'PLGroupError',
    'InputFormatError',
    'PreconditionError',
    'VerificationError',
    'CertificateRejected',
    'BudgetExceeded',
    'SearchExhausted',
    'PLMap',
    'IDENTITY',
    'make_plmap',
    'compose',
    'inverse',
    'power',
    'conjugate',
    'commutator',
    'Word',
    'enumerate_ball',
    'Interval',
    'SignedOrbital',
    'orbitals_of_element',
    'group_support',
    'Tower',
    'TransitionChainWitness',
    'find_transition_chain2',
]

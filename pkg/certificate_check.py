import logging

from plgroup_module.constructions.builders import (BCertificate, GeneratorFamily, WreathCert,
                                                   bcert_check, blocks_disjoint, conjugates_commute)
from plgroup_module.core.errors import InputFormatError, NotAnOrbital
from plgroup_module.core.plmap import conjugate
from plgroup_module.core.structures import Tower, TransitionChainWitness, is_transition_chain2

# Window of γ-powers checked around a B certificate
B_WINDOW = range(-2, 3)


def _reject(reason):
    logging.error(f"❌ {reason}")
    return False


def verify_wreath(data):
    """Recompute every level check from the raw maps"""
    cert = WreathCert.from_dict(data)
    if not cert.levels:
        return _reject("Wreath certificate has no levels")

    fresh = WreathCert.certify(cert.levels)
    if not fresh.valid:
        failed = [i for i, ok in enumerate(fresh.checks) if not ok]
        return _reject(f"Wreath levels {failed} are not cleared by the level above")

    for lower, upper in zip(cert.levels, cert.levels[1:]):
        if not conjugates_commute(lower, upper):
            return _reject("Conjugates by distinct powers of an upper level do not commute")

    logging.info(f"✅ Wreath certificate with {len(cert.levels)} levels verified")
    return True


def verify_b(data):
    """
    ω₁ = ω₀^γ recomputed, the stored hull claims recomputed, and each
    ω_i = ω₀^(γ^i) in the window clearing its hull under ω_(i+1)
    """
    cert = BCertificate.from_dict(data)
    fresh = bcert_check(cert.omega0, cert.gamma)
    if fresh.omega1 != cert.omega1:
        return _reject("Stored ω₁ is not ω₀ conjugated by γ")
    if fresh.trivial:
        return _reject("B certificate has a trivial ω₀")
    if (cert.hull, cert.hulls, cert.cleared) != (fresh.hull, fresh.hulls, fresh.cleared):
        return _reject("Stored hulls or clearing flag disagree with the recomputed ones")

    for i in B_WINDOW:
        omega_i = conjugate(cert.omega0, cert.gamma.power(i))
        if not bcert_check(omega_i, cert.gamma).cleared:
            return _reject(f"ω at power {i} does not clear its hull under the next conjugate")

    logging.info("✅ B certificate verified")
    return True


def verify_tower(data):
    try:
        tower = Tower.from_dict(data)
    except NotAnOrbital as e:
        return _reject(f"Tower entry is not a signed orbital: {e}")
    if not tower.is_tower():
        return _reject("Tower orbitals are not nested")
    if data.get("exemplary") and not tower.is_exemplary():
        return _reject("Tower claims to be exemplary but is not")

    logging.info(f"✅ Tower of height {tower.height} verified")
    return True


def verify_chain(data):
    try:
        witness = TransitionChainWitness.from_dict(data)
    except NotAnOrbital as e:
        return _reject(f"Chain entry is not a signed orbital: {e}")
    except InputFormatError as e:
        return _reject(f"Chain orbitals do not interlock: {e}")
    if not is_transition_chain2(witness.first, witness.second):
        return _reject("Chain orbitals do not interlock")

    logging.info("✅ Transition chain of length two verified")
    return True


def verify_family(data):
    family = GeneratorFamily.from_dict(data)
    for b in range(len(family.blocks)):
        block = family.block_members(b)
        if any(g.is_identity() for g in block):
            return _reject(f"Block {b} contains the identity")
        if not WreathCert.certify(block).valid:
            return _reject(f"Block {b} fails its wreath checks")
    if not blocks_disjoint([family.block_members(b) for b in range(len(family.blocks))]):
        return _reject("Family blocks do not have disjoint supports")

    logging.info(f"✅ {family.label.value} family with {len(family.blocks)} blocks verified")
    return True


VERIFIERS = {
    "wreath": verify_wreath,
    "b": verify_b,
    "tower": verify_tower,
    "chain": verify_chain,
    "family": verify_family,
}

# Record kind as written by the producers
KIND_TAGS = {
    "wreath": "wreath",
    "b": "b_certificate",
    "tower": "tower",
    "chain": "transition_chain2",
    "family": "family",
}


def verify_certificate(kind, data):
    """
    Re-check a serialized certificate from its raw maps

    Args:
        kind: one of VERIFIERS
        data: decoded JSON object

    Returns:
        True when every check passes
    """
    if kind not in VERIFIERS:
        raise InputFormatError(f"Unknown certificate kind: {kind}")
    if isinstance(data, dict) and data.get("kind") not in (None, KIND_TAGS[kind]):
        raise InputFormatError(f"Expected a '{KIND_TAGS[kind]}' record, found '{data.get('kind')}'")
    return VERIFIERS[kind](data)


"""
Tests for embedding problems and lift statuses
"""

import math

import pytest

from malleb.errors import PreconditionError
from malleb.models.abelian import CycloGamma
from malleb.models.embed import (
    INFINITY, LIFTABLE, OBSTRUCTED, LiftStatus, embed_cyclic, lift_status, torsion_units,
)
from malleb.models.oracles import brute_force_embed
from malleb.models.twist import enumerate_pairs
from malleb.verification import EMBED_TABLE
from tests.conftest import build_inputs


@pytest.mark.parametrize('args, verdict, places', EMBED_TABLE)
def test_embedding_table(args, verdict, places):
    status = embed_cyclic(*args)
    assert status.verdict == verdict
    assert status.places == places
    assert status.rule == 'abelian-local'


def test_embedding_matches_direct_search():
    for ell in (3, 5, 7, 11, 13, 17):
        for d in range(1, 17):
            for n in range(1, d + 1):
                if math.gcd(d, ell - 1) % n:
                    continue
                status, direct = embed_cyclic(ell, n, d), brute_force_embed(ell, n, d)
                assert (status.verdict, status.places) == (direct.verdict, direct.places), (ell, n, d)


def test_status_text():
    assert str(embed_cyclic(3, 2, 4)) == 'obstructed: 3, infinity'
    assert str(embed_cyclic(7, 3, 3)) == LIFTABLE
    assert embed_cyclic(5, 2, 8).to_dict() == {'verdict': OBSTRUCTED, 'places': [5], 'rule': 'abelian-local'}
    assert str(LiftStatus.unknown('central-local', 'wild')) == 'unknown: wild'
    with pytest.raises(ValueError):
        LiftStatus(OBSTRUCTED)


@pytest.mark.parametrize('args', [(4, 1, 2), (2, 1, 2), (3, 3, 4), (7, 4, 4), (5, 0, 4)])
def test_embedding_domain(args):
    with pytest.raises(PreconditionError):
        embed_cyclic(*args)


def test_places_sort_infinity_last():
    status = LiftStatus.obstructed([INFINITY, 7, 3], 'central-local')
    assert status.places == [3, 7, INFINITY]


def test_torsion_units():
    assert torsion_units(12) == [1, 5, 7, 11]
    assert torsion_units(16) == [1, 15]
    assert torsion_units(9) == [1, 8]


def lifts_by_name(group, exp, gamma):
    return {p.subfield.name: lift_status(p) for p in enumerate_pairs(group, exp, gamma)}


def test_small_wreath_lifts(c3wrc4_rad):
    lifts = lifts_by_name(*c3wrc4_rad)
    assert lifts['Q'].is_liftable and lifts['Q'].rule == 'none'
    assert (lifts['Q(i)'].verdict, lifts['Q(i)'].places) == (OBSTRUCTED, [INFINITY])
    assert lifts['Q(i)'].rule == 'abelian-quotient-necessary'
    assert (lifts['Q(√3)'].verdict, lifts['Q(√3)'].places) == (OBSTRUCTED, [3])
    assert (lifts['Q(μ3)'].verdict, lifts['Q(μ3)'].places) == (OBSTRUCTED, [3, INFINITY])
    assert lifts['Q(μ3)'].rule == 'wreath-reduction'


def test_function_field_lifts(c3wrc4_disc):
    group, exp, gamma = c3wrc4_disc
    field = CycloGamma.function_field(5, gamma.modulus)
    for pair in enumerate_pairs(group, exp, field):
        status = lift_status(pair)
        assert status.is_liftable
        assert status.rule in ('none', 'function-field')


def test_abelian_group_lifts():
    lifts = lifts_by_name(*build_inputs('C4', 'rad'))
    # Q(i) does not embed in a cyclic quartic field
    assert lifts['Q(i)'].rule == 'abelian-local'
    assert lifts['Q(i)'].verdict == OBSTRUCTED


def test_rad_pair_lifts(c5wrc4_rad):
    lifts = lifts_by_name(*c5wrc4_rad)
    assert lifts['Q(μ5)'].is_liftable
    assert lifts['Q(μ5)'].rule == 'wreath-reduction'


@pytest.mark.slow
def test_large_wreath_lift(c4wrc4_rad):
    pairs = [p for p in enumerate_pairs(*c4wrc4_rad) if p.subfield.name == 'Q(i)' and p.kernel.order == 512]
    assert len(pairs) == 1
    status = lift_status(pairs[0])
    assert (status.verdict, status.places) == (OBSTRUCTED, [INFINITY])

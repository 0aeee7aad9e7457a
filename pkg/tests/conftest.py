"""
Shared fixtures for the engine tests
"""

import sys
from pathlib import Path

import pytest

# Ensure the repository root is importable when running pytest from anywhere
project_root = Path(__file__).resolve().parents[1]
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from malleb.models.abelian import CycloGamma
from malleb.models.invariant import d_of, make_exp
from malleb.models.perm import build_group


def build_inputs(text, inv, base='Q'):
    group = build_group(text)
    exp = make_exp(group, inv)
    return group, exp, CycloGamma.from_text(base, d_of(group, exp))


@pytest.fixture(scope='session')
def s3():
    return build_group('S3')


@pytest.fixture(scope='session')
def c3wrc4():
    return build_group('wr(C3,C4)')


@pytest.fixture(scope='session')
def c3wrc4_rad(c3wrc4):
    exp = make_exp(c3wrc4, 'rad')
    return c3wrc4, exp, CycloGamma.rational(d_of(c3wrc4, exp))


@pytest.fixture(scope='session')
def c3wrc4_disc(c3wrc4):
    exp = make_exp(c3wrc4, 'disc')
    return c3wrc4, exp, CycloGamma.rational(d_of(c3wrc4, exp))


@pytest.fixture(scope='session')
def c4wrc4_rad():
    return build_inputs('wr(C4,C4)', 'rad')


@pytest.fixture(scope='session')
def c5wrc4_rad():
    return build_inputs('wr(C5,C4)', 'rad')


@pytest.fixture(scope='session')
def c9wrc3_rad():
    return build_inputs('wr(C9,C3)', 'rad')

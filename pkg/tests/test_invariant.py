"""
Tests for exponent functions, minimal sets and the constants a and d
"""

import math

import numpy as np
import pytest

from malleb.errors import ContractError, MallebError, ParseError, ValidationError
from malleb.models.invariant import ExpFunction, a_of, d_of, make_exp, s_min
from malleb.models.perm import build_group
from tests.conftest import build_inputs


def test_discriminant_on_s3(s3):
    exp = make_exp(s3, 'disc')
    assert exp(0) == 0
    assert sorted(exp.values.tolist()) == [0, 1, 1, 1, 2, 2]
    assert a_of(None, exp) == 1
    minimal = s_min(None, exp)
    assert minimal.size == 3 and minimal.value == 1
    assert d_of(s3, exp) == 2


def test_radical_is_constant(s3):
    exp = make_exp(s3, 'rad')
    assert exp.values.tolist() == [0, 1, 1, 1, 1, 1]
    assert s_min(None, exp).size == 5
    assert d_of(s3, exp) == 6


def test_d_of_wreath(c3wrc4_disc, c3wrc4_rad, c4wrc4_rad):
    group, exp, _ = c3wrc4_disc
    assert d_of(group, exp) == 3
    group, exp, _ = c3wrc4_rad
    assert d_of(group, exp) == 12
    group, exp, _ = c4wrc4_rad
    assert d_of(group, exp) == 16


def test_subsets(c3wrc4_disc):
    group, exp, _ = c3wrc4_disc
    # a subgroup mask, a list of indices and the whole group agree on the block kernel
    kernel = group.block_kernel
    assert a_of(kernel, exp) == 2
    assert a_of(np.flatnonzero(kernel), exp) == 2
    assert s_min(kernel, exp).size == 8
    identity_only = np.zeros(group.order, dtype=bool)
    identity_only[0] = True
    with pytest.raises(ContractError):
        a_of(identity_only, exp)


def test_table_by_cycle_type(s3):
    exp = ExpFunction.from_text(s3, '2: 1\n# three-cycles\n3: 2\n')
    assert np.array_equal(exp.values, make_exp(s3, 'disc').values)
    assert exp.label == 'table'


def test_table_by_class_position(s3):
    text = '\n'.join(f"class:{i}:{cls.size}" for i, cls in enumerate(s3.conjugacy_classes) if i)
    exp = ExpFunction.from_text(s3, text)
    assert sorted(exp.values.tolist()) == [0, 2, 2, 3, 3, 3]


def test_table_file(s3, tmp_path):
    path = tmp_path / 'weights.txt'
    path.write_text('2^1 1^1: 5\n3: 7\n')
    exp = make_exp(s3, f"table:{path}")
    assert a_of(None, exp) == 5
    assert exp.label == f"table:{path}"


@pytest.mark.parametrize('text, error', [
    ('2: 1\n', ValidationError),
    ('2 1\n3: 2\n', ParseError),
    ('2: x\n3: 2\n', ParseError),
    ('2: 0\n3: 2\n', ValidationError),
    ('4: 1\n3: 2\n', ValidationError),
    ('class:9: 1\n', ValidationError),
    ('two: 1\n', ParseError),
])
def test_table_errors(s3, text, error):
    with pytest.raises(error):
        ExpFunction.from_text(s3, text)


def test_table_must_be_stable_under_powering():
    c5 = build_group('C5')
    text = 'class:1:1\nclass:2:1\nclass:3:1\nclass:4:2\n'
    with pytest.raises(ValidationError):
        ExpFunction.from_text(c5, text)


def test_missing_table_file(s3):
    with pytest.raises(ParseError):
        make_exp(s3, 'table:/nonexistent/weights.txt')


def test_unknown_invariant(s3):
    with pytest.raises(ParseError):
        make_exp(s3, 'conductor')


@pytest.mark.parametrize('text, inv', [
    ('S4', 'disc'), ('wr(C3,C4)', 'rad'), ('wr(C3,C4)', 'disc'), ('wr(C2,C3)', 'disc'), ('x(C2,C3)', 'rad'),
])
def test_minimal_set_closed_under_coprime_powers(text, inv):
    group, exp, _ = build_inputs(text, inv)
    minimal = s_min(None, exp)
    members = set(minimal.indices.tolist())
    for g in minimal.indices.tolist():
        order = int(group.element_orders[g])
        for k in range(2, order):
            if math.gcd(k, order) == 1:
                assert group.power(g, k) in members
    assert group.exponent % d_of(group, exp) == 0


@pytest.mark.parametrize('top, bottom', [('C3', 'C2'), ('C4', 'C3'), ('S3', 'C2'), ('C5', 'C3'), ('S3', 'C3')])
def test_wreath_keeps_minimal_index(top, bottom):
    inner = make_exp(build_group(top), 'disc')
    outer = make_exp(build_group(f"wr({top},{bottom})"), 'disc')
    assert a_of(None, outer) == a_of(None, inner)


def test_trivial_group_has_no_minimal_set():
    with pytest.raises(MallebError):
        build_inputs('C1', 'disc')

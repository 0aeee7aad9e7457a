"""
Tests for permutations, group construction and the abelian normal lattice
"""

import numpy as np
import pytest
from sympy.combinatorics import Permutation as SymPermutation, PermutationGroup

from malleb.errors import GroupSizeError, ParseError, ValidationError
from malleb.models.perm import GroupExpr, Permutation, build_group, index_of


def sympy_group(group):
    return PermutationGroup([SymPermutation(list(g.images)) for g in group.generators])


def test_permutation_from_cycles():
    g = Permutation.from_cycles('(0 1 2)(3 4)', 5)
    assert g.images == (1, 2, 0, 4, 3)
    assert g.cycle_type() == (3, 2)
    assert g.order() == 6
    assert index_of(g) == 3
    assert g.to_cycles() == '(0 1 2)(3 4)'


def test_permutation_product_applies_left_first():
    a = Permutation.from_cycles('(0 1)', 3)
    b = Permutation.from_cycles('(1 2)', 3)
    assert (a * b).images == (2, 0, 1)
    assert (a * b).inverse() == b * a
    assert a.power(-1) == a
    assert Permutation.from_cycles('(0 1 2)', 3).power(3) == Permutation.identity(3)


@pytest.mark.parametrize('text', ['(0 1 x)', '(0 1)(1 2)', '(0 5)', 'abc'])
def test_bad_cycles(text):
    with pytest.raises((ParseError, ValidationError)):
        Permutation.from_cycles(text, 3)


@pytest.mark.parametrize('text, canonical', [
    ('C4', 'C4'),
    ('wr( C3 , C4 )', 'wr(C3,C4)'),
    ('x(C2,S3)', 'x(C2,S3)'),
    ('wr(wr(C2,C2),C2)', 'wr(wr(C2,C2),C2)'),
])
def test_expression_text(text, canonical):
    assert GroupExpr.parse(text).text == canonical


@pytest.mark.parametrize('text', ['wr(C3', 'D4', 'C0', 'C3C4', 'gens:(0 1)'])
def test_expression_errors(text):
    with pytest.raises(ParseError):
        GroupExpr.parse(text)


@pytest.mark.parametrize('text, degree, order', [
    ('S3', 3, 6),
    ('C4', 4, 4),
    ('S4', 4, 24),
    ('wr(C3,C4)', 12, 324),
    ('wr(C2,C3)', 6, 24),
    ('x(C2,C3)', 6, 6),
    ('gens:n=4;(0 1 2 3);(0 2)', 4, 8),
])
def test_build_group(text, degree, order):
    group = build_group(text)
    assert (group.degree, group.order) == (degree, order)
    assert sympy_group(group).order() == order
    assert group.rows[0].tolist() == list(range(degree))


def test_build_group_errors():
    with pytest.raises(ValidationError):
        build_group('gens:n=4;(0 1)')
    with pytest.raises(GroupSizeError):
        build_group('S12', element_cap=1000)


def test_element_arithmetic(c3wrc4):
    g, h = c3wrc4.generator_indices
    gh = c3wrc4.multiply(g, h)
    assert c3wrc4.element(gh) == c3wrc4.element(g) * c3wrc4.element(h)
    assert c3wrc4.power(h, 4) == 0
    assert c3wrc4.element(c3wrc4.conjugate(g, h)) == c3wrc4.element(h).inverse() * c3wrc4.element(g) * c3wrc4.element(h)
    assert c3wrc4.element_orders[gh] == c3wrc4.element(gh).order()
    assert c3wrc4.exponent == 12


@pytest.mark.parametrize('text, count', [('S3', 3), ('C4', 4), ('S4', 5), ('wr(C2,C2)', 5)])
def test_class_counts(text, count):
    group = build_group(text)
    assert len(group.conjugacy_classes) == count
    assert len(list(sympy_group(group).conjugacy_classes())) == count
    assert sum(c.size for c in group.conjugacy_classes) == group.order


def test_classes_outside_block_kernel(c5wrc4_rad):
    group = c5wrc4_rad[0]
    outside = [c for c in group.conjugacy_classes if not group.block_kernel[c.representative_index]]
    assert len(outside) == 15
    assert len(group.conjugacy_classes) == 180


def test_commutator_subgroup(s3, c3wrc4):
    assert np.count_nonzero(s3.commutator_subgroup[0]) == 3
    mask, _ = build_group('S4').commutator_subgroup
    assert np.count_nonzero(mask) == 12
    assert np.count_nonzero(c3wrc4.commutator_subgroup[0]) == 27
    assert build_group('C6').is_abelian


@pytest.mark.parametrize('text, size', [('S3', 2), ('wr(C3,C4)', 6), ('wr(C4,C4)', 15), ('C6', 4)])
def test_lattice_sizes(text, size):
    group = build_group(text)
    lattice = group.abelian_normal_lattice
    assert len(lattice) == size
    assert [k.order for k in lattice] == sorted(k.order for k in lattice)
    assert lattice[-1].order == group.order
    for kernel in lattice:
        assert group.is_normal(kernel.mask)
        assert kernel.quotient.order == kernel.index


def test_quotient_lookup(c3wrc4):
    member = c3wrc4.abelian_normal_lattice[2]
    quotient, projection = c3wrc4.quotient(member.mask)
    assert quotient.order == member.index
    assert np.array_equal(projection, member.projection)
    assert c3wrc4.lattice_member(member.mask) is member


def test_block_kernel(c3wrc4, s3):
    assert np.count_nonzero(c3wrc4.block_kernel) == 81
    assert s3.block_kernel is None


def test_center(c3wrc4):
    assert build_group('C4').center.all()
    # the diagonal C3
    assert np.count_nonzero(c3wrc4.center) == 3


def test_solvable():
    s4 = build_group('S4')
    assert s4.is_solvable(s4.generator_indices)
    s5 = build_group('S5')
    assert not s5.is_solvable(s5.generator_indices)


def test_projection_is_a_homomorphism(c3wrc4):
    for kernel in c3wrc4.abelian_normal_lattice:
        quotient, projection = kernel.quotient, kernel.projection
        for x in range(0, c3wrc4.order, 7):
            for y in range(0, c3wrc4.order, 11):
                product = c3wrc4.multiply(x, y)
                assert projection[product] == quotient.multiply(int(projection[x]), int(projection[y]))
        assert projection[0] == 0
        assert np.array_equal(projection == 0, kernel.mask)

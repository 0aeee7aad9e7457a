"""
Permutation groups: construction, classes, commutator subgroup and abelian quotients
"""

import logging
import math
import re
from functools import cached_property

import numpy as np

from malleb.config import ENGINE_CONFIG
from malleb.errors import ContractError, GroupSizeError, ParseError, ValidationError
from malleb.tables import (
    ElementTable, compose_rows, cycle_counts, invert_rows, point_dtype, power_rows, row_orders,
)
from malleb.tables.orbits import OrbitPartition

_CYCLE = re.compile(r'\(([^()]*)\)')


class Permutation:
    """Permutation of {0, ..., n-1} stored as its image list"""

    def __init__(self, images):
        self.images = tuple(int(i) for i in images)
        if sorted(self.images) != list(range(len(self.images))):
            raise ValidationError(f"Not a bijection on {len(self.images)} points: {self.images}")

    @classmethod
    def identity(cls, degree):
        """Identity permutation of the given degree"""
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, text, degree):
        """Parse disjoint cycle notation such as '(0 1 2)(3 4)'"""
        stripped = text.strip()
        if _CYCLE.sub('', stripped).strip():
            raise ParseError(f"Unexpected characters in cycle notation: '{text}'")
        images = list(range(degree))
        used = set()
        for body in _CYCLE.findall(stripped):
            tokens = body.replace(',', ' ').split()
            try:
                points = [int(t) for t in tokens]
            except ValueError:
                raise ParseError(f"Non-integer point in cycle '({body})'")
            for p in points:
                if not 0 <= p < degree:
                    raise ValidationError(f"Point {p} outside degree {degree}")
                if p in used:
                    raise ValidationError(f"Point {p} repeated in '{text}'")
                used.add(p)
            for a, b in zip(points, points[1:] + points[:1]):
                images[a] = b
        return cls(images)

    @property
    def degree(self):
        return len(self.images)

    def __mul__(self, other):
        """Product applying self first, then other"""
        if self.degree != other.degree:
            raise ContractError('Degree mismatch in product')
        return Permutation(other.images[i] for i in self.images)

    def inverse(self):
        """Inverse permutation"""
        images = [0] * self.degree
        for i, j in enumerate(self.images):
            images[j] = i
        return Permutation(images)

    def power(self, k):
        """k-th power; negative k uses the inverse"""
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def cycles(self):
        """All cycles including fixed points, each starting at its smallest point"""
        seen = set()
        cycles = []
        for start in range(self.degree):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self.images[point]
            cycles.append(tuple(cycle))
        return cycles

    def cycle_type(self):
        """Cycle lengths in decreasing order, fixed points included"""
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def index(self):
        """Degree minus number of cycles"""
        return self.degree - len(self.cycles())

    def order(self):
        """Least common multiple of the cycle lengths"""
        return math.lcm(*(len(c) for c in self.cycles()))

    def to_cycles(self):
        """Cycle notation without fixed points; '()' for the identity"""
        moved = [c for c in self.cycles() if len(c) > 1]
        if not moved:
            return '()'
        return ''.join('(' + ' '.join(str(p) for p in c) + ')' for c in moved)

    def to_array(self, dtype=None):
        return np.asarray(self.images, dtype=dtype or point_dtype(self.degree))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"<Permutation {self.to_cycles()}>"


def index_of(g):
    """Index of a permutation: degree minus number of cycles"""
    return g.index()


class GroupExpr:
    """Syntax tree for group constructors: C<m>, S<m>, wr(T,B), x(A,B), gens:..."""

    KINDS = ('cyclic', 'symmetric', 'wreath', 'direct', 'explicit')

    def __init__(self, kind, args):
        if kind not in self.KINDS:
            raise ParseError(f"Unknown constructor '{kind}'")
        self.kind = kind
        self.args = tuple(args)

    @classmethod
    def cyclic(cls, m):
        return cls('cyclic', (m,))

    @classmethod
    def symmetric(cls, m):
        return cls('symmetric', (m,))

    @classmethod
    def wreath(cls, top_t, top_b):
        return cls('wreath', (top_t, top_b))

    @classmethod
    def direct(cls, left, right):
        return cls('direct', (left, right))

    @classmethod
    def explicit(cls, degree, cycles):
        return cls('explicit', (degree, tuple(cycles)))

    @classmethod
    def parse(cls, text):
        """Parse the text grammar into a GroupExpr"""
        parser = _ExprParser(text)
        expr = parser.expr()
        parser.expect_end()
        return expr

    @property
    def text(self):
        """Canonical text form"""
        if self.kind == 'cyclic':
            return f"C{self.args[0]}"
        if self.kind == 'symmetric':
            return f"S{self.args[0]}"
        if self.kind == 'wreath':
            return f"wr({self.args[0].text},{self.args[1].text})"
        if self.kind == 'direct':
            return f"x({self.args[0].text},{self.args[1].text})"
        degree, cycles = self.args
        return f"gens:n={degree};" + ';'.join(cycles)

    def __eq__(self, other):
        return isinstance(other, GroupExpr) and self.text == other.text

    def __hash__(self):
        return hash(self.text)

    def __repr__(self):
        return f"<GroupExpr {self.text}>"


class _ExprParser:
    """Recursive-descent parser over the group expression grammar"""

    def __init__(self, text):
        self.text = text.replace(' ', '') if not text.strip().startswith('gens:') else text.strip()
        self.pos = 0

    def peek(self, token):
        return self.text.startswith(token, self.pos)

    def take(self, token):
        if not self.peek(token):
            raise ParseError(f"Expected '{token}' at position {self.pos} in '{self.text}'")
        self.pos += len(token)

    def number(self):
        match = re.compile(r'\d+').match(self.text, self.pos)
        if not match:
            raise ParseError(f"Expected a number at position {self.pos} in '{self.text}'")
        self.pos = match.end()
        return int(match.group())

    def expr(self):
        if self.peek('gens:'):
            return self.explicit()
        if self.peek('wr('):
            return GroupExpr.wreath(*self.pair('wr('))
        if self.peek('x('):
            return GroupExpr.direct(*self.pair('x('))
        if self.peek('C'):
            self.take('C')
            return GroupExpr.cyclic(self.positive())
        if self.peek('S'):
            self.take('S')
            return GroupExpr.symmetric(self.positive())
        raise ParseError(f"Unknown constructor at position {self.pos} in '{self.text}'")

    def positive(self):
        value = self.number()
        if value < 1:
            raise ParseError(f"Constructor size must be positive, got {value}")
        return value

    def pair(self, opener):
        self.take(opener)
        left = self.expr()
        self.take(',')
        right = self.expr()
        self.take(')')
        return left, right

    def explicit(self):
        self.take('gens:')
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            char = self.text[self.pos]
            if char == '(':
                depth += 1
            elif char == ')':
                if depth == 0:
                    break
                depth -= 1
            elif char == ',' and depth == 0:
                break
            self.pos += 1
        body = self.text[start:self.pos].strip()
        fields = [f.strip() for f in body.split(';')]
        header = fields[0].replace(' ', '')
        if not header.startswith('n='):
            raise ParseError(f"Explicit group must start with 'n=<degree>': '{body}'")
        try:
            degree = int(header[2:])
        except ValueError:
            raise ParseError(f"Bad degree in '{header}'")
        if degree < 1:
            raise ParseError(f"Degree must be positive, got {degree}")
        return GroupExpr.explicit(degree, [f for f in fields[1:] if f])

    def expect_end(self):
        if self.pos != len(self.text):
            raise ParseError(f"Trailing input at position {self.pos} in '{self.text}'")


def _expected_order(expr, cap):
    """Order of the group an expression denotes, without materializing it"""
    if expr.kind == 'cyclic':
        return expr.args[0]
    if expr.kind == 'symmetric':
        return math.factorial(expr.args[0])
    if expr.kind == 'wreath':
        top_t = build_group(expr.args[0], cap)
        top_b = build_group(expr.args[1], cap)
        return top_t.order ** top_b.degree * top_b.order
    if expr.kind == 'direct':
        left = _expected_order(expr.args[0], cap)
        right = _expected_order(expr.args[1], cap)
        return None if left is None or right is None else left * right
    return None


def _generators(expr, cap):
    """Degree and generating permutations of an expression"""
    if expr.kind == 'cyclic':
        m = expr.args[0]
        gens = [Permutation(list(range(1, m)) + [0])] if m > 1 else []
        return m, gens
    if expr.kind == 'symmetric':
        m = expr.args[0]
        gens = []
        if m >= 2:
            gens.append(Permutation([1, 0] + list(range(2, m))))
        if m >= 3:
            gens.append(Permutation(list(range(1, m)) + [0]))
        return m, gens
    if expr.kind == 'wreath':
        top_t = build_group(expr.args[0], cap)
        top_b = build_group(expr.args[1], cap)
        m, blocks = top_t.degree, top_b.degree
        degree = m * blocks
        gens = []
        for t in top_t.generators:
            gens.append(Permutation(list(t.images) + list(range(m, degree))))
        for b in top_b.generators:
            gens.append(Permutation(b.images[j] * m + i for j in range(blocks) for i in range(m)))
        return degree, gens
    if expr.kind == 'direct':
        left_degree, left = _generators(expr.args[0], cap)
        right_degree, right = _generators(expr.args[1], cap)
        degree = left_degree * right_degree
        gens = []
        for a in left:
            gens.append(Permutation(a.images[i] * right_degree + j
                                    for i in range(left_degree) for j in range(right_degree)))
        for b in right:
            gens.append(Permutation(i * right_degree + b.images[j]
                                    for i in range(left_degree) for j in range(right_degree)))
        return degree, gens
    degree, cycles = expr.args
    gens = [Permutation.from_cycles(c, degree) for c in cycles]
    return degree, [g for g in gens if g != Permutation.identity(degree)]


def _is_transitive(degree, gens):
    reached = {0}
    frontier = [0]
    while frontier:
        point = frontier.pop()
        for g in gens:
            image = g.images[point]
            if image not in reached:
                reached.add(image)
                frontier.append(image)
    return len(reached) == degree


def build_group(expr, element_cap=None):
    """Materialize the group an expression denotes"""
    cap = element_cap or ENGINE_CONFIG['element_cap']
    if isinstance(expr, str):
        expr = GroupExpr.parse(expr)
    expected = _expected_order(expr, cap)
    if expected is not None and expected > cap:
        raise GroupSizeError(expr.text, cap, expected)
    degree, gens = _generators(expr, cap)
    if not _is_transitive(degree, gens):
        raise ValidationError(f"{expr.text} is not transitive on {degree} points")
    table = ElementTable.closure([g.images for g in gens], degree, cap, label=expr.text)
    if expected is not None and table.order != expected:
        raise ContractError(f"{expr.text} closed to order {table.order}, expected {expected}")
    logging.info(f"Built {expr.text}: degree {degree}, order {table.order}")
    return PermGroup(expr, degree, gens, table)


class ConjugacyClass:
    """Conjugacy class with its smallest member as representative"""

    def __init__(self, group, members):
        self.group = group
        self.members = members
        self.representative_index = int(members[0])

    @property
    def representative(self):
        return self.group.element(self.representative_index)

    @property
    def size(self):
        return int(self.members.size)

    def __contains__(self, index):
        return bool(np.isin(index, self.members))

    def __repr__(self):
        return f"<ConjugacyClass {self.representative.to_cycles()} size={self.size}>"


class NormalSubgroup:
    """Normal subgroup containing the commutator subgroup, with its abelian quotient"""

    def __init__(self, group, mask, generators, quotient, projection):
        self.group = group
        self.mask = mask
        self.generators = list(generators)
        self.quotient = quotient
        self.projection = projection
        self.order = int(np.count_nonzero(mask))

    @property
    def members(self):
        return np.flatnonzero(self.mask)

    @property
    def index(self):
        return self.group.order // self.order

    def contains(self, other):
        """Whether another subgroup mask lies inside this one"""
        other_mask = other.mask if isinstance(other, NormalSubgroup) else other
        return not np.any(other_mask & ~self.mask)

    def sort_key(self):
        # Lexicographic on sorted member lists: the first differing index belongs to the smaller set
        return (self.order, np.packbits(~self.mask).tobytes())

    def __repr__(self):
        return f"<NormalSubgroup order={self.order} index={self.index}>"


class PermGroup:
    """Fully materialized transitive permutation group"""

    def __init__(self, expr, degree, generators, table):
        self.expr = expr
        self.degree = degree
        self.generators = list(generators)
        self.table = table
        self.order = table.order
        self.generator_indices = [table.index(g.to_array(table.rows.dtype)) for g in generators]

    @property
    def text(self):
        return self.expr.text if self.expr is not None else f"group of degree {self.degree}"

    @property
    def rows(self):
        return self.table.rows

    def element(self, index):
        """Element at an index as a Permutation"""
        return Permutation(self.rows[index])

    def index_of_element(self, perm):
        """Index of a Permutation in the element table"""
        return self.table.index(perm.to_array(self.rows.dtype))

    def multiply(self, left, right):
        """Index of left * right (left applied first)"""
        return self.table.index(self.rows[right][self.rows[left]])

    def power(self, index, exponent):
        """Index of an element power"""
        exponent %= int(self.element_orders[index])
        return self.table.index(power_rows(self.rows[index][None, :], exponent))

    def conjugate(self, index, by):
        """Index of by^-1 * g * by"""
        by_row = self.rows[by]
        by_inv = self.rows[self.inverse_indices[by]]
        return self.table.index(by_row[self.rows[index][by_inv]])

    @cached_property
    def inverse_indices(self):
        return self.table.lookup(invert_rows(self.rows))

    @cached_property
    def indices(self):
        """Index function on every element"""
        return self.degree - cycle_counts(self.rows)

    @cached_property
    def element_orders(self):
        return row_orders(self.rows)

    @cached_property
    def exponent(self):
        return int(np.lcm.reduce(self.element_orders))

    def right_multiplication(self, by):
        """Index map x -> x * by over all elements"""
        return self.table.lookup(self.rows[by][self.rows])

    def conjugation_map(self, by):
        """Index map x -> by^-1 * x * by over all elements"""
        by_row = self.rows[by]
        by_inv = self.rows[self.inverse_indices[by]]
        return self.table.lookup(by_row[self.rows[:, by_inv]])

    def is_normal(self, mask):
        """Whether a subgroup mask is stable under conjugation by the generators"""
        for s in self.generator_indices:
            if not mask[self.conjugation_map(s)[mask]].all():
                return False
        return True

    def subgroup_closure(self, generators, mask=None):
        """Smallest subgroup containing an existing subgroup mask and the generators"""
        if mask is None:
            mask = np.zeros(self.order, dtype=bool)
            mask[0] = True
            frontier = np.array([0])
        else:
            mask = mask.copy()
            frontier = np.flatnonzero(mask)
        gen_rows = [self.rows[g] for g in generators]
        while frontier.size and gen_rows:
            products = np.unique(np.concatenate(
                [self.table.lookup(g[self.rows[frontier]]) for g in gen_rows]))
            frontier = products[~mask[products]]
            mask[frontier] = True
        return mask

    def normal_closure(self, seeds, conjugators):
        """Subgroup generated by the seeds and their conjugates; returns (mask, generators)"""
        generators = []
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        queue = [int(s) for s in seeds]
        while queue:
            candidate = queue.pop(0)
            if mask[candidate]:
                continue
            generators.append(candidate)
            mask = self.subgroup_closure(generators, mask)
            queue.extend(self.conjugate(candidate, s) for s in conjugators)
        return mask, generators

    def commutator(self, left, right):
        """Index of left^-1 right^-1 left right"""
        inv = self.inverse_indices
        return self.multiply(self.multiply(inv[left], inv[right]), self.multiply(left, right))

    def derived_subgroup(self, generators):
        """Commutator subgroup of the subgroup generated by the given indices"""
        seeds = [self.commutator(a, b) for i, a in enumerate(generators) for b in generators[i + 1:]]
        return self.normal_closure(seeds, generators)

    @cached_property
    def commutator_subgroup(self):
        """(mask, generators) of [G, G]"""
        return self.derived_subgroup(self.generator_indices)

    @cached_property
    def is_abelian(self):
        return int(np.count_nonzero(self.commutator_subgroup[0])) == 1

    @cached_property
    def center(self):
        """Mask of elements commuting with every generator"""
        mask = np.ones(self.order, dtype=bool)
        for s in self.generator_indices:
            s_row = self.rows[s]
            mask &= np.all(s_row[self.rows] == self.rows[:, s_row], axis=1)
        return mask

    @cached_property
    def conjugacy_classes(self):
        """Classes ordered by (size, smallest member index)"""
        maps = [self.conjugation_map(s) for s in self.generator_indices]
        orbits = OrbitPartition(self.order, maps).orbits()
        classes = [ConjugacyClass(self, members) for members in orbits]
        classes.sort(key=lambda c: (c.size, c.representative_index))
        return classes

    @cached_property
    def class_of(self):
        """Position in conjugacy_classes of every element"""
        positions = np.empty(self.order, dtype=np.intp)
        for i, cls in enumerate(self.conjugacy_classes):
            positions[cls.members] = i
        return positions

    @cached_property
    def abelianization(self):
        """(A, coset_of, representatives) for A = G/[G,G]"""
        from malleb.models.abelian import AbelianGroup

        _, commutator_gens = self.commutator_subgroup
        maps = [self.right_multiplication(c) for c in commutator_gens]
        labels = OrbitPartition(self.order, maps).labels
        representatives = np.unique(labels)
        coset_of = np.searchsorted(representatives, labels)
        m = representatives.size
        left = np.repeat(representatives, m)
        right = np.tile(representatives, m)
        products = self.table.lookup(compose_rows(self.rows[left], self.rows[right]))
        table = coset_of[products].reshape(m, m)
        return AbelianGroup(table), coset_of, representatives

    @cached_property
    def abelian_normal_lattice(self):
        """Normal subgroups containing [G,G], ordered by order then member set"""
        abelian, coset_of, representatives = self.abelianization
        commutator_mask, commutator_gens = self.commutator_subgroup
        lattice = []
        for sub in abelian.subgroups():
            mask = np.isin(coset_of, sorted(sub))
            generators = list(commutator_gens)
            generators += [int(representatives[a]) for a in abelian.subgroup_generators(sub)]
            quotient, to_quotient = abelian.quotient(sub)
            lattice.append(NormalSubgroup(self, mask, generators, quotient, to_quotient[coset_of]))
        lattice.sort(key=NormalSubgroup.sort_key)
        logging.info(f"{self.text}: {len(lattice)} normal subgroups with abelian quotient")
        return lattice

    def quotient(self, subgroup):
        """(AbelianGroup, projection) of G by a normal subgroup containing [G,G]"""
        if isinstance(subgroup, NormalSubgroup):
            return subgroup.quotient, subgroup.projection
        mask = np.asarray(subgroup, dtype=bool)
        if not mask[0] or not self.is_normal(mask):
            raise ContractError('Quotient by a subset that is not a normal subgroup')
        for candidate in self.abelian_normal_lattice:
            if np.array_equal(candidate.mask, mask):
                return candidate.quotient, candidate.projection
        raise ContractError('Normal subgroup does not contain the commutator subgroup')

    def lattice_member(self, mask):
        """The lattice entry with exactly this member mask"""
        for candidate in self.abelian_normal_lattice:
            if np.array_equal(candidate.mask, mask):
                return candidate
        raise ContractError('Subgroup is not in the abelian normal lattice')

    @cached_property
    def block_kernel(self):
        """For a wreath product: mask of elements fixing every block; None otherwise"""
        if self.expr is None or self.expr.kind != 'wreath':
            return None
        block_size = self.degree // build_group(self.expr.args[1]).degree
        blocks = np.arange(self.degree) // block_size
        return np.all(self.rows // block_size == blocks, axis=1)

    def is_solvable(self, generators):
        """Whether the derived series of the generated subgroup reaches the identity"""
        current = list(generators)
        order = int(np.count_nonzero(self.subgroup_closure(current)))
        while order > 1:
            mask, current = self.derived_subgroup(current)
            derived_order = int(np.count_nonzero(mask))
            if derived_order == order:
                return False
            order = derived_order
        return True

    def __repr__(self):
        return f"<PermGroup {self.text} degree={self.degree} order={self.order}>"


def conjugacy_classes(group):
    return group.conjugacy_classes


def abelian_normal_lattice(group):
    return group.abelian_normal_lattice


def quotient(group, subgroup):
    return group.quotient(subgroup)

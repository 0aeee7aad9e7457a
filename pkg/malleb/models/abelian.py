"""
Finite abelian groups, unit groups mod d and cyclotomic subfield labels
"""

import itertools
import logging
import math
from functools import cached_property

import numpy as np
from sympy import divisors, factorint, multiplicity, primefactors, primitive_root, totient
from sympy.ntheory.modular import crt

from malleb.errors import ContractError, ParseError, ValidationError


class AbelianGroup:
    """Finite abelian group given by its Cayley table; index 0 is the identity"""

    def __init__(self, table):
        self.table = np.asarray(table, dtype=np.intp)
        self.order = self.table.shape[0]
        if self.table.shape != (self.order, self.order) or np.any(self.table[0] != np.arange(self.order)):
            raise ContractError('Cayley table must be square with identity at index 0')

    def multiply(self, a, b):
        return int(self.table[a, b])

    def power(self, a, k):
        """a^k for k >= 0, by repeated squaring on the table"""
        result = 0
        base = a
        k %= int(self.orders[a])
        while k:
            if k & 1:
                result = self.table[result, base]
            base = self.table[base, base]
            k >>= 1
        return int(result)

    @cached_property
    def inverse(self):
        return np.argmax(self.table == 0, axis=1)

    @cached_property
    def orders(self):
        orders = np.zeros(self.order, dtype=np.int64)
        current = np.arange(self.order)
        for step in range(1, self.order + 1):
            orders[(current == 0) & (orders == 0)] = step
            if orders.all():
                break
            current = self.table[current, np.arange(self.order)]
        return orders

    @cached_property
    def exponent(self):
        return int(np.lcm.reduce(self.orders)) if self.order > 1 else 1

    def span(self, generators, start=frozenset({0})):
        """Subgroup generated by the elements together with a starting subgroup"""
        members = set(start)
        frontier = list(members)
        gens = [int(g) for g in generators]
        while frontier:
            fresh = []
            for a in frontier:
                for g in gens:
                    b = int(self.table[a, g])
                    if b not in members:
                        members.add(b)
                        fresh.append(b)
            frontier = fresh
        return frozenset(members)

    @cached_property
    def basis(self):
        """Independent generators with their orders, one primary component at a time"""
        basis = []
        for p in sorted(factorint(self.order)):
            sylow = [a for a in range(self.order) if self.orders[a] == p ** multiplicity(p, int(self.orders[a]))]
            current = frozenset({0})
            while len(current) < len(sylow):
                best, best_order = None, 0
                for a in sylow:
                    relative = self._relative_order(a, current)
                    if relative > best_order:
                        best, best_order = a, relative
                # some element of the coset has exactly the relative order
                lift = min(self.table[best, c] for c in current if self.orders[self.table[best, c]] == best_order)
                basis.append((int(lift), best_order))
                current = self.span([lift], current)
        return basis

    def _relative_order(self, a, subgroup):
        k, power = 1, a
        while power not in subgroup:
            power = int(self.table[power, a])
            k += 1
        return k

    @cached_property
    def rank(self):
        return len(self.basis)

    @cached_property
    def coordinates(self):
        """Exponent vector of every element with respect to the basis"""
        coords = np.zeros((self.order, self.rank), dtype=np.int64)
        for exponents in itertools.product(*(range(o) for _, o in self.basis)):
            element = 0
            for (g, _), e in zip(self.basis, exponents):
                element = self.table[element, self.power(g, e)]
            coords[element] = exponents
        return coords

    def invariants(self):
        """Orders of the basis elements"""
        return [o for _, o in self.basis]

    @cached_property
    def _subgroups(self):
        found = {frozenset({0})}
        frontier = [frozenset({0})]
        while frontier:
            fresh = []
            for sub in frontier:
                for a in range(self.order):
                    if a in sub:
                        continue
                    bigger = self.span([a], sub)
                    if bigger not in found:
                        found.add(bigger)
                        fresh.append(bigger)
            frontier = fresh
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def subgroups(self):
        """All subgroups as frozensets of indices, ordered by size then members"""
        return list(self._subgroups)

    def subgroup_generators(self, subgroup):
        """Small generating set chosen greedily by index"""
        gens = []
        current = frozenset({0})
        for a in sorted(subgroup):
            if a not in current:
                gens.append(a)
                current = self.span([a], current)
        return gens

    def quotient(self, subgroup):
        """(AbelianGroup, projection) by a subgroup; cosets indexed by their least member"""
        subgroup = sorted(subgroup)
        least = np.array([min(int(self.table[a, s]) for s in subgroup) for a in range(self.order)])
        representatives = np.unique(least)
        projection = np.searchsorted(representatives, least)
        table = projection[self.table[np.ix_(representatives, representatives)]]
        return AbelianGroup(table), projection

    def describe(self):
        if self.order == 1:
            return 'trivial'
        return ' x '.join(f"C{o}" for o in self.invariants())

    def __repr__(self):
        return f"<AbelianGroup {self.describe()}>"


class UnitGroup(AbelianGroup):
    """Subgroup of (Z/dZ)^x given by its residues, sorted so that 1 comes first"""

    def __init__(self, modulus, residues):
        self.modulus = modulus
        self.residues = sorted({r % modulus for r in residues}) if modulus > 1 else [0]
        self.position = {r: i for i, r in enumerate(self.residues)}
        values = np.array(self.residues, dtype=np.int64)
        products = np.outer(values, values) % modulus if modulus > 1 else np.zeros((1, 1), dtype=np.int64)
        try:
            table = np.vectorize(self.position.__getitem__)(products) if modulus > 1 else products
        except KeyError:
            raise ValidationError(f"Residues {self.residues} are not closed under multiplication mod {modulus}")
        super().__init__(table)

    def index_of(self, residue):
        """Element index of a residue"""
        try:
            return self.position[residue % self.modulus]
        except KeyError:
            raise ContractError(f"{residue} is not in the unit subgroup mod {self.modulus}")

    def residue(self, index):
        return self.residues[index] if self.modulus > 1 else 1

    def residues_of(self, indices):
        return sorted(self.residue(i) for i in indices)

    def __repr__(self):
        return f"<UnitGroup mod {self.modulus} {self.describe()}>"


def units_mod(d):
    """The unit group (Z/dZ)^x"""
    if d < 1:
        raise ValidationError(f"Modulus must be positive, got {d}")
    return UnitGroup(d, [r for r in range(1, max(d, 2)) if math.gcd(r, d) == 1])


def basis(group):
    return group.basis


class Hom:
    """Homomorphism of abelian groups fixed by the images of the source basis"""

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        self.images = tuple(int(i) for i in images)
        for (g, o), image in zip(source.basis, self.images):
            if o % int(target.orders[image]):
                raise ContractError(f"Image of order {target.orders[image]} for a generator of order {o}")
        mapping = np.zeros(source.order, dtype=np.intp)
        for a in range(source.order):
            value = 0
            for image, e in zip(self.images, source.coordinates[a]):
                value = target.table[value, target.power(image, int(e))]
            mapping[a] = value
        self.mapping = mapping

    def __call__(self, a):
        return int(self.mapping[a])

    @cached_property
    def kernel(self):
        return frozenset(int(a) for a in np.flatnonzero(self.mapping == 0))

    @property
    def is_surjective(self):
        return np.unique(self.mapping).size == self.target.order

    def preimages(self, b):
        """Source indices mapping to b, ascending"""
        return np.flatnonzero(self.mapping == b)

    def __repr__(self):
        return f"<Hom images={self.images} kernel={len(self.kernel)}>"


def surjections(source, target):
    """All surjective homomorphisms, in lexicographic order of basis images"""
    if isinstance(source, CycloGamma):
        source = source.group
    choices = [[t for t in range(target.order) if o % int(target.orders[t]) == 0] for _, o in source.basis]
    homs = []
    for images in itertools.product(*choices):
        hom = Hom(source, target, images)
        if hom.is_surjective:
            homs.append(hom)
    return homs


class CycloGamma:
    """Image of the cyclotomic character in (Z/dZ)^x for a base field"""

    def __init__(self, modulus, residues, tag, q=None):
        self.modulus = modulus
        self.group = UnitGroup(modulus, residues)
        self.ambient = units_mod(modulus)
        self.tag = tag
        self.q = q

    @classmethod
    def rational(cls, d):
        """Full unit group: base field Q"""
        return cls(d, units_mod(d).residues, 'Q')

    @classmethod
    def function_field(cls, q, d):
        """Cyclic subgroup generated by q: base field F_q(t)"""
        if math.gcd(q, d) != 1:
            raise ValidationError(f"gcd(q, d) = gcd({q}, {d}) must be 1")
        residues = {1 % d if d > 1 else 0}
        power = q % d if d > 1 else 0
        while power not in residues:
            residues.add(power)
            power = power * q % d
        return cls(d, residues, f"Fq:q={q}", q=q)

    @classmethod
    def custom(cls, d, generators):
        """Subgroup generated by arbitrary units"""
        ambient = units_mod(d)
        span = ambient.span([ambient.index_of(g) for g in generators])
        return cls(d, ambient.residues_of(span), 'custom')

    @classmethod
    def from_text(cls, text, d):
        """Base spec 'Q' or 'Fq:q=<q>'"""
        text = text.strip()
        if text == 'Q':
            return cls.rational(d)
        if text.startswith('Fq:q='):
            try:
                q = int(text[5:])
            except ValueError:
                raise ParseError(f"Bad field size in base '{text}'")
            if q < 2 or len(factorint(q)) != 1:
                raise ValidationError(f"q = {q} is not a prime power")
            return cls.function_field(q, d)
        raise ParseError(f"Unknown base '{text}': expected Q or Fq:q=<q>")

    @property
    def is_function_field(self):
        return self.q is not None

    def with_modulus(self, d):
        """The same base field data at another modulus"""
        if self.is_function_field:
            return CycloGamma.function_field(self.q, d)
        if self.tag == 'Q':
            return CycloGamma.rational(d)
        raise ContractError('Custom cyclotomic data cannot change modulus')

    def label(self, kernel_indices):
        """Subfield label of the field cut out by a kernel inside this group"""
        residues = self.group.residues_of(kernel_indices)
        if self.is_function_field:
            degree = self.group.order // len(residues)
            name = f"F{self.q}(t)" if degree == 1 else f"F_{self.q}^{degree}(t)"
            return SubfieldLabel(self.modulus, residues, name, degree, conductor=None)
        return label_subfield(self.modulus, residues)

    def __repr__(self):
        return f"<CycloGamma {self.tag} mod {self.modulus} order={self.group.order}>"


class SubfieldLabel:
    """Subfield of Q(mu_d) fixed by a subgroup H of units, with its display name"""

    def __init__(self, modulus, kernel_residues, name, degree, conductor):
        self.modulus = modulus
        self.kernel_residues = tuple(kernel_residues)
        self.name = name
        self.degree = degree
        self.conductor = conductor

    @property
    def is_real(self):
        return self.modulus <= 2 or (self.modulus - 1) in self.kernel_residues

    @property
    def ramified_primes(self):
        return primefactors(self.conductor) if self.conductor else []

    def is_wild(self, p):
        """Whether the place above p ramifies wildly in the labelled field"""
        if not self.conductor:
            return False
        return self.conductor % (4 if p == 2 else p * p) == 0

    def to_dict(self):
        return {
            'd': self.modulus,
            'kernel_residues': list(self.kernel_residues),
            'name': self.name,
        }

    def __eq__(self, other):
        return isinstance(other, SubfieldLabel) and (self.modulus, self.kernel_residues) == (other.modulus, other.kernel_residues)

    def __hash__(self):
        return hash((self.modulus, self.kernel_residues))

    def __repr__(self):
        return f"<SubfieldLabel {self.name} d={self.modulus}>"


def conductor(d, H):
    """Smallest c | d such that every unit congruent to 1 mod c lies in H"""
    H = {h % d for h in H} if d > 1 else {0}
    units = units_mod(d).residues
    for c in divisors(d):
        if all(u in H for u in units if (u - 1) % c == 0):
            return c
    return d


def label_subfield(d, H):
    """Canonical label of the fixed field of H inside Q(mu_d)"""
    residues = sorted({h % d for h in H}) if d > 1 else [0]
    degree = int(totient(d)) // len(residues)
    if int(totient(d)) % len(residues):
        raise ValidationError(f"{residues} is not a subgroup of units mod {d}")
    c = conductor(d, residues)
    image = sorted({h % c for h in residues}) if c > 1 else [0]
    if degree == 1:
        name = 'Q'
    elif len(image) == 1:
        name = 'Q(i)' if c == 4 else f"Q(μ{c})"
    elif degree == 2:
        discriminant = c if (c - 1) in image else -c
        m = discriminant // 4 if discriminant % 4 == 0 else discriminant
        name = 'Q(i)' if m == -1 else f"Q(√{m})"
    elif image == [1, c - 1]:
        name = f"Q(μ{c})^+"
    else:
        name = f"Q(μ{c})^{{{','.join(str(r) for r in image)}}}"
    logging.debug(f"Label of H={residues} mod {d}: {name} (conductor {c})")
    return SubfieldLabel(d, residues, name, degree, c)


def inertia_generator(d, p):
    """Unit acting as a tame inertia generator at p on mu_d"""
    v = multiplicity(p, d)
    if v == 0:
        return 1
    pv = p ** v
    if p == 2:
        local = pv - 1 if v >= 2 else 1
    else:
        local = pow(int(primitive_root(pv)), p ** (v - 1), pv)
    return _glue(pv, local, d // pv, 1)


def frobenius(d, p):
    """Unit acting as a Frobenius at p on the p-prime part of mu_d"""
    v = multiplicity(p, d)
    pv = p ** v
    return _glue(pv, 1, d // pv, p)


def _glue(m1, r1, m2, r2):
    if m2 == 1:
        return r1 % m1 if m1 > 1 else 1
    if m1 == 1:
        return r2 % m2
    value, _ = crt([m1, m2], [r1, r2])
    return int(value)

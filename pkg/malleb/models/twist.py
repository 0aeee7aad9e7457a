"""
Pairs (pi, phi), the fibered group G(pi, phi) and phi-twisted orbit counts
"""

import logging
from functools import cached_property

import numpy as np

from malleb.config import ENGINE_CONFIG
from malleb.errors import ContractError, MethodUnavailable, ModulusError
from malleb.models.abelian import Hom, surjections
from malleb.models.invariant import a_of, s_min
from malleb.tables import power_rows
from malleb.tables.orbits import OrbitPartition

METHODS = ('partition', 'burnside', 'class-fusion', 'variant-action')

# Elements per comparison block in the fixed-point sums
_BLOCK = 1 << 22


class PiPhiPair:
    """Normal subgroup N with abelian quotient B and the surjections Gamma -> B sharing one kernel"""

    def __init__(self, group, exp, gamma, kernel, variants):
        self.group = group
        self.exp = exp
        self.gamma = gamma
        self.kernel = kernel
        self.variants = list(variants)
        if not self.variants:
            raise ContractError('A pair needs at least one surjection')
        self.phi = self.variants[0]

    @property
    def quotient(self):
        return self.kernel.quotient

    @property
    def projection(self):
        return self.kernel.projection

    @property
    def modulus(self):
        return self.gamma.modulus

    @property
    def is_trivial(self):
        return self.kernel.order == self.group.order

    @cached_property
    def minimal(self):
        return s_min(self.kernel.mask, self.exp)

    @cached_property
    def subfield(self):
        return self.gamma.label(self.phi.kernel)

    @property
    def kernel_residues(self):
        return tuple(self.gamma.group.residues_of(self.phi.kernel))

    def focused(self, phi):
        """The same pair with phi as its leading variant"""
        rest = [v for v in self.variants if v is not phi]
        return PiPhiPair(self.group, self.exp, self.gamma, self.kernel, [phi] + rest)

    def fibered_generators(self, phi=None):
        return FiberedGenSet(self, phi or self.phi)

    def sort_key(self):
        return (self.kernel.sort_key(), self.kernel_residues)

    def __repr__(self):
        return f"<PiPhiPair {self.subfield.name} |N|={self.kernel.order} variants={len(self.variants)}>"


class FiberedGenSet:
    """Generators (x, y) of {(x, y) in G x Gamma : pi(x) = phi(y)}

    One lift (s, y) per generator s of G, with y the least residue satisfying
    phi(y) = pi(s), and (e, h) for generators h of ker(phi).
    """

    def __init__(self, pair, phi):
        self.pair = pair
        self.phi = phi
        units = pair.gamma.group
        generators = []
        for s in pair.group.generator_indices:
            lifts = phi.preimages(int(pair.projection[s]))
            generators.append((s, units.residue(int(lifts[0]))))
        for h in units.subgroup_generators(phi.kernel):
            generators.append((0, units.residue(h)))
        self.generators = generators

    @property
    def order(self):
        pair = self.pair
        return pair.group.order * pair.gamma.group.order // pair.quotient.order

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"<FiberedGenSet {len(self.generators)} generators, order {self.order}>"


class OrbitReport:
    """Orbit count of a pair with the methods that produced it"""

    def __init__(self, count, representatives, methods, variant_counts):
        self.count = count
        self.representatives = representatives
        self.methods = methods
        self.variant_counts = variant_counts

    @property
    def agree(self):
        return all(v == self.count for v in self.methods.values() if v is not None)

    def to_dict(self):
        return {
            'count': self.count,
            'methods': dict(self.methods),
            'variant_counts': list(self.variant_counts),
            'agree': self.agree,
        }

    def __repr__(self):
        return f"<OrbitReport b={self.count} methods={self.methods}>"


def minimal_rows(pair):
    minimal = pair.minimal
    orders = pair.group.element_orders[minimal.indices]
    if np.any(pair.modulus % orders):
        raise ModulusError(
            f"Minimal elements of orders {sorted(set(orders.tolist()))} do not divide modulus {pair.modulus}")
    return minimal.indices, pair.group.rows[minimal.indices]


def _positions(group, indices, rows):
    found = group.table.lookup(rows)
    positions = np.searchsorted(indices, found)
    positions = np.minimum(positions, indices.size - 1)
    if np.any(indices[positions] != found):
        raise ContractError('Twisted action leaves the minimal set')
    return positions


def twisted_map(group, indices, rows, x, y, modulus):
    """Positions of x^-1 g^y x for every minimal g"""
    x_row = group.rows[x]
    x_inv = group.rows[group.inverse_indices[x]]
    powered = power_rows(rows, y % modulus)
    return _positions(group, indices, x_row[powered[:, x_inv]])


def variant_map(group, indices, rows, x, y, modulus):
    """Positions of x g^(1/y) x^-1 for every minimal g"""
    x_row = group.rows[x]
    x_inv = group.rows[group.inverse_indices[x]]
    powered = power_rows(rows, pow(y, -1, modulus) if modulus > 1 else 0)
    return _positions(group, indices, x_inv[powered[:, x_row]])


def partition_count(pair, phi=None):
    """Orbit count via union-find over the fibered generators; returns (count, representatives)"""
    indices, rows = minimal_rows(pair)
    generators = pair.fibered_generators(phi)
    maps = [twisted_map(pair.group, indices, rows, x, y, pair.modulus) for x, y in generators]
    partition = OrbitPartition(indices.size, maps)
    return partition.count, indices[partition.representatives]


def variant_action_count(pair, phi=None):
    """Orbit count of the action written with conjugation on the other side"""
    indices, rows = minimal_rows(pair)
    generators = pair.fibered_generators(phi)
    maps = [variant_map(pair.group, indices, rows, x, y, pair.modulus) for x, y in generators]
    return OrbitPartition(indices.size, maps).count


def burnside_count(pair, phi=None, cap=None):
    """Average number of fixed points over all of G(pi, phi)"""
    phi = phi or pair.phi
    cap = cap or ENGINE_CONFIG['burnside_cap']
    total = pair.group.order * pair.gamma.group.order // pair.quotient.order
    if total > cap:
        raise MethodUnavailable(f"|G(pi,phi)| = {total} exceeds burnside cap {cap}")
    indices, rows = minimal_rows(pair)
    group = pair.group
    size, degree = rows.shape
    block = max(1, _BLOCK // (size * degree))
    line = np.arange(size)[None, :, None]
    fixed = 0
    for y in range(pair.gamma.group.order):
        powered = power_rows(rows, pair.gamma.group.residue(y) % pair.modulus)
        coset = np.flatnonzero(pair.projection == phi(y))
        for start in range(0, coset.size, block):
            xs = group.rows[coset[start:start + block]]
            # g^y * x == x * g  <=>  x^-1 g^y x == g
            left = xs[:, powered]
            right = rows[line, xs[:, None, :]]
            fixed += int(np.count_nonzero(np.all(left == right, axis=2)))
    if fixed % total:
        raise ContractError(f"Fixed-point sum {fixed} not divisible by |G(pi,phi)| = {total}")
    return fixed // total


def class_fusion_count(pair, phi=None):
    """Orbits of Gamma on the N-classes of minimal elements, acting by c -> s^-1 c^y s with pi(s) = phi(y)"""
    phi = phi or pair.phi
    indices, rows = minimal_rows(pair)
    group = pair.group
    conjugations = [twisted_map(group, indices, rows, n, 1, pair.modulus) for n in pair.kernel.generators]
    labels = OrbitPartition(indices.size, conjugations).labels
    classes, class_ids = np.unique(labels, return_inverse=True)
    units = pair.gamma.group
    fusion = []
    for gamma, _ in units.basis:
        lift = int(np.flatnonzero(pair.projection == phi(gamma))[0])
        moved = twisted_map(group, indices, rows, lift, units.residue(gamma), pair.modulus)
        fusion.append(class_ids[moved[classes]])
    return OrbitPartition(classes.size, fusion).count


def b_pair(pair, cross_check=False, cap=None):
    """b(pi, phi): the largest orbit count among the merged surjections"""
    variant_counts = []
    best, best_reps, best_phi = None, None, None
    for phi in pair.variants:
        count, reps = partition_count(pair, phi)
        variant_counts.append(count)
        if best is None or count > best:
            best, best_reps, best_phi = count, reps, phi
    methods = {'partition': best}
    if cross_check:
        for name, method in (('burnside', lambda: burnside_count(pair, best_phi, cap)),
                             ('class-fusion', lambda: class_fusion_count(pair, best_phi)),
                             ('variant-action', lambda: variant_action_count(pair, best_phi))):
            try:
                methods[name] = method()
            except MethodUnavailable as e:
                logging.warning(f"{name} skipped for {pair.subfield.name}: {e}")
                methods[name] = None
    if len(set(variant_counts)) > 1:
        logging.warning(f"Merged variants of {pair.subfield.name} (|N|={pair.kernel.order}) "
                        f"have different counts {sorted(set(variant_counts))}")
    report = OrbitReport(best, best_reps, methods, variant_counts)
    logging.debug(f"b({pair.subfield.name}, |N|={pair.kernel.order}) = {best} {methods}")
    if not report.agree:
        logging.warning(f"Methods disagree on {pair.subfield.name}: {methods}")
    return report


def trivial_pair(group, exp, gamma):
    """N = G with the trivial surjection onto the trivial quotient"""
    top = group.abelian_normal_lattice[-1]
    return PiPhiPair(group, exp, gamma, top, surjections(gamma.group, top.quotient))


def enumerate_pairs(group, exp, gamma):
    """All pairs whose kernel keeps the minimal exponent, merged by (N, ker phi)"""
    a = a_of(None, exp)
    pairs = []
    merged = 0
    for kernel in group.abelian_normal_lattice:
        if kernel.order == 1 or a_of(kernel.mask, exp) != a:
            continue
        by_kernel = {}
        for phi in surjections(gamma.group, kernel.quotient):
            by_kernel.setdefault(phi.kernel, []).append(phi)
        for variants in by_kernel.values():
            merged += len(variants) - 1
            pairs.append(PiPhiPair(group, exp, gamma, kernel, variants))
    pairs.sort(key=PiPhiPair.sort_key)
    logging.info(f"{group.text}: {len(pairs)} pairs ({merged} surjections merged into shared kernels)")
    return pairs


def b_M(group, exp, gamma):
    """Orbits of the cyclotomic action on minimal classes"""
    return b_pair(trivial_pair(group, exp, gamma)).count


def b_T(group, exp, gamma, pairs=None, reports=None):
    """Maximum of b over all pairs, with the first pair attaining it"""
    pairs = pairs if pairs is not None else enumerate_pairs(group, exp, gamma)
    reports = reports if reports is not None else [b_pair(p) for p in pairs]
    best = max(range(len(pairs)), key=lambda i: (reports[i].count, -i))
    return reports[best].count, pairs[best]


def within_count(group, exp, gamma, mask):
    """Orbits of the cyclotomic action on minimal classes that lie inside a normal subgroup"""
    pair = trivial_pair(group, exp, gamma)
    count, reps = partition_count(pair)
    return int(np.count_nonzero(mask[reps]))


def reduce_pair(pair, modulus):
    """Pass from phi on a wide modulus to phi' on Gamma mod a divisor

    Returns (b on the minimal set of N, b of the reduced pair, reduced pair).
    """
    wide = pair.gamma.group
    if pair.modulus % modulus:
        raise ContractError(f"{modulus} does not divide the pair modulus {pair.modulus}")
    phi = pair.phi
    quotient = pair.quotient
    congruent = [i for i in range(wide.order) if (wide.residue(i) - 1) % modulus == 0]
    fiber = quotient.span([phi(i) for i in congruent])
    wider_mask = np.isin(pair.projection, sorted(fiber))
    wider = pair.group.lattice_member(wider_mask)
    narrow = pair.gamma.with_modulus(modulus)
    units = narrow.group

    def image(residue):
        lift = next(i for i in range(wide.order) if (wide.residue(i) - residue) % modulus == 0)
        element = int(np.flatnonzero(pair.projection == phi(lift))[0])
        return int(wider.projection[element])

    reduced_phi = Hom(units, wider.quotient, [image(units.residue(g)) for g, _ in units.basis])
    reduced = PiPhiPair(pair.group, pair.exp, narrow, wider, [reduced_phi])
    original = PiPhiPair(pair.group, pair.exp, pair.gamma, pair.kernel, [phi])
    return b_pair(original).count, b_pair(reduced).count, reduced

"""
Lifting conditions for cyclotomic phi through pi
"""

import logging
import math

import numpy as np
from sympy import isprime, multiplicity, primefactors

from malleb.config import ENGINE_CONFIG
from malleb.errors import PreconditionError
from malleb.models.abelian import frobenius, inertia_generator

LIFTABLE = 'liftable'
OBSTRUCTED = 'obstructed'
UNKNOWN = 'unknown'
INFINITY = 'infinity'

RULES = (
    'none', 'function-field', 'abelian-local', 'wreath-reduction',
    'zhat-tower', 'central-local', 'abelian-quotient-necessary',
)


class LiftStatus:
    """Verdict of an embedding problem with the places that obstruct it"""

    def __init__(self, verdict, places=None, rule='none', reason=None):
        self.verdict = verdict
        self.places = _sorted_places(places or [])
        self.rule = rule
        self.reason = reason
        if verdict == OBSTRUCTED and not self.places:
            raise ValueError('Obstructed status needs at least one place')

    @classmethod
    def liftable(cls, rule):
        return cls(LIFTABLE, rule=rule)

    @classmethod
    def obstructed(cls, places, rule):
        return cls(OBSTRUCTED, places, rule)

    @classmethod
    def unknown(cls, rule, reason):
        return cls(UNKNOWN, rule=rule, reason=reason)

    @property
    def is_liftable(self):
        return self.verdict == LIFTABLE

    def to_dict(self):
        return {
            'verdict': self.verdict,
            'places': list(self.places),
            'rule': self.rule,
        }

    def __str__(self):
        if self.verdict == OBSTRUCTED:
            return f"{OBSTRUCTED}: " + ', '.join(str(p) for p in self.places)
        if self.verdict == UNKNOWN:
            return f"{UNKNOWN}: {self.reason}"
        return LIFTABLE

    def __repr__(self):
        return f"<LiftStatus {self} ({self.rule})>"


def _sorted_places(places):
    primes = sorted({p for p in places if p != INFINITY})
    return primes + ([INFINITY] if INFINITY in places else [])


def embed_cyclic(ell, n, d):
    """Can the degree-n subfield of Q(mu_ell) be embedded in a C_d-extension of Q?"""
    if ell == 2 or not isprime(ell):
        raise PreconditionError(f"ell = {ell} must be an odd prime")
    if n < 1 or d < 1 or math.gcd(d, ell - 1) % n:
        raise PreconditionError(f"n = {n} must divide gcd(d, ell - 1) = gcd({d}, {ell - 1})")
    failed = []
    for p in primefactors(n):
        if (ell - 1) % p ** multiplicity(p, d):
            failed.append(ell)
            break
    if ((ell - 1) // 2) % n and multiplicity(2, d) != multiplicity(2, n):
        failed.append(INFINITY)
    if failed:
        return LiftStatus.obstructed(failed, 'abelian-local')
    return LiftStatus.liftable('abelian-local')


def solvable(group, generators):
    """Whether the subgroup generated by the element indices is solvable"""
    return group.is_solvable(generators)


def _coset(pair, b):
    return np.flatnonzero(pair.projection == b)


def _phi_at(pair, residue):
    units = pair.gamma.group
    return pair.phi(units.index_of(residue))


def abelian_local(pair, quotient, to_b):
    """Local test for the abelian problem A -> B at the places of the label

    quotient is an abelian quotient A of G through which pi factors and to_b maps
    A onto B. Returns (failed places, inconclusive places).
    """
    label = pair.subfield
    d = pair.modulus
    failed, inconclusive = [], []
    for p in label.ramified_primes:
        if label.is_wild(p):
            inconclusive.append(p)
            continue
        target = _phi_at(pair, inertia_generator(d, p))
        candidates = np.flatnonzero(to_b == target)
        if not np.any((p - 1) % quotient.orders[candidates] == 0):
            failed.append(p)
    if not label.is_real:
        target = _phi_at(pair, d - 1)
        candidates = np.flatnonzero(to_b == target)
        if not np.any(2 % quotient.orders[candidates] == 0):
            failed.append(INFINITY)
    return failed, inconclusive


def _through(pair, subgroup):
    """Map from G/M onto G/N for a lattice member M inside N"""
    representatives = np.unique(subgroup.projection, return_index=True)[1]
    return pair.projection[representatives]


def central_local(pair, cap=None):
    """Local test with the tame relation x y x^-1 = y^p on the full group

    Returns (failed places, inconclusive places).
    """
    cap = cap or ENGINE_CONFIG['local_cap']
    group = pair.group
    label = pair.subfield
    d = pair.modulus
    failed, inconclusive = [], []
    for p in label.ramified_primes:
        if label.is_wild(p):
            inconclusive.append(p)
            continue
        xs = _coset(pair, _phi_at(pair, frobenius(d, p)))
        ys = _coset(pair, _phi_at(pair, inertia_generator(d, p)))
        if xs.size * ys.size > cap:
            logging.warning(f"Local search at {p} over {xs.size * ys.size} candidates exceeds cap {cap}")
            inconclusive.append(p)
            continue
        if not _tame_relation_holds(group, xs, ys, p):
            failed.append(p)
    if not label.is_real:
        xs = _coset(pair, _phi_at(pair, d - 1))
        if not np.any(group.element_orders[xs] <= 2):
            failed.append(INFINITY)
    return failed, inconclusive


def _tame_relation_holds(group, xs, ys, p):
    y_rows = group.rows[ys]
    yp_rows = group.rows[[group.power(int(y), p) for y in ys]]
    line = np.arange(ys.size)[None, :, None]
    block = max(1, (1 << 22) // (ys.size * group.degree))
    for start in range(0, xs.size, block):
        x_rows = group.rows[xs[start:start + block]]
        # x * y == y^p * x
        left = y_rows[line, x_rows[:, None, :]]
        right = x_rows[:, yp_rows]
        if np.any(np.all(left == right, axis=2)):
            return True
    return False


def torsion_units(d):
    """Residues u mod d with u^(p-1) = 1 mod p^k for odd p^k || d and u = +-1 mod 2^k"""
    residues = []
    for u in range(1, max(d, 2)):
        if math.gcd(u, d) != 1:
            continue
        ok = True
        for p in primefactors(d):
            pk = p ** multiplicity(p, d)
            if p == 2:
                ok = u % pk in (1 % pk, pk - 1)
            else:
                ok = pow(u, p - 1, pk) == 1
            if not ok:
                break
        if ok:
            residues.append(u % d if d > 1 else 0)
    return residues


def _wreath_reduction(pair):
    group = pair.group
    expr = group.expr
    if expr is None or expr.kind != 'wreath' or expr.args[1].kind != 'cyclic':
        return None
    kernel = group.block_kernel
    if not pair.kernel.contains(kernel):
        return None
    ell = pair.subfield.conductor
    if not ell or ell == 2 or not isprime(ell):
        return None
    try:
        status = embed_cyclic(ell, pair.quotient.order, expr.args[1].args[0])
    except PreconditionError as e:
        logging.debug(f"Wreath reduction not applicable: {e}")
        return None
    status.rule = 'wreath-reduction'
    return status


def lift_status(pair, cap=None):
    """Dispatch over the embedding rules, first conclusive rule wins"""
    group = pair.group
    if pair.is_trivial:
        return LiftStatus.liftable('none')
    if pair.gamma.is_function_field:
        if solvable(group, pair.kernel.generators):
            return LiftStatus.liftable('function-field')
        return LiftStatus.unknown('function-field', 'kernel is not solvable')
    if group.is_abelian:
        trivial = group.abelian_normal_lattice[0]
        failed, inconclusive = abelian_local(pair, trivial.quotient, _through(pair, trivial))
        if failed:
            return LiftStatus.obstructed(failed, 'abelian-local')
        if inconclusive:
            return LiftStatus.unknown('abelian-local', 'wild case out of scope')
        return LiftStatus.liftable('abelian-local')
    status = _wreath_reduction(pair)
    if status is not None:
        return status
    if (set(torsion_units(pair.modulus)) <= set(pair.kernel_residues)
            and pair.kernel.order % 2 and solvable(group, pair.kernel.generators)):
        return LiftStatus.liftable('zhat-tower')
    if not np.any(pair.kernel.mask & ~group.center):
        failed, inconclusive = central_local(pair, cap)
        if failed:
            return LiftStatus.obstructed(failed, 'central-local')
        if not inconclusive:
            return LiftStatus.liftable('central-local')
    failed = set()
    for subgroup in group.abelian_normal_lattice:
        if not pair.kernel.contains(subgroup):
            continue
        bad, _ = abelian_local(pair, subgroup.quotient, _through(pair, subgroup))
        failed.update(bad)
    if failed:
        return LiftStatus.obstructed(failed, 'abelian-quotient-necessary')
    return LiftStatus.unknown('abelian-quotient-necessary', 'local conditions hold on every abelian quotient')

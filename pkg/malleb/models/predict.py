"""
Prediction reports: a, b_M, b_T, the pair table with lift statuses and b_new
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from malleb import __version__
from malleb.config import ENGINE_CONFIG
from malleb.errors import MethodUnavailable
from malleb.models.embed import UNKNOWN, lift_status
from malleb.models.invariant import a_of
from malleb.models.twist import b_pair, enumerate_pairs, minimal_rows


def pole_order(pair, phi=None, cap=None):
    """Fixed-point average of x y x^-1 = y^a over (x, a) with pi(x) = phi(a)

    Runs minimal element by minimal element, sweeping conjugation over all of G.
    """
    phi = phi or pair.phi
    cap = cap or ENGINE_CONFIG['burnside_cap']
    group = pair.group
    units = pair.gamma.group
    total = pair.kernel.order * units.order
    if total > cap:
        raise MethodUnavailable(f"|G(pi,phi)| = {total} exceeds burnside cap {cap}")
    indices, _ = minimal_rows(pair)
    inverse_rows = group.rows[group.inverse_indices]
    images = np.array([phi(a) for a in range(units.order)])
    fixed = 0
    for y in indices:
        conjugates = group.table.lookup(np.take_along_axis(inverse_rows, group.rows[y][group.rows], axis=1))
        for a in range(units.order):
            target = group.power(int(y), units.residue(a))
            fixed += int(np.count_nonzero((conjugates == target) & (pair.projection == images[a])))
    return Fraction(fixed, total)


class PairResult:
    """One row of the pair table"""

    def __init__(self, pair, report, lift):
        self.pair = pair
        self.report = report
        self.lift = lift

    @property
    def b(self):
        return self.report.count

    def to_dict(self, methods=False):
        data = {
            'subfield': self.pair.subfield.to_dict(),
            'kernel_order': self.pair.kernel.order,
            'b': self.b,
            'lift': self.lift.to_dict(),
            'variants': len(self.pair.variants),
            'variant_b': sorted(set(self.report.variant_counts)),
        }
        if methods:
            data['methods'] = dict(self.report.methods)
        return data

    def __repr__(self):
        return f"<PairResult {self.pair.subfield.name} b={self.b} {self.lift}>"


def evaluate_pair(pair, cross_check=False, cap=None):
    """Orbit count and lift status of a single pair"""
    report = b_pair(pair, cross_check=cross_check, cap=cap)
    if cross_check:
        try:
            pole = pole_order(pair, report_phi(pair, report), cap)
            report.methods['pole'] = int(pole) if pole.denominator == 1 else f"{pole.numerator}/{pole.denominator}"
        except MethodUnavailable as e:
            logging.warning(f"pole order skipped for {pair.subfield.name}: {e}")
            report.methods['pole'] = None
    return PairResult(pair, report, lift_status(pair.focused(report_phi(pair, report))))


def report_phi(pair, report):
    """The merged surjection attaining the reported count"""
    return pair.variants[report.variant_counts.index(report.count)]


class PredictionReport:
    """Assembled constants for one group, invariant and base field"""

    def __init__(self, group, exp, gamma, a, results, cross_check=False):
        self.group = group
        self.exp = exp
        self.gamma = gamma
        self.a = a
        self.results = results
        self.cross_check = cross_check
        self.oracles = []

    @property
    def trivial(self):
        return next(r for r in self.results if r.pair.is_trivial)

    @property
    def b_M(self):
        return self.trivial.b

    @property
    def b_T(self):
        return max(r.b for r in self.results)

    @property
    def witness(self):
        return next(r for r in self.results if r.b == self.b_T)

    @property
    def certified(self):
        return max(r.b for r in self.results if r.lift.is_liftable)

    @property
    def b_new(self):
        """Certified value, or an interval when an undecided pair could raise it"""
        certified = self.certified
        if any(r.lift.verdict == UNKNOWN and r.b > certified for r in self.results):
            return {'certified': certified, 'optimistic': self.b_T}
        return certified

    def pair_with(self, name):
        """First pair whose subfield has the given display name"""
        return next((r for r in self.results if r.pair.subfield.name == name), None)

    def to_dict(self):
        return {
            'meta': {
                'version': __version__,
                'group': self.group.text,
                'invariant': self.exp.label,
                'base': self.gamma.tag,
            },
            'a': self.a,
            'b_M': self.b_M,
            'b_T': self.b_T,
            'pairs': [r.to_dict(methods=self.cross_check) for r in self.results],
            'b_new': self.b_new,
            'oracles': [o.to_dict() for o in self.oracles],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self, pairs_only=False):
        lines = ['=' * 50, f"{self.group.text}  inv={self.exp.label}  base={self.gamma.tag}", '=' * 50]
        if not pairs_only:
            lines.append(f"order {self.group.order}, degree {self.group.degree}, d = {self.gamma.modulus}")
            lines.append(f"a = {self.a}   b_M = {self.b_M}   b_T = {self.b_T}")
        for r in self.results:
            places = f" [{', '.join(str(p) for p in r.lift.places)}]" if r.lift.places else ''
            lines.append(f"{r.pair.subfield.name} | {r.pair.kernel.order} | {r.b} | "
                         f"{r.lift.verdict}{places} ({r.lift.rule})")
        if not pairs_only:
            b_new = self.b_new
            if isinstance(b_new, dict):
                lines.append(f"b_new = {b_new['certified']} (up to {b_new['optimistic']} if undecided pairs lift)")
            else:
                lines.append(f"b_new = {b_new}")
            for oracle in self.oracles:
                lines.append(f"oracle {oracle}")
        lines.append('=' * 50)
        return '\n'.join(lines)

    def __repr__(self):
        return f"<PredictionReport {self.group.text} a={self.a} b_M={self.b_M} b_T={self.b_T}>"


def predict(group, exp, gamma, jobs=None, cross_check=False, cap=None, pairs=None):
    """Full report: every pair evaluated, results kept in enumeration order"""
    jobs = jobs or ENGINE_CONFIG['jobs']
    a = a_of(None, exp)
    pairs = pairs if pairs is not None else enumerate_pairs(group, exp, gamma)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(lambda p: evaluate_pair(p, cross_check, cap), pairs))
    else:
        results = [evaluate_pair(p, cross_check, cap) for p in pairs]
    report = PredictionReport(group, exp, gamma, a, results, cross_check)
    logging.info(f"{group.text} {exp.label} {gamma.tag}: a={a} b_M={report.b_M} "
                 f"b_T={report.b_T} b_new={report.b_new}")
    return report

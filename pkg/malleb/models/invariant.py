"""
Counting invariants: exponent functions, minimal sets and the constants a and d
"""

import logging
import math
import re
from collections import Counter

import numpy as np

from malleb.errors import ContractError, ParseError, ValidationError

_CYCLE_TOKEN = re.compile(r'^(\d+)(?:\^(\d+))?$')


class ExpFunction:
    """Exponent of a counting invariant, stored per element (identity maps to 0)"""

    KINDS = ('disc', 'rad', 'table')

    def __init__(self, group, values, kind, source=None):
        self.group = group
        self.values = np.asarray(values, dtype=np.int64)
        self.kind = kind
        self.source = source

    @classmethod
    def discriminant(cls, group):
        """Index of each element: degree minus number of cycles"""
        return cls(group, group.indices, 'disc')

    @classmethod
    def radical(cls, group):
        values = np.ones(group.order, dtype=np.int64)
        values[0] = 0
        return cls(group, values, 'rad')

    @classmethod
    def from_table(cls, group, path):
        """Read a 'key:value' table file keyed by cycle type or by class position"""
        try:
            with open(path, 'r') as f:
                text = f.read()
        except OSError as e:
            raise ParseError(f"Cannot read invariant table '{path}': {e}")
        return cls.from_text(group, text, source=path)

    @classmethod
    def from_text(cls, group, text, source=None):
        classes = group.conjugacy_classes
        class_values = [None] * len(classes)
        by_type = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            if ':' not in line:
                raise ParseError(f"Line {number}: expected 'key:value', got '{raw.strip()}'")
            key, value = line.rsplit(':', 1)
            try:
                value = int(value)
            except ValueError:
                raise ParseError(f"Line {number}: exponent '{value.strip()}' is not an integer")
            if value < 1:
                raise ValidationError(f"Line {number}: exponent must be positive, got {value}")
            key = key.strip()
            if key.startswith('class:'):
                try:
                    position = int(key[6:])
                except ValueError:
                    raise ParseError(f"Line {number}: bad class position '{key[6:]}'")
                if not 0 <= position < len(classes):
                    raise ValidationError(f"Line {number}: class {position} out of range 0..{len(classes) - 1}")
                class_values[position] = value
            else:
                by_type[_parse_cycle_type(key, group.degree, number)] = value
        for i, cls_ in enumerate(classes):
            if class_values[i] is None:
                cycle_type = _moved_cycles(cls_.representative.cycle_type())
                class_values[i] = by_type.get(cycle_type)
        values = np.zeros(group.order, dtype=np.int64)
        for i, cls_ in enumerate(classes):
            if cls_.representative_index == 0:
                continue
            if class_values[i] is None:
                raise ValidationError(
                    f"No exponent for class {i} ({cls_.representative.to_cycles()}, cycle type "
                    f"{' '.join(str(c) for c in cls_.representative.cycle_type())})")
            values[cls_.members] = class_values[i]
        exp = cls(group, values, 'table', source=source)
        exp.validate()
        return exp

    def validate(self):
        """Check exp(g) = exp(g^k) for every class and every k coprime to ord(g)"""
        group = self.group
        for i, cls_ in enumerate(group.conjugacy_classes):
            g = cls_.representative_index
            order = int(group.element_orders[g])
            for k in range(2, order):
                if math.gcd(k, order) != 1:
                    continue
                if self.values[group.power(g, k)] != self.values[g]:
                    raise ValidationError(
                        f"Exponent not stable under powering: class {i} "
                        f"({cls_.representative.to_cycles()}) differs from its power k={k}")
        logging.debug(f"Validated {self.kind} exponent table on {len(group.conjugacy_classes)} classes")

    def __call__(self, index):
        return int(self.values[index])

    @property
    def label(self):
        return f"table:{self.source}" if self.kind == 'table' and self.source else self.kind

    def __repr__(self):
        return f"<ExpFunction {self.label} on {self.group.text}>"


def _moved_cycles(cycle_type):
    return tuple(sorted((c for c in cycle_type if c > 1), reverse=True))


def _parse_cycle_type(key, degree, number):
    lengths = Counter()
    for token in key.split():
        match = _CYCLE_TOKEN.match(token)
        if not match:
            raise ParseError(f"Line {number}: bad cycle type token '{token}'")
        lengths[int(match.group(1))] += int(match.group(2) or 1)
    total = sum(length * count for length, count in lengths.items())
    if total > degree or (lengths[1] and total != degree):
        raise ValidationError(f"Line {number}: cycle type '{key}' does not fit degree {degree}")
    return _moved_cycles(lengths.elements())


def make_exp(group, spec):
    """Exponent function from 'disc', 'rad' or 'table:<file>'"""
    if spec == 'disc':
        return ExpFunction.discriminant(group)
    if spec == 'rad':
        return ExpFunction.radical(group)
    if spec.startswith('table:'):
        return ExpFunction.from_table(group, spec[6:])
    raise ParseError(f"Unknown invariant '{spec}': expected disc, rad or table:<file>")


class MinSet:
    """Elements attaining the minimal exponent of a subset"""

    def __init__(self, indices, value):
        self.indices = indices
        self.value = value

    @property
    def size(self):
        return int(self.indices.size)

    def __contains__(self, index):
        return bool(np.isin(index, self.indices))

    def __repr__(self):
        return f"<MinSet size={self.size} exp={self.value}>"


def _nonidentity(subset, f):
    if subset is None:
        indices = np.arange(1, f.group.order)
    else:
        subset = np.asarray(subset)
        indices = np.flatnonzero(subset) if subset.dtype == bool else np.unique(subset)
        indices = indices[indices != 0]
    if not indices.size:
        raise ContractError('Minimum exponent over a subset without nonidentity elements')
    return indices


def a_of(subset, f):
    """Minimal exponent over the nonidentity members of a subset (mask or indices)"""
    return int(f.values[_nonidentity(subset, f)].min())


def s_min(subset, f):
    """Nonidentity members of the subset attaining the minimal exponent"""
    indices = _nonidentity(subset, f)
    values = f.values[indices]
    value = int(values.min())
    return MinSet(indices[values == value], value)


def d_of(group, f, subset=None):
    """Least common multiple of the orders of the minimizers"""
    minimal = s_min(subset, f)
    return int(np.lcm.reduce(group.element_orders[minimal.indices]))

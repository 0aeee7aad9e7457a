"""
Element storage for materialized permutation groups

Elements are rows of a numpy array of point images. A 64-bit fingerprint
per row, kept sorted, gives vectorized membership and index lookups.
Products use the convention (a * b)[i] = b[a[i]], i.e. a first.
"""

import logging
import numpy as np
from malleb.errors import ContractError, GroupSizeError

_OFFSET = np.uint64(0xCBF29CE484222325)
_PRIME = np.uint64(0x100000001B3)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_SHIFT_A = np.uint64(30)
_SHIFT_B = np.uint64(27)
_SHIFT_C = np.uint64(31)

# Rows per vectorized pass in the heavier sweeps
CHUNK_ROWS = 1 << 16


def point_dtype(degree):
    """Smallest unsigned dtype able to hold point indices"""
    return np.uint8 if degree <= 256 else np.uint16


def fingerprint(rows):
    """FNV-style 64-bit hash of every row, finalized with a splitmix step"""
    rows = np.atleast_2d(rows)
    h = np.full(rows.shape[0], _OFFSET, dtype=np.uint64)
    for column in rows.T:
        h ^= column.astype(np.uint64)
        h *= _PRIME
    h ^= h >> _SHIFT_A
    h *= _MIX_A
    h ^= h >> _SHIFT_B
    h *= _MIX_B
    h ^= h >> _SHIFT_C
    return h


def identity_rows(count, degree, dtype):
    """Stack of identity permutations"""
    return np.broadcast_to(np.arange(degree, dtype=dtype), (count, degree)).copy()


def compose_rows(first, second):
    """Rowwise product: first applied, then second"""
    return np.take_along_axis(second, first, axis=1)


def invert_rows(rows):
    """Rowwise inverse permutations"""
    out = np.empty_like(rows)
    points = np.broadcast_to(np.arange(rows.shape[1], dtype=rows.dtype), rows.shape)
    np.put_along_axis(out, rows.astype(np.intp), points, axis=1)
    return out


def power_rows(rows, exponent):
    """Rowwise power by a non-negative exponent (binary exponentiation)"""
    result = identity_rows(rows.shape[0], rows.shape[1], rows.dtype)
    base = rows
    while exponent:
        if exponent & 1:
            result = compose_rows(result, base)
        exponent >>= 1
        if exponent:
            base = compose_rows(base, base)
    return result


def cycle_counts(rows):
    """Number of cycles (fixed points included) of every row"""
    degree = rows.shape[1]
    points = np.arange(degree, dtype=rows.dtype)
    counts = np.empty(rows.shape[0], dtype=np.intp)
    for start in range(0, rows.shape[0], CHUNK_ROWS):
        block = rows[start:start + CHUNK_ROWS]
        labels = identity_rows(block.shape[0], degree, rows.dtype)
        jump = block
        span = 1
        # After k rounds each label is the minimum over 2**k steps along its cycle
        while span < degree:
            labels = np.minimum(labels, np.take_along_axis(labels, jump, axis=1))
            jump = np.take_along_axis(jump, jump, axis=1)
            span *= 2
        counts[start:start + CHUNK_ROWS] = np.count_nonzero(labels == points, axis=1)
    return counts


def row_orders(rows):
    """Order of every row: lcm of its cycle lengths"""
    degree = rows.shape[1]
    points = np.arange(degree, dtype=rows.dtype)
    orders = np.empty(rows.shape[0], dtype=np.int64)
    for start in range(0, rows.shape[0], CHUNK_ROWS):
        block = rows[start:start + CHUNK_ROWS]
        lengths = np.zeros(block.shape, dtype=np.int64)
        current = block
        for step in range(1, degree + 1):
            lengths[(current == points) & (lengths == 0)] = step
            if lengths.all():
                break
            current = np.take_along_axis(block, current, axis=1)
        orders[start:start + CHUNK_ROWS] = np.lcm.reduce(lengths, axis=1)
    return orders


class ElementTable:
    """Materialized group elements with fingerprint lookup"""

    def __init__(self, rows):
        self.rows = rows
        self.order, self.degree = rows.shape
        self.keys = fingerprint(rows)
        self._sort = np.argsort(self.keys, kind='stable')
        self._sorted_keys = self.keys[self._sort]
        if np.any(self._sorted_keys[1:] == self._sorted_keys[:-1]):
            raise ContractError('Fingerprint collision in element table')

    @classmethod
    def closure(cls, generators, degree, cap, label='group'):
        """Breadth-first closure of the generators; identity gets index 0"""
        dtype = point_dtype(degree)
        gens = [np.asarray(g, dtype=dtype) for g in generators]
        frontier = np.arange(degree, dtype=dtype)[None, :]
        blocks = [frontier]
        seen = fingerprint(frontier)
        total = 1
        levels = 0
        while frontier.shape[0] and gens:
            candidates = np.concatenate([g[frontier] for g in gens])
            keys, first = np.unique(fingerprint(candidates), return_index=True)
            candidates = candidates[first]
            position = np.minimum(np.searchsorted(seen, keys), seen.size - 1)
            fresh = seen[position] != keys
            frontier = candidates[fresh]
            total += frontier.shape[0]
            if total > cap:
                raise GroupSizeError(label, cap)
            if frontier.shape[0]:
                blocks.append(frontier)
                seen = np.sort(np.concatenate([seen, keys[fresh]]))
                levels += 1
        logging.debug(f"Closure of {label}: {total} elements in {levels} levels")
        table = cls(np.concatenate(blocks))
        table.check_closed(gens)
        return table

    def check_closed(self, generators):
        """Every element times every generator is in the table, compared row by row

        Deduplication in closure goes by fingerprint only; an element lost to
        a collision shows up here as a product that is not in the table.
        """
        for start in range(0, self.order, CHUNK_ROWS):
            block = self.rows[start:start + CHUNK_ROWS]
            for g in generators:
                if not np.all(self.lookup(g[block], strict=False) >= 0):
                    raise ContractError('Fingerprint collision: element table is not closed')

    def lookup(self, rows, strict=True):
        """Element indices of the given rows; -1 for non-members unless strict"""
        rows = np.atleast_2d(rows)
        keys = fingerprint(rows)
        position = np.minimum(np.searchsorted(self._sorted_keys, keys), self.order - 1)
        candidates = self._sort[position]
        hit = self._sorted_keys[position] == keys
        hit &= np.all(self.rows[candidates] == rows, axis=1)
        if strict and not hit.all():
            raise ContractError('Permutation is not an element of the group')
        return np.where(hit, candidates, -1)

    def index(self, row):
        """Element index of a single row"""
        return int(self.lookup(row)[0])

    def __repr__(self):
        return f"<ElementTable order={self.order} degree={self.degree}>"

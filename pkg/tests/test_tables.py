"""
Tests for row arithmetic, element tables and orbit partitions
"""

import numpy as np
import pytest

from malleb import tables
from malleb.errors import ContractError, GroupSizeError
from malleb.tables import (
    ElementTable, compose_rows, cycle_counts, fingerprint, invert_rows, power_rows, row_orders,
)
from malleb.tables.orbits import OrbitPartition

CYCLE = np.array([[1, 2, 0, 3]], dtype=np.uint8)
SWAP = np.array([[1, 0, 2, 3]], dtype=np.uint8)


def test_compose_applies_first_row_first():
    product = compose_rows(CYCLE, SWAP)
    # 0 -> 1 -> 0, 1 -> 2 -> 2, 2 -> 0 -> 1
    assert product.tolist() == [[0, 2, 1, 3]]


def test_invert_and_power():
    assert compose_rows(CYCLE, invert_rows(CYCLE)).tolist() == [[0, 1, 2, 3]]
    assert power_rows(CYCLE, 3).tolist() == [[0, 1, 2, 3]]
    assert power_rows(CYCLE, 2).tolist() == invert_rows(CYCLE).tolist()


def test_cycle_counts_and_orders():
    rows = np.array([[0, 1, 2, 3], [1, 2, 0, 3], [1, 0, 3, 2], [1, 2, 3, 0]], dtype=np.uint8)
    assert cycle_counts(rows).tolist() == [4, 2, 2, 1]
    assert row_orders(rows).tolist() == [1, 3, 2, 4]


def test_fingerprint_distinguishes_rows():
    keys = fingerprint(np.concatenate([CYCLE, SWAP, invert_rows(CYCLE)]))
    assert len(set(keys.tolist())) == 3


def test_closure_orders_identity_first():
    table = ElementTable.closure([CYCLE[0], SWAP[0]], 4, cap=100)
    assert table.order == 6
    assert table.rows[0].tolist() == [0, 1, 2, 3]


def test_lookup():
    table = ElementTable.closure([CYCLE[0]], 4, cap=100)
    assert table.index(power_rows(CYCLE, 2)[0]) in (1, 2)
    assert table.lookup(SWAP, strict=False).tolist() == [-1]
    with pytest.raises(ContractError):
        table.lookup(SWAP)


def test_closure_respects_cap():
    with pytest.raises(GroupSizeError):
        ElementTable.closure([CYCLE[0], SWAP[0]], 4, cap=5)


def test_orbit_partition():
    # two 3-cycles on six points
    mapping = np.array([1, 2, 0, 4, 5, 3])
    partition = OrbitPartition(6, [mapping])
    assert partition.count == 2
    assert partition.representatives.tolist() == [0, 3]
    assert [o.tolist() for o in partition.orbits()] == [[0, 1, 2], [3, 4, 5]]


def test_orbit_partition_without_maps():
    assert OrbitPartition(4, []).count == 4
    assert len(OrbitPartition(0, []).orbits()) == 0


def test_closure_detects_fingerprint_collisions(monkeypatch):
    # keyed on the image of 0 alone, three of the six elements collide
    monkeypatch.setattr(tables, 'fingerprint', lambda rows: np.atleast_2d(rows)[:, 0].astype(np.uint64))
    with pytest.raises(ContractError, match='not closed'):
        ElementTable.closure([CYCLE[0], SWAP[0]], 4, cap=100)


def test_orbit_partition_joins_chained_maps():
    # (0 5)(1 6)(2 7) and (1 5)(2 6) link six points into one orbit
    first = np.array([5, 6, 7, 3, 4, 0, 1, 2])
    second = np.array([0, 5, 6, 3, 4, 1, 2, 7])
    partition = OrbitPartition(8, [first, second])
    assert partition.count == 3
    assert partition.labels.tolist() == [0, 0, 0, 3, 4, 0, 0, 0]
    assert partition.representatives.tolist() == [0, 3, 4]


def test_union_hooks_under_smaller_root():
    partition = OrbitPartition(4, [])
    partition.union([0, 2], [3, 1])
    assert partition.find(np.arange(4)).tolist() == [0, 1, 1, 0]
    partition.union([3], [2])
    assert partition.find(np.arange(4)).tolist() == [0, 0, 0, 0]


def test_orbit_partition_rejects_short_maps():
    with pytest.raises(ValueError):
        OrbitPartition(4, [np.array([1, 0])])

"""
Orbit partitions of permutation actions on index ranges
"""

import numpy as np


class OrbitPartition:
    """Orbits of the group generated by index maps acting on range(size)

    Union-find over a parent array. Every map contributes the edges
    i -- map[i]; unions are applied a batch at a time, each root hooked under
    the smaller root, with full path compression between batches. Roots
    only ever point to smaller indices, so each orbit's root is its
    smallest member.
    """

    def __init__(self, size, maps):
        self.size = size
        self.parent = np.arange(size)
        points = np.arange(size)
        for mapping in maps:
            mapping = np.asarray(mapping, dtype=np.intp)
            if mapping.shape != (size,):
                raise ValueError(f"Map of shape {mapping.shape} on {size} points")
            self.union(points, mapping)
        self.labels = self.find(points)

    def _compress(self):
        """Point every entry straight at its root"""
        parent = self.parent
        jumped = parent[parent]
        while (jumped != parent).any():
            parent = jumped
            jumped = parent[parent]
        self.parent = parent

    def find(self, points):
        """Roots of the given points"""
        self._compress()
        return self.parent[points]

    def union(self, left, right):
        """Merge the orbits of left[k] and right[k] for every k"""
        left = np.asarray(left, dtype=np.intp)
        right = np.asarray(right, dtype=np.intp)
        while left.size:
            a = self.find(left)
            b = self.find(right)
            pending = a != b
            if not pending.any():
                break
            a, b = a[pending], b[pending]
            left, right = left[pending], right[pending]
            # several roots may target the same one; minimum.at keeps the smallest
            np.minimum.at(self.parent, np.maximum(a, b), np.minimum(a, b))

    @property
    def representatives(self):
        """Smallest index of each orbit, ascending"""
        return np.flatnonzero(self.labels == np.arange(self.size))

    @property
    def count(self):
        """Number of orbits"""
        return int(np.count_nonzero(self.labels == np.arange(self.size)))

    def orbits(self):
        """Orbit member arrays ordered by their smallest member"""
        order = np.argsort(self.labels, kind='stable')
        boundaries = np.flatnonzero(np.diff(self.labels[order])) + 1
        return np.split(order, boundaries) if self.size else []

    def __len__(self):
        return self.count

    def __repr__(self):
        return f"<OrbitPartition {self.count} orbits on {self.size} points>"

"""Partitions of finite sets, as produced by every quotient-type operation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


@dataclass(frozen=True, eq=False)
class QuotientWitness:
    """A partition of ``ambient`` into classes numbered 0..c-1.

    Classes are numbered in order of their least member, and the
    representative of a class is its least ambient index.
    """

    ambient: tuple
    class_of: np.ndarray
    representatives: tuple[int, ...]

    def __post_init__(self):
        self.class_of.setflags(write=False)

    @property
    def n_classes(self) -> int:
        return len(self.representatives)

    def __len__(self) -> int:
        return self.n_classes

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.representatives]
        for i, c in enumerate(self.class_of.tolist()):
            out[c].append(i)
        return out

    def representative_items(self) -> list[Any]:
        return [self.ambient[r] for r in self.representatives]

    def check(self) -> bool:
        """Verify the witness invariants."""
        c = self.n_classes
        if len(self.class_of) != len(self.ambient):
            return False
        if len(self.ambient) and (self.class_of.min() < 0 or self.class_of.max() >= c):
            return False
        seen = set(self.class_of.tolist())
        if seen != set(range(c)):
            return False
        return all(self.class_of[r] == i for i, r in enumerate(self.representatives))

    @classmethod
    def from_labels(cls, ambient: Sequence, labels: Iterable[Hashable]) -> "QuotientWitness":
        """Elements with equal labels form a class."""
        ids: dict[Hashable, int] = {}
        reps: list[int] = []
        class_of = []
        for i, lab in enumerate(labels):
            c = ids.get(lab)
            if c is None:
                c = ids[lab] = len(reps)
                reps.append(i)
            class_of.append(c)
        return cls(tuple(ambient), np.asarray(class_of, dtype=np.int64), tuple(reps))

    @classmethod
    def from_pairs(cls, ambient: Sequence, left, right) -> "QuotientWitness":
        """Finest partition in which ``left[i]`` and ``right[i]`` are identified."""
        n = len(ambient)
        left = np.asarray(left, dtype=np.int64).ravel()
        right = np.asarray(right, dtype=np.int64).ravel()
        if n == 0:
            return cls(tuple(ambient), np.zeros(0, dtype=np.int64), ())
        graph = coo_matrix((np.ones(len(left), dtype=np.int8), (left, right)), shape=(n, n))
        _, labels = connected_components(graph, directed=True, connection="weak")
        return cls.from_labels(ambient, labels.tolist())

    @classmethod
    def discrete(cls, ambient: Sequence) -> "QuotientWitness":
        n = len(ambient)
        return cls(tuple(ambient), np.arange(n, dtype=np.int64), tuple(range(n)))


def orbit_partition(
    ambient: Sequence, movers: Iterable[Callable[[int], int]]
) -> QuotientWitness:
    """Orbits of the group generated by index maps ``movers``."""
    n = len(ambient)
    left, right = [], []
    idx = range(n)
    for move in movers:
        left.extend(idx)
        right.extend(move(i) for i in idx)
    return QuotientWitness.from_pairs(ambient, left, right)

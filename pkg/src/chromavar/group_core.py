"""Finite groups as Cayley tables, elementary abelian subgroups, and
enumeration of homomorphisms out of elementary abelian groups.

Elements are integer indices ``0..order-1``.  For permutation-built groups
the product ``a * b`` is the composite "apply b, then a", so permutations
act on points from the left.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceededError, InputError
from .quotient import QuotientWitness

DEFAULT_ORDER_CAP = 20_000
DEFAULT_ENUM_CAP = 10_000_000


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def _require_prime(p: int):
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise InputError(f"{p!r} is not a prime")


def cycle_notation(perm: Sequence[int]) -> str:
    """Cycle notation of a 0-based image list, printed 1-based."""
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        cycles.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(cycles) or "()"


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    table: np.ndarray
    identity: int
    inverse: tuple[int, ...]
    labels: tuple[str, ...]
    generators: tuple[int, ...]
    name: str = ""
    permutations: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.table.setflags(write=False)

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    # construction

    @classmethod
    def from_permutations(
        cls,
        generators: Sequence[Sequence[int]],
        degree: int | None = None,
        name: str = "",
        cap: int = DEFAULT_ORDER_CAP,
    ) -> "FiniteGroup":
        """Close 0-based image lists under composition, breadth first."""
        gens = [tuple(int(x) for x in g) for g in generators]
        if degree is None:
            degree = len(gens[0]) if gens else 1
        for g in gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise InputError(f"not a permutation of degree {degree}: {g}")
        ident = tuple(range(degree))
        index = {ident: 0}
        elems = [ident]
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = tuple(x[g[i]] for i in range(degree))  # x after g
                if y not in index:
                    if len(elems) >= cap:
                        raise CapExceededError("group closure", len(elems) + 1, cap)
                    index[y] = len(elems)
                    elems.append(y)
                    queue.append(y)
        perms = np.array(elems, dtype=np.int64).reshape(len(elems), degree)
        n = len(elems)
        table = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            rows = perms[a][perms]  # rows[b] = a o b
            table[a] = [index[tuple(r)] for r in rows.tolist()]
        inverse = tuple(int(np.flatnonzero(table[a] == 0)[0]) for a in range(n))
        gen_idx = tuple(index[g] for g in gens)
        labels = tuple(cycle_notation(e) for e in elems)
        perms.setflags(write=False)
        return cls(n, table, 0, inverse, labels, gen_idx, name, perms)

    @classmethod
    def from_table(
        cls,
        table: Sequence[Sequence[int]],
        labels: Sequence[str] | None = None,
        name: str = "",
        cap: int = DEFAULT_ORDER_CAP,
    ) -> "FiniteGroup":
        t = np.array(table, dtype=np.int64)
        n = t.shape[0] if t.ndim == 2 else 0
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            raise InputError("table must be a non-empty square array")
        if n > cap:
            raise CapExceededError("group order", n, cap)
        if t.min() < 0 or t.max() >= n:
            raise InputError("table entries out of range")
        # associativity: (ab)c == a(bc)
        lhs = t[t[:, :, None], np.arange(n)[None, None, :]]
        rhs = t[np.arange(n)[:, None, None], t[None, :, :]]
        if not np.array_equal(lhs, rhs):
            raise InputError("table is not associative")
        ids = [e for e in range(n) if np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))]
        if not ids:
            raise InputError("table has no two-sided identity")
        e = ids[0]
        inverse = []
        for a in range(n):
            cand = np.flatnonzero(t[a] == e)
            if len(cand) != 1 or t[cand[0], a] != e:
                raise InputError(f"element {a} has no two-sided inverse")
            inverse.append(int(cand[0]))
        if labels is None:
            labels = [f"g{i}" for i in range(n)]
        if len(labels) != n:
            raise InputError("one label per element required")
        group = cls(n, t, e, tuple(inverse), tuple(map(str, labels)), (), name)
        gens: list[int] = []
        span = {e}
        for a in range(n):
            if a not in span:
                gens.append(a)
                span = group.subgroup_generated(gens)
        return cls(n, t, e, tuple(inverse), tuple(map(str, labels)), tuple(gens), name)

    # arithmetic

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return int(self.conjugation[g, x])

    def power(self, x: int, e: int) -> int:
        return int(self.powers[x, e % self.element_orders[x]])

    def commutes(self, a: int, b: int) -> bool:
        return bool(self.commuting[a, b])

    @cached_property
    def conjugation(self) -> np.ndarray:
        """``conjugation[g, x] = g x g^-1``."""
        inv = np.array(self.inverse)
        out = self.table[self.table, inv[:, None]]  # (g x) g^-1
        out.setflags(write=False)
        return out

    @cached_property
    def commuting(self) -> np.ndarray:
        out = self.table == self.table.T
        out.setflags(write=False)
        return out

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = []
        for x in range(self.order):
            k, y = 1, x
            while y != self.identity:
                y = int(self.table[y, x])
                k += 1
            orders.append(k)
        return tuple(orders)

    @cached_property
    def powers(self) -> np.ndarray:
        """``powers[x, e] = x^e`` for ``0 <= e < exponent``."""
        m = max(self.element_orders)
        out = np.empty((self.order, m), dtype=np.int64)
        out[:, 0] = self.identity
        for e in range(1, m):
            out[:, e] = self.table[out[:, e - 1], np.arange(self.order)]
        out.setflags(write=False)
        return out

    def product(self, elements: Iterable[int]) -> int:
        acc = self.identity
        for x in elements:
            acc = int(self.table[acc, x])
        return acc

    # structure

    def subgroup_generated(self, elements: Iterable[int]) -> frozenset[int]:
        gens = list(dict.fromkeys(int(x) for x in elements))
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = int(self.table[x, g])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    @cached_property
    def center(self) -> frozenset[int]:
        return frozenset(int(x) for x in np.flatnonzero(self.commuting.all(axis=1)))

    def relabel(self, perm: Sequence[int]) -> "FiniteGroup":
        """The same group with element ``i`` renamed ``perm[i]``."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.order)):
            raise InputError("relabeling must be a permutation of the elements")
        inv = np.argsort(perm)
        table = perm[self.table[inv][:, inv]]
        labels = [self.labels[i] for i in inv]
        return FiniteGroup(
            self.order, table, int(perm[self.identity]),
            tuple(int(perm[self.inverse[i]]) for i in inv), tuple(labels),
            tuple(int(perm[g]) for g in self.generators), self.name,
        )

    def check_axioms(self) -> bool:
        t, n = self.table, self.order
        lhs = t[t[:, :, None], np.arange(n)[None, None, :]]
        rhs = t[np.arange(n)[:, None, None], t[None, :, :]]
        if not np.array_equal(lhs, rhs):
            return False
        ar = np.arange(n)
        if not (np.array_equal(t[self.identity], ar) and np.array_equal(t[:, self.identity], ar)):
            return False
        inv = np.array(self.inverse)
        if not (np.all(t[ar, inv] == self.identity) and np.all(t[inv, ar] == self.identity)):
            return False
        return len(self.subgroup_generated(self.generators)) == n


# named groups used by the battery

def _cycle(degree: int, *cycle: int) -> list[int]:
    img = list(range(degree))
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        img[a - 1] = b - 1
    return img


def trivial_group() -> FiniteGroup:
    return FiniteGroup.from_permutations([], 1, name="trivial")


def cyclic_group(m: int) -> FiniteGroup:
    return FiniteGroup.from_permutations([_cycle(m, *range(1, m + 1))], m, name=f"Z{m}")


def symmetric_group(k: int) -> FiniteGroup:
    if k < 2:
        return FiniteGroup.from_permutations([], max(k, 1), name=f"S{k}")
    return FiniteGroup.from_permutations(
        [_cycle(k, 1, 2), _cycle(k, *range(1, k + 1))], k, name=f"S{k}"
    )


def alternating_group(k: int) -> FiniteGroup:
    gens = [_cycle(k, 1, 2, i) for i in range(3, k + 1)]
    return FiniteGroup.from_permutations(gens, k, name=f"A{k}")


def dihedral_group(m: int) -> FiniteGroup:
    """Symmetries of a regular m-gon, order 2m, acting on its vertices."""
    refl = list(range(m))
    for i in range(m):
        refl[i] = (-i) % m
    return FiniteGroup.from_permutations([_cycle(m, *range(1, m + 1)), refl], m, name=f"D{m}")


def quaternion_group() -> FiniteGroup:
    """Q_8 in its regular representation on {1,i,j,k,-1,-i,-j,-k}."""
    # left multiplication by i and by j
    i_mul = [1, 4, 3, 6, 5, 0, 7, 2]
    j_mul = [2, 7, 4, 1, 6, 3, 0, 5]
    return FiniteGroup.from_permutations([i_mul, j_mul], 8, name="Q8")


# elementary abelian subgroups and homomorphisms

@dataclass(frozen=True)
class ElemAbSubgroup:
    elements: tuple[int, ...]
    basis: tuple[int, ...]
    rank: int
    prime: int
    coords: dict = field(compare=False, hash=False, repr=False, default_factory=dict)

    def element_at(self, vector: Sequence[int]) -> int:
        return self._by_coords[tuple(int(v) % self.prime for v in vector)]

    @cached_property
    def _by_coords(self) -> dict:
        return {v: x for x, v in self.coords.items()}

    def __contains__(self, x) -> bool:
        return x in self.coords

    def check(self, G: FiniteGroup) -> bool:
        els = set(self.elements)
        if len(els) != self.prime ** self.rank or tuple(sorted(els)) != self.elements:
            return False
        for a in els:
            if a != G.identity and G.element_orders[a] != self.prime:
                return False
            for b in els:
                if G.mul(a, b) not in els or not G.commutes(a, b):
                    return False
        spans = {}
        for vec in itertools.product(range(self.prime), repeat=self.rank):
            x = G.product(G.power(b, v) for b, v in zip(self.basis, vec))
            if x in spans:
                return False
            spans[x] = vec
        return set(spans) == els and all(self.coords[x] == v for x, v in spans.items())


def _make_subgroup(G: FiniteGroup, elements: Iterable[int], p: int) -> ElemAbSubgroup:
    els = tuple(sorted(elements))
    basis: list[int] = []
    span = {G.identity}
    for x in els:
        if x not in span:
            basis.append(x)
            span = {G.mul(s, G.power(x, i)) for s in span for i in range(p)}
    coords = {}
    for vec in itertools.product(range(p), repeat=len(basis)):
        coords[G.product(G.power(b, v) for b, v in zip(basis, vec))] = vec
    return ElemAbSubgroup(els, tuple(basis), len(basis), p, coords)


def order_p_elements(G: FiniteGroup, p: int) -> list[int]:
    return [x for x in range(G.order) if G.element_orders[x] == p]


def centralizer(G: FiniteGroup, S: Iterable[int]) -> frozenset[int]:
    """Elements commuting with every element of S."""
    S = [int(s) for s in S]
    for s in S:
        if not 0 <= s < G.order:
            raise InputError(f"element index {s} out of range")
    if not S:
        return frozenset(range(G.order))
    mask = G.commuting[:, S].all(axis=1)
    return frozenset(int(x) for x in np.flatnonzero(mask))


def elem_abelian_subgroups(G: FiniteGroup, p: int) -> list[ElemAbSubgroup]:
    """All elementary abelian p-subgroups, the trivial one included.

    Ordered by rank, then lexicographically by sorted element tuple.
    """
    _require_prime(p)
    gens = order_p_elements(G, p)
    layer = {frozenset([G.identity])}
    found = [frozenset([G.identity])]
    while layer:
        nxt = set()
        for E in layer:
            for x in gens:
                if x in E or not all(G.commutes(x, e) for e in E):
                    continue
                nxt.add(frozenset(G.mul(e, G.power(x, i)) for e in E for i in range(p)))
        layer = nxt
        found.extend(sorted(nxt, key=lambda s: sorted(s)))
    found.sort(key=lambda s: (len(s), sorted(s)))
    return [_make_subgroup(G, E, p) for E in found]


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism F_p^n -> G, stored by the images of the standard basis."""

    source_rank: int
    prime: int
    images: tuple[int, ...]

    def evaluate(self, G: FiniteGroup, vector: Sequence[int]) -> int:
        return G.product(G.power(x, v) for x, v in zip(self.images, vector))

    def full_map(self, G: FiniteGroup) -> dict[tuple[int, ...], int]:
        return {
            vec: self.evaluate(G, vec)
            for vec in itertools.product(range(self.prime), repeat=self.source_rank)
        }

    def image(self, G: FiniteGroup) -> frozenset[int]:
        return G.subgroup_generated(self.images)

    def is_valid(self, G: FiniteGroup) -> bool:
        if len(self.images) != self.source_rank:
            return False
        if any(self.prime % G.element_orders[x] for x in self.images):
            return False
        return all(G.commutes(a, b) for a in self.images for b in self.images)


def commuting_tuples(G: FiniteGroup, candidates: Sequence[int], n: int) -> list[tuple[int, ...]]:
    """Lexicographically ordered n-tuples from ``candidates`` that pairwise commute."""
    cand = sorted(candidates)
    out: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...], allowed: list[int]):
        if len(prefix) == n:
            out.append(prefix)
            return
        for x in allowed:
            extend(prefix + (x,), [y for y in allowed if G.commutes(x, y)])

    extend((), cand)
    return out


def _enum_guard(G: FiniteGroup, n: int, cap: int):
    size = G.order ** n
    if size > cap:
        raise CapExceededError(f"|G|^n for n={n}", size, cap)


def enumerate_homs(n: int, p: int, G: FiniteGroup, cap: int = DEFAULT_ENUM_CAP) -> list[GroupHom]:
    """Every homomorphism F_p^n -> G, in lexicographic order of image tuples."""
    _require_prime(p)
    if n < 0:
        raise InputError("rank must be nonnegative")
    _enum_guard(G, n, cap)
    cand = [x for x in range(G.order) if p % G.element_orders[x] == 0]
    return [GroupHom(n, p, t) for t in commuting_tuples(G, cand, n)]


def commuting_p_power_tuples(n: int, p: int, G: FiniteGroup, cap: int = DEFAULT_ENUM_CAP) -> list[tuple[int, ...]]:
    """Pairwise-commuting n-tuples of elements of p-power order."""
    _require_prime(p)
    if n < 0:
        raise InputError("rank must be nonnegative")
    _enum_guard(G, n, cap)
    cand = [x for x in range(G.order) if _is_p_power(G.element_orders[x], p)]
    return commuting_tuples(G, cand, n)


def _is_p_power(m: int, p: int) -> bool:
    while m % p == 0:
        m //= p
    return m == 1


def conjugation_orbits(G: FiniteGroup, tuples: Sequence[tuple[int, ...]]) -> QuotientWitness:
    """Orbits of simultaneous conjugation on a conjugation-stable list of tuples."""
    index = {t: i for i, t in enumerate(tuples)}
    arr = np.array(tuples, dtype=np.int64).reshape(len(tuples), -1)
    left, right = [], []
    for g in G.generators:
        moved = G.conjugation[g][arr]
        left.extend(range(len(tuples)))
        right.extend(index[tuple(row)] for row in moved.tolist())
    return QuotientWitness.from_pairs(tuples, left, right)


def rep_orbits(n: int, p: int, G: FiniteGroup, cap: int = DEFAULT_ENUM_CAP) -> QuotientWitness:
    """Rep(F_p^n, G): homomorphisms modulo conjugation.

    The ambient set is ``enumerate_homs(n, p, G)``; the representative of a
    class is its lexicographically least image tuple.
    """
    homs = enumerate_homs(n, p, G, cap)
    w = conjugation_orbits(G, [h.images for h in homs])
    return QuotientWitness(tuple(homs), w.class_of, w.representatives)


def canonical_conjugate(G: FiniteGroup, t: Sequence[int]) -> tuple[int, ...]:
    """Least tuple in the simultaneous conjugacy orbit of ``t``."""
    if not len(t):
        return ()
    moved = G.conjugation[:, list(t)]
    return min(map(tuple, moved.tolist()))


def load_group(source, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build a group from a JSON-style description.

    Either ``{"name", "degree", "generators"}`` with generators given as image
    lists of ``1..degree``, or ``{"table": [[...], ...]}`` (optionally with
    ``"labels"``).  A path to a JSON file is also accepted.
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            source = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read group file {path}: {exc}") from exc
        source.setdefault("name", path.stem)
    if not isinstance(source, dict):
        raise InputError("group description must be a JSON object")
    name = str(source.get("name", ""))
    if "table" in source:
        return FiniteGroup.from_table(source["table"], source.get("labels"), name=name, cap=cap)
    if "generators" not in source:
        raise InputError("group description needs 'generators' or 'table'")
    gens = source["generators"]
    degree = source.get("degree")
    if not isinstance(gens, list) or not all(isinstance(g, list) for g in gens):
        raise InputError("'generators' must be a list of image lists")
    if degree is None:
        degree = len(gens[0]) if gens else 1
    if not isinstance(degree, int) or degree < 1:
        raise InputError("'degree' must be a positive integer")
    try:
        zero_based = [[int(x) - 1 for x in g] for g in gens]
    except (TypeError, ValueError) as exc:
        raise InputError("generator entries must be integers") from exc
    return FiniteGroup.from_permutations(zero_based, degree, name=name, cap=cap)


def group_to_json(G: FiniteGroup) -> dict:
    if G.permutations is not None:
        return {
            "name": G.name,
            "degree": int(G.permutations.shape[1]),
            "generators": [[int(x) + 1 for x in G.permutations[g]] for g in G.generators],
        }
    return {"name": G.name, "table": G.table.tolist(), "labels": list(G.labels)}

"""Quillen and Green-Leary categories of elementary abelian subgroups, coends
of finite-set functors over them, and the Rep(-, G) presheaf.

Morphisms between subgroups are stored as set maps: a tuple giving the image
(a group element index) of each element of the source, in the order of
``source.elements``.  Maps realized by several conjugating elements are
stored once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Sequence

import numpy as np

from .errors import InputError, InternalConsistencyError
from .group_core import (
    DEFAULT_ENUM_CAP,
    ElemAbSubgroup,
    FiniteGroup,
    canonical_conjugate,
    elem_abelian_subgroups,
    rep_orbits,
)
from .linear import count_matrices, matrix_array
from .presheaf_core import DEFAULT_LEVEL_CAP, FinitePresheaf, beta_quotient, presheaf_iso_check
from .quotient import QuotientWitness

Map = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class CategoryInstance:
    group: FiniteGroup
    prime: int
    objects: tuple[ElemAbSubgroup, ...]
    morphisms: dict  # (i, j) -> tuple[Map, ...]
    realizers: dict = field(default_factory=dict)  # (i, j) -> tuple[tuple[int, ...], ...]
    name: str = ""

    def hom(self, i: int, j: int) -> tuple[Map, ...]:
        return self.morphisms.get((i, j), ())

    def identity(self, i: int) -> Map:
        return self.objects[i].elements

    @cached_property
    def _position(self) -> list[dict[int, int]]:
        return [{x: pos for pos, x in enumerate(E.elements)} for E in self.objects]

    def apply(self, i: int, f: Map, x: int) -> int:
        """Image of group element x (in object i) under f."""
        return f[self._position[i][x]]

    def compose(self, i: int, j: int, f: Map, g: Map) -> Map:
        """g o f for f: i -> j and g: j -> k."""
        pos = self._position[j]
        return tuple(g[pos[y]] for y in f)

    @cached_property
    def _index(self) -> dict:
        return {(i, j, f): m for (i, j), maps in self.morphisms.items() for m, f in enumerate(maps)}

    def morphism_index(self, i: int, j: int, f: Map) -> int | None:
        return self._index.get((i, j, f))

    def n_morphisms(self) -> int:
        return sum(len(v) for v in self.morphisms.values())

    def check_axioms(self) -> bool:
        """Identities, closure under composition, injective homomorphisms."""
        G = self.group
        n = len(self.objects)
        for i in range(n):
            if self.morphism_index(i, i, self.identity(i)) is None:
                return False
        for (i, j), maps in self.morphisms.items():
            src, tgt = self.objects[i], set(self.objects[j].elements)
            for f in maps:
                if len(set(f)) != len(f) or not set(f) <= tgt:
                    return False
                for a, b in itertools.product(src.elements, repeat=2):
                    if self.apply(i, f, G.mul(a, b)) != G.mul(self.apply(i, f, a), self.apply(i, f, b)):
                        return False
        for i, j, k in itertools.product(range(n), repeat=3):
            for f in self.hom(i, j):
                for g in self.hom(j, k):
                    if self.morphism_index(i, k, self.compose(i, j, f, g)) is None:
                        return False
        return True

    def is_subcategory_of(self, other: "CategoryInstance") -> bool:
        if [E.elements for E in self.objects] != [E.elements for E in other.objects]:
            return False
        return all(set(maps) <= set(other.hom(i, j)) for (i, j), maps in self.morphisms.items())


def _sorted_morphisms(raw: dict) -> dict:
    return {key: tuple(sorted(maps)) for key, maps in raw.items() if maps}


def build_quillen_category(G: FiniteGroup, p: int) -> CategoryInstance:
    """Morphisms E1 -> E2 are the maps x |-> g x g^-1 with g E1 g^-1 inside E2."""
    objs = elem_abelian_subgroups(G, p)
    raw: dict = {}
    real: dict = {}
    for (i, E1), (j, E2) in itertools.product(enumerate(objs), repeat=2):
        if len(E1.elements) > len(E2.elements):
            continue
        target = set(E2.elements)
        by_map: dict[Map, list[int]] = {}
        for g in range(G.order):
            f = tuple(int(y) for y in G.conjugation[g, list(E1.elements)])
            if set(f) <= target:
                by_map.setdefault(f, []).append(g)
        if by_map:
            raw[(i, j)] = list(by_map)
            real[(i, j)] = by_map
    morphisms = _sorted_morphisms(raw)
    realizers = {key: tuple(tuple(real[key][f]) for f in maps) for key, maps in morphisms.items()}
    return CategoryInstance(G, p, tuple(objs), morphisms, realizers, name=f"A_{p}({G.name})")


def _injective_homs(G: FiniteGroup, V: ElemAbSubgroup, W: ElemAbSubgroup):
    """Injective homomorphisms V -> W as set maps on V.elements."""
    p = V.prime
    vecs = [V.coords[x] for x in V.elements]
    for images in itertools.product(W.elements, repeat=V.rank):
        f = tuple(
            G.product(G.power(b, c) for b, c in zip(images, vec)) for vec in vecs
        )
        if len(set(f)) == len(f):
            yield f


def build_green_leary_category(G: FiniteGroup, p: int, n: int) -> CategoryInstance:
    """Same objects as the Quillen category; morphisms V -> W are the injective
    homomorphisms whose restriction along every linear F^n -> V agrees with
    conjugation by some element of G.
    """
    if n < 0:
        raise InputError("n must be nonnegative")
    objs = elem_abelian_subgroups(G, p)
    canon: dict = {}

    def canonical(t):
        c = canon.get(t)
        if c is None:
            c = canon[t] = canonical_conjugate(G, t)
        return c

    raw = {}
    for (i, V), (j, W) in itertools.product(enumerate(objs), repeat=2):
        if V.rank > W.rank:
            continue
        pos = {x: k for k, x in enumerate(V.elements)}
        tuples = list(itertools.product(V.elements, repeat=n))
        keep = []
        for f in _injective_homs(G, V, W):
            if all(canonical(t) == canonical(tuple(f[pos[x]] for x in t)) for t in tuples):
                keep.append(f)
        if keep:
            raw[(i, j)] = keep
    return CategoryInstance(G, p, tuple(objs), _sorted_morphisms(raw), {}, name=f"A_{n}({G.name})")


# finite-set functors on a category instance

@dataclass(frozen=True, eq=False)
class FiniteSetFunctor:
    """A contravariant functor; ``maps[(i, j)][m]`` sends value(j) to value(i)
    along the m-th stored morphism i -> j."""

    base: CategoryInstance
    values: tuple[tuple[Hashable, ...], ...]
    maps: dict
    labels: tuple[tuple[str, ...], ...] = ()

    def value_labels(self, i: int) -> tuple[str, ...]:
        return self.labels[i] if self.labels else tuple(map(str, self.values[i]))

    def check_functoriality(self) -> bool:
        C = self.base
        n = len(C.objects)
        for i in range(n):
            ident = self.maps[(i, i)][C.morphism_index(i, i, C.identity(i))]
            if tuple(ident) != tuple(range(len(self.values[i]))):
                return False
        for i, j, k in itertools.product(range(n), repeat=3):
            for a, f in enumerate(C.hom(i, j)):
                for b, g in enumerate(C.hom(j, k)):
                    c = C.morphism_index(i, k, C.compose(i, j, f, g))
                    lhs = self.maps[(i, k)][c]
                    fa, gb = self.maps[(i, j)][a], self.maps[(j, k)][b]
                    if tuple(lhs) != tuple(fa[y] for y in gb):
                        return False
        return True


def constant_functor(C: CategoryInstance) -> FiniteSetFunctor:
    values = tuple(("*",) for _ in C.objects)
    maps = {key: tuple((0,) for _ in fs) for key, fs in C.morphisms.items()}
    return FiniteSetFunctor(C, values, maps)


# coends

def _homs_into(E: ElemAbSubgroup, k: int) -> list[tuple[int, ...]]:
    return list(itertools.product(E.elements, repeat=k))


def _precompose(G: FiniteGroup, m: Sequence[int], A: np.ndarray) -> tuple[int, ...]:
    """The images of the standard basis under m o A, with A: F^j -> F^k."""
    return tuple(
        G.product(G.power(x, int(c)) for x, c in zip(m, A[:, col]))
        for col in range(A.shape[1])
    )


def coend_evaluate(F: FiniteSetFunctor, k: int) -> QuotientWitness:
    """Classes of triples (object, section, hom F^k -> object) under the
    relations (E1, F(f)(s), m) ~ (E2, s, f o m) for stored f: E1 -> E2."""
    C = F.base
    ambient = []
    index = {}
    homs = [_homs_into(E, k) for E in C.objects]
    for i, E in enumerate(C.objects):
        for s in range(len(F.values[i])):
            for m in homs[i]:
                index[(i, s, m)] = len(ambient)
                ambient.append((i, s, m))
    left, right = [], []
    for (i, j), maps in C.morphisms.items():
        for a, f in enumerate(maps):
            if i == j and f == C.identity(i):
                continue
            fmap = F.maps[(i, j)][a]
            pos_i = C._position[i]
            for s in range(len(F.values[j])):
                for m in homs[i]:
                    left.append(index[(i, fmap[s], m)])
                    right.append(index[(j, s, tuple(f[pos_i[x]] for x in m))])
    return QuotientWitness.from_pairs(ambient, left, right)


def _names(G: FiniteGroup, xs) -> str:
    return "(" + ",".join(G.labels[x] for x in xs) + ")"


def coend_presheaf(F: FiniteSetFunctor, d: int) -> FinitePresheaf:
    """Levels 0..d of the coend, with restriction by precomposition.

    Restrictions are checked to be well defined on every class member.
    """
    C, G, p = F.base, F.base.group, F.base.prime
    witnesses = [coend_evaluate(F, k) for k in range(d + 1)]
    lookup = [{t: n for n, t in enumerate(w.ambient)} for w in witnesses]
    blocks = {}
    for k in range(d + 1):
        wk = witnesses[k]
        for j in range(d + 1):
            mats = matrix_array(p, k, j)
            full = np.empty((len(mats), len(wk.ambient)), dtype=np.int64)
            cache: dict = {}
            for a, A in enumerate(mats):
                for t, (i, s, m) in enumerate(wk.ambient):
                    key = (m, a)
                    mm = cache.get(key)
                    if mm is None:
                        mm = cache[key] = _precompose(G, m, A)
                    full[a, t] = witnesses[j].class_of[lookup[j][(i, s, mm)]]
            reps = np.array(wk.representatives, dtype=np.int64)
            block = full[:, reps] if len(reps) else np.zeros((len(mats), 0), dtype=np.int64)
            if not np.array_equal(block[:, wk.class_of], full):
                raise InternalConsistencyError(f"coend restriction ({k},{j}) is not well defined")
            blocks[(k, j)] = block
    levels = []
    for w in witnesses:
        levels.append([
            f"{_names(G, C.objects[i].elements)}:{F.value_labels(i)[s]}:{_names(G, m)}"
            for i, s, m in w.representative_items()
        ])
    return FinitePresheaf.build(p, d, levels, blocks)


# Rep(-, G)

def rep_presheaf(G: FiniteGroup, p: int, d: int, cap: int = DEFAULT_ENUM_CAP) -> FinitePresheaf:
    """Level k is Rep(F^k, G); restriction along A sends [a] to [a o A]."""
    witnesses = [rep_orbits(k, p, G, cap) for k in range(d + 1)]
    lookup = [{h.images: n for n, h in enumerate(w.ambient)} for w in witnesses]
    blocks = {}
    for k in range(d + 1):
        reps = [h.images for h in witnesses[k].representative_items()]
        for j in range(d + 1):
            mats = matrix_array(p, k, j)
            blocks[(k, j)] = np.array([
                [witnesses[j].class_of[lookup[j][_precompose(G, m, A)]] for m in reps]
                for A in mats
            ], dtype=np.int64).reshape(len(mats), len(reps))
    levels = [
        [_names(G, h.images) for h in w.representative_items()]
        for w in witnesses
    ]
    return FinitePresheaf.build(p, d, levels, blocks)


def gl_colimit_presheaf(G: FiniteGroup, p: int, n: int, d: int) -> FinitePresheaf:
    """colim over the Green-Leary category of hom(-, W), levels 0..d."""
    return coend_presheaf(constant_functor(build_green_leary_category(G, p, n)), d)


def compare_gl_beta_witness(G: FiniteGroup, p: int, n: int, d: int, cap: int = DEFAULT_LEVEL_CAP):
    lhs = gl_colimit_presheaf(G, p, n, d)
    rhs = beta_quotient(rep_presheaf(G, p, d), n).presheaf
    return presheaf_iso_check(lhs, rhs, cap)


def compare_gl_beta(G: FiniteGroup, p: int, n: int, d: int, cap: int = DEFAULT_LEVEL_CAP) -> bool:
    return compare_gl_beta_witness(G, p, n, d, cap)[0]


def quillen_iso_witness(G: FiniteGroup, p: int, d: int, cap: int = DEFAULT_LEVEL_CAP):
    """Coend of the constant singleton over A_p(G) against Rep(-, G)."""
    lhs = coend_presheaf(constant_functor(build_quillen_category(G, p)), d)
    return presheaf_iso_check(lhs, rep_presheaf(G, p, d), cap)

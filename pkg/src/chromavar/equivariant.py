"""Finite G-complexes modelled as admissible G-graphs, their fixed points and
components, the functor F_X on the Quillen category, the Y_n orbit model,
and orbit counts of commuting p-power tuples with fixed components.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InputError, InternalConsistencyError
from .group_core import (
    DEFAULT_ENUM_CAP,
    FiniteGroup,
    GroupHom,
    centralizer,
    commuting_p_power_tuples,
    enumerate_homs,
)
from .linear import FpMatrix, invertible_codes, matrix_array
from .quillen import (
    FiniteSetFunctor,
    _precompose,
    build_quillen_category,
    coend_evaluate,
)
from .quotient import QuotientWitness


@dataclass(frozen=True, eq=False)
class GComplex:
    """A 1-dimensional G-complex; ``action[g, v]`` is the image of vertex v under g."""

    group: FiniteGroup
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    action: np.ndarray

    def __post_init__(self):
        self.action.setflags(write=False)
        problems = self.problems()
        if problems:
            raise InputError("; ".join(problems))

    def problems(self) -> list[str]:
        G, act, nv = self.group, self.action, len(self.vertices)
        out = []
        if act.shape != (G.order, nv):
            return [f"action must have shape {(G.order, nv)}"]
        for u, v in self.edges:
            if not (0 <= u < v < nv):
                out.append(f"edge {(u, v)} is not an ordered pair of distinct vertices")
        if out:
            return out
        if nv and not np.array_equal(act[G.identity], np.arange(nv)):
            out.append("identity does not act trivially")
        for g in range(G.order):
            if sorted(act[g].tolist()) != list(range(nv)):
                out.append(f"element {G.labels[g]} does not permute the vertices")
                return out
        if nv:
            composite = act[np.arange(G.order)[:, None, None], act[None, :, :]]  # act[g][act[h]]
            if not np.array_equal(composite, act[G.table]):
                out.append("action is not a homomorphism")
        edge_set = set(self.edges)
        for g in range(G.order):
            for u, v in self.edges:
                a, b = int(act[g, u]), int(act[g, v])
                if (min(a, b), max(a, b)) not in edge_set:
                    out.append(f"element {G.labels[g]} does not preserve edge {(u, v)}")
                    return out
                if (a, b) == (v, u):
                    out.append(f"element {G.labels[g]} inverts edge {(u, v)}")
                    return out
        return out

    @classmethod
    def from_generator_action(cls, G: FiniteGroup, vertices: Sequence[str], edges,
                              generator_images: Sequence[Sequence[int]]) -> "GComplex":
        """Extend an action given on ``G.generators`` to every element."""
        if len(generator_images) != len(G.generators):
            raise InputError(f"need one vertex permutation per generator ({len(G.generators)})")
        nv = len(vertices)
        gens = [np.asarray(g, dtype=np.int64) for g in generator_images]
        for g in gens:
            if sorted(g.tolist()) != list(range(nv)):
                raise InputError(f"generator action {g.tolist()} is not a permutation")
        act = np.full((G.order, nv), -1, dtype=np.int64)
        act[G.identity] = np.arange(nv)
        queue = deque([G.identity])
        seen = {G.identity}
        while queue:
            x = queue.popleft()
            for s, img in zip(G.generators, gens):
                y = G.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    act[y] = act[x][img]
                    queue.append(y)
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        return cls(G, tuple(map(str, vertices)), edges, act)

    @classmethod
    def point(cls, G: FiniteGroup) -> "GComplex":
        return cls(G, ("pt",), (), np.zeros((G.order, 1), dtype=np.int64))

    @classmethod
    def from_permutation_action(cls, G: FiniteGroup, edges=()) -> "GComplex":
        """The defining permutation action of a permutation-built group."""
        if G.permutations is None:
            raise InputError("group has no permutation representation")
        nv = G.permutations.shape[1]
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        return cls(G, tuple(str(i + 1) for i in range(nv)), edges, np.array(G.permutations))

    def subdivide(self) -> "GComplex":
        """Barycentric subdivision: one midpoint vertex per edge."""
        return subdivide_graph(self.group, self.vertices, self.edges, self.action)


def subdivide_graph(G: FiniteGroup, vertices, edges, action) -> GComplex:
    """Subdivide every edge of a G-graph; the result has no edge inversions."""
    nv = len(vertices)
    edges = [tuple(sorted(e)) for e in edges]
    mid = {e: nv + i for i, e in enumerate(edges)}
    action = np.asarray(action, dtype=np.int64)
    act = np.empty((G.order, nv + len(edges)), dtype=np.int64)
    act[:, :nv] = action
    for e, m in mid.items():
        for g in range(G.order):
            a, b = int(action[g, e[0]]), int(action[g, e[1]])
            act[g, m] = mid[(min(a, b), max(a, b))]
    new_vertices = tuple(vertices) + tuple(f"{vertices[u]}|{vertices[v]}" for u, v in edges)
    new_edges = tuple(sorted(
        (min(x, mid[e]), max(x, mid[e])) for e in edges for x in e
    ))
    return GComplex(G, new_vertices, new_edges, act)


@dataclass(frozen=True)
class Subcomplex:
    """Fixed points of a set of elements, with the vertices of the parent
    complex they keep and the centralizer that acts on them."""

    parent: GComplex
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    acting: frozenset[int]


def fixed_subcomplex(X: GComplex, S) -> Subcomplex:
    S = sorted(set(int(s) for s in S))
    if S:
        fixed = np.all(X.action[S] == np.arange(len(X.vertices))[None, :], axis=0)
    else:
        fixed = np.ones(len(X.vertices), dtype=bool)
    verts = tuple(int(v) for v in np.flatnonzero(fixed))
    keep = set(verts)
    edges = tuple(e for e in X.edges if e[0] in keep and e[1] in keep)
    return Subcomplex(X, verts, edges, centralizer(X.group, S))


def pi0(X: GComplex | Subcomplex) -> QuotientWitness:
    """Connected components; the ambient set is the list of parent vertex indices."""
    verts = X.vertices if isinstance(X, Subcomplex) else tuple(range(len(X.vertices)))
    pos = {v: i for i, v in enumerate(verts)}
    left = [pos[u] for u, _ in X.edges]
    right = [pos[v] for _, v in X.edges]
    return QuotientWitness.from_pairs(verts, left, right)


class _FixedData(NamedTuple):
    vertices: tuple[int, ...]
    component_of: dict  # vertex -> component index


def _fixed_components(X: GComplex, images, cache: dict) -> _FixedData:
    key = frozenset(images)
    hit = cache.get(key)
    if hit is None:
        w = pi0(fixed_subcomplex(X, key))
        hit = cache[key] = _FixedData(w.ambient, dict(zip(w.ambient, w.class_of.tolist())))
    return hit


def fx_functor(G: FiniteGroup, p: int, X: GComplex) -> FiniteSetFunctor:
    """E |-> components of X^E modulo the centralizer of E.

    A value is represented by the least vertex in its orbit of components.
    Structure maps are checked to agree for every realizing element.
    """
    if X.group is not G and not np.array_equal(X.group.table, G.table):
        raise InputError("complex is acted on by a different group")
    C = build_quillen_category(G, p)
    values, labels, orbit_of = [], [], []
    for E in C.objects:
        fix = fixed_subcomplex(X, E.elements)
        w = pi0(fix)
        comp = dict(zip(w.ambient, w.class_of.tolist()))
        left, right = [], []
        for c in sorted(fix.acting):
            for v in fix.vertices:
                left.append(comp[v])
                right.append(comp[int(X.action[c, v])])
        orbits = QuotientWitness.from_pairs(range(w.n_classes), left, right)
        first = {}
        for v in fix.vertices:
            first.setdefault(int(orbits.class_of[comp[v]]), v)
        reps = tuple(first[o] for o in range(orbits.n_classes))
        values.append(reps)
        labels.append(tuple(X.vertices[v] for v in reps))
        orbit_of.append({v: int(orbits.class_of[comp[v]]) for v in fix.vertices})
    maps = {}
    for (i, j), morphs in C.morphisms.items():
        out = []
        for m, _ in enumerate(morphs):
            images = None
            for g in C.realizers[(i, j)][m]:
                ginv = G.inv(g)
                img = tuple(orbit_of[i][int(X.action[ginv, v])] for v in values[j])
                if images is None:
                    images = img
                elif img != images:
                    raise InternalConsistencyError("F_X structure map depends on the realizing element")
            out.append(images)
        maps[(i, j)] = tuple(out)
    return FiniteSetFunctor(C, tuple(values), maps, tuple(labels))


# the Y_n model

@dataclass(frozen=True)
class YnElement:
    hom: GroupHom
    component: int
    vertex: int  # least vertex of the component


@dataclass(frozen=True, eq=False)
class YnSet:
    """Pairs (a, [x]) with left G-action and right Aut(F^n)-action tables.

    ``left[g, y]`` is g.y and ``right[c, y]`` is y.phi for the c-th entry of
    ``aut_codes``.
    """

    group: FiniteGroup
    n: int
    prime: int
    elements: tuple[YnElement, ...]
    left: np.ndarray
    aut_codes: tuple[int, ...]
    right: np.ndarray

    def __len__(self):
        return len(self.elements)

    def actions_commute(self) -> bool:
        # (g.y).phi == g.(y.phi)
        a = self.right[:, self.left]  # right[c, left[g, y]]
        b = self.left[np.arange(self.left.shape[0])[None, :, None], self.right[:, None, :]]
        return np.array_equal(a, b)


def _pairs_model(G: FiniteGroup, X: GComplex, tuples: Sequence[tuple[int, ...]], cache: dict):
    elements = []
    index = {}
    for t in tuples:
        fix = _fixed_components(X, t, cache)
        seen = {}
        for v in fix.vertices:
            seen.setdefault(fix.component_of[v], v)
        for comp, v in sorted(seen.items()):
            index[(t, comp)] = len(elements)
            elements.append((t, comp, v))
    return elements, index


def _left_table(G: FiniteGroup, X: GComplex, elements, index, cache) -> np.ndarray:
    left = np.empty((G.order, len(elements)), dtype=np.int64)
    for g in range(G.order):
        for y, (t, _, v) in enumerate(elements):
            gt = tuple(int(z) for z in G.conjugation[g, list(t)]) if t else ()
            gv = int(X.action[g, v])
            fix = _fixed_components(X, gt, cache)
            left[g, y] = index[(gt, fix.component_of[gv])]
    return left


def yn_set(G: FiniteGroup, p: int, n: int, X: GComplex, cap: int = DEFAULT_ENUM_CAP) -> YnSet:
    homs = enumerate_homs(n, p, G, cap)
    cache: dict = {}
    elements, index = _pairs_model(G, X, [h.images for h in homs], cache)
    left = _left_table(G, X, elements, index, cache)
    codes = tuple(int(c) for c in invertible_codes(p, n))
    mats = matrix_array(p, n, n)
    right = np.empty((len(codes), len(elements)), dtype=np.int64)
    for c, code in enumerate(codes):
        for y, (t, comp, _) in enumerate(elements):
            right[c, y] = index[(_precompose(G, t, mats[code]), comp)]
    items = tuple(YnElement(GroupHom(n, p, t), comp, v) for t, comp, v in elements)
    left.setflags(write=False)
    right.setflags(write=False)
    return YnSet(G, n, p, items, left, codes, right)


@dataclass(frozen=True, eq=False)
class OrbitWitness(QuotientWitness):
    """Orbits together with the induced right action: ``right_action[phi]``
    lists the image orbit of every orbit."""

    right_action: dict = None


def yn_mod_g(G: FiniteGroup, p: int, n: int, X: GComplex, cap: int = DEFAULT_ENUM_CAP) -> OrbitWitness:
    Y = yn_set(G, p, n, X, cap)
    w = _orbits_under(Y.left, Y.elements, G.generators)
    right = {}
    for c, code in enumerate(Y.aut_codes):
        img = w.class_of[Y.right[c]]
        reps = np.array(w.representatives, dtype=np.int64)
        induced = img[reps] if len(reps) else np.zeros(0, dtype=np.int64)
        if not np.array_equal(induced[w.class_of], img):
            raise InternalConsistencyError("Aut action does not descend to G-orbits")
        right[FpMatrix.from_code(p, n, n, code)] = tuple(induced.tolist())
    return OrbitWitness(w.ambient, w.class_of, w.representatives, right)


def _orbits_under(left: np.ndarray, ambient, generators) -> QuotientWitness:
    n = len(ambient)
    gens = list(generators)
    l = np.tile(np.arange(n), len(gens))
    r = left[gens].ravel() if gens else np.zeros(0, dtype=np.int64)
    return QuotientWitness.from_pairs(ambient, l, r)


def hurewicz_model_map(G: FiniteGroup, p: int, n: int, X: GComplex, cap: int = DEFAULT_ENUM_CAP):
    """Coend classes of F_X at F^n, the G-orbits of Y_n, and the canonical map
    between them (``None`` if it is not well defined on classes)."""
    F = fx_functor(G, p, X)
    coend = coend_evaluate(F, n)
    orbits = yn_mod_g(G, p, n, X, cap)
    y_index = {(y.hom.images, y.component): i for i, y in enumerate(orbits.ambient)}
    cache: dict = {}
    img = []
    for i, s, m in coend.ambient:
        v = F.values[i][s]
        fix = _fixed_components(X, m, cache)
        img.append(int(orbits.class_of[y_index[(m, fix.component_of[v])]]))
    img = np.array(img, dtype=np.int64)
    reps = np.array(coend.representatives, dtype=np.int64)
    comp = img[reps] if len(reps) else np.zeros(0, dtype=np.int64)
    if not np.array_equal(comp[coend.class_of], img):
        return coend, orbits, None
    return coend, orbits, comp


def hurewicz_model_check(G: FiniteGroup, p: int, n: int, X: GComplex, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """The canonical map from the coend of F_X at F^n to Y_n/G is a bijection
    commuting with the right Aut(F^n)-actions."""
    coend, orbits, comp = hurewicz_model_map(G, p, n, X, cap)
    if comp is None:
        return False
    if sorted(comp.tolist()) != list(range(orbits.n_classes)):
        return False
    lookup = {t: k for k, t in enumerate(coend.ambient)}
    mats = matrix_array(p, n, n)
    for phi, induced in orbits.right_action.items():
        A = mats[phi.code]
        for c, r in enumerate(coend.representatives):
            i, s, m = coend.ambient[r]
            moved = coend.class_of[lookup[(i, s, _precompose(G, m, A))]]
            if comp[moved] != induced[comp[c]]:
                return False
    return True


def hkr_rank(G: FiniteGroup, p: int, n: int, X: GComplex, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Number of G-orbits of pairs (commuting p-power n-tuple a, component of X^{Im a})."""
    tuples = commuting_p_power_tuples(n, p, G, cap)
    cache: dict = {}
    elements, index = _pairs_model(G, X, tuples, cache)
    left = np.empty((len(G.generators), len(elements)), dtype=np.int64)
    for k, g in enumerate(G.generators):
        for y, (t, _, v) in enumerate(elements):
            gt = tuple(int(z) for z in G.conjugation[g, list(t)]) if t else ()
            fix = _fixed_components(X, gt, cache)
            left[k, y] = index[(gt, fix.component_of[int(X.action[g, v])])]
    return _orbits_under(left, elements, range(len(G.generators))).n_classes

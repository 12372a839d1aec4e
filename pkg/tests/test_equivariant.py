import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chromavar.equivariant import (
    GComplex,
    fixed_subcomplex,
    fx_functor,
    hkr_rank,
    hurewicz_model_check,
    pi0,
    subdivide_graph,
    yn_mod_g,
    yn_set,
)
from chromavar.errors import InputError
from chromavar.group_core import enumerate_homs
from chromavar.presheaf_core import presheaf_iso_check
from chromavar.quillen import coend_presheaf, constant_functor, build_quillen_category, rep_presheaf

from conftest import group

SMALL = ["Z2", "Z3", "S3", "D4", "Q8"]


def components(nv, edges, keep):
    """Components of the induced graph on ``keep``, as frozensets (plain DFS)."""
    adj = {v: set() for v in keep}
    for u, v in edges:
        if u in adj and v in adj:
            adj[u].add(v)
            adj[v].add(u)
    seen, out = set(), []
    for v in sorted(keep):
        if v in seen:
            continue
        stack, comp = [v], set()
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        out.append(frozenset(comp))
    return out


def burnside_oracle(G, p, n, X):
    def p_power(x):
        m = int(G.element_orders[x])
        while m % p == 0:
            m //= p
        return m == 1

    elems = [x for x in range(G.order) if p_power(x)]
    total = 0
    for t in itertools.product(elems, repeat=n):
        if not all(G.mul(a, b) == G.mul(b, a) for a in t for b in t):
            continue
        keep = {v for v in range(len(X.vertices)) if all(X.action[a, v] == v for a in t)}
        comps = components(len(X.vertices), X.edges, keep)
        for g in range(G.order):
            if all(G.conj(g, a) == a for a in t):
                total += sum(1 for c in comps if frozenset(int(X.action[g, v]) for v in c) == c)
    frac = Fraction(total, G.order)
    assert frac.denominator == 1
    return int(frac)


def sign_path(G):
    odd = lambda perm: (len(perm) - len(_cycles(perm))) % 2
    gens = [[2, 1, 0] if odd(G.permutations[g]) else [0, 1, 2] for g in G.generators]
    return GComplex.from_generator_action(G, ["a", "m", "c"], [(0, 1), (1, 2)], gens)


def _cycles(perm):
    seen, out = set(), []
    for s in range(len(perm)):
        if s not in seen:
            cyc, x = [], s
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = int(perm[x])
            out.append(cyc)
    return out


def square(G):
    return subdivide_graph(G, ["1", "2", "3", "4"], [(0, 1), (1, 2), (2, 3), (0, 3)], G.permutations)


@st.composite
def g_complexes(draw, names=SMALL):
    G = group(draw(st.sampled_from(names)))
    blocks = draw(st.lists(st.sampled_from(["point", "perm", "regular"]), min_size=1, max_size=3))
    cols = []
    for b in blocks:
        if b == "point":
            cols.append(np.zeros((G.order, 1), dtype=np.int64))
        elif b == "perm":
            cols.append(np.array(G.permutations))
        else:
            cols.append(np.array(G.table))
    offsets = np.cumsum([0] + [c.shape[1] for c in cols])
    act = np.concatenate([c + off for c, off in zip(cols, offsets)], axis=1)
    nv = act.shape[1]
    edges = set()
    for _ in range(draw(st.integers(0, 3))):
        u, v = draw(st.integers(0, nv - 1)), draw(st.integers(0, nv - 1))
        if u == v:
            continue
        orbit = {(int(act[g, u]), int(act[g, v])) for g in range(G.order)}
        edges |= {(min(a, b), max(a, b)) for a, b in orbit}
    vertices = [f"v{i}" for i in range(nv)]
    inverted = any(
        (int(act[g, u]), int(act[g, v])) == (v, u) for g in range(G.order) for u, v in edges
    )
    if inverted or draw(st.booleans()):
        return subdivide_graph(G, vertices, sorted(edges), act)
    return GComplex(G, tuple(vertices), tuple(sorted(edges)), act)


# construction and validation

def test_invalid_actions_rejected(s3):
    with pytest.raises(InputError):
        GComplex.from_generator_action(s3, ["a", "m", "c"], [(0, 1), (1, 2)], [[2, 1, 0], [2, 1, 0]])
    Z2 = group("Z2")
    with pytest.raises(InputError):
        GComplex.from_generator_action(Z2, ["a", "b"], [(0, 1)], [[1, 0]])  # inverts the edge


def test_subdivision_removes_inversions():
    Z2 = group("Z2")
    X = subdivide_graph(Z2, ["a", "b"], [(0, 1)], np.array([[0, 1], [1, 0]]))
    assert len(X.vertices) == 3 and not X.problems()


# fixed points and components

def test_fixed_subcomplex_examples():
    Z2 = group("Z2")
    swap = GComplex.from_permutation_action(Z2)
    assert fixed_subcomplex(swap, {Z2.identity}).vertices == (0, 1)
    assert fixed_subcomplex(swap, range(2)).vertices == ()
    path = GComplex.from_generator_action(Z2, ["a", "b", "c"], [(0, 1), (1, 2)], [[2, 1, 0]])
    sub = fixed_subcomplex(path, range(2))
    assert sub.vertices == (1,) and sub.edges == ()


def test_pi0_examples():
    Z2 = group("Z2")
    assert pi0(GComplex.from_permutation_action(Z2)).n_classes == 2
    path = GComplex.from_generator_action(Z2, ["a", "b", "c"], [(0, 1), (1, 2)], [[2, 1, 0]])
    assert pi0(path).n_classes == 1
    assert pi0(fixed_subcomplex(GComplex.from_permutation_action(Z2), range(2))).n_classes == 0


@settings(max_examples=30, deadline=None)
@given(g_complexes())
def test_pi0_matches_dfs(X):
    w = pi0(X)
    comps = components(len(X.vertices), X.edges, set(range(len(X.vertices))))
    assert w.n_classes == len(comps)
    for c in comps:
        assert len({int(w.class_of[v]) for v in c}) == 1


# F_X

def test_fx_examples(s3):
    Z2 = group("Z2")
    F = fx_functor(Z2, 2, GComplex.from_permutation_action(Z2))
    sizes = {len(E.elements): len(v) for E, v in zip(F.base.objects, F.values)}
    assert sizes == {1: 1, 2: 0}
    F = fx_functor(s3, 2, GComplex.point(s3))
    assert all(len(v) == 1 for v in F.values)
    F = fx_functor(s3, 2, GComplex.from_permutation_action(s3))
    t12 = s3.labels.index("(1 2)")
    i = next(i for i, E in enumerate(F.base.objects) if t12 in E.elements)
    assert F.value_labels(i) == ("3",)


@settings(max_examples=20, deadline=None)
@given(g_complexes())
def test_fx_is_functorial(X):
    assert fx_functor(X.group, 2, X).check_functoriality()


def test_fx_point_gives_rep(q8):
    P = coend_presheaf(fx_functor(q8, 2, GComplex.point(q8)), 2)
    assert presheaf_iso_check(P, rep_presheaf(q8, 2, 2))[0]


# Y_n

def test_yn_examples(s3):
    Z2 = group("Z2")
    swap = GComplex.from_permutation_action(Z2)
    assert len(yn_set(Z2, 2, 1, swap)) == 2
    assert yn_mod_g(Z2, 2, 1, swap).n_classes == 1
    assert len(yn_set(s3, 2, 1, GComplex.from_permutation_action(s3))) == 6
    assert yn_mod_g(s3, 2, 1, GComplex.from_permutation_action(s3)).n_classes == 2
    assert yn_mod_g(s3, 2, 1, GComplex.point(s3)).n_classes == 2


def test_yn_of_point_is_hom_set(d4):
    Y = yn_set(d4, 2, 2, GComplex.point(d4))
    assert [y.hom.images for y in Y.elements] == [h.images for h in enumerate_homs(2, 2, d4)]


@settings(max_examples=20, deadline=None)
@given(g_complexes(), st.integers(0, 2))
def test_yn_counts_and_actions(X, n):
    G = X.group
    Y = yn_set(G, 2, n, X)
    expected = 0
    for h in enumerate_homs(n, 2, G):
        keep = {v for v in range(len(X.vertices)) if all(X.action[a, v] == v for a in h.images)}
        expected += len(components(len(X.vertices), X.edges, keep))
    assert len(Y) == expected
    assert Y.actions_commute()
    # left action is an action
    for g, h in itertools.product(G.generators, repeat=2):
        assert np.array_equal(Y.left[G.mul(g, h)], Y.left[g][Y.left[h]])


# the Borel model and HKR ranks

ACCEPTANCE = [
    ("Z2", "swap"), ("S3", "three"), ("S3", "sign_path"), ("D4", "square"),
    ("Z2", "pt"), ("Z3", "pt"), ("S3", "pt"), ("D4", "pt"), ("Q8", "pt"), ("A4", "pt"),
]


def build(name, kind):
    G = group(name)
    if kind == "pt":
        return G, GComplex.point(G)
    if kind in ("swap", "three"):
        return G, GComplex.from_permutation_action(G)
    if kind == "sign_path":
        return G, sign_path(G)
    return G, square(G)


@pytest.mark.parametrize("name,kind", ACCEPTANCE)
@pytest.mark.parametrize("n", [0, 1, 2])
def test_hurewicz_model_acceptance_pairs(name, kind, n):
    G, X = build(name, kind)
    p = 3 if name == "Z3" else 2
    assert hurewicz_model_check(G, p, n, X)


@settings(max_examples=20, deadline=None)
@given(g_complexes(), st.integers(0, 2), st.sampled_from([2, 3]))
def test_hurewicz_model_random(X, n, p):
    assert hurewicz_model_check(X.group, p, n, X)


def test_hkr_examples(s3):
    pt = GComplex.point(s3)
    assert hkr_rank(s3, 2, 1, pt) == 2
    assert hkr_rank(s3, 2, 2, pt) == 4


@settings(max_examples=30, deadline=None)
@given(g_complexes(), st.integers(0, 2), st.sampled_from([2, 3]))
def test_hkr_matches_burnside(X, n, p):
    assert hkr_rank(X.group, p, n, X) == burnside_oracle(X.group, p, n, X)


@settings(max_examples=20, deadline=None)
@given(g_complexes())
def test_hkr_n0_counts_component_orbits(X):
    G = X.group
    comps = components(len(X.vertices), X.edges, set(range(len(X.vertices))))
    orbits = {frozenset(frozenset(int(X.action[g, v]) for v in c) for g in range(G.order)) for c in comps}
    assert hkr_rank(G, 2, 0, X) == len(orbits)

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chromavar.errors import CapExceededError, InputError
from chromavar.group_core import (
    FiniteGroup,
    GroupHom,
    canonical_conjugate,
    centralizer,
    commuting_p_power_tuples,
    elem_abelian_subgroups,
    enumerate_homs,
    group_to_json,
    load_group,
    rep_orbits,
)

from conftest import BATTERY, group

NAMES = ["trivial", "Z2", "Z3", "Z4", "S3", "D4", "Q8", "A4"]


def closure_oracle(gens, degree):
    """Plain set-based closure of permutation tuples."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[g[i]] for i in range(degree))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def subgroup_oracle(G, p):
    """Every subset of {x : x^p = e} that is a subgroup of p-power order and abelian."""
    cand = [x for x in range(G.order) if x != G.identity and G.power(x, p) == G.identity]
    found = set()
    for r in range(len(cand) + 1):
        for sub in itertools.combinations(cand, r):
            S = set(sub) | {G.identity}
            size = len(S)
            while size % p == 0:
                size //= p
            if size != 1:
                continue
            if all(G.mul(a, b) in S and G.mul(a, b) == G.mul(b, a) for a in S for b in S):
                found.add(tuple(sorted(S)))
    return found


# load_group examples

def test_load_s3_from_generators():
    G = load_group({"generators": [[2, 1, 3], [2, 3, 1]]})
    assert G.order == 6


def test_empty_generators_give_trivial_group():
    assert load_group({"degree": 3, "generators": []}).order == 1


def test_load_d4():
    assert load_group({"generators": [[2, 3, 4, 1], [3, 2, 1, 4]]}).order == 8


def test_load_errors(tmp_path):
    with pytest.raises(InputError):
        load_group({"generators": [[1, 1, 2]]})
    with pytest.raises(InputError):
        load_group({"table": [[0, 1], [1, 1]]})
    with pytest.raises(CapExceededError):
        load_group({"generators": [[2, 3, 4, 5, 1], [2, 1, 3, 4, 5]]}, cap=50)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError):
        load_group(bad)


def test_battery_files_load():
    orders = {f.stem: load_group(f).order for f in BATTERY.glob("*.json")}
    assert orders == {"trivial": 1, "z2": 2, "z3": 3, "s3": 6, "d4": 8, "q8": 8, "a4": 12}


def test_json_roundtrip():
    for name in NAMES:
        G = group(name)
        H = load_group(group_to_json(G))
        assert np.array_equal(G.table, H.table)


def test_table_input_roundtrip():
    G = group("Q8")
    H = FiniteGroup.from_table(G.table.tolist(), list(G.labels))
    assert H.order == 8 and H.check_axioms()


def test_deterministic_order():
    a = load_group({"generators": [[2, 1, 3], [2, 3, 1]]})
    b = load_group({"generators": [[2, 1, 3], [2, 3, 1]]})
    assert a.labels == b.labels and np.array_equal(a.table, b.table)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.data())
def test_closure_matches_set_oracle(degree, data):
    perm = st.permutations(list(range(degree)))
    gens = data.draw(st.lists(perm, max_size=3))
    G = FiniteGroup.from_permutations(gens, degree)
    assert G.order == len(closure_oracle([tuple(g) for g in gens], degree))
    assert G.check_axioms()


@pytest.mark.parametrize("name", NAMES)
def test_identity_and_inverses(name):
    G = group(name)
    T = G.table
    e = G.identity
    assert all(T[e, x] == x == T[x, e] for x in range(G.order))
    assert all(T[x, G.inverse[x]] == e == T[G.inverse[x], x] for x in range(G.order))


@pytest.mark.parametrize("name", NAMES)
def test_associativity_scan(name):
    T = group(name).table.tolist()
    n = len(T)
    assert all(T[T[a][b]][c] == T[a][T[b][c]] for a in range(n) for b in range(n) for c in range(n))


def test_check_axioms_rejects_broken_table(s3):
    T = s3.table.copy()
    T[1, 2], T[1, 3] = T[1, 3], T[1, 2]
    with pytest.raises(InputError):
        FiniteGroup.from_table(T.tolist())


# centralizer

def label(G, text):
    return G.labels.index(text)


def test_centralizer_examples(s3, q8):
    t = label(s3, "(1 2)")
    assert centralizer(s3, {t}) == frozenset({s3.identity, t})
    assert centralizer(s3, {s3.identity}) == frozenset(range(6))
    minus_one = next(x for x in range(8) if x != q8.identity and q8.element_orders[x] == 2)
    assert centralizer(q8, {minus_one}) == frozenset(range(8))


# elementary abelian subgroups

def test_subgroup_examples(s3, q8):
    assert len(elem_abelian_subgroups(s3, 2)) == 4
    assert len(elem_abelian_subgroups(s3, 5)) == 1
    assert len(elem_abelian_subgroups(q8, 2)) == 2


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("p", [2, 3])
def test_subgroups_match_oracle(name, p):
    G = group(name)
    subs = elem_abelian_subgroups(G, p)
    assert {E.elements for E in subs} == subgroup_oracle(G, p)
    for E in subs:
        assert E.check(G)
        assert len(E.elements) == p**E.rank
        assert E.elements == tuple(sorted(E.elements))


def test_basis_coordinates_unique(a4):
    for E in elem_abelian_subgroups(a4, 2):
        vecs = {E.coords[x] for x in E.elements}
        assert len(vecs) == len(E.elements)
        for x in E.elements:
            assert E.element_at(E.coords[x]) == x


# homomorphisms

def test_hom_counts(s3):
    assert len(enumerate_homs(1, 2, s3)) == 4
    assert len(enumerate_homs(2, 2, s3)) == 10
    homs = enumerate_homs(0, 2, s3)
    assert len(homs) == 1 and homs[0].images == ()


def test_hom_cap(a4):
    with pytest.raises(CapExceededError):
        enumerate_homs(3, 2, a4, cap=100)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_homs_match_brute_force(name, p, n):
    G = group(name)
    brute = [
        t for t in itertools.product(range(G.order), repeat=n)
        if all(G.power(x, p) == G.identity for x in t) and all(G.mul(a, b) == G.mul(b, a) for a in t for b in t)
    ]
    homs = enumerate_homs(n, p, G)
    assert [h.images for h in homs] == sorted(brute)
    assert all(h.is_valid(G) for h in homs)


def test_hom_is_group_homomorphism(d4):
    for h in enumerate_homs(2, 2, d4):
        full = h.full_map(d4)
        for u, v in itertools.product(itertools.product(range(2), repeat=2), repeat=2):
            w = tuple((a + b) % 2 for a, b in zip(u, v))
            assert full[w] == d4.mul(full[u], full[v])


# Rep orbits

def burnside_classes(G, tuples):
    fixed = sum(
        1 for g in range(G.order) for t in tuples if all(G.conj(g, x) == x for x in t)
    )
    return Fraction(fixed, G.order)


def test_rep_orbit_examples(s3, q8):
    assert rep_orbits(1, 2, s3).n_classes == 2
    assert rep_orbits(2, 2, q8).n_classes == 4
    assert rep_orbits(1, 3, s3).n_classes == 2


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_rep_orbits_match_burnside(name, p, n):
    G = group(name)
    w = rep_orbits(n, p, G)
    assert w.n_classes == burnside_classes(G, [h.images for h in w.ambient])
    w.check()
    # members of a class are conjugate
    for members in w.classes():
        keys = {canonical_conjugate(G, w.ambient[m].images) for m in members}
        assert len(keys) == 1


# commuting p-power tuples

def test_commuting_tuples_examples(s3):
    assert len(commuting_p_power_tuples(1, 2, s3)) == 4
    assert len(commuting_p_power_tuples(1, 2, group("Z4"))) == 4
    assert len(commuting_p_power_tuples(2, 2, s3)) == 10


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(NAMES), st.sampled_from([2, 3]), st.integers(0, 2))
def test_commuting_tuples_property(name, p, n):
    G = group(name)
    tuples = commuting_p_power_tuples(n, p, G)
    assert len(set(tuples)) == len(tuples)
    for t in tuples:
        for x in t:
            m = int(G.element_orders[x])
            while m % p == 0:
                m //= p
            assert m == 1
        assert all(G.commutes(a, b) for a in t for b in t)
    # closed under conjugation
    as_set = set(tuples)
    for g in G.generators:
        assert all(tuple(G.conj(g, x) for x in t) in as_set for t in tuples)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(NAMES), st.data())
def test_group_hom_validity(name, data):
    G = group(name)
    images = tuple(data.draw(st.lists(st.integers(0, G.order - 1), max_size=2)))
    h = GroupHom(len(images), 2, images)
    expected = all(G.power(x, 2) == G.identity for x in images) and all(
        G.commutes(a, b) for a in images for b in images
    )
    assert h.is_valid(G) == expected

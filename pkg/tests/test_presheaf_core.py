import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chromavar.errors import InputError
from chromavar.formats import presheaf_from_json, presheaf_to_json
from chromavar.linear import FpMatrix, count_matrices, matrix_array
from chromavar.presheaf_core import (
    EndMSet,
    FinitePresheaf,
    PresheafMap,
    adjunction_check,
    beta_endmset,
    beta_map,
    beta_product_check,
    beta_quotient,
    check_functoriality,
    counit,
    diagonal,
    e_d_evaluate,
    find_presheaf_maps,
    i_d_induce,
    id_beta_commute_check,
    identity_map,
    presheaf_iso_check,
    product_presheaf,
    product_projections,
    representable,
    representable_map,
    terminal,
    tower_surjection,
)
from chromavar.quillen import rep_presheaf

from conftest import group
from strategies import naive_beta_classes, presheaves, relabel

SLOW = settings(max_examples=30, deadline=None)


def corrupted(F, k, j, code, x, value):
    data = presheaf_to_json(F)
    key = FpMatrix.from_code(F.p, k, j, code).key()
    data["restrictions"][key][x] = value
    return presheaf_from_json(data)


# representables and functoriality

def test_representable_sizes():
    assert representable(2, 2, 1).sizes == [1, 2, 4]
    assert representable(2, 2, 0).sizes == [1, 1, 1]
    assert representable(3, 1, 2).sizes == [1, 9]


@pytest.mark.parametrize("p,d,r", [(2, 2, 0), (2, 2, 1), (2, 2, 2), (3, 1, 1), (3, 2, 1)])
def test_representable_restriction_is_composition(p, d, r):
    R = representable(p, d, r)
    for k in range(d + 1):
        for j in range(d + 1):
            for a, A in enumerate(matrix_array(p, k, j)):
                for x, L in enumerate(matrix_array(p, r, k)):
                    y = R.restrictions[(k, j)][a, x]
                    assert np.array_equal(matrix_array(p, r, j)[y], (L @ A) % p)


def test_functoriality_examples():
    assert check_functoriality(representable(2, 2, 1)).ok
    assert check_functoriality(terminal(2, 2)).ok
    bad = corrupted(representable(2, 2, 1), 1, 1, 1, 0, 1)
    report = check_functoriality(bad)
    assert not report.ok
    assert any(v.inner is not None for v in report.violations)
    assert "1x1:1" in " ".join(v.describe() for v in report.violations)


def test_malformed_presheaf_rejected():
    data = presheaf_to_json(representable(2, 1, 1))
    data["restrictions"].pop("1x1:1")
    with pytest.raises(InputError):
        presheaf_from_json(data)
    data = presheaf_to_json(representable(2, 1, 1))
    data["restrictions"]["1x1:1"] = [0, 5]
    with pytest.raises(InputError):
        presheaf_from_json(data)


@SLOW
@given(presheaves())
def test_generated_presheaves_are_functorial(F):
    assert check_functoriality(F).ok


@SLOW
@given(presheaves())
def test_json_roundtrip(F):
    G = presheaf_from_json(presheaf_to_json(F))
    assert G.sizes == F.sizes
    assert all(np.array_equal(F.restrictions[k], G.restrictions[k]) for k in F.restrictions)


# beta quotients

def test_beta_examples():
    for n in (1, 2):
        R = representable(2, 2, 1)
        assert beta_quotient(R, n).projection.is_bijective()
    F = rep_presheaf(group("S3"), 2, 2)
    assert beta_quotient(F, 2).projection.is_bijective()
    # beta_0 of Rep(-, S3): every level has a single restriction to F^0
    assert beta_quotient(F, 0).presheaf.sizes == [1, 1, 1]


def test_class_counts_non_increasing():
    F = rep_presheaf(group("S3"), 2, 2)
    counts = [beta_quotient(F, n).presheaf.sizes for n in (2, 1, 0)]
    for hi, lo in zip(counts, counts[1:]):
        assert all(a >= b for a, b in zip(hi, lo))


@SLOW
@given(presheaves(), st.integers(0, 2))
def test_beta_matches_naive_oracle(F, n):
    n = min(n, F.d)
    bq = beta_quotient(F, n)
    got = [sorted(tuple(m) for m in w.classes()) for w in bq.witnesses]
    assert got == naive_beta_classes(F, n)


@SLOW
@given(presheaves(), st.integers(0, 2))
def test_beta_properties(F, n):
    n = min(n, F.d)
    bq = beta_quotient(F, n)
    proj = bq.projection
    assert proj.is_natural() and proj.is_surjective()
    for k in range(n + 1):
        assert len(set(proj.components[k].tolist())) == len(proj.components[k])
    assert check_functoriality(bq.presheaf).ok
    again = beta_quotient(bq.presheaf, n).projection
    assert again.is_bijective()
    assert beta_quotient(F, F.d).projection.is_bijective()


@SLOW
@given(presheaves(shapes=[(2, 2), (3, 1)]), st.integers(0, 1))
def test_tower_triangle(F, n):
    n = min(n, F.d - 1)
    step = tower_surjection(F, n)
    assert step.is_natural() and step.is_surjective()
    assert beta_quotient(F, n + 1).projection.then(step) == beta_quotient(F, n).projection


def test_tower_requires_room():
    with pytest.raises(InputError):
        tower_surjection(representable(2, 1, 1), 1)


def test_product_examples():
    R = representable(2, 2, 1)
    T = terminal(2, 2)
    assert presheaf_iso_check(product_presheaf(R, T), R)[0]
    assert beta_product_check(R, R, 1)
    assert beta_product_check(rep_presheaf(group("S3"), 2, 2), R, 1)


@SLOW
@given(presheaves(max_level=20), presheaves(max_level=20), st.integers(0, 2))
def test_beta_product_property(F, G, n):
    if (F.p, F.d) != (G.p, G.d) or max(F.sizes) * max(G.sizes) > 200:
        return
    assert beta_product_check(F, G, min(n, F.d))


def test_product_projections_and_diagonal():
    R = representable(2, 2, 1)
    P = product_presheaf(R, representable(2, 2, 2))
    a, b = product_projections(R, representable(2, 2, 2))
    assert a.is_natural() and b.is_natural() and a.is_surjective() and b.is_surjective()
    assert P.sizes == [x * y for x, y in zip(R.sizes, representable(2, 2, 2).sizes)]
    delta = diagonal(R)
    assert delta.is_natural() and delta.is_injective()
    a, b = product_projections(R, R)
    assert delta.then(a) == identity_map(R) == delta.then(b)


@pytest.mark.parametrize("rows,kind", [([[1], [0]], "inj"), ([[1, 0]], "surj"), ([[1, 1]], "surj")])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_beta_preserves_injections_and_surjections(rows, kind, n):
    phi = representable_map(2, 2, FpMatrix.from_rows(2, rows))
    assert phi.is_natural()
    assert (phi.is_injective() if kind == "inj" else phi.is_surjective())
    bphi = beta_map(phi, n)
    assert bphi.is_natural()
    assert bphi.is_injective() if kind == "inj" else bphi.is_surjective()


def test_beta_map_commutes_with_projection():
    phi = representable_map(2, 2, FpMatrix.from_rows(2, [[1, 0]]))
    for n in range(3):
        lhs = phi.then(beta_quotient(phi.target, n).projection)
        rhs = beta_quotient(phi.source, n).projection.then(beta_map(phi, n))
        assert lhs == rhs


# End(F^d)-sets, induction and the counit

def free_endmset(p, d):
    return e_d_evaluate(representable(p, d, d))


def test_e_d_examples():
    S = e_d_evaluate(representable(2, 1, 1))
    assert len(S.carrier) == 2
    for a in range(2):
        for s in range(2):
            assert S.action[a, s] == (s * a) % 2
    T = e_d_evaluate(terminal(2, 2))
    assert len(T.carrier) == 1 and T.check_action()
    R = e_d_evaluate(rep_presheaf(group("S3"), 2, 1))
    assert len(R.carrier) == 2
    zero = FpMatrix.zero(2, 1, 1)
    assert R.act(0, zero) == R.act(1, zero) == 0


def test_i_d_examples():
    free = EndMSet(2, 1, ("0", "1"), np.array([[0, 0], [0, 1]]))
    assert free.check_action()
    F = i_d_induce(free)
    assert F.sizes[0] == 1
    assert presheaf_iso_check(F, representable(2, 1, 1))[0]
    one = EndMSet(2, 2, ("*",), np.zeros((16, 1), dtype=np.int64))
    assert presheaf_iso_check(i_d_induce(one), terminal(2, 2))[0]


def test_counit_injective_example():
    phi = counit(rep_presheaf(group("S3"), 2, 2))
    assert phi.is_natural() and phi.is_injective()


@SLOW
@given(presheaves())
def test_counit_is_natural_mono(F):
    phi = counit(F)
    assert phi.is_natural() and phi.is_injective()
    # at the top level it is onto
    assert len(set(phi.components[F.d].tolist())) == F.sizes[F.d]


@settings(max_examples=15, deadline=None)
@given(presheaves(max_level=8))
def test_adjunction_property(F):
    if len(F.levels[F.d]) > 8:
        return
    assert adjunction_check(e_d_evaluate(F), F)


def test_adjunction_with_other_source():
    S = e_d_evaluate(representable(2, 2, 1))
    assert adjunction_check(S, rep_presheaf(group("S3"), 2, 2))
    assert adjunction_check(e_d_evaluate(terminal(2, 2)), representable(2, 2, 1))


def test_id_beta_examples():
    for n in range(3):
        assert id_beta_commute_check(EndMSet(2, 2, ("*",), np.zeros((16, 1), dtype=np.int64)), n)
    S = e_d_evaluate(rep_presheaf(group("Q8"), 2, 2))
    assert id_beta_commute_check(S, 1)
    assert id_beta_commute_check(S, 2)


@SLOW
@given(presheaves(), st.integers(0, 2))
def test_id_beta_property(F, n):
    assert id_beta_commute_check(e_d_evaluate(F), min(n, F.d))


def test_beta_endmset_top_is_identity():
    S = e_d_evaluate(rep_presheaf(group("D4"), 2, 2))
    bS, w = beta_endmset(S, 2)
    assert w.n_classes == len(S.carrier)


# isomorphism search

def test_iso_examples():
    R = representable(2, 2, 1)
    ok, phi = presheaf_iso_check(R, R)
    assert ok and phi.is_bijective()
    assert presheaf_iso_check(R, terminal(2, 2)) == (False, None)


@SLOW
@given(presheaves(), st.randoms(use_true_random=False))
def test_iso_finds_relabelings(F, rnd):
    perms = []
    for lev in F.levels:
        perm = list(range(len(lev)))
        rnd.shuffle(perm)
        perms.append(np.array(perm, dtype=np.int64))
    G = relabel(F, perms)
    assert check_functoriality(G).ok
    ok, phi = presheaf_iso_check(F, G)
    assert ok and phi.is_natural() and phi.is_bijective()


def test_iso_equal_sizes():
    # both factor through a central or Sylow Z/2, so both are hom(-, F^1)
    A = rep_presheaf(group("Q8"), 2, 2)
    B = rep_presheaf(group("S3"), 2, 2)
    assert presheaf_iso_check(A, B)[0]
    assert presheaf_iso_check(A, representable(2, 2, 1))[0]


def test_iso_distinguishes_equal_sizes():
    # sizes [1, 4, 16] on both sides, but D4 has two non-conjugate Klein
    # four-groups while the rank-2 points of hom(-, F^2) form one GL_2-orbit
    A = rep_presheaf(group("D4"), 2, 2)
    C = representable(2, 2, 2)
    assert A.sizes == C.sizes
    assert presheaf_iso_check(A, C) == (False, None)


def test_find_maps_counts_yoneda():
    # natural maps hom(-, F^r) -> F correspond to F(F^r)
    F = rep_presheaf(group("S3"), 2, 2)
    for r in range(3):
        assert len(find_presheaf_maps(representable(2, 2, r), F)) == F.sizes[r]


def test_presheaf_map_validation():
    R = representable(2, 1, 1)
    with pytest.raises(InputError):
        PresheafMap.from_components(R, R, [np.array([0]), np.array([0, 5])])

"""Hypothesis strategies and naive oracles shared by the presheaf tests."""

import numpy as np
from hypothesis import strategies as st

from chromavar.linear import FpMatrix, count_matrices
from chromavar.presheaf_core import (
    FinitePresheaf,
    beta_quotient,
    product_presheaf,
    representable,
    terminal,
)
from chromavar.quillen import rep_presheaf

from conftest import group

# (p, d) pairs whose presheaves stay small
SHAPES = [(2, 1), (2, 2), (3, 1)]


def _base(p, d, choice):
    kind, arg = choice
    if kind == "terminal":
        return terminal(p, d)
    if kind == "rep":
        return representable(p, d, arg)
    return rep_presheaf(group(arg), p, d)


_bases = st.one_of(
    st.just(("terminal", 0)),
    st.tuples(st.just("rep"), st.integers(0, 2)),
    st.tuples(st.just("group"), st.sampled_from(["Z2", "Z3", "S3", "Q8", "D4"])),
)


@st.composite
def presheaves(draw, shapes=SHAPES, max_level=120):
    p, d = draw(st.sampled_from(shapes))
    F = _base(p, d, draw(_bases))
    how = draw(st.sampled_from(["plain", "product", "beta"]))
    if how == "product":
        G = _base(p, d, draw(_bases))
        if max(F.sizes) * max(G.sizes) <= max_level:
            F = product_presheaf(F, G)
    elif how == "beta":
        F = beta_quotient(F, draw(st.integers(0, d))).presheaf
    return F


def relabel(F: FinitePresheaf, perms) -> FinitePresheaf:
    """The presheaf with element x of level k renamed perms[k][x]."""
    blocks = {}
    for (k, j), R in F.restrictions.items():
        new = np.empty_like(R)
        new[:, perms[k]] = perms[j][R]
        blocks[(k, j)] = new
    levels = []
    for k, lev in enumerate(F.levels):
        out = [None] * len(lev)
        for x, name in enumerate(lev):
            out[perms[k][x]] = name
        levels.append(out)
    return FinitePresheaf.build(F.p, F.d, levels, blocks)


def naive_beta_classes(F: FinitePresheaf, n: int):
    """Partition of each level by restriction profiles to levels <= n, by direct loops."""
    out = []
    top = min(n, F.d)
    for k in range(F.d + 1):
        profile = {}
        for x in range(len(F.levels[k])):
            key = tuple(
                F.restrict(FpMatrix.from_code(F.p, k, j, a), x)
                for j in range(top + 1) for a in range(count_matrices(F.p, k, j))
            )
            profile.setdefault(key, []).append(x)
        out.append(sorted(tuple(v) for v in profile.values()))
    return out

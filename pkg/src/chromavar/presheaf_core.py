"""Finite presheaves on F_p-vector spaces of dimension at most d.

A presheaf stores one finite set per dimension ``0..d`` and, for every pair
of dimensions ``(k, j)``, an integer array ``R`` of shape
``(p**(j*k), |F(k)|)``: row ``a`` is the restriction ``F(k) -> F(j)`` along
the linear map ``F^j -> F^k`` with code ``a`` (see :mod:`chromavar.linear`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import CapExceededError, InputError, InternalConsistencyError
from .linear import (
    FpMatrix,
    compose_table,
    count_matrices,
    identity_code,
    rank_array,
)
from .quotient import QuotientWitness

DEFAULT_LEVEL_CAP = 5_000


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FinitePresheaf:
    p: int
    d: int
    levels: tuple[tuple[str, ...], ...]
    restrictions: dict

    def __post_init__(self):
        if len(self.levels) != self.d + 1:
            raise InputError(f"expected {self.d + 1} levels, got {len(self.levels)}")
        for k in range(self.d + 1):
            for j in range(self.d + 1):
                r = self.restrictions.get((k, j))
                shape = (count_matrices(self.p, k, j), len(self.levels[k]))
                if r is None or r.shape != shape:
                    raise InputError(f"restriction block ({k},{j}) must have shape {shape}")
                if r.size and (r.min() < 0 or r.max() >= len(self.levels[j])):
                    raise InputError(f"restriction block ({k},{j}) has out-of-range images")

    @classmethod
    def build(cls, p: int, d: int, levels, blocks) -> "FinitePresheaf":
        levels = tuple(tuple(str(x) for x in lev) for lev in levels)
        return cls(p, d, levels, {kj: _frozen(b) for kj, b in blocks.items()})

    @property
    def sizes(self) -> list[int]:
        return [len(lev) for lev in self.levels]

    def restriction(self, A: FpMatrix) -> tuple[int, ...]:
        """The map F(k) -> F(j) induced by A: F^j -> F^k."""
        return tuple(self.restrictions[(A.rows, A.cols)][A.code].tolist())

    def restrict(self, A: FpMatrix, x: int) -> int:
        return int(self.restrictions[(A.rows, A.cols)][A.code, x])

    def block_pairs(self) -> Iterator[tuple[int, int]]:
        for k in range(self.d + 1):
            for j in range(self.d + 1):
                yield k, j

    def __repr__(self):
        return f"FinitePresheaf(p={self.p}, d={self.d}, sizes={self.sizes})"


def terminal(p: int, d: int) -> FinitePresheaf:
    levels = [("*",)] * (d + 1)
    blocks = {(k, j): np.zeros((count_matrices(p, k, j), 1)) for k in range(d + 1) for j in range(d + 1)}
    return FinitePresheaf.build(p, d, levels, blocks)


def representable(p: int, d: int, r: int) -> FinitePresheaf:
    """hom(-, F^r): level k is the set of r x k matrices; restriction precomposes."""
    if r < 0:
        raise InputError("dimension must be nonnegative")
    levels = [
        [str(FpMatrix.from_code(p, r, k, c)) for c in range(count_matrices(p, r, k))]
        for k in range(d + 1)
    ]
    blocks = {(k, j): compose_table(p, r, k, j).T for k in range(d + 1) for j in range(d + 1)}
    return FinitePresheaf.build(p, d, levels, blocks)


# functoriality

@dataclass(frozen=True)
class Violation:
    outer: FpMatrix
    inner: FpMatrix | None
    element: int

    def describe(self) -> str:
        if self.inner is None:
            return f"identity {self.outer.key()} moves element {self.element}"
        return f"pair ({self.outer.key()}, {self.inner.key()}) fails on element {self.element}"


@dataclass(frozen=True)
class FunctorialityReport:
    ok: bool
    violations: tuple[Violation, ...]


def check_functoriality(F: FinitePresheaf, max_violations: int = 10) -> FunctorialityReport:
    """Exhaustively test (AB)^* = B^* A^* and id^* = id."""
    p, R = F.p, F.restrictions
    bad: list[Violation] = []
    for k in range(F.d + 1):
        ident = R[(k, k)][identity_code(p, k)]
        for x in np.flatnonzero(ident != np.arange(len(F.levels[k]))):
            bad.append(Violation(FpMatrix.identity(p, k), None, int(x)))
    for k in range(F.d + 1):
        for j in range(F.d + 1):
            RA = R[(k, j)]
            for l in range(F.d + 1):
                RB = R[(j, l)]
                table = compose_table(p, k, j, l)
                lhs = R[(k, l)][table]
                rhs = RB[np.arange(RB.shape[0])[None, :, None], RA[:, None, :]]
                if lhs.size and not np.array_equal(lhs, rhs):
                    for a, b, x in zip(*np.nonzero(lhs != rhs)):
                        bad.append(Violation(
                            FpMatrix.from_code(p, k, j, int(a)),
                            FpMatrix.from_code(p, j, l, int(b)),
                            int(x),
                        ))
                        if len(bad) >= max_violations:
                            return FunctorialityReport(False, tuple(bad))
    return FunctorialityReport(not bad, tuple(bad[:max_violations]))


# maps

@dataclass(frozen=True, eq=False)
class PresheafMap:
    source: FinitePresheaf
    target: FinitePresheaf
    components: tuple[np.ndarray, ...]

    def __post_init__(self):
        if (self.source.p, self.source.d) != (self.target.p, self.target.d):
            raise InputError("source and target must share p and d")
        for k, c in enumerate(self.components):
            c.setflags(write=False)
            if len(c) != len(self.source.levels[k]):
                raise InputError(f"component {k} has wrong length")
            if c.size and (c.min() < 0 or c.max() >= len(self.target.levels[k])):
                raise InputError(f"component {k} has out-of-range images")

    @classmethod
    def from_components(cls, source, target, comps) -> "PresheafMap":
        return cls(source, target, tuple(np.asarray(c, dtype=np.int64) for c in comps))

    def is_natural(self) -> bool:
        S, T = self.source.restrictions, self.target.restrictions
        for k, j in self.source.block_pairs():
            lhs = self.components[j][S[(k, j)]]
            rhs = T[(k, j)][:, self.components[k]]
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_injective(self) -> bool:
        return all(len(np.unique(c)) == len(c) for c in self.components)

    def is_surjective(self) -> bool:
        return all(
            len(np.unique(c)) == len(lev) for c, lev in zip(self.components, self.target.levels)
        )

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def then(self, other: "PresheafMap") -> "PresheafMap":
        """Composite: apply self, then other."""
        return PresheafMap(self.source, other.target, tuple(
            o[c] for c, o in zip(self.components, other.components)
        ))

    def __eq__(self, other):
        if not isinstance(other, PresheafMap):
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.components, other.components))

    __hash__ = None

    def key(self) -> tuple:
        return tuple(tuple(c.tolist()) for c in self.components)


def identity_map(F: FinitePresheaf) -> PresheafMap:
    return PresheafMap.from_components(F, F, [np.arange(len(lev)) for lev in F.levels])


# beta quotients

class BetaQuotient(NamedTuple):
    presheaf: FinitePresheaf
    witnesses: tuple[QuotientWitness, ...]
    projection: PresheafMap


def _effective_level(n, d: int) -> int:
    if n is None or n == float("inf"):
        return d
    if n < 0:
        raise InputError("beta level must be nonnegative")
    return min(int(n), d)


def quotient_presheaf(F: FinitePresheaf, witnesses: Sequence[QuotientWitness]) -> FinitePresheaf:
    """Presheaf induced on classes; raises if restrictions do not descend."""
    blocks = {}
    for k, j in F.block_pairs():
        w_k, w_j = witnesses[k], witnesses[j]
        R = F.restrictions[(k, j)]
        full = w_j.class_of[R]
        reps = np.array(w_k.representatives, dtype=np.int64)
        block = full[:, reps] if len(reps) else np.zeros((R.shape[0], 0), dtype=np.int64)
        if not np.array_equal(block[:, w_k.class_of], full):
            raise InternalConsistencyError(f"restriction ({k},{j}) does not descend to the quotient")
        blocks[(k, j)] = block
    levels = [[F.levels[k][r] for r in w.representatives] for k, w in enumerate(witnesses)]
    return FinitePresheaf.build(F.p, F.d, levels, blocks)


def beta_quotient(F: FinitePresheaf, n) -> BetaQuotient:
    """Identify sections with equal restrictions to every dimension <= n.

    ``n`` may be ``None`` or ``inf`` for the untruncated case.
    """
    m = _effective_level(n, F.d)
    witnesses = []
    for k in range(F.d + 1):
        profile = np.concatenate([F.restrictions[(k, j)] for j in range(m + 1)], axis=0)
        cols = np.ascontiguousarray(profile.T)
        labels = [row.tobytes() for row in cols]
        witnesses.append(QuotientWitness.from_labels(range(len(F.levels[k])), labels))
    quotient = quotient_presheaf(F, witnesses)
    proj = PresheafMap.from_components(F, quotient, [w.class_of for w in witnesses])
    return BetaQuotient(quotient, tuple(witnesses), proj)


def beta_map(phi: PresheafMap, n) -> PresheafMap:
    """beta_n applied to a map: class of x goes to class of phi(x)."""
    bs, bt = beta_quotient(phi.source, n), beta_quotient(phi.target, n)
    comps = []
    for k, c in enumerate(phi.components):
        ws, wt = bs.witnesses[k], bt.witnesses[k]
        img = wt.class_of[c]
        reps = np.array(ws.representatives, dtype=np.int64)
        comp = img[reps] if len(reps) else np.zeros(0, dtype=np.int64)
        if not np.array_equal(comp[ws.class_of], img):
            raise InternalConsistencyError("map does not descend to beta quotients")
        comps.append(comp)
    return PresheafMap.from_components(bs.presheaf, bt.presheaf, comps)


def tower_surjection(F: FinitePresheaf, n: int) -> PresheafMap:
    """The canonical map beta_{n+1} F -> beta_n F."""
    if n + 1 > F.d:
        raise InputError(f"tower step {n + 1} -> {n} needs n + 1 <= d = {F.d}")
    upper, lower = beta_quotient(F, n + 1), beta_quotient(F, n)
    comps = []
    for k in range(F.d + 1):
        wu, wl = upper.witnesses[k], lower.witnesses[k]
        comp = np.full(wu.n_classes, -1, dtype=np.int64)
        for x, c in enumerate(wu.class_of.tolist()):
            target = wl.class_of[x]
            if comp[c] == -1:
                comp[c] = target
            elif comp[c] != target:
                raise InternalConsistencyError("beta_{n+1} class splits under beta_n")
        comps.append(comp)
    return PresheafMap.from_components(upper.presheaf, lower.presheaf, comps)


# products

def product_presheaf(F: FinitePresheaf, G: FinitePresheaf) -> FinitePresheaf:
    """Levelwise product; the pair (x, y) at level k has index x*|G(k)| + y."""
    if (F.p, F.d) != (G.p, G.d):
        raise InputError("factors must share p and d")
    levels = [[f"({a},{b})" for a in fl for b in gl] for fl, gl in zip(F.levels, G.levels)]
    blocks = {}
    for k, j in F.block_pairs():
        RF, RG = F.restrictions[(k, j)], G.restrictions[(k, j)]
        blocks[(k, j)] = (RF[:, :, None] * len(G.levels[j]) + RG[:, None, :]).reshape(RF.shape[0], -1)
    return FinitePresheaf.build(F.p, F.d, levels, blocks)


def product_projections(F: FinitePresheaf, G: FinitePresheaf) -> tuple[PresheafMap, PresheafMap]:
    P = product_presheaf(F, G)
    first, second = [], []
    for k in range(F.d + 1):
        ng = len(G.levels[k])
        idx = np.arange(len(F.levels[k]) * ng)
        first.append(idx // ng if ng else idx)
        second.append(idx % ng if ng else idx)
    return PresheafMap.from_components(P, F, first), PresheafMap.from_components(P, G, second)


def diagonal(F: FinitePresheaf) -> PresheafMap:
    P = product_presheaf(F, F)
    return PresheafMap.from_components(F, P, [
        np.arange(len(lev)) * (len(lev) + 1) for lev in F.levels
    ])


def beta_product_check(F: FinitePresheaf, G: FinitePresheaf, n) -> bool:
    """Is the canonical map beta_n(F x G) -> beta_n F x beta_n G an isomorphism?"""
    bp = beta_quotient(product_presheaf(F, G), n)
    bf, bg = beta_quotient(F, n), beta_quotient(G, n)
    target = product_presheaf(bf.presheaf, bg.presheaf)
    comps = []
    for k in range(F.d + 1):
        ng = len(G.levels[k])
        idx = np.arange(len(F.levels[k]) * ng)
        img = bf.witnesses[k].class_of[idx // max(ng, 1)] * len(bg.presheaf.levels[k]) \
            + bg.witnesses[k].class_of[idx % max(ng, 1)] if ng else idx
        w = bp.witnesses[k]
        reps = np.array(w.representatives, dtype=np.int64)
        comp = img[reps] if len(reps) else np.zeros(0, dtype=np.int64)
        if not np.array_equal(comp[w.class_of], img):
            return False
        comps.append(comp)
    phi = PresheafMap.from_components(bp.presheaf, target, comps)
    return phi.is_natural() and phi.is_bijective()


def representable_map(p: int, d: int, L: FpMatrix) -> PresheafMap:
    """hom(-, F^r) -> hom(-, F^s) given by postcomposition with L: F^r -> F^s."""
    src, tgt = representable(p, d, L.cols), representable(p, d, L.rows)
    comps = [compose_table(p, L.rows, L.cols, k)[L.code] for k in range(d + 1)]
    return PresheafMap.from_components(src, tgt, comps)


# End(F^d)-sets and the induction / evaluation adjunction

@dataclass(frozen=True, eq=False)
class EndMSet:
    """A right End(F_p^d)-set; ``action[a, s]`` is ``s . a``."""

    p: int
    d: int
    carrier: tuple[str, ...]
    action: np.ndarray

    def __post_init__(self):
        self.action.setflags(write=False)
        shape = (count_matrices(self.p, self.d, self.d), len(self.carrier))
        if self.action.shape != shape:
            raise InputError(f"action must have shape {shape}")

    def act(self, s: int, a: FpMatrix) -> int:
        return int(self.action[a.code, s])

    def check_action(self) -> bool:
        p, d = self.p, self.d
        n = len(self.carrier)
        if not np.array_equal(self.action[identity_code(p, d)], np.arange(n)):
            return False
        table = compose_table(p, d, d, d)
        lhs = self.action[table]  # s . (ab)
        rhs = self.action[np.arange(table.shape[1])[None, :, None], self.action[:, None, :]]
        return np.array_equal(lhs, rhs)


def e_d_evaluate(F: FinitePresheaf) -> EndMSet:
    """Evaluation at F^d with s . a = a^*(s)."""
    return EndMSet(F.p, F.d, F.levels[F.d], np.array(F.restrictions[(F.d, F.d)]))


class _Induced(NamedTuple):
    presheaf: FinitePresheaf
    witnesses: tuple[QuotientWitness, ...]


def _induce(S: EndMSet) -> _Induced:
    p, d = S.p, S.d
    n_s = len(S.carrier)
    n_end = count_matrices(p, d, d)
    witnesses = []
    for k in range(d + 1):
        nf = count_matrices(p, d, k)
        comp = compose_table(p, d, d, k)  # (m, f) -> m o f
        m_idx, s_idx, f_idx = np.meshgrid(np.arange(n_end), np.arange(n_s), np.arange(nf), indexing="ij")
        left = S.action[m_idx, s_idx] * nf + f_idx
        right = s_idx * nf + comp[m_idx, f_idx]
        ambient = [(s, f) for s in range(n_s) for f in range(nf)]
        witnesses.append(QuotientWitness.from_pairs(ambient, left, right))
    blocks = {}
    for k in range(d + 1):
        wk = witnesses[k]
        for j in range(d + 1):
            comp = compose_table(p, d, k, j)  # (f, A) -> f o A
            nfj = count_matrices(p, d, j)
            cols = []
            for r in wk.representatives:
                s, f = wk.ambient[r]
                cols.append(witnesses[j].class_of[s * nfj + comp[f]])
            blocks[(k, j)] = np.array(cols, dtype=np.int64).T.reshape(count_matrices(p, k, j), len(cols))
    levels = []
    for k, w in enumerate(witnesses):
        levels.append([
            f"({S.carrier[w.ambient[r][0]]}, {FpMatrix.from_code(p, d, k, w.ambient[r][1])})"
            for r in w.representatives
        ])
    return _Induced(FinitePresheaf.build(p, d, levels, blocks), tuple(witnesses))


def i_d_induce(S: EndMSet) -> FinitePresheaf:
    """S x_{End(F^d)} hom(-, F^d), computed by union-find on the defining relations."""
    return _induce(S).presheaf


def counit(F: FinitePresheaf) -> PresheafMap:
    """The canonical map i_d e_d F -> F, (s, f) |-> f^*(s)."""
    ind = _induce(e_d_evaluate(F))
    d = F.d
    comps = []
    for k, w in enumerate(ind.witnesses):
        R = F.restrictions[(d, k)]
        img = np.array([R[f, s] for s, f in w.ambient], dtype=np.int64)
        reps = np.array(w.representatives, dtype=np.int64)
        comp = img[reps] if len(reps) else np.zeros(0, dtype=np.int64)
        if not np.array_equal(comp[w.class_of], img):
            raise InternalConsistencyError("counit is not well defined")
        comps.append(comp)
    return PresheafMap.from_components(ind.presheaf, F, comps)


def unit_section(S: EndMSet) -> np.ndarray:
    """s |-> class of (s, id) in (i_d S)(F^d)."""
    ind = _induce(S)
    nf = count_matrices(S.p, S.d, S.d)
    ident = identity_code(S.p, S.d)
    return ind.witnesses[S.d].class_of[np.arange(len(S.carrier)) * nf + ident]


def beta_endmset(S: EndMSet, n) -> tuple[EndMSet, QuotientWitness]:
    """Identify s, s' when s . a = s' . a for every a of rank <= n."""
    m = _effective_level(n, S.d)
    low = np.flatnonzero(rank_array(S.p, S.d, S.d) <= m)
    cols = np.ascontiguousarray(S.action[low].T)
    w = QuotientWitness.from_labels(range(len(S.carrier)), [c.tobytes() for c in cols])
    reps = np.array(w.representatives, dtype=np.int64)
    full = w.class_of[S.action]
    act = full[:, reps] if len(reps) else np.zeros((S.action.shape[0], 0), dtype=np.int64)
    if not np.array_equal(act[:, w.class_of], full):
        raise InternalConsistencyError("action does not descend to the beta quotient")
    return EndMSet(S.p, S.d, tuple(S.carrier[r] for r in w.representatives), act), w


def id_beta_commute_check(S: EndMSet, n) -> bool:
    """Is the canonical comparison i_d(beta_n S) -> beta_n(i_d S) an isomorphism?

    Both sides are quotients of the pairs (s, f); the comparison is the
    relation they induce, which must be the graph of a natural bijection.
    """
    p, d = S.p, S.d
    bS, wS = beta_endmset(S, n)
    left = _induce(bS)
    middle = _induce(S)
    right = beta_quotient(middle.presheaf, n)
    comps = []
    for k in range(d + 1):
        nf = count_matrices(p, d, k)
        wl, wm = left.witnesses[k], middle.witnesses[k]
        l_of = np.array([wl.class_of[wS.class_of[s] * nf + f] for s, f in wm.ambient], dtype=np.int64)
        r_of = right.witnesses[k].class_of[wm.class_of]
        comp = np.full(wl.n_classes, -1, dtype=np.int64)
        for a, b in zip(l_of.tolist(), r_of.tolist()):
            if comp[a] == -1:
                comp[a] = b
            elif comp[a] != b:
                return False
        if (comp < 0).any():
            return False
        comps.append(comp)
    phi = PresheafMap.from_components(left.presheaf, right.presheaf, comps)
    return phi.is_natural() and phi.is_bijective()


# map search

def _check_level_cap(F: FinitePresheaf, cap: int):
    for k, lev in enumerate(F.levels):
        if len(lev) > cap:
            raise CapExceededError(f"level {k} set", len(lev), cap)


class _Search:
    """Backtracking over natural maps P -> F with forward propagation.

    Assigning ``x -> y`` at level k forces ``A^*x -> A^*y`` for every A out
    of F^k, so choosing images of level-d sections determines the rest.
    """

    def __init__(self, P, F, injective=False, candidates=None):
        self.P, self.F = P, F
        self.injective = injective
        self.candidates = candidates

    def propagate(self, state, k, x, y) -> bool:
        assign, used = state
        stack = [(k, x, y)]
        P, F = self.P, self.F
        while stack:
            k, x, y = stack.pop()
            cur = assign[k][x]
            if cur == y:
                continue
            if cur != -1:
                return False
            if self.injective and used[k][y]:
                return False
            if self.candidates is not None and not self.candidates[k][x][y]:
                return False
            assign[k][x] = y
            used[k][y] = True
            for j in range(P.d + 1):
                xs = P.restrictions[(k, j)][:, x]
                ys = F.restrictions[(k, j)][:, y]
                pairs = np.unique(xs * max(len(F.levels[j]), 1) + ys)
                nf = max(len(F.levels[j]), 1)
                for code in pairs.tolist():
                    stack.append((j, code // nf, code % nf))
        return True

    def run(self, limit=None) -> list[tuple[np.ndarray, ...]]:
        P, F = self.P, self.F
        if any(len(a) and not len(b) for a, b in zip(P.levels, F.levels)):
            return []
        assign = [np.full(len(lev), -1, dtype=np.int64) for lev in P.levels]
        used = [np.zeros(len(lev), dtype=bool) for lev in F.levels]
        order = [(k, x) for k in range(P.d, -1, -1) for x in range(len(P.levels[k]))]
        found: list[tuple[np.ndarray, ...]] = []

        def recurse(state, pos):
            if limit is not None and len(found) >= limit:
                return
            assign, used = state
            while pos < len(order) and assign[order[pos][0]][order[pos][1]] != -1:
                pos += 1
            if pos == len(order):
                found.append(tuple(a.copy() for a in assign))
                return
            k, x = order[pos]
            for y in range(len(F.levels[k])):
                trial = ([a.copy() for a in assign], [u.copy() for u in used])
                if self.propagate(trial, k, x, y):
                    recurse(trial, pos + 1)

        recurse((assign, used), 0)
        return found


def find_presheaf_maps(P: FinitePresheaf, F: FinitePresheaf, limit=None,
                       cap: int = DEFAULT_LEVEL_CAP) -> list[PresheafMap]:
    """All natural maps P -> F (or the first ``limit`` of them)."""
    if (P.p, P.d) != (F.p, F.d):
        raise InputError("presheaves must share p and d")
    _check_level_cap(P, cap)
    _check_level_cap(F, cap)
    out = []
    for comps in _Search(P, F).run(limit):
        phi = PresheafMap(P, F, comps)
        if not phi.is_natural():
            raise InternalConsistencyError("search produced a non-natural map")
        out.append(phi)
    return out


def _refine_colors(presheaves: Sequence[FinitePresheaf]) -> list[list[np.ndarray]]:
    """Joint colour refinement by ordered restriction profiles."""
    d = presheaves[0].d
    colors = [[np.full(len(lev), k, dtype=np.int64) for k, lev in enumerate(F.levels)] for F in presheaves]
    n_colors = d + 1
    while True:
        palette: dict = {}
        new = []
        for F, col in zip(presheaves, colors):
            per_level = []
            for k in range(d + 1):
                parts = [col[k][None, :]] + [col[j][F.restrictions[(k, j)]] for j in range(d + 1)]
                sig = np.ascontiguousarray(np.concatenate(parts, axis=0).T)
                per_level.append(np.array(
                    [palette.setdefault(row.tobytes(), len(palette)) for row in sig], dtype=np.int64
                ))
            new.append(per_level)
        colors = new
        if len(palette) == n_colors:
            return colors
        n_colors = len(palette)


def presheaf_iso_check(F: FinitePresheaf, G: FinitePresheaf,
                       cap: int = DEFAULT_LEVEL_CAP) -> tuple[bool, PresheafMap | None]:
    """Search for a natural levelwise bijection F -> G."""
    if (F.p, F.d) != (G.p, G.d):
        raise InputError("presheaves must share p and d")
    _check_level_cap(F, cap)
    _check_level_cap(G, cap)
    if F.sizes != G.sizes:
        return False, None
    cf, cg = _refine_colors([F, G])
    for a, b in zip(cf, cg):
        if sorted(a.tolist()) != sorted(b.tolist()):
            return False, None
    candidates = [a[:, None] == b[None, :] for a, b in zip(cf, cg)]
    found = _Search(F, G, injective=True, candidates=candidates).run(limit=1)
    if not found:
        return False, None
    phi = PresheafMap(F, G, found[0])
    if not (phi.is_natural() and phi.is_bijective()):
        raise InternalConsistencyError("isomorphism search produced an invalid witness")
    return True, phi


def endmset_maps(S: EndMSet, T: EndMSet, limit=None) -> list[tuple[int, ...]]:
    """All equivariant maps S -> T, as image tuples."""
    if (S.p, S.d) != (T.p, T.d):
        raise InputError("End-sets must share p and d")
    n = len(S.carrier)
    if n and not len(T.carrier):
        return []
    found: list[tuple[int, ...]] = []

    def propagate(assign, s, t) -> bool:
        stack = [(s, t)]
        while stack:
            s, t = stack.pop()
            if assign[s] == t:
                continue
            if assign[s] != -1:
                return False
            assign[s] = t
            for a, b in set(zip(S.action[:, s].tolist(), T.action[:, t].tolist())):
                stack.append((a, b))
        return True

    def recurse(assign, pos):
        if limit is not None and len(found) >= limit:
            return
        while pos < n and assign[pos] != -1:
            pos += 1
        if pos == n:
            found.append(tuple(assign))
            return
        for t in range(len(T.carrier)):
            trial = list(assign)
            if propagate(trial, pos, t):
                recurse(trial, pos + 1)

    recurse([-1] * n, 0)
    return found


def adjunction_check(S: EndMSet, F: FinitePresheaf) -> bool:
    """Enumerate Hom(S, e_d F) and Hom(i_d S, F) and test the canonical bijection."""
    if (S.p, S.d) != (F.p, F.d):
        raise InputError("End-set and presheaf must share p and d")
    lhs = endmset_maps(S, e_d_evaluate(F))
    induced = i_d_induce(S)
    rhs = find_presheaf_maps(induced, F)
    eta = unit_section(S)
    images = [tuple(phi.components[S.d][eta].tolist()) for phi in rhs]
    return len(set(images)) == len(images) and set(images) == set(lhs)

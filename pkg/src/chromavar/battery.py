"""The verification battery: every presheaf-level isomorphism the library
can certify, run over a configurable set of groups, complexes and fixtures.
"""

from __future__ import annotations

import itertools
import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .equivariant import GComplex, hkr_rank, hurewicz_model_check, subdivide_graph
from .errors import InputError
from .formats import complex_from_json, presheaf_from_json
from .group_core import (
    DEFAULT_ENUM_CAP,
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    alternating_group,
    cyclic_group,
    dihedral_group,
    elem_abelian_subgroups,
    load_group,
    quaternion_group,
    symmetric_group,
)
from .linear import FpMatrix
from .presheaf_core import (
    DEFAULT_LEVEL_CAP,
    FinitePresheaf,
    PresheafMap,
    adjunction_check,
    beta_map,
    beta_product_check,
    beta_quotient,
    check_functoriality,
    counit,
    diagonal,
    e_d_evaluate,
    id_beta_commute_check,
    product_projections,
    representable,
    representable_map,
    tower_surjection,
)
from .quillen import compare_gl_beta_witness, quillen_iso_witness, rep_presheaf

BATTERY_ENV = "CHROMAVAR_BATTERY_DIR"
ADJUNCTION_CARRIER_LIMIT = 8


@dataclass(frozen=True)
class Caps:
    order: int = DEFAULT_ORDER_CAP
    enum: int = DEFAULT_ENUM_CAP
    level: int = DEFAULT_LEVEL_CAP

    def __post_init__(self):
        if min(self.order, self.enum, self.level) <= 0:
            raise InputError("caps must be positive")


@dataclass(frozen=True)
class RunConfig:
    p: int | None = None
    n: int | None = None
    d: int | None = None
    caps: Caps = Caps()
    group_paths: tuple[str, ...] = ()
    presheaf_paths: tuple[str, ...] = ()
    fmt: str = "json"

    def __post_init__(self):
        if self.n is not None and self.n < 0:
            raise InputError("n must be nonnegative")
        if self.d is not None and self.d < 0:
            raise InputError("d must be nonnegative")
        if self.n is not None and self.d is not None and self.n > self.d:
            raise InputError("need 0 <= n <= d")
        if self.fmt not in ("json", "tsv"):
            raise InputError("format must be json or tsv")


@dataclass
class CheckResult:
    name: str
    statement: str
    inputs: dict
    verdict: bool
    witness: Any = None
    wall_time: float = 0.0

    def sort_key(self):
        i = self.inputs
        return (str(i.get("group", "")), i.get("p", -1), i.get("n", -1), i.get("d", -1))

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "name": self.name,
            "statement": self.statement,
            "inputs": self.inputs,
            "verdict": "pass" if self.verdict else "fail",
            "witness": self.witness,
        }
        if timings:
            out["wall_time"] = round(self.wall_time, 6)
        return out


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.verdict for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.verdict]

    def ordered(self) -> list[CheckResult]:
        return sorted(self.checks, key=CheckResult.sort_key)

    def to_json(self, timings: bool = False) -> str:
        body = {
            "summary": {
                "total": len(self.checks),
                "passed": sum(c.verdict for c in self.checks),
                "failed": len(self.failures()),
            },
            "checks": [c.to_json(timings) for c in self.ordered()],
        }
        return json.dumps(body, indent=2, sort_keys=True) + "\n"

    def to_tsv(self, timings: bool = False) -> str:
        cols = ["group", "p", "n", "d", "name", "verdict", "statement", "inputs", "witness"]
        if timings:
            cols.append("wall_time")
        lines = ["\t".join(cols)]
        for c in self.ordered():
            i = c.inputs
            row = [str(i.get("group", "")), str(i.get("p", "")), str(i.get("n", "")), str(i.get("d", "")),
                   c.name, "pass" if c.verdict else "fail", c.statement,
                   json.dumps(i, sort_keys=True, separators=(",", ":")),
                   json.dumps(c.witness, sort_keys=True, separators=(",", ":"))]
            if timings:
                row.append(f"{c.wall_time:.6f}")
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"


# battery contents

@dataclass
class BatteryGroup:
    name: str
    group: FiniteGroup
    primes: tuple[int, ...]
    levels: dict  # p -> d
    complexes: list[tuple[str, GComplex]]


def _sign_path(G: FiniteGroup) -> GComplex:
    """A path a - m - c with odd permutations exchanging the ends."""
    gens = []
    for g in G.generators:
        odd = (G.permutations.shape[1] - len(_cycles(G.permutations[g]))) % 2
        gens.append([2, 1, 0] if odd else [0, 1, 2])
    return GComplex.from_generator_action(G, ["a", "m", "c"], [(0, 1), (1, 2)], gens)


def _cycles(perm) -> list[list[int]]:
    seen, out = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        cyc, x = [], s
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = int(perm[x])
        out.append(cyc)
    return out


def default_battery() -> list[BatteryGroup]:
    z2, z3, s3 = cyclic_group(2), cyclic_group(3), symmetric_group(3)
    d4, q8, a4 = dihedral_group(4), quaternion_group(), alternating_group(4)
    square = subdivide_graph(d4, ["1", "2", "3", "4"], [(0, 1), (1, 2), (2, 3), (0, 3)], d4.permutations)
    return [
        BatteryGroup("Z2", z2, (2,), {2: 2}, [
            ("pt", GComplex.point(z2)), ("swap", GComplex.from_permutation_action(z2))]),
        BatteryGroup("Z3", z3, (3,), {3: 2}, [("pt", GComplex.point(z3))]),
        BatteryGroup("S3", s3, (2, 3), {2: 2, 3: 2}, [
            ("pt", GComplex.point(s3)),
            ("three_points", GComplex.from_permutation_action(s3)),
            ("sign_path", _sign_path(s3)),
        ]),
        BatteryGroup("D4", d4, (2,), {2: 2}, [("pt", GComplex.point(d4)), ("square", square)]),
        BatteryGroup("Q8", q8, (2,), {2: 2}, [("pt", GComplex.point(q8))]),
        BatteryGroup("A4", a4, (2, 3), {2: 3, 3: 2}, [("pt", GComplex.point(a4))]),
    ]


def _default_primes(G: FiniteGroup) -> tuple[int, ...]:
    return tuple(q for q in (2, 3) if G.order % q == 0) or (2,)


def _levels_field(data: dict, where) -> dict:
    """Optional ``"battery_d": {"<p>": d}``: primes to test and their truncation."""
    raw = data.get("battery_d", {})
    try:
        return {int(p): int(d) for p, d in raw.items()}
    except (AttributeError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: bad 'battery_d' field") from exc


def load_battery_dir(path, caps: Caps = Caps()) -> list[BatteryGroup]:
    """Groups from ``<dir>/*.json``; complexes from ``<dir>/complexes/*.json``,
    each naming its group file stem under ``"group"``."""
    root = Path(path)
    if not root.is_dir():
        raise InputError(f"battery directory {root} does not exist")
    entries = {}
    for f in sorted(root.glob("*.json")):
        G = load_group(f, cap=caps.order)
        levels = _levels_field(json.loads(f.read_text()), f)
        primes = tuple(sorted(levels)) or _default_primes(G)
        entries[f.stem] = BatteryGroup(f.stem, G, primes, levels, [("pt", GComplex.point(G))])
    cdir = root / "complexes"
    for f in sorted(cdir.glob("*.json")) if cdir.is_dir() else []:
        data = json.loads(f.read_text())
        owner = entries.get(data.get("group"))
        if owner is None:
            raise InputError(f"{f}: unknown group {data.get('group')!r}")
        owner.complexes.append((f.stem, complex_from_json(owner.group, data)))
    return list(entries.values())


def resolve_battery(config: RunConfig) -> list[BatteryGroup]:
    if config.group_paths:
        out = []
        for path in config.group_paths:
            G = load_group(path, cap=config.caps.order)
            name = G.name or Path(path).stem
            out.append(BatteryGroup(name, G, _default_primes(G), {}, [("pt", GComplex.point(G))]))
        return out
    env = os.environ.get(BATTERY_ENV)
    if env:
        return load_battery_dir(env, config.caps)
    return default_battery()


# independent oracles

def burnside_rank(G: FiniteGroup, p: int, n: int, X: GComplex) -> int:
    """Orbit count of (commuting p-power tuple, fixed component) pairs by
    Burnside's lemma, enumerating tuples by brute force."""
    def p_power(x):
        m = G.element_orders[x]
        while m % p == 0:
            m //= p
        return m == 1

    elems = [x for x in range(G.order) if p_power(x)]
    tuples = [t for t in itertools.product(elems, repeat=n)
              if all(G.mul(a, b) == G.mul(b, a) for a in t for b in t)]
    total = 0
    for t in tuples:
        fixed_v = [v for v in range(len(X.vertices)) if all(X.action[a, v] == v for a in t)]
        parent = {v: v for v in fixed_v}

        def root(v):
            while parent[v] != v:
                v = parent[v]
            return v

        for u, v in X.edges:
            if u in parent and v in parent:
                parent[root(u)] = root(v)
        comps = {root(v) for v in fixed_v}
        for g in range(G.order):
            if any(G.mul(G.mul(g, a), G.inverse[g]) != a for a in t):
                continue
            total += sum(1 for c in comps if root(int(X.action[g, c])) == c)
    frac = Fraction(total, G.order)
    if frac.denominator != 1:
        raise AssertionError("Burnside count is not an integer")
    return int(frac)


# checks

def _iso_witness(phi: PresheafMap | None):
    if phi is None:
        return None
    return {"levels": [c.tolist() for c in phi.components]}


def _beta_suite(F: FinitePresheaf, n: int) -> tuple[bool, dict]:
    """Idempotence, surjectivity/bijectivity of the projection, and the tower triangle."""
    failures = []
    bq = beta_quotient(F, n)
    again = beta_quotient(bq.presheaf, n)
    if not all(w.n_classes == len(w.ambient) for w in again.witnesses):
        failures.append("beta_n is not idempotent")
    proj = bq.projection
    if not (proj.is_natural() and proj.is_surjective()):
        failures.append("projection is not a natural surjection")
    for k in range(min(n, F.d) + 1):
        if len(np.unique(proj.components[k])) != len(proj.components[k]):
            failures.append(f"projection not injective at level {k} <= n")
    if not check_functoriality(bq.presheaf).ok:
        failures.append("beta_n F is not functorial")
    if n + 1 <= F.d:
        step = tower_surjection(F, n)
        upper = beta_quotient(F, n + 1).projection
        if not (step.is_natural() and step.is_surjective()):
            failures.append("tower map is not a natural surjection")
        if upper.then(step) != proj:
            failures.append("tower triangle does not commute")
    return not failures, {"failures": failures, "sizes": bq.presheaf.sizes}


def _preservation(p: int, d: int, n: int) -> tuple[bool, dict]:
    failures = []
    maps = {}
    if d >= 1:
        maps["inclusion F^1 -> F^2"] = (representable_map(p, d, FpMatrix.from_rows(p, [[1], [0]])), "inj")
        maps["projection F^2 -> F^1"] = (representable_map(p, d, FpMatrix.from_rows(p, [[1, 0]])), "surj")
    R1 = representable(p, d, 1)
    maps["diagonal hom(-,F^1)"] = (diagonal(R1), "inj")
    maps["product projection"] = (product_projections(R1, representable(p, d, 2))[0], "surj")
    for label, (phi, kind) in maps.items():
        bphi = beta_map(phi, n)
        ok = bphi.is_natural() and (bphi.is_injective() if kind == "inj" else bphi.is_surjective())
        if not ok:
            failures.append(label)
    return not failures, {"failures": failures}


class _Runner:
    def __init__(self, report: VerificationReport):
        self.report = report

    def run(self, name: str, statement: str, inputs: dict, fn: Callable[[], Any]):
        t0 = time.perf_counter()
        out = fn()
        verdict, witness = out if isinstance(out, tuple) else (out, None)
        self.report.checks.append(
            CheckResult(name, statement, inputs, bool(verdict), witness, time.perf_counter() - t0)
        )


def _functoriality_check(F: FinitePresheaf):
    rep = check_functoriality(F)
    return rep.ok, None if rep.ok else {"violations": [v.describe() for v in rep.violations]}


def verify_battery(config: RunConfig = RunConfig(), battery: list[BatteryGroup] | None = None) -> VerificationReport:
    report = VerificationReport()
    run = _Runner(report).run
    if battery is None:
        battery = resolve_battery(config)
    caps = config.caps

    def d_for(entry, p):
        return config.d if config.d is not None else entry.levels.get(p, 2)

    def ns_for(d):
        return [config.n] if config.n is not None else list(range(min(2, d) + 1))

    for path in config.presheaf_paths:
        F = presheaf_from_json(path)
        base = {"group": f"presheaf:{Path(path).stem}", "p": F.p, "d": F.d}
        run("functoriality", "contravariant functoriality", base, lambda F=F: _functoriality_check(F))

    seen_pd = set()
    for entry in battery:
        G = entry.group
        primes = (config.p,) if config.p is not None else entry.primes
        run("group_axioms", "Cayley table is a group generated by its generators",
            {"group": entry.name}, G.check_axioms)
        for p in primes:
            d = d_for(entry, p)
            base = {"group": entry.name, "p": p, "d": d}
            seen_pd.add((p, d))

            def subgroups_ok(G=G, p=p):
                subs = elem_abelian_subgroups(G, p)
                keys = {E.elements for E in subs}
                closed = all(
                    tuple(sorted(G.conj(g, x) for x in E.elements)) in keys
                    for E in subs for g in range(G.order)
                )
                return all(E.check(G) for E in subs) and closed, {"count": len(subs)}

            run("elementary_abelian_subgroups", "subgroups valid and closed under conjugation", base, subgroups_ok)
            rep = rep_presheaf(G, p, d, caps.enum)
            run("rep_functoriality", "Rep(-,G) is a presheaf", base, lambda rep=rep: _functoriality_check(rep))

            def quillen(G=G, p=p, d=d):
                ok, phi = quillen_iso_witness(G, p, d, caps.level)
                return ok, _iso_witness(phi)

            run("quillen_coend_iso", "coend over A_p(G) of the point functor = Rep(-,G)", base, quillen)
            run("counit_mono", "counit i_d e_d F -> F is a monomorphism", {**base, "presheaf": "Rep"},
                lambda rep=rep: counit(rep).is_injective())
            if len(rep.levels[d]) <= ADJUNCTION_CARRIER_LIMIT:
                run("adjunction", "Hom(S, e_d F) = Hom(i_d S, F)", {**base, "presheaf": "Rep"},
                    lambda rep=rep: adjunction_check(e_d_evaluate(rep), rep))
            for n in ns_for(d):
                nb = {**base, "n": n}
                run("beta_suite", "beta_n idempotent, projection onto, tower commutes",
                    {**nb, "presheaf": "Rep"}, lambda rep=rep, n=n: _beta_suite(rep, n))
                run("beta_product", "beta_n(F x G) = beta_n F x beta_n G",
                    {**nb, "presheaf": "Rep x hom(-,F^1)"},
                    lambda rep=rep, n=n, p=p, d=d: beta_product_check(rep, representable(p, d, 1), n))
                run("id_beta_commute", "i_d(beta_n S) = beta_n(i_d S)", {**nb, "presheaf": "e_d Rep"},
                    lambda rep=rep, n=n: id_beta_commute_check(e_d_evaluate(rep), n))
                if n >= 1:
                    def gl(G=G, p=p, n=n, d=d):
                        ok, phi = compare_gl_beta_witness(G, p, n, d, caps.level)
                        return ok, _iso_witness(phi)

                    run("green_leary_colimit", "colim over A_n(G) of hom(-,W) = beta_n Rep(-,G)", nb, gl)
                for cname, X in entry.complexes:
                    cb = {**nb, "complex": cname}
                    run("borel_model", "coend of F_X at F^n = Y_n/G as Aut(F^n)-sets", cb,
                        lambda G=G, p=p, n=n, X=X: hurewicz_model_check(G, p, n, X, caps.enum))

                    def hkr(G=G, p=p, n=n, X=X):
                        rank, oracle = hkr_rank(G, p, n, X, caps.enum), burnside_rank(G, p, n, X)
                        return rank == oracle, {"rank": rank, "burnside": oracle}

                    run("hkr_rank", "orbit count of Fix_n pairs = Burnside count", cb, hkr)

    for p, d in sorted(seen_pd):
        base = {"group": "(representables)", "p": p, "d": d}
        for r in range(3):
            R = representable(p, d, r)
            rb = {**base, "presheaf": f"hom(-,F^{r})"}
            run("counit_mono", "counit i_d e_d F -> F is a monomorphism", rb, lambda R=R: counit(R).is_injective())
            if len(R.levels[d]) <= ADJUNCTION_CARRIER_LIMIT:
                run("adjunction", "Hom(S, e_d F) = Hom(i_d S, F)", rb,
                    lambda R=R: adjunction_check(e_d_evaluate(R), R))
            for n in ns_for(d):
                run("beta_suite", "beta_n idempotent, projection onto, tower commutes", {**rb, "n": n},
                    lambda R=R, n=n: _beta_suite(R, n))
                if n >= 1 or r == 0:
                    run("beta_representable", "beta_n hom(-,W) = hom(-,W)", {**rb, "n": n},
                        lambda R=R, n=n: bool(beta_quotient(R, n).projection.is_bijective()))
        for n in ns_for(d):
            run("beta_preservation", "beta_n preserves injections and surjections", {**base, "n": n},
                lambda p=p, d=d, n=n: _preservation(p, d, n))
    return report

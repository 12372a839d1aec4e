"""Command-line driver.

Every subcommand prints a deterministic JSON document (or TSV table) on
stdout.  Exit status: 0 on success, 1 when a verification fails, 2 on bad
input or an exceeded cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .battery import Caps, RunConfig, verify_battery
from .equivariant import GComplex, fx_functor, hkr_rank, hurewicz_model_check, yn_mod_g, yn_set
from .errors import CapExceededError, ChromavarError, InputError
from .formats import complex_from_json, presheaf_from_json, presheaf_to_json
from .group_core import (
    FiniteGroup,
    elem_abelian_subgroups,
    is_prime,
    load_group,
)
from .presheaf_core import beta_quotient
from .quillen import (
    build_green_leary_category,
    build_quillen_category,
    coend_presheaf,
    compare_gl_beta,
    gl_colimit_presheaf,
    rep_presheaf,
)

COMMANDS = ("group-info", "subgroups", "rep", "quillen-cat", "green-leary", "beta",
            "coend", "gl-colimit", "yn", "hkr-rank", "verify")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", action="append", default=[], help="group JSON file (repeatable for verify)")
    common.add_argument("--complex", help="G-complex JSON file")
    common.add_argument("--presheaf", action="append", default=[], help="presheaf JSON file")
    common.add_argument("-p", type=int, help="prime")
    common.add_argument("-n", type=int, help="level n")
    common.add_argument("-d", type=int, help="truncation dimension d")
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--cap-order", type=int, default=Caps.order)
    common.add_argument("--cap-enum", type=int, default=Caps.enum)
    common.add_argument("--cap-level", type=int, default=Caps.level)
    common.add_argument("--timings", action="store_true", help="include wall times (verify only)")

    parser = argparse.ArgumentParser(prog="chromavar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "group-info": "order, generators, element orders and center",
        "subgroups": "elementary abelian p-subgroups",
        "rep": "Rep(F^k, G) for k = 0..n",
        "quillen-cat": "the Quillen category A_p(G)",
        "green-leary": "the Green-Leary category A_n(G)",
        "beta": "beta_n of a presheaf file or of Rep(-, G)",
        "coend": "coend of F_X (or the constant point) over A_p(G)",
        "gl-colimit": "colimit over A_n(G) compared with beta_n Rep(-, G)",
        "yn": "the Y_n model and its G-orbits",
        "hkr-rank": "orbit count of commuting p-power tuples with fixed components",
        "verify": "run the verification battery",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


# helpers

def _caps(args) -> Caps:
    try:
        return Caps(args.cap_order, args.cap_enum, args.cap_level)
    except InputError as exc:
        raise InputError(f"--cap-*: {exc}") from None


def _one_group(args) -> FiniteGroup:
    if not args.group:
        raise InputError("--group is required")
    if len(args.group) > 1:
        raise InputError("--group: this command takes a single group")
    return load_group(args.group[0], cap=args.cap_order)


def _prime(args) -> int:
    if args.p is None:
        raise InputError("-p is required")
    if not is_prime(args.p):
        raise InputError(f"-p: {args.p} is not prime")
    return args.p


def _level(value, flag: str, default=None) -> int:
    if value is None:
        if default is None:
            raise InputError(f"{flag} is required")
        return default
    if value < 0:
        raise InputError(f"{flag} must be nonnegative")
    return value


def _complex(args, G: FiniteGroup) -> GComplex:
    if args.complex is None:
        return GComplex.point(G)
    return complex_from_json(G, args.complex)


def _elements(G: FiniteGroup, xs) -> list[str]:
    return [G.labels[int(x)] for x in xs]


def _presheaf_summary(F, with_data: bool = False) -> dict:
    out = {"p": F.p, "d": F.d, "sizes": F.sizes, "levels": [list(lev) for lev in F.levels]}
    if with_data:
        out["presheaf"] = presheaf_to_json(F)
    return out


# subcommands

def cmd_group_info(args) -> dict:
    G = _one_group(args)
    return {
        "name": G.name,
        "order": G.order,
        "generators": _elements(G, G.generators),
        "elements": list(G.labels),
        "element_orders": {G.labels[x]: int(G.element_orders[x]) for x in range(G.order)},
        "center": _elements(G, sorted(G.center)),
    }


def cmd_subgroups(args) -> dict:
    G = _one_group(args)
    p = _prime(args)
    subs = elem_abelian_subgroups(G, p)
    return {
        "group": G.name, "p": p, "count": len(subs),
        "subgroups": [
            {"rank": E.rank, "basis": _elements(G, E.basis), "elements": _elements(G, E.elements)}
            for E in subs
        ],
    }


def cmd_rep(args) -> dict:
    G = _one_group(args)
    p = _prime(args)
    n = _level(args.n, "-n", args.d if args.d is not None else None)
    F = rep_presheaf(G, p, n, args.cap_enum)
    return {"group": G.name, "p": p, "n": n, "sizes": F.sizes,
            "representatives": [list(lev) for lev in F.levels]}


def _category_json(C) -> dict:
    G = C.group
    objects = [_elements(G, E.elements) for E in C.objects]
    morphisms = []
    for (i, j), maps in sorted(C.morphisms.items()):
        for f in maps:
            morphisms.append({
                "source": i, "target": j,
                "map": {G.labels[x]: G.labels[y] for x, y in zip(C.objects[i].elements, f)},
            })
    return {"name": C.name, "objects": objects, "n_morphisms": C.n_morphisms(),
            "axioms_ok": C.check_axioms(), "morphisms": morphisms}


def cmd_quillen_cat(args) -> dict:
    G = _one_group(args)
    return _category_json(build_quillen_category(G, _prime(args)))


def cmd_green_leary(args) -> dict:
    G = _one_group(args)
    p = _prime(args)
    n = _level(args.n, "-n")
    C = build_green_leary_category(G, p, n)
    out = _category_json(C)
    out["contains_quillen"] = build_quillen_category(G, p).is_subcategory_of(C)
    return out


def cmd_beta(args) -> dict:
    n = _level(args.n, "-n")
    if args.presheaf:
        if len(args.presheaf) > 1:
            raise InputError("--presheaf: beta takes a single presheaf")
        F = presheaf_from_json(args.presheaf[0])
        source = args.presheaf[0]
    else:
        G = _one_group(args)
        p = _prime(args)
        F = rep_presheaf(G, p, _level(args.d, "-d", 2), args.cap_enum)
        source = f"Rep(-,{G.name})"
    if n > F.d:
        raise InputError(f"-n: need n <= d = {F.d}")
    bq = beta_quotient(F, n)
    out = {"source": source, "n": n, "input_sizes": F.sizes}
    out.update(_presheaf_summary(bq.presheaf, with_data=True))
    out["projection"] = [c.tolist() for c in bq.projection.components]
    return out


def cmd_coend(args) -> dict:
    G = _one_group(args)
    p = _prime(args)
    d = _level(args.d, "-d", 2)
    X = _complex(args, G)
    F = coend_presheaf(fx_functor(G, p, X), d)
    return {"group": G.name, "p": p, "complex": list(X.vertices), **_presheaf_summary(F)}


def cmd_gl_colimit(args) -> dict:
    G = _one_group(args)
    p = _prime(args)
    n = _level(args.n, "-n")
    d = _level(args.d, "-d", 2)
    if n > d:
        raise InputError("-n: need n <= d")
    F = gl_colimit_presheaf(G, p, n, d)
    beta = beta_quotient(rep_presheaf(G, p, d, args.cap_enum), n).presheaf
    return {"group": G.name, "p": p, "n": n, "d": d, **_presheaf_summary(F),
            "beta_rep_sizes": beta.sizes, "isomorphic_to_beta_rep": compare_gl_beta(G, p, n, d, args.cap_level)}


def cmd_yn(args) -> dict:
    G = _one_group(args)
    p = _prime(args)
    n = _level(args.n, "-n")
    X = _complex(args, G)
    Y = yn_set(G, p, n, X, args.cap_enum)
    orbits = yn_mod_g(G, p, n, X, args.cap_enum)
    return {
        "group": G.name, "p": p, "n": n, "size": len(Y), "orbits": orbits.n_classes,
        "elements": [
            {"hom": _elements(G, y.hom.images), "component": X.vertices[y.vertex]} for y in Y.elements
        ],
        "orbit_of": orbits.class_of.tolist(),
        "model_check": hurewicz_model_check(G, p, n, X, args.cap_enum),
    }


def cmd_hkr_rank(args) -> dict:
    G = _one_group(args)
    p = _prime(args)
    n = _level(args.n, "-n")
    X = _complex(args, G)
    return {"group": G.name, "p": p, "n": n, "rank": hkr_rank(G, p, n, X, args.cap_enum)}


def cmd_verify(args):
    if args.p is not None:
        _prime(args)
    config = RunConfig(
        p=args.p, n=args.n, d=args.d, caps=_caps(args),
        group_paths=tuple(args.group), presheaf_paths=tuple(args.presheaf), fmt=args.format,
    )
    battery = None
    if args.complex is not None:
        if len(args.group) != 1:
            raise InputError("--complex needs exactly one --group")
        from .battery import BatteryGroup, _default_primes

        G = load_group(args.group[0], cap=args.cap_order)
        complexes = [("pt", GComplex.point(G)), ("complex", complex_from_json(G, args.complex))]
        battery = [BatteryGroup(G.name, G, _default_primes(G), {}, complexes)]
    report = verify_battery(config, battery)
    text = report.to_tsv(args.timings) if args.format == "tsv" else report.to_json(args.timings)
    return report, text


HANDLERS = {
    "group-info": cmd_group_info, "subgroups": cmd_subgroups, "rep": cmd_rep,
    "quillen-cat": cmd_quillen_cat, "green-leary": cmd_green_leary, "beta": cmd_beta,
    "coend": cmd_coend, "gl-colimit": cmd_gl_colimit, "yn": cmd_yn, "hkr-rank": cmd_hkr_rank,
}


def _to_tsv(result: dict) -> str:
    lines = []
    for key, value in result.items():
        text = value if isinstance(value, str) else json.dumps(value, sort_keys=True, separators=(",", ":"))
        lines.append(f"{key}\t{text}")
    return "\n".join(lines) + "\n"


def run_command(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        _caps(args)
        if args.command == "verify":
            report, text = cmd_verify(args)
            out.write(text)
            return 0 if report.passed else 1
        result = HANDLERS[args.command](args)
    except CapExceededError as exc:
        err.write(f"error: cap exceeded ({exc.what}): size {exc.size} > {exc.cap}\n")
        return 2
    except (InputError, ChromavarError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    if args.format == "tsv":
        out.write(_to_tsv(result))
    else:
        out.write(json.dumps(result, indent=2, sort_keys=True) + "\n")
    failed = result.get("model_check") is False or result.get("isomorphic_to_beta_rep") is False \
        or result.get("axioms_ok") is False
    return 1 if failed else 0


def main() -> None:
    sys.exit(run_command())

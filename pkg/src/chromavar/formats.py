"""JSON file formats for presheaves and G-complexes."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .equivariant import GComplex
from .errors import InputError
from .group_core import FiniteGroup
from .linear import FpMatrix, count_matrices
from .presheaf_core import FinitePresheaf


def _read(source) -> dict:
    if isinstance(source, (str, Path)):
        try:
            return json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {source}: {exc}") from exc
    return source


def presheaf_to_json(F: FinitePresheaf) -> dict:
    restrictions = {}
    for k, j in F.block_pairs():
        block = F.restrictions[(k, j)]
        for code in range(block.shape[0]):
            restrictions[FpMatrix.from_code(F.p, k, j, code).key()] = block[code].tolist()
    return {"p": F.p, "d": F.d, "levels": [list(lev) for lev in F.levels], "restrictions": restrictions}


def presheaf_from_json(source) -> FinitePresheaf:
    """Read ``{"p", "d", "levels", "restrictions"}``.

    Restriction keys are ``"<k>x<j>:<row-major entries>"`` for a matrix
    F^j -> F^k; values give the image in level j of each element of level k.
    Every matrix must be present.
    """
    data = _read(source)
    try:
        p, d, levels, raw = int(data["p"]), int(data["d"]), data["levels"], data["restrictions"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"presheaf file is missing field {exc}") from exc
    if len(levels) != d + 1:
        raise InputError(f"'levels' must have d+1 = {d + 1} entries")
    blocks = {
        (k, j): np.full((count_matrices(p, k, j), len(levels[k])), -1, dtype=np.int64)
        for k in range(d + 1) for j in range(d + 1)
    }
    for key, images in raw.items():
        A = FpMatrix.from_key(p, key)
        if A.rows > d or A.cols > d:
            raise InputError(f"restriction {key!r} exceeds dimension {d}")
        if len(images) != len(levels[A.rows]):
            raise InputError(f"restriction {key!r} needs {len(levels[A.rows])} images")
        blocks[(A.rows, A.cols)][A.code] = images
    for (k, j), block in blocks.items():
        missing = np.flatnonzero((block < 0).any(axis=1)) if block.size else []
        if len(missing):
            A = FpMatrix.from_code(p, k, j, int(missing[0]))
            raise InputError(f"restriction {A.key()!r} is missing")
    return FinitePresheaf.build(p, d, levels, blocks)


def complex_to_json(X: GComplex) -> dict:
    G = X.group
    return {
        "vertices": list(X.vertices),
        "edges": [list(e) for e in X.edges],
        "action": [X.action[g].tolist() for g in G.generators],
    }


def complex_from_json(G: FiniteGroup, source) -> GComplex:
    """Read ``{"vertices", "edges", "action"}``, one vertex permutation per
    generator of G; the action is validated for admissibility."""
    data = _read(source)
    try:
        vertices, edges, action = data["vertices"], data.get("edges", []), data["action"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"complex file is missing field {exc}") from exc
    nv = len(vertices)
    for e in edges:
        if len(e) != 2 or not all(isinstance(v, int) and 0 <= v < nv for v in e) or e[0] == e[1]:
            raise InputError(f"bad edge {e}")
    return GComplex.from_generator_action(G, vertices, [tuple(e) for e in edges], action)

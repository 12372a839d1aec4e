"""Exact linear algebra over F_p in small dimensions.

Hom-sets of the truncated category of F_p-vector spaces are materialized as
integer codes: a ``rows x cols`` matrix is identified with the base-p number
whose digits are its row-major entries, most significant first.  Code order
is therefore the lexicographic order on entry tuples.  Composition tables
are cached per (p, shape) and shared by every presheaf computation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapExceededError, InputError

DEFAULT_MATRIX_CAP = 1_000_000
DEFAULT_TABLE_CAP = 20_000_000


@dataclass(frozen=True)
class FpMatrix:
    """A linear map F_p^cols -> F_p^rows."""

    p: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise InputError(
                f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix"
            )
        if any(not 0 <= e < self.p for e in self.entries):
            raise InputError(f"entries must be reduced mod {self.p}")

    @classmethod
    def from_rows(cls, p: int, rows) -> "FpMatrix":
        rows = [list(r) for r in rows]
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        return cls(p, n_rows, n_cols, tuple(int(x) % p for r in rows for x in r))

    @classmethod
    def from_array(cls, p: int, arr) -> "FpMatrix":
        arr = np.asarray(arr, dtype=np.int64) % p
        return cls(p, arr.shape[0], arr.shape[1], tuple(arr.ravel().tolist()))

    @classmethod
    def from_code(cls, p: int, rows: int, cols: int, code: int) -> "FpMatrix":
        n = rows * cols
        digits = []
        for _ in range(n):
            code, r = divmod(code, p)
            digits.append(r)
        return cls(p, rows, cols, tuple(reversed(digits)))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, rows, cols, (0,) * (rows * cols))

    @property
    def code(self) -> int:
        c = 0
        for e in self.entries:
            c = c * self.p + e
        return c

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p or self.cols != other.rows:
            raise InputError("incompatible matrices")
        return FpMatrix.from_array(self.p, self.to_array() @ other.to_array())

    def rank(self) -> int:
        return rank_mod_p(self.to_array(), self.p)

    def key(self) -> str:
        """Serialized form ``<rows>x<cols>:<comma separated entries>``."""
        return f"{self.rows}x{self.cols}:" + ",".join(map(str, self.entries))

    @classmethod
    def from_key(cls, p: int, key: str) -> "FpMatrix":
        try:
            shape, _, body = key.partition(":")
            r, c = (int(t) for t in shape.split("x"))
            entries = tuple(int(t) for t in body.split(",")) if body else ()
        except ValueError as exc:
            raise InputError(f"bad matrix key {key!r}") from exc
        return cls(p, r, c, entries)

    def __str__(self) -> str:
        if not self.rows or not self.cols:
            return f"[{self.rows}x{self.cols}]"
        return "[" + ";".join(
            " ".join(map(str, self.entries[i * self.cols:(i + 1) * self.cols]))
            for i in range(self.rows)
        ) + "]"


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over F_p by Gaussian elimination."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        m[rank] = (m[rank] * pow(int(m[rank, c]), -1, p)) % p
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] = (m[r] - m[r, c] * m[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def count_matrices(p: int, rows: int, cols: int) -> int:
    return p ** (rows * cols)


def _check_cap(what: str, size: int, cap: int):
    if size > cap:
        raise CapExceededError(what, size, cap)


@lru_cache(maxsize=None)
def matrix_array(p: int, rows: int, cols: int) -> np.ndarray:
    """All ``rows x cols`` matrices over F_p, stacked in code order."""
    n = count_matrices(p, rows, cols)
    _check_cap(f"matrices {rows}x{cols} over F_{p}", n, DEFAULT_MATRIX_CAP)
    if rows * cols == 0:
        out = np.zeros((1, rows, cols), dtype=np.int64)
    else:
        digits = np.array(list(itertools.product(range(p), repeat=rows * cols)), dtype=np.int64)
        out = digits.reshape(n, rows, cols)
    out.setflags(write=False)
    return out


def encode(p: int, mats: np.ndarray) -> np.ndarray:
    """Codes of a stack of matrices (shape ``(..., rows, cols)``)."""
    rows, cols = mats.shape[-2:]
    n = rows * cols
    flat = mats.reshape(mats.shape[:-2] + (n,))
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return flat @ weights if n else np.zeros(mats.shape[:-2], dtype=np.int64)


@lru_cache(maxsize=None)
def compose_table(p: int, k: int, j: int, l: int) -> np.ndarray:
    """``table[a, b]`` is the code of ``A_a @ B_b`` for A: F^j->F^k, B: F^l->F^j."""
    na, nb = count_matrices(p, k, j), count_matrices(p, j, l)
    _check_cap(f"composition table {k}x{j}x{l} over F_{p}", na * nb, DEFAULT_TABLE_CAP)
    a = matrix_array(p, k, j)
    b = matrix_array(p, j, l)
    prod = np.einsum("aij,bjl->abil", a, b) % p
    out = encode(p, prod)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def rank_array(p: int, rows: int, cols: int) -> np.ndarray:
    out = np.array([rank_mod_p(m, p) for m in matrix_array(p, rows, cols)], dtype=np.int64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def identity_code(p: int, n: int) -> int:
    return FpMatrix.identity(p, n).code


def enumerate_linear_maps(p: int, j: int, k: int, cap: int = DEFAULT_MATRIX_CAP) -> list[FpMatrix]:
    """All linear maps F_p^j -> F_p^k (``k x j`` matrices), in code order."""
    n = count_matrices(p, k, j)
    _check_cap(f"linear maps F_{p}^{j} -> F_{p}^{k}", n, cap)
    return [FpMatrix.from_code(p, k, j, c) for c in range(n)]


def invertible_codes(p: int, n: int) -> np.ndarray:
    """Codes of GL_n(F_p) inside the n x n matrices."""
    return np.flatnonzero(rank_array(p, n, n) == n)

"""Exact matrix arithmetic over Z/2^k (1 <= k <= 16) and over the integers.

A :class:`Mat2k` with ``k=None`` lives over Z; otherwise entries are residues
in ``[0, 2^k)``.  Everything here is form-agnostic: the alternating Gram
matrix is passed in explicitly as a :class:`GramForm`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

MAX_K = 16
# |entries| < 2^28 keeps dim * entry^2 inside int64 for dim <= 64.
_EXACT_BOUND = 1 << 28


class DimensionError(ValueError):
    pass


class NotInvertibleError(ArithmeticError):
    pass


class OverflowGuardError(OverflowError):
    pass


def _check_k(k: int | None) -> None:
    if k is not None and not 1 <= k <= MAX_K:
        raise ValueError(f"ring exponent k={k} outside 1..{MAX_K}")


class Mat2k:
    """Square matrix of even dimension over Z/2^k, or over Z when ``k is None``."""

    __slots__ = ("k", "a")

    def __init__(self, entries, k: int | None = None):
        _check_k(k)
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] == 0 or arr.shape[0] % 2:
            raise DimensionError(f"dimension must be even and positive, got {arr.shape[0]}")
        if k is not None:
            arr %= 1 << k
        elif np.abs(arr).max(initial=0) >= _EXACT_BOUND:
            raise OverflowGuardError("integer entry exceeds the exact-mode width guard")
        arr.flags.writeable = False
        self.k = k
        self.a = arr

    @classmethod
    def identity(cls, dim: int, k: int | None = None) -> "Mat2k":
        return cls(np.eye(dim, dtype=np.int64), k)

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    @property
    def g(self) -> int:
        return self.dim // 2

    def __matmul__(self, other: "Mat2k") -> "Mat2k":
        return mat_mul(self, other)

    def __pow__(self, e: int) -> "Mat2k":
        return mat_pow(self, e)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat2k):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.a, other.a)

    def __hash__(self) -> int:
        return hash((self.k, self.a.tobytes()))

    def __repr__(self) -> str:
        ring = "Z" if self.k is None else f"Z/2^{self.k}"
        return f"Mat2k({self.a.tolist()}, over {ring})"

    def inverse(self) -> "Mat2k":
        return mat_inverse(self)

    def reduce(self, n: int) -> "Mat2k":
        return reduce_mod(self, n)

    def is_identity(self) -> bool:
        return np.array_equal(self.a, np.eye(self.dim, dtype=np.int64))


def _same_shape(A: Mat2k, B: Mat2k) -> None:
    if A.k != B.k:
        raise DimensionError(f"ring mismatch: k={A.k} vs k={B.k}")
    if A.dim != B.dim:
        raise DimensionError(f"dimension mismatch: {A.dim} vs {B.dim}")


def mat_mul(A: Mat2k, B: Mat2k) -> Mat2k:
    _same_shape(A, B)
    return Mat2k(A.a @ B.a, A.k)


def mat_pow(A: Mat2k, e: int) -> Mat2k:
    if e < 0:
        return mat_pow(mat_inverse(A), -e)
    result = Mat2k.identity(A.dim, A.k)
    base = A
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def reduce_mod(A: Mat2k, n: int) -> Mat2k:
    """Reduce to Z/2^n.  Integer matrices may be reduced to any n <= 16."""
    limit = MAX_K if A.k is None else A.k
    if not 1 <= n <= limit:
        raise ValueError(f"cannot reduce to 2^{n} from k={A.k}")
    return Mat2k(A.a, n)


def mat_inverse(A: Mat2k) -> Mat2k:
    if A.k is None:
        return _inverse_exact(A)
    mod = 1 << A.k
    n = A.dim
    work = np.concatenate([A.a % mod, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        odd = [r for r in range(col, n) if work[r, col] & 1]
        if not odd:
            raise NotInvertibleError("determinant is even; matrix is not a unit mod 2^k")
        r = odd[0]
        if r != col:
            work[[col, r]] = work[[r, col]]
        work[col] = (work[col] * pow(int(work[col, col]), -1, mod)) % mod
        for rr in range(n):
            if rr != col and work[rr, col]:
                work[rr] = (work[rr] - work[rr, col] * work[col]) % mod
    return Mat2k(work[:, n:], A.k)


def _inverse_exact(A: Mat2k) -> Mat2k:
    n = A.dim
    rows = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(A.a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise NotInvertibleError("singular integer matrix")
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    inv = [row[n:] for row in rows]
    if any(x.denominator != 1 for row in inv for x in row):
        raise NotInvertibleError("inverse is not integral (determinant is not +-1)")
    return Mat2k([[int(x) for x in row] for row in inv], None)


@dataclass(frozen=True, eq=False)
class GramForm:
    """Integer alternating Gram matrix whose reduction mod 2 is nondegenerate."""

    J: np.ndarray

    def __post_init__(self):
        J = np.array(self.J, dtype=np.int64)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2:
            raise DimensionError("Gram matrix must be square of even size")
        if np.any(np.diag(J)) or np.any(J + J.T):
            raise ValueError("Gram matrix is not alternating")
        if f2_rank(J % 2) != J.shape[0]:
            raise ValueError("Gram matrix is degenerate mod 2")
        J.flags.writeable = False
        object.__setattr__(self, "J", J)

    @property
    def dim(self) -> int:
        return self.J.shape[0]


def is_symplectic(A: Mat2k, form: GramForm) -> bool:
    if A.dim != form.dim:
        raise DimensionError("matrix and form dimensions differ")
    lhs = A.a.T @ form.J @ A.a
    if A.k is None:
        return np.array_equal(lhs, form.J)
    mod = 1 << A.k
    return np.array_equal(lhs % mod, form.J % mod)


def pair(u, v, form: GramForm, k: int | None = None) -> int:
    """u^T J v, reduced mod 2^k when k is given."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape != (form.dim,) or v.shape != (form.dim,):
        raise DimensionError("vector length does not match the form")
    val = int(u @ form.J @ v)
    return val if k is None else val % (1 << k)


def apply(A: Mat2k, v) -> np.ndarray:
    out = A.a @ np.asarray(v, dtype=np.int64)
    return out if A.k is None else out % (1 << A.k)


def f2_rank(M) -> int:
    rows = [int("".join(str(int(x) & 1) for x in row), 2) for row in np.atleast_2d(M)]
    rank = 0
    while rows:
        pivot = max(rows)
        rows.remove(pivot)
        if pivot == 0:
            break
        rank += 1
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows]
    return rank


# -- dump format: one matrix per line, header then row-major residues --------

def dump_line(A: Mat2k) -> str:
    k = "Z" if A.k is None else str(A.k)
    return f"g={A.g} k={k} " + " ".join(str(int(x)) for x in A.a.ravel())


def parse_line(line: str) -> Mat2k:
    fields = line.split()
    if len(fields) < 2 or not fields[0].startswith("g=") or not fields[1].startswith("k="):
        raise ValueError(f"malformed matrix line: {line!r}")
    g = int(fields[0][2:])
    kfield = fields[1][2:]
    k = None if kfield == "Z" else int(kfield)
    values = [int(x) for x in fields[2:]]
    dim = 2 * g
    if len(values) != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, got {len(values)}")
    return Mat2k(np.array(values, dtype=np.int64).reshape(dim, dim), k)


def dump_matrices(mats: Iterable[Mat2k]) -> str:
    return "".join(dump_line(A) + "\n" for A in mats)


def parse_matrices(text: str) -> list[Mat2k]:
    return [parse_line(ln) for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def product(mats: Sequence[Mat2k], dim: int, k: int | None) -> Mat2k:
    out = Mat2k.identity(dim, k)
    for m in mats:
        out = out @ m
    return out

"""Congruence layers Gamma(2^n)/Gamma(2^{n+1}) in the basis {[i,j]}.

A layer element is stored as an F_2 coordinate vector (``SpCoords``) of length
2g^2+g indexed by the pairs 1 <= i < j <= 2g+1 in lexicographic order.  The
matrix of [i,j] at level n is I + 2^n T_{i,j} mod 2^{n+1}, where T_{i,j} is the
mod-2 endomorphism t_{a_{i,j}} - 1.
"""

from __future__ import annotations

import itertools
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np

from .standard_rep import DomainError, Permutation, standard_rep
from .zmod import Mat2k

SpCoords = np.ndarray  # uint8 vector of length 2g^2 + g
MCoords = np.ndarray  # uint8 vector of length 2g, chain coordinates of V/2V


class LayerError(ValueError):
    """A matrix was expected to lie in a congruence layer and does not."""


# -- F_2 subspaces ---------------------------------------------------------------

def _to_int(x) -> int:
    out = 0
    for p in np.flatnonzero(np.asarray(x) & 1):
        out |= 1 << int(p)
    return out


def _to_vec(bits: int, n: int) -> np.ndarray:
    return np.array([(bits >> p) & 1 for p in range(n)], dtype=np.uint8)


class SubspaceF2:
    """Subspace of F_2^n kept as reduced echelon rows (Python ints, bit p = coordinate p)."""

    def __init__(self, n: int, vectors: Iterable = ()):
        self.n = n
        self._rows: dict[int, int] = {}  # pivot bit -> row with that leading bit
        for v in vectors:
            self.add(v)

    def _reduce(self, bits: int) -> int:
        while bits:
            top = bits.bit_length() - 1
            row = self._rows.get(top)
            if row is None:
                return bits
            bits ^= row
        return 0

    def add(self, v) -> bool:
        """Insert v; return True when it enlarged the subspace."""
        bits = self._reduce(v if isinstance(v, int) else _to_int(v))
        if not bits:
            return False
        top = bits.bit_length() - 1
        for p, row in list(self._rows.items()):
            if (row >> top) & 1:
                self._rows[p] = row ^ bits
        self._rows[top] = bits
        return True

    def __contains__(self, v) -> bool:
        return self._reduce(v if isinstance(v, int) else _to_int(v)) == 0

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return 1 << self.dim

    def rows(self) -> list[int]:
        return [self._rows[p] for p in sorted(self._rows, reverse=True)]

    def basis(self) -> np.ndarray:
        return np.array([_to_vec(r, self.n) for r in self.rows()], dtype=np.uint8).reshape(-1, self.n)

    def elements(self) -> list[int]:
        rows = self.rows()
        out = []
        for mask in range(1 << len(rows)):
            v = 0
            for b, r in enumerate(rows):
                if (mask >> b) & 1:
                    v ^= r
            out.append(v)
        return sorted(out)

    def __le__(self, other: "SubspaceF2") -> bool:
        return all(r in other for r in self.rows())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubspaceF2):
            return NotImplemented
        return self.n == other.n and self.dim == other.dim and self <= other

    def copy(self) -> "SubspaceF2":
        out = SubspaceF2(self.n)
        out._rows = dict(self._rows)
        return out


def f2_inverse(M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    work = np.concatenate([np.asarray(M, dtype=np.uint8) & 1, np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r, col]), None)
        if piv is None:
            raise LayerError("matrix is singular over F_2")
        if piv != col:
            work[[col, piv]] = work[[piv, col]]
        for r in range(n):
            if r != col and work[r, col]:
                work[r] ^= work[col]
    return work[:, n:]


# -- the layer space ---------------------------------------------------------------

class LayerSpace:
    """Coordinates, S_d-action and distinguished subspaces of sp(V/2V) for fixed (g, d)."""

    def __init__(self, g: int, d: int | None = None):
        self.rep = standard_rep(g, d)
        self.g, self.d, self.dim = g, self.rep.d, 2 * g
        self.pairs = list(itertools.combinations(range(1, 2 * g + 2), 2))
        self.index = {p: n for n, p in enumerate(self.pairs)}
        self.npairs = len(self.pairs)
        J = self.rep.form.J
        T = [np.outer(a, a) @ J.T % 2 for a in (self.rep.a(i, j) for i, j in self.pairs)]
        self.T = np.array(T, dtype=np.int64)
        B = self.T.reshape(self.npairs, -1).T % 2  # dim^2 x npairs
        picked, space = [], SubspaceF2(self.npairs)
        for r in range(B.shape[0]):
            if space.add(B[r]):
                picked.append(r)
        if len(picked) != self.npairs:
            raise LayerError("the T_{i,j} are not independent")
        self._B = B.astype(np.uint8)
        self._pivots = np.array(picked)
        self._Binv = f2_inverse(B[picked]).astype(np.int64)

    # coordinates -------------------------------------------------------------------

    def coords_of_endo(self, X: np.ndarray) -> SpCoords:
        """Solve X = sum x_p T_p over F_2 for a batch (..., dim, dim)."""
        X = np.asarray(X, dtype=np.int64) & 1
        flat = X.reshape(X.shape[:-2] + (-1,))
        x = (flat[..., self._pivots] @ self._Binv.T) & 1
        if not np.array_equal((x @ self._B.T.astype(np.int64)) & 1, flat):
            raise LayerError("endomorphism is not in the span of the T_{i,j}")
        return x.astype(np.uint8)

    def endo(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return np.tensordot(x, self.T, axes=([-1], [0])) % 2

    def unit(self, i: int, j: int) -> SpCoords:
        """Coordinates of [i,j], expanding [k,2g+2] when d is even."""
        i, j = min(i, j), max(i, j)
        x = np.zeros(self.npairs, dtype=np.uint8)
        if j <= 2 * self.g + 1:
            x[self.index[(i, j)]] = 1
            return x
        if j != 2 * self.g + 2 or self.d != j:
            raise DomainError(f"pair ({i},{j}) outside 1..{self.d}")
        rest = [p for p in range(1, 2 * self.g + 2) if p != i]
        for pr in itertools.combinations(rest, 2):
            x[self.index[pr]] ^= 1
        return x

    def delta(self, i: int, j: int, k: int) -> SpCoords:
        if len({i, j, k}) != 3:
            raise DomainError("Delta needs distinct indices")
        return self.unit(i, j) ^ self.unit(i, k) ^ self.unit(j, k)

    # action ------------------------------------------------------------------------

    @lru_cache(maxsize=None)
    def action_matrix(self, sigma: Permutation) -> np.ndarray:
        """F_2 matrix with column p equal to [sigma(i), sigma(j)] for pair p = (i, j)."""
        cols = [self.unit(sigma(i), sigma(j)) for i, j in self.pairs]
        return np.array(cols, dtype=np.int64).T

    def act(self, sigma: Permutation, x) -> SpCoords:
        return ((self.action_matrix(sigma) @ np.asarray(x, dtype=np.int64)) & 1).astype(np.uint8)

    # subspaces ---------------------------------------------------------------------

    def row_sums(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        sums = np.zeros(x.shape[:-1] + (2 * self.g + 1,), dtype=np.int64)
        for p, (i, j) in enumerate(self.pairs):
            sums[..., i - 1] += x[..., p]
            sums[..., j - 1] += x[..., p]
        return sums & 1

    def in_n(self, x) -> bool:
        return not self.row_sums(x).any()

    def in_layer0(self, x) -> bool:
        return int(np.asarray(x, dtype=np.int64).sum()) % 2 == 0

    @cached_property
    def N(self) -> SubspaceF2:
        return SubspaceF2(self.npairs, (self.delta(*t) for t in itertools.combinations(range(1, 2 * self.g + 2), 3)))

    @cached_property
    def layer0(self) -> SubspaceF2:
        return SubspaceF2(self.npairs, (self.unit(1, 2) ^ self.unit(*p) for p in self.pairs[1:]))

    @cached_property
    def N0(self) -> SubspaceF2:
        return intersect(self.N, self.layer0)

    @cached_property
    def full(self) -> SubspaceF2:
        return SubspaceF2(self.npairs, np.eye(self.npairs, dtype=np.uint8))

    @cached_property
    def delta_basis(self) -> list[tuple[int, int, int]]:
        """Lexicographically first triples whose Deltas form a basis of N."""
        space, out = SubspaceF2(self.npairs), []
        for t in itertools.combinations(range(1, 2 * self.g + 2), 3):
            if space.add(self.delta(*t)):
                out.append(t)
        return out

    def delta_expansion(self, x) -> np.ndarray:
        """Coefficients of x in the Delta basis; raises if x is not in N."""
        if not self.in_n(x):
            raise LayerError("vector is not in N")
        D = np.array([self.delta(*t) for t in self.delta_basis], dtype=np.int64).T
        sol = solve_f2(D, np.asarray(x, dtype=np.int64))
        return sol

    # quotient M ----------------------------------------------------------------------

    @cached_property
    def _pi(self) -> np.ndarray:
        return np.array([self.rep.a(i, j) for i, j in self.pairs], dtype=np.int64).T % 2

    def m_project(self, x) -> MCoords:
        """Class of x modulo N, as a V/2V vector via [i,j] -> v_{i,j}."""
        return ((self._pi @ np.asarray(x, dtype=np.int64)) & 1).astype(np.uint8)

    def m_section(self, m) -> SpCoords:
        """Layer vector sum_p m_p [p, p+1], a fixed preimage of m."""
        x = np.zeros(self.npairs, dtype=np.uint8)
        for p in np.flatnonzero(np.asarray(m) & 1):
            x[self.index[(int(p) + 1, int(p) + 2)]] = 1
        return x

    def bracket_pairing(self, x, y) -> int:
        """Pairing <[i,j],[k,l]> = |{i,j} & {k,l}| mod 2, extended bilinearly."""
        G = self.bracket_gram
        return int(np.asarray(x, dtype=np.int64) @ G @ np.asarray(y, dtype=np.int64)) & 1

    @cached_property
    def bracket_gram(self) -> np.ndarray:
        return np.array([[len(set(p) & set(q)) % 2 for q in self.pairs] for p in self.pairs],
                        dtype=np.int64)


@lru_cache(maxsize=None)
def layer_space(g: int, d: int | None = None) -> LayerSpace:
    return LayerSpace(g, d)


def intersect(U: SubspaceF2, W: SubspaceF2) -> SubspaceF2:
    """U & W via the kernel of [U; W] -> U + W."""
    ub, wb = U.basis(), W.basis()
    rows = [(_to_int(u), 1 << k) for k, u in enumerate(ub)] + \
           [(_to_int(w), 1 << (len(ub) + k)) for k, w in enumerate(wb)]
    # eliminate on the vector part, tracking combinations
    pivots: dict[int, tuple[int, int]] = {}
    out = SubspaceF2(U.n)
    for vec, comb in rows:
        while vec:
            top = vec.bit_length() - 1
            if top not in pivots:
                pivots[top] = (vec, comb)
                break
            pv, pc = pivots[top]
            vec, comb = vec ^ pv, comb ^ pc
        if vec == 0:
            umask = comb & ((1 << len(ub)) - 1)
            acc = 0
            for k in range(len(ub)):
                if (umask >> k) & 1:
                    acc ^= _to_int(ub[k])
            out.add(acc)
    return out


def solve_f2(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """One solution x of A x = b over F_2; raises LayerError if none exists."""
    A = np.asarray(A, dtype=np.uint8) & 1
    b = np.asarray(b, dtype=np.uint8) & 1
    m, n = A.shape
    work = np.concatenate([A, b.reshape(-1, 1)], axis=1)
    row, cols = 0, []
    for col in range(n):
        piv = next((r for r in range(row, m) if work[r, col]), None)
        if piv is None:
            continue
        work[[row, piv]] = work[[piv, row]]
        for r in range(m):
            if r != row and work[r, col]:
                work[r] ^= work[row]
        cols.append(col)
        row += 1
    if work[row:, n].any():
        raise LayerError("linear system has no solution over F_2")
    x = np.zeros(n, dtype=np.uint8)
    for r, col in enumerate(cols):
        x[col] = work[r, n]
    return x


# -- functional front end -------------------------------------------------------------

def layer_coords(A: Mat2k, n: int, d: int | None = None) -> SpCoords:
    """Coordinates of (A - I)/2^n mod 2 for A = I mod 2^n, read mod 2^{n+1}."""
    if A.k is not None and A.k < n + 1:
        raise LayerError(f"need the matrix mod 2^{n + 1}, got mod 2^{A.k}")
    a = A.a % (1 << (n + 1))
    diff = (a - np.eye(A.dim, dtype=np.int64)) % (1 << (n + 1))
    if np.any(diff % (1 << n)):
        raise LayerError(f"matrix is not congruent to I mod 2^{n}")
    return layer_space(A.g, d).coords_of_endo(diff >> n)


def layer_coords_batch(arr: np.ndarray, n: int, g: int) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.int64) % (1 << (n + 1))
    diff = (arr - np.eye(2 * g, dtype=np.int64)) % (1 << (n + 1))
    if np.any(diff % (1 << n)):
        raise LayerError(f"some matrix is not congruent to I mod 2^{n}")
    return layer_space(g).coords_of_endo(diff >> n)


def layer_element(x, n: int, g: int, k: int | None = None) -> Mat2k:
    """The matrix I + 2^n sum x_p T_p, mod 2^k (default k = n + 1)."""
    k = n + 1 if k is None else k
    X = layer_space(g).endo(x)
    return Mat2k(np.eye(2 * g, dtype=np.int64) + (X << n), k)


def sd_act(sigma: Permutation, x, g: int) -> SpCoords:
    return layer_space(g, sigma.d).act(sigma, x)


def n_membership(x, g: int) -> bool:
    return layer_space(g).in_n(x)


def m_project(x, g: int) -> MCoords:
    return layer_space(g).m_project(x)


def saturate_invariant(seed: Iterable, g: int, d: int | None = None,
                       start: SubspaceF2 | None = None) -> SubspaceF2:
    """Smallest star-transposition-invariant subspace containing ``seed`` (and ``start``)."""
    L = layer_space(g, d)
    gens = [L.action_matrix(s) for s in L.rep.group.stars]
    space = SubspaceF2(L.npairs) if start is None else start.copy()
    queue = [r for r in space.rows()]
    for v in seed:
        bits = _to_int(v)
        if space.add(bits):
            queue.append(bits)
    while queue:
        v = _to_vec(queue.pop(), L.npairs).astype(np.int64)
        for A in gens:
            w = _to_int((A @ v) & 1)
            if space.add(w):
                queue.append(w)
    return space


def lemma_complement_holds(g: int, d: int) -> bool:
    """T_I equals sum of T_{i,j} over pairs inside I, for every even subset I."""
    rep = standard_rep(g, d)
    J = rep.form.J
    for r in range(0, d + 1, 2):
        for I in itertools.combinations(range(1, d + 1), r):
            a = rep.v(*I).astype(np.int64)
            TI = np.outer(a, a) @ J.T % 2
            acc = np.zeros_like(TI)
            for i, j in itertools.combinations(I, 2):
                b = rep.a(i, j)
                acc = (acc + np.outer(b, b) @ J.T) % 2
            if not np.array_equal(TI, acc):
                return False
    return True

"""Breadth-first closure of matrix subgroups of Sp_2g(Z/2^k).

Elements are kept as a (N, dim, dim) uint16 array and identified by packed
keys: a single uint64 when dim^2 * k <= 64, otherwise a fixed-width byte
string.  Each BFS round multiplies the frontier on the right by every
generator, deduplicates, and merges into a sorted key table.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .layers import SubspaceF2, layer_coords_batch, layer_space
from .zmod import GramForm, Mat2k, is_symplectic

DEFAULT_CAP = 10_000_000


class ClosureOverflowError(RuntimeError):
    pass


class LabelRecoveryError(RuntimeError):
    """A conjugated subgroup could not be matched to a classified label."""


@dataclass
class GroupHandle:
    k: int
    g: int
    generators: list[Mat2k]
    form: GramForm | None = None

    def __post_init__(self):
        for A in self.generators:
            if A.k != self.k or A.dim != 2 * self.g:
                raise ValueError("generator ring or dimension does not match the handle")
            if self.form is not None and not is_symplectic(A, self.form):
                raise ValueError("generator is not symplectic")


def pack_keys(arr: np.ndarray, k: int) -> np.ndarray:
    """Injective packing of a batch of matrices with entries < 2^k."""
    n = arr.shape[0]
    flat = arr.reshape(n, -1).astype(np.uint64)
    if flat.shape[1] * k <= 64:
        shifts = (np.arange(flat.shape[1], dtype=np.uint64) * np.uint64(k))
        return np.bitwise_or.reduce(flat << shifts, axis=1)
    width = 1 if k <= 8 else 2
    raw = np.ascontiguousarray(arr.reshape(n, -1).astype(np.uint8 if width == 1 else np.uint16))
    return raw.view(np.dtype((np.void, raw.shape[1] * width))).ravel()


@dataclass
class ClosureResult:
    k: int
    g: int
    elements: np.ndarray  # (order, dim, dim) uint16, identity first
    keys: np.ndarray  # sorted packed keys
    parent: np.ndarray | None = None
    via: np.ndarray | None = None
    generators: list[Mat2k] = field(default_factory=list)

    @property
    def order(self) -> int:
        return int(self.elements.shape[0])

    def matrix(self, idx: int) -> Mat2k:
        return Mat2k(self.elements[idx].astype(np.int64), self.k)

    def index_of(self, A: Mat2k) -> int | None:
        if not hasattr(self, "_lookup"):
            self._lookup = {bytes(key): n for n, key in enumerate(
                pack_keys(self.elements.astype(np.int64), self.k).view(np.uint8).reshape(self.order, -1))}
        key = pack_keys(A.a[None] % (1 << self.k), self.k).view(np.uint8)
        return self._lookup.get(bytes(key))

    def __contains__(self, A: Mat2k) -> bool:
        return self.index_of(A) is not None

    def word(self, idx: int) -> list[int]:
        """Generator indices whose product (left to right) is element ``idx``."""
        if self.parent is None:
            raise ValueError("closure was computed without provenance tracking")
        out = []
        while idx != 0:
            out.append(int(self.via[idx]))
            idx = int(self.parent[idx])
        return out[::-1]

    def fingerprint(self) -> str:
        return fingerprint_keys(self.keys, self.k, self.g)


def fingerprint_keys(keys: np.ndarray, k: int, g: int) -> str:
    h = hashlib.sha256(f"g={g} k={k} n={keys.shape[0]};".encode())
    h.update(np.ascontiguousarray(keys).tobytes())
    return h.hexdigest()


def close(handle: GroupHandle, cap: int = DEFAULT_CAP, track: bool = False,
          order: Sequence[int] | None = None) -> ClosureResult:
    """Enumerate the subgroup generated by ``handle.generators``.

    ``order`` permutes the generator schedule; the element set does not depend on it.
    """
    k, dim = handle.k, 2 * handle.g
    mod = 1 << k
    gens = [handle.generators[i] for i in (order or range(len(handle.generators)))]
    gen_ids = list(order or range(len(handle.generators)))
    gmats = [G.a.astype(np.int64) for G in gens]
    ident = np.eye(dim, dtype=np.int64)[None]
    chunks = [ident.astype(np.uint16)]
    seen = pack_keys(ident, k)
    frontier = ident
    frontier_idx = np.array([0])
    parents, vias = [np.array([-1])], [np.array([-1])]
    total = 1
    while frontier.shape[0]:
        cand, cand_parent, cand_via = [], [], []
        for gid, G in zip(gen_ids, gmats):
            cand.append((frontier @ G) % mod)
            cand_parent.append(frontier_idx)
            cand_via.append(np.full(frontier.shape[0], gid))
        cand = np.concatenate(cand)
        ckeys = pack_keys(cand, k)
        ukeys, first = np.unique(ckeys, return_index=True)
        pos = np.searchsorted(seen, ukeys)
        pos[pos == seen.shape[0]] = 0
        fresh = seen[pos] != ukeys if seen.shape[0] else np.ones(ukeys.shape[0], bool)
        new_idx = first[fresh]
        if total + new_idx.shape[0] > cap:
            raise ClosureOverflowError(f"closure exceeded the cap of {cap} elements")
        frontier = cand[new_idx]
        chunks.append(frontier.astype(np.uint16))
        if track:
            parents.append(np.concatenate(cand_parent)[new_idx])
            vias.append(np.concatenate(cand_via)[new_idx])
        frontier_idx = np.arange(total, total + new_idx.shape[0])
        total += new_idx.shape[0]
        seen = np.union1d(seen, ukeys[fresh]) if seen.dtype != object else seen
    elements = np.concatenate(chunks)
    return ClosureResult(k, handle.g, elements, seen,
                         np.concatenate(parents) if track else None,
                         np.concatenate(vias) if track else None,
                         list(handle.generators))


def sp_order(g: int, k: int) -> int:
    """|Sp_2g(Z/2^k)| = |Sp_2g(F_2)| * 2^{(2g^2+g)(k-1)}."""
    sp2 = 2 ** (g * g)
    for i in range(1, g + 1):
        sp2 *= 4 ** i - 1
    return sp2 * 2 ** ((2 * g * g + g) * (k - 1))


@dataclass
class Intersection:
    n: int
    elements: np.ndarray
    subspace: SubspaceF2 | None = None

    @property
    def order(self) -> int:
        return int(self.elements.shape[0])


def congruence_intersection(res: ClosureResult, n: int) -> Intersection:
    """Elements congruent to I mod 2^n; as a layer subspace too when n = k - 1."""
    if not 1 <= n < res.k:
        raise ValueError(f"need 1 <= n < k={res.k}")
    dim = 2 * res.g
    diff = (res.elements.astype(np.int64) - np.eye(dim, dtype=np.int64)) % (1 << n)
    mask = ~diff.reshape(res.order, -1).any(axis=1)
    elems = res.elements[mask]
    sub = None
    if n == res.k - 1:
        coords = layer_coords_batch(elems.astype(np.int64), n, res.g)
        sub = SubspaceF2(layer_space(res.g).npairs, coords)
    return Intersection(n, elems, sub)


def conjugate_generators(gens: Sequence[Mat2k], x: Mat2k) -> list[Mat2k]:
    xinv = x.inverse()
    return [x @ u @ xinv for u in gens]


def conjugacy_orbit(start, generators_of: Callable, conjugators: Iterable[Mat2k],
                    classify: Callable) -> set:
    """Orbit of a label under conjugation.

    ``generators_of(label)`` returns generator matrices for the labelled subgroup,
    ``classify(gens)`` recovers the label of the subgroup those matrices generate.
    """
    conjugators = list(conjugators)
    orbit, queue = {start}, [start]
    while queue:
        label = queue.pop()
        gens = generators_of(label)
        for x in conjugators:
            new = classify(conjugate_generators(gens, x))
            if new not in orbit:
                orbit.add(new)
                queue.append(new)
    return orbit

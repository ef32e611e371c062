"""Mod-8 objects over the Gamma(2) layer: the delta words, the subgroup they
generate, and the quotient by it in an explicit normal form.

Here [i,j]_8 denotes the mod-8 image of t_{a_{i,j}}^2 (written ``floor`` below).
Two readings of the squared-factor product in delta_{i,j,k} are supported:
``"disjoint"`` takes pairs {l,m} disjoint from {i,j,k}; ``"meeting"`` takes the
pairs that meet {i,j,k}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .layers import LayerError, layer_coords, layer_space
from .transvections import Lifts, Word, canonical_lifts, t, word_product
from .zmod import Mat2k

READINGS = ("disjoint", "meeting")


def delta8(i: int, j: int, k: int, g: int, reading: str = "disjoint") -> Word:
    """delta_{i,j,k} = [i,j]_8 [i,k]_8 [j,k]_8 times squares of [l,m]_8 over the chosen pairs."""
    if len({i, j, k}) != 3:
        raise ValueError("delta needs distinct indices")
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    head = t(i, j, 2) * t(i, k, 2) * t(j, k, 2)
    trio = {i, j, k}
    pairs = [(l, m) for l, m in itertools.combinations(range(1, 2 * g + 2), 2)
             if (not ({l, m} & trio)) == (reading == "disjoint")]
    return head * word_product(t(l, m, 4) for l, m in pairs)


@dataclass(frozen=True)
class MTilde:
    """Normal form of a class in the Gamma(2) layer mod 8 modulo N-tilde."""

    m2: tuple[int, ...]
    m4: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.m2) and not any(self.m4)


class TildeContext:
    """Tables for N-tilde membership and the M-tilde normal form at fixed (g, reading)."""

    def __init__(self, g: int, reading: str = "disjoint", lifts: Lifts | None = None):
        self.g, self.reading = g, reading
        self.lifts = canonical_lifts(g) if lifts is None else lifts
        self.L = layer_space(g)
        dim = 2 * g
        basis = self.L.delta_basis
        self.delta_mats = {tr: self.lifts.evaluate(delta8(*tr, g, reading), 3) for tr in basis}
        # canonical delta word for every vector of N, keyed by its bit pattern
        self._wtable: dict[bytes, Mat2k] = {}
        for mask in range(1 << len(basis)):
            W = Mat2k.identity(dim, 3)
            for b, tr in enumerate(basis):
                if (mask >> b) & 1:
                    W = W @ self.delta_mats[tr]
            self._wtable[layer_coords(W, 1).tobytes()] = W.inverse()
        # section of M: prod over chain positions of [p, p+1]_8
        self._stable: dict[bytes, Mat2k] = {}
        for bits in itertools.product((0, 1), repeat=dim):
            S = Mat2k.identity(dim, 3)
            for p, b in enumerate(bits):
                if b:
                    S = S @ (self.lifts.t(p + 1, p + 2, 3) ** 2)
            self._stable[np.array(bits, dtype=np.uint8).tobytes()] = S.inverse()

    def canonical_delta_inverse(self, x2) -> Mat2k:
        return self._wtable[np.asarray(x2, dtype=np.uint8).tobytes()]

    def _check(self, A: Mat2k) -> Mat2k:
        if A.k is None or A.k < 3:
            raise LayerError("need a matrix mod 8")
        A = A.reduce(3)
        if np.any((A.a - np.eye(A.dim, dtype=np.int64)) % 2):
            raise LayerError("matrix is not congruent to I mod 2")
        return A

    def membership(self, A: Mat2k) -> bool:
        """Two-layer test: mod-4 coordinates in N, and the Gamma(4) remainder in N."""
        A = self._check(A)
        x2 = layer_coords(A, 1)
        if not self.L.in_n(x2):
            return False
        B = A @ self.canonical_delta_inverse(x2)
        return self.L.in_n(layer_coords(B, 2))

    def project(self, A: Mat2k) -> MTilde:
        A = self._check(A)
        x2 = layer_coords(A, 1)
        m2 = self.L.m_project(x2)
        A1 = A @ self._stable[m2.tobytes()]
        r = layer_coords(A1, 1)
        B = A1 @ self.canonical_delta_inverse(r)
        m4 = self.L.m_project(layer_coords(B, 2))
        return MTilde(tuple(int(v) for v in m2), tuple(int(v) for v in m4))

    def level4_value(self, A: Mat2k) -> np.ndarray:
        """Image in M at level 4 of an element whose M-tilde class has m2 = 0."""
        cls = self.project(A)
        if any(cls.m2):
            raise LayerError("class does not lie in the Gamma(4) part of M-tilde")
        return np.array(cls.m4, dtype=np.uint8)


@lru_cache(maxsize=None)
def tilde_context(g: int, reading: str = "disjoint") -> TildeContext:
    return TildeContext(g, reading)


def ntilde_membership(A: Mat2k, reading: str = "disjoint") -> bool:
    return tilde_context(A.g, reading).membership(A)


def mtilde_project(A: Mat2k, reading: str = "disjoint") -> MTilde:
    return tilde_context(A.g, reading).project(A)


def floor_bracket(i: int, j: int, g: int) -> Mat2k:
    """[i,j]_8, the mod-8 image of t_{a_{i,j}}^2."""
    return canonical_lifts(g).t(i, j, 3) ** 2

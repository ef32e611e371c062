"""Constructive check that a mod-16 lift of a classified mod-8 subgroup contains Gamma(8).

The classified subgroup H mod 8 contains delta_{1,2,3} and every Delta_{i,j,k}
(as I + 4 T).  Writing those elements as words in the generators and
evaluating the words on mod-16 lifts of the generators gives elements of the
mod-16 group whose squares lie in the Gamma(8) layer.  If their coordinates,
saturated under S_d, fill the whole layer, the group contains Gamma(8) mod 16.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .closure import GroupHandle, close
from .layers import SubspaceF2, layer_coords, layer_element, layer_space, saturate_invariant
from .tilde import delta8
from .transvections import Lifts, Word, canonical_lifts
from .zmod import Mat2k


@dataclass
class Gamma8Result:
    status: str  # verified | falsified | inconclusive
    delta_square_coords: list[int]
    delta_square_pairs: list[tuple[int, int]]
    saturation_dim: int
    full_dim: int
    stuck_basis: list[list[int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "verified"


def _word_matrix(word: list[int], gens: list[Mat2k], g: int) -> Mat2k:
    out = Mat2k.identity(2 * g, gens[0].k)
    for idx in word:
        out = out @ gens[idx]
    return out


def random_gamma8(rng: np.random.Generator, g: int) -> Mat2k:
    """I + 8X mod 16 for a uniformly random layer vector X."""
    L = layer_space(g)
    return layer_element(rng.integers(0, 2, L.npairs), 3, g, 4)


class Gamma8Verifier:
    """Holds the mod-8 closure so that many mod-16 lifts can be tested cheaply."""

    def __init__(self, gen_words: list[Word], g: int, reading: str = "disjoint",
                 lifts: Lifts | None = None, cap: int = 10_000_000):
        self.g = g
        self.lifts = canonical_lifts(g) if lifts is None else lifts
        self.words = list(gen_words)
        gens8 = [self.lifts.evaluate(w, 3) for w in self.words]
        self.closure = close(GroupHandle(3, g, gens8), cap=cap, track=True)
        L = layer_space(g)
        self.L = L
        self.targets: dict[str, list[int]] = {}
        if g >= 1 and 2 * g + 1 >= 3:
            D = self.lifts.evaluate(delta8(1, 2, 3, g, reading), 3)
            self.targets["delta"] = self._find(D, "delta_{1,2,3}")
        for tri in L.delta_basis:
            E = layer_element(L.delta(*tri), 2, g, 3)
            self.targets[f"Delta{tri}"] = self._find(E, f"Delta{tri}")

    def _find(self, A: Mat2k, name: str) -> list[int]:
        idx = self.closure.index_of(A)
        if idx is None:
            raise ValueError(f"{name} is not in the mod-8 group; it is not a classified subgroup")
        return self.closure.word(idx)

    def check(self, gens16: list[Mat2k]) -> Gamma8Result:
        g, L = self.g, self.L
        squares = {}
        for name, word in self.targets.items():
            X = _word_matrix(word, gens16, g)
            squares[name] = layer_coords(X @ X, 3)
        dsq = squares["delta"]
        seed = list(squares.values())
        sat = saturate_invariant(seed, g)
        pairs = [L.pairs[i] for i in np.flatnonzero(dsq)]
        if sat.dim == L.npairs:
            status = "verified"
        elif L.in_n(dsq):
            status = "inconclusive"
        else:
            status = "falsified"
        stuck = [] if status == "verified" else sat.basis().astype(int).tolist()
        return Gamma8Result(status, dsq.astype(int).tolist(), pairs, sat.dim, L.npairs, stuck)

    def lifted_generators(self, rng: np.random.Generator | None = None) -> list[Mat2k]:
        gens = [self.lifts.evaluate(w, 4) for w in self.words]
        if rng is None:
            return gens
        return [G @ random_gamma8(rng, self.g) for G in gens]


def verify_gamma8_containment(gen_words: list[Word], g: int, trials: int = 0, seed: int = 0,
                              reading: str = "disjoint") -> list[Gamma8Result]:
    """Run the check on the unperturbed lift and on ``trials`` random Gamma(8) perturbations."""
    ver = Gamma8Verifier(gen_words, g, reading)
    rng = np.random.default_rng(seed)
    out = [ver.check(ver.lifted_generators())]
    out += [ver.check(ver.lifted_generators(rng)) for _ in range(trials)]
    return out


def expected_delta_square_pairs(g: int) -> list[tuple[int, int]]:
    """Pairs {l, m} with 4 <= l < m <= 2g+1."""
    return [(l, m) for l in range(4, 2 * g + 2) for m in range(l + 1, 2 * g + 2)]

"""The symmetric group S_d and its standard representation on V/2V.

V/2V is modelled by even-cardinality subsets of {1..d} (up to complement when
d is even).  Coordinates are taken in the chain basis
v_{1,2}, v_{2,3}, ..., v_{2g,2g+1}; a subset vector w in F_2^d maps to chain
coordinates by prefix sums, so v_{i,j} = e_i + ... + e_{j-1} for i < j <= 2g+1.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .zmod import GramForm, Mat2k


class DomainError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Permutation:
    """Bijection of {1..d}; ``images[i - 1]`` is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise DomainError(f"not a bijection of 1..{len(self.images)}: {self.images}")

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(tuple(range(1, d + 1)))

    @classmethod
    def transposition(cls, d: int, i: int, j: int) -> "Permutation":
        if i == j:
            raise DomainError("transposition needs two distinct points")
        img = list(range(1, d + 1))
        img[i - 1], img[j - 1] = j, i
        return cls(tuple(img))

    @classmethod
    def from_cycles(cls, text: str, d: int) -> "Permutation":
        """Parse cycle notation such as ``"(1 2)(3 4 5)"``; cycles compose right to left."""
        result = cls.identity(d)
        cycles = re.findall(r"\(([^()]*)\)", text)
        if re.sub(r"\([^()]*\)", "", text).strip():
            raise DomainError(f"cannot parse cycle notation {text!r}")
        for body in cycles:
            pts = [int(x) for x in re.split(r"[,\s]+", body.strip()) if x]
            if len(set(pts)) != len(pts) or any(not 1 <= p <= d for p in pts):
                raise DomainError(f"bad cycle ({body}) for degree {d}")
            img = list(range(1, d + 1))
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a - 1] = b
            result = result * cls(tuple(img))
        return result

    @property
    def d(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (self * other)(x) = self(other(x))
        return Permutation(tuple(self.images[x - 1] for x in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.d
        for i, im in enumerate(self.images, start=1):
            inv[im - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.d + 1))

    def moved(self) -> list[int]:
        return [i for i in range(1, self.d + 1) if self(i) != i]

    def as_transposition(self) -> tuple[int, int] | None:
        m = self.moved()
        return (m[0], m[1]) if len(m) == 2 else None

    def cycles(self) -> str:
        seen, out = set(), []
        for i in range(1, self.d + 1):
            if i in seen or self(i) == i:
                continue
            cyc, x = [], i
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self(x)
            out.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(out) or "()"

    def __str__(self) -> str:
        return self.cycles()


@dataclass(frozen=True)
class SubsetClass:
    """Even subset of {1..d}, canonicalised to exclude d when d is even."""

    d: int
    members: frozenset

    def __post_init__(self):
        mem = frozenset(int(x) for x in self.members)
        if any(not 1 <= x <= self.d for x in mem):
            raise DomainError(f"subset {sorted(mem)} not inside 1..{self.d}")
        if len(mem) % 2:
            raise DomainError(f"subset {sorted(mem)} has odd cardinality")
        if self.d % 2 == 0 and self.d in mem:
            mem = frozenset(range(1, self.d + 1)) - mem
        object.__setattr__(self, "members", mem)

    def __str__(self) -> str:
        return "v{" + ",".join(map(str, sorted(self.members))) + "}"


def v_of_subset(I, d: int) -> SubsetClass:
    return SubsetClass(d, frozenset(I))


def parse_subset(text: str, d: int) -> SubsetClass:
    return v_of_subset([int(x) for x in text.replace(" ", "").split(",") if x], d)


def subset_pairing(a: SubsetClass, b: SubsetClass) -> int:
    if a.d != b.d:
        raise DomainError("subsets live over different degrees")
    return len(a.members & b.members) % 2


def act_on_subset(sigma: Permutation, a: SubsetClass) -> SubsetClass:
    return SubsetClass(a.d, frozenset(sigma(i) for i in a.members))


class SymmetricGroup:
    """All of S_d, with a fixed word in the star transpositions (1, j) per element."""

    def __init__(self, d: int):
        self.d = d
        self.identity = Permutation.identity(d)
        self.stars = [Permutation.transposition(d, 1, j) for j in range(2, d + 1)]
        # BFS from the identity, multiplying on the left by star generators.
        words = {self.identity: ()}
        queue = deque([self.identity])
        while queue:
            tau = queue.popleft()
            for j, s in enumerate(self.stars, start=2):
                sigma = s * tau
                if sigma not in words:
                    words[sigma] = (j,) + words[tau]
                    queue.append(sigma)
        self.star_words: dict[Permutation, tuple[int, ...]] = words
        self.elements = sorted(words)
        self.index = {p: n for n, p in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def transpositions(self) -> list[tuple[int, int]]:
        return list(itertools.combinations(range(1, self.d + 1), 2))

    def star(self, j: int) -> Permutation:
        return self.stars[j - 2]


@lru_cache(maxsize=None)
def symmetric_group(d: int) -> SymmetricGroup:
    return SymmetricGroup(d)


class StandardRep:
    """rho: S_d -> Sp(V/2V) in the chain basis, for d in {2g+1, 2g+2}."""

    def __init__(self, g: int, d: int | None = None):
        if g < 1:
            raise DomainError("genus must be positive")
        d = 2 * g + 1 if d is None else d
        if d not in (2 * g + 1, 2 * g + 2):
            raise DomainError(f"d={d} is not 2g+1 or 2g+2 for g={g}")
        self.g = g
        self.d = d
        self.dim = 2 * g
        self.basis = [v_of_subset({i, i + 1}, d) for i in range(1, 2 * g + 1)]
        J = np.zeros((self.dim, self.dim), dtype=np.int64)
        for p in range(self.dim - 1):
            J[p, p + 1], J[p + 1, p] = 1, -1
        self.form = GramForm(J)
        self.gram2 = self.form.J % 2

    # -- coordinates -------------------------------------------------------

    def coords(self, a: SubsetClass) -> np.ndarray:
        if a.d != self.d:
            raise DomainError("subset degree does not match representation")
        w = np.zeros(self.d, dtype=np.uint8)
        w[[i - 1 for i in a.members]] = 1
        return (np.cumsum(w[: self.dim]) % 2).astype(np.uint8)

    def subset_of(self, x) -> SubsetClass:
        x = np.asarray(x, dtype=np.uint8) % 2
        w = np.zeros(self.d, dtype=np.uint8)
        w[0] = x[0]
        w[1 : self.dim] = x[:-1] ^ x[1:]
        w[self.dim] = x[-1]
        return SubsetClass(self.d, frozenset(int(i) + 1 for i in np.flatnonzero(w)))

    def v(self, *members: int) -> np.ndarray:
        """Chain coordinates of v_I for the listed members."""
        return self.coords(v_of_subset(members, self.d))

    def pair2(self, x, y) -> int:
        return int(np.asarray(x, dtype=np.int64) @ self.gram2 @ np.asarray(y, dtype=np.int64)) % 2

    def lift(self, a: SubsetClass) -> np.ndarray:
        """Canonical integer lift: the 0/1 chain-coordinate vector."""
        return self.coords(a).astype(np.int64)

    def a(self, i: int, j: int) -> np.ndarray:
        """Canonical lift a_{i,j} = a_{j,i} of v_{i,j}."""
        return self.lift(v_of_subset({i, j}, self.d))

    # -- the representation -----------------------------------------------

    def rho(self, sigma: Permutation) -> Mat2k:
        if sigma.d != self.d:
            raise DomainError("permutation degree does not match representation")
        cols = [self.coords(act_on_subset(sigma, b)) for b in self.basis]
        return Mat2k(np.array(cols, dtype=np.int64).T, 1)

    def rho_vec(self, sigma: Permutation, x) -> np.ndarray:
        return self.coords(act_on_subset(sigma, self.subset_of(x)))

    @cached_property
    def group(self) -> SymmetricGroup:
        return symmetric_group(self.d)


@lru_cache(maxsize=None)
def standard_rep(g: int, d: int | None = None) -> StandardRep:
    return StandardRep(g, d)


def image_order(d: int) -> int:
    """Order of rho(S_d), computed by closing the star transpositions mod 2."""
    from .closure import GroupHandle, close

    if d < 3:
        raise DomainError("image_order needs d >= 3")
    g = (d - 1) // 2
    rep = standard_rep(g, d)
    gens = [rep.rho(s) for s in rep.group.stars]
    return close(GroupHandle(1, g, gens)).order

"""Transvections, the fixed transposition lifts, and words in them.

A word is a tuple of ``(generator, exponent)`` letters.  Generators are
``("t", i, j)`` for t_{a_{i,j}}, ``("s", sigma)`` for the fixed lift of a
permutation, and ``("v", coords)`` for the transvection of an explicit vector.
Words are evaluated lazily at a requested modulus (``k=None`` means over Z).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Union

import numpy as np

from .standard_rep import DomainError, Permutation, StandardRep, standard_rep
from .zmod import GramForm, Mat2k, apply, mat_pow, pair


class PreconditionError(ValueError):
    """An identity was asked to be verified outside its hypotheses."""


class NoCocycleError(ValueError):
    pass


def transvection(a, form: GramForm, k: int | None = None) -> Mat2k:
    """Matrix of v -> v + <v, a> a."""
    a = np.asarray(a, dtype=np.int64)
    return Mat2k(np.eye(form.dim, dtype=np.int64) + np.outer(a, a) @ form.J.T, k)


def t_apply(a, v, form: GramForm) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return v + pair(v, a, form) * a


Generator = tuple
Letter = tuple[Generator, int]


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        for _, e in self.letters:
            if e == 0:
                raise ValueError("word exponents must be nonzero")

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, e: int) -> "Word":
        if e >= 0:
            return Word(self.letters * e)
        return self.inverse() ** (-e)

    def inverse(self) -> "Word":
        return Word(tuple((gen, -e) for gen, e in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        parts = []
        for gen, e in self.letters:
            if gen[0] == "t":
                base = f"t[{gen[1]},{gen[2]}]"
            elif gen[0] == "s":
                base = f"s[{gen[1].cycles()}]"
            else:
                base = "v[" + ",".join(map(str, gen[1])) + "]"
            parts.append(base if e == 1 else f"{base}^{e}")
        return " * ".join(parts) or "1"


def t(i: int, j: int, e: int = 1) -> Word:
    i, j = min(i, j), max(i, j)
    return Word(((("t", i, j), e),))


def s(sigma: Permutation, e: int = 1) -> Word:
    return Word(((("s", sigma), e),))


def word_product(words: Iterable[Word]) -> Word:
    out = Word()
    for w in words:
        out = out * w
    return out


_LETTER = re.compile(r"^(t|s|v)\[(.*)\](?:\^(-?\d+))?$")


def parse_word(text: str, d: int) -> Word:
    """Parse ``t[1,2]^2 * t[1,3]^-2 * s[(1 2 3)]``."""
    letters = []
    text = text.strip()
    if text in ("", "1"):
        return Word()
    for chunk in text.split("*"):
        m = _LETTER.match(chunk.strip())
        if not m:
            raise ValueError(f"cannot parse word letter {chunk.strip()!r}")
        kind, body, exp = m.group(1), m.group(2), int(m.group(3) or 1)
        if kind == "t":
            i, j = (int(x) for x in body.split(","))
            letters.append((("t", min(i, j), max(i, j)), exp))
        elif kind == "s":
            letters.append((("s", Permutation.from_cycles(body, d)), exp))
        else:
            letters.append((("v", tuple(int(x) for x in body.split(","))), exp))
    return Word(tuple(letters))


@dataclass
class Lifts:
    """A choice of lifts a_{i,j} in V plus the induced lifts of permutations.

    ``perturb`` maps (i, j) to an integer vector w; the lift becomes a_{i,j} + 2w.
    """

    g: int
    d: int | None = None
    perturb: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rep: StandardRep = standard_rep(self.g, self.d)
        self.d = self.rep.d
        self.form = self.rep.form
        self._cache: dict = {}

    def a(self, i: int, j: int) -> np.ndarray:
        if i == j:
            raise DomainError("a_{i,i} is undefined")
        i, j = min(i, j), max(i, j)
        base = self.rep.a(i, j)
        w = self.perturb.get((i, j))
        return base if w is None else base + 2 * np.asarray(w, dtype=np.int64)

    def t(self, i: int, j: int, k: int | None) -> Mat2k:
        key = ("t", min(i, j), max(i, j), k)
        if key not in self._cache:
            self._cache[key] = transvection(self.a(i, j), self.form, k)
        return self._cache[key]

    def sigma_tilde(self, sigma: Permutation, k: int | None) -> Mat2k:
        """Fixed lift: 1 for the identity, t_{a_{i,j}} for (i,j), else star products."""
        key = ("s", sigma, k)
        if key in self._cache:
            return self._cache[key]
        tr = sigma.as_transposition()
        if sigma.is_identity():
            out = Mat2k.identity(self.rep.dim, k)
        elif tr is not None:
            out = self.t(*tr, k)
        else:
            out = Mat2k.identity(self.rep.dim, k)
            for j in self.rep.group.star_words[sigma]:
                out = out @ self.t(1, j, k)
        self._cache[key] = out
        return out

    def generator(self, gen: Generator, k: int | None) -> Mat2k:
        if gen[0] == "t":
            return self.t(gen[1], gen[2], k)
        if gen[0] == "s":
            return self.sigma_tilde(gen[1], k)
        if gen[0] == "v":
            return transvection(np.array(gen[1]), self.form, k)
        raise ValueError(f"unknown generator {gen!r}")

    def evaluate(self, word: Word, k: int | None) -> Mat2k:
        out = Mat2k.identity(self.rep.dim, k)
        for gen, e in word.letters:
            out = out @ mat_pow(self.generator(gen, k), e)
        return out


@lru_cache(maxsize=None)
def canonical_lifts(g: int, d: int | None = None) -> Lifts:
    return Lifts(g, d)


def lift_transposition(i: int, j: int) -> Word:
    if i == j:
        raise DomainError("transposition needs distinct points")
    return t(i, j)


def y_lift(c, i: int, j: int, g: int, d: int | None = None) -> Word:
    """y_{c,(i,j)} = prod_{l != m} (m,l)~^2 * (i,j)~ with m = m_{c,i,j}."""
    from .cocycles import m_index

    d = 2 * g + 1 if d is None else d
    if d % 2 == 0:
        raise NoCocycleError("no level-4 quasi-cocycle exists for even d")
    m = m_index(c, i, j, g)
    word = word_product(t(m, l, 2) for l in range(1, d + 1) if l != m)
    return word * t(i, j)


def commutator(A: Mat2k, B: Mat2k) -> Mat2k:
    return A @ B @ A.inverse() @ B.inverse()


def verify_braid_identity_mod8(i: int, j: int, k: int, lifts: Lifts) -> bool:
    if len({i, j, k}) != 3:
        raise PreconditionError("braid identity needs distinct indices")
    tij, tik = lifts.t(i, j, 3), lifts.t(i, k, 3)
    return tij @ tik @ tij == tik @ tij @ tik


def _pair_int(u, v, form: GramForm) -> int:
    return pair(u, v, form)


def _f2_independent(vectors) -> bool:
    from .zmod import f2_rank

    return f2_rank(np.array(vectors) % 2) == len(vectors)


def lemma_a_plus_c_preconditions(a, b, c, form: GramForm) -> list[str]:
    failed = []
    if not _f2_independent([a, b, c]):
        failed.append("images mod 2 are not linearly independent")
    if _pair_int(a, b, form) != -1:
        failed.append(f"<a,b> = {_pair_int(a, b, form)} != -1")
    if _pair_int(b, c, form) != -1:
        failed.append(f"<b,c> = {_pair_int(b, c, form)} != -1")
    if _pair_int(a, c, form) != 0:
        failed.append(f"<a,c> = {_pair_int(a, c, form)} != 0")
    return failed


def a_plus_c_sides(a, b, c, form: GramForm, k: int | None = None) -> tuple[Mat2k, Mat2k]:
    """Both sides of t_a^2 t_{a-b}^2 t_{a-b+c}^2 t_b^2 t_{b-c}^2 t_c^2 = t_{a+c}^2, over Z or mod 2^k."""
    a, b, c = (np.asarray(x, dtype=np.int64) for x in (a, b, c))
    sq = [transvection(x, form, k) ** 2 for x in (a, a - b, a - b + c, b, b - c, c)]
    lhs = sq[0]
    for m in sq[1:]:
        lhs = lhs @ m
    return lhs, transvection(a + c, form, k) ** 2


def verify_lemma_a_plus_c(a, b, c, form: GramForm, check: bool = True) -> bool:
    if check:
        failed = lemma_a_plus_c_preconditions(a, b, c, form)
        if failed:
            raise PreconditionError("; ".join(failed))
    lhs, rhs = a_plus_c_sides(a, b, c, form)
    return lhs == rhs


def a_plus_c_orbit_form_agrees(a, b, c, form: GramForm) -> bool:
    """The first form of the identity, t_{t_b(a)} and t_{t_c(t_b(a))}, agrees with a-b, a-b+c."""
    tb_a = t_apply(b, a, form)
    tc_tb_a = t_apply(c, tb_a, form)
    tc_b = t_apply(c, b, form)
    a, b, c = (np.asarray(x, dtype=np.int64) for x in (a, b, c))
    return (np.array_equal(tb_a, a - b) and np.array_equal(tc_tb_a, a - b + c)
            and np.array_equal(tc_b, b - c))


def minus1_product(a, b, form: GramForm) -> Mat2k:
    """t_a^2 t_{t_b(a)}^2 t_b^2 over Z."""
    return (transvection(a, form) ** 2) @ (transvection(t_apply(b, a, form), form) ** 2) @ (
        transvection(b, form) ** 2)


def verify_lemma_minus1(a, b, form: GramForm) -> bool:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    ab = pair(a, b, form)
    if ab not in (1, -1):
        raise PreconditionError(f"<a,b> = {ab} is not +-1")
    P = minus1_product(a, b, form)
    if not (P @ P).is_identity():
        return False
    if not (np.array_equal(apply(P, a), -a) and np.array_equal(apply(P, b), -b)):
        return False
    # v - proj(v) spans the orthogonal complement of span{a, b}.
    for v in np.eye(form.dim, dtype=np.int64):
        proj = (pair(v, b, form) * a - pair(v, a, form) * b) * ab
        w = v - proj
        if pair(w, a, form) or pair(w, b, form):
            return False
        if not np.array_equal(apply(P, w), w):
            return False
    return True


def mod4_commutator_identity(a, b, form: GramForm) -> bool:
    """For <a,b> = 0 mod 4 the transvections commute mod 4; for 2 mod 4 the
    commutator is t_{a+b}^2 t_a^2 t_b^2 mod 4."""
    ab = pair(a, b, form) % 4
    if ab % 2:
        raise PreconditionError("<a,b> must be even")
    ta, tb = transvection(a, form, 2), transvection(b, form, 2)
    comm = commutator(ta, tb)
    if ab == 0:
        return comm.is_identity()
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    rhs = (transvection(a + b, form, 2) ** 2) @ (ta ** 2) @ (tb ** 2)
    return comm == rhs


def square_commutator_identity(a, b, form: GramForm) -> bool:
    """t_b^{-2} t_{t_a(b)}^2 = t_{a+b}^4 t_a^4 t_b^4 (mod 8) when <a,b> = 2 mod 4."""
    if pair(a, b, form) % 4 != 2:
        raise PreconditionError("<a,b> must be 2 mod 4")
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    lhs = (transvection(b, form, 3) ** -2) @ (transvection(t_apply(a, b, form), form, 3) ** 2)
    rhs = (transvection(a + b, form, 3) ** 4) @ (transvection(a, form, 3) ** 4) @ (
        transvection(b, form, 3) ** 4)
    return lhs == rhs


def mod8_commutator_identity(a, b, form: GramForm) -> bool:
    """The commutator of t_a, t_b mod 8 for even <a,b>, by <a,b> mod 8:
    0 -> trivial, 4 -> t_{a+b}^4 t_a^4 t_b^4, 2 -> exponent -2, 6 -> exponent 2."""
    ab = pair(a, b, form) % 8
    if ab % 2:
        raise PreconditionError("<a,b> must be even")
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    comm = commutator(transvection(a, form, 3), transvection(b, form, 3))
    if ab == 0:
        return comm.is_identity()
    e = {4: 4, 2: -2, 6: 2}[ab]
    rhs = (transvection(a + b, form, 3) ** e) @ (transvection(a, form, 3) ** e) @ (
        transvection(b, form, 3) ** e)
    return comm == rhs


Vectorish = Union[np.ndarray, list, tuple]


def random_symplectic_integer(rng: np.random.Generator, form: GramForm, factors: int = 4,
                              spread: int = 1) -> Mat2k:
    """Product of random integer transvections t_v^{+-1}; integral and symplectic over Z."""
    out = Mat2k.identity(form.dim)
    for _ in range(factors):
        v = rng.integers(-spread, spread + 1, size=form.dim)
        out = out @ (transvection(v, form) ** int(rng.choice([-1, 1])))
    return out


def symplectic_basis(form: GramForm) -> list[tuple[np.ndarray, np.ndarray]]:
    """Integral pairs (x_i, y_i) with <x_i, y_i> = 1 and all other pairings 0."""
    rest = [v for v in np.eye(form.dim, dtype=np.int64)]
    out = []
    while rest:
        x = rest.pop(0)
        idx = next(n for n, w in enumerate(rest) if abs(pair(x, w, form)) == 1)
        y = rest.pop(idx)
        if pair(x, y, form) == -1:
            y = -y
        out.append((x, y))
        rest = [w - pair(w, y, form) * x + pair(w, x, form) * y for w in rest]
    return out


def random_a_plus_c_triple(rng: np.random.Generator, form: GramForm, spread: int = 2):
    """Integer a, b, c with independent images mod 2, <a,b> = <b,c> = -1 and <a,c> = 0."""
    basis = symplectic_basis(form)
    (x1, y1), (x2, y2) = basis[0], basis[1]
    while True:
        r, s = rng.integers(-spread, spread + 1, size=2)
        if r % 2 or s % 2:
            break
    a, b, c = x1, -y1, -x1 + r * x2 + s * y2
    P = random_symplectic_integer(rng, form)
    return apply(P, a), apply(P, b), apply(P, c)


def random_unit_pair(rng: np.random.Generator, form: GramForm, spread: int = 2):
    """Random integer a, b with <a,b> = +-1."""
    while True:
        a = rng.integers(-spread, spread + 1, size=form.dim)
        b = rng.integers(-spread, spread + 1, size=form.dim)
        if pair(a, b, form) in (1, -1):
            return a, b


def proof_a_plus_c_instance(i: int, j: int, k: int, l: int, g: int, bound: int = 9):
    """a = a_{i,j}; c = a_{k,l} - <a, a_{k,l}> d with <a, d> = 1; b = lam a_{j,k} + mu a_{k,l}
    with lam odd and mu even so that b = a_{j,k} mod 2.  Returns None if the search fails."""
    rep = standard_rep(g)
    form = rep.form
    a, akl, ajk = rep.a(i, j), rep.a(k, l), rep.a(j, k)
    for dv in itertools.product(range(-1, 2), repeat=form.dim):
        dvec = np.array(dv, dtype=np.int64)
        if pair(a, dvec, form) != 1:
            continue
        c = akl - pair(a, akl, form) * dvec
        for lam in range(-bound, bound + 1, 2):
            for mu in range(-bound + 1, bound, 2):
                b = lam * ajk + mu * akl
                if pair(a, b, form) == -1 and pair(b, c, form) == -1:
                    return a, b, c
    return None

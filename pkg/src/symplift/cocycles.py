"""Level-4 and level-8 quasi-cocycles S_d -> M and the subgroups they define.

A cocycle is fixed by its values on the star transpositions (1, j) and extended
to every permutation along the fixed star word, using the twisted rule
phi(s tau) = phi(s) + rho(s) phi(tau) + defect(s, tau).  Values live in V/2V
(chain coordinates), which is identified with M via [i,j] -> v_{i,j}.

Level 4: defect(s, t) = pi(s~ t~ (st)~^{-1} mod 4).
Level 8: defect(s, t) = pi~(y_s y_t y_{st}^{-1} mod 8), with the lifts y_{c, .}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .layers import layer_coords, layer_coords_batch, layer_space
from .standard_rep import Permutation, standard_rep, symmetric_group
from .tilde import tilde_context
from .transvections import Lifts, NoCocycleError, Word, canonical_lifts, t, word_product, y_lift
from .zmod import Mat2k

Bits = tuple[int, ...]


def _bits(v) -> Bits:
    return tuple(int(x) & 1 for x in v)


def _vec(b) -> np.ndarray:
    return np.array(b, dtype=np.uint8)


def parse_bits(text: str, n: int) -> Bits:
    text = text.strip()
    if len(text) != n or set(text) - {"0", "1"}:
        raise ValueError(f"expected {n} binary digits, got {text!r}")
    return tuple(int(ch) for ch in text)


def format_bits(b: Bits) -> str:
    return "".join(str(x) for x in b)


# -- lifts y_{c, sigma} -------------------------------------------------------------------

def m_index(c: Bits, i: int, j: int, g: int) -> int:
    """The point m in {i, j} whose complement is the subset of phi_c((i, j))."""
    phi = build_phi_c(tuple(c), g)
    rep = standard_rep(g)
    sub = rep.subset_of(phi.value(Permutation.transposition(rep.d, i, j)))
    rest = set(range(1, rep.d + 1)) - set(sub.members)
    if len(rest) != 1 or not rest <= {i, j}:
        raise ValueError(f"phi_c((i,j)) = {sub} does not miss exactly one of {i}, {j}")
    return rest.pop()


# -- cocycles -------------------------------------------------------------------------------

@dataclass
class Cocycle:
    """A map S_d -> V/2V determined by its values on the star transpositions."""

    level: int
    g: int
    star_values: dict  # j -> Bits
    c: Bits | None = None
    dvec: Bits | None = None
    d: int | None = None
    reading: str = "disjoint"
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.d = 2 * self.g + 1 if self.d is None else self.d
        if self.level not in (4, 8):
            raise ValueError("level must be 4 or 8")
        if self.level == 8 and self.c is None:
            raise ValueError("a level-8 cocycle needs its type c")
        self.rep = standard_rep(self.g, self.d)
        self.group = symmetric_group(self.d)
        self.lifts = canonical_lifts(self.g, self.d)
        self._memo = {self.group.identity: _vec((0,) * 2 * self.g)}
        for j, v in self.star_values.items():
            self._memo[self.group.star(j)] = _vec(v)

    # lifts used in the defect term --------------------------------------------------

    def lift(self, sigma: Permutation) -> Mat2k:
        if self.level == 4:
            return self.lifts.sigma_tilde(sigma, 2)
        return y_lift_matrix(self.c, sigma, self.g)

    def defect(self, sigma: Permutation, tau: Permutation) -> np.ndarray:
        X = self.lift(sigma) @ self.lift(tau) @ self.lift(sigma * tau).inverse()
        if self.level == 4:
            return layer_space(self.g, self.d).m_project(layer_coords(X, 1, self.d))
        return tilde_context(self.g, self.reading).level4_value(X)

    def act(self, sigma: Permutation, m) -> np.ndarray:
        return self.rep.rho_vec(sigma, m)

    # values -------------------------------------------------------------------------------

    def value(self, sigma: Permutation) -> np.ndarray:
        if sigma in self._memo:
            return self._memo[sigma]
        word = self.group.star_words[sigma]
        s = self.group.star(word[0])
        tau = s * sigma  # s is an involution, so sigma = s * tau
        out = self.value(s) ^ self.act(s, self.value(tau)) ^ self.defect(s, tau)
        self._memo[sigma] = out
        return out

    def evaluate_word(self, stars) -> np.ndarray:
        """Value of the product of (1, j) for j in ``stars``, expanded along that presentation."""
        stars = list(stars)
        if not stars:
            return _vec((0,) * 2 * self.g)
        s = self.group.star(stars[0])
        tau = self.group.identity
        for j in stars[1:]:
            tau = tau * self.group.star(j)
        return self._memo_star(stars[0]) ^ self.act(s, self.evaluate_word(stars[1:])) ^ self.defect(s, tau)

    def _memo_star(self, j: int) -> np.ndarray:
        return self.value(self.group.star(j))

    def table(self) -> dict:
        return {sigma: self.value(sigma) for sigma in self.group.elements}

    def transposition_value(self, i: int, j: int) -> np.ndarray:
        return self.value(Permutation.transposition(self.d, i, j))

    def serialize(self) -> str:
        cbits = format_bits(self.c) if self.c is not None else format_bits(
            tuple(0 for _ in range(2 * self.g)))
        dbits = format_bits(self.dvec) if self.dvec is not None else "-"
        return f"level={self.level} g={self.g} c={cbits} d={dbits}"

    @property
    def label(self):
        return self.c if self.level == 4 else (self.c, self.dvec)


def y_lift_matrix(c: Bits, sigma: Permutation, g: int) -> Mat2k:
    return _y_lift_matrix(tuple(c), sigma, g)


@lru_cache(maxsize=None)
def _y_lift_matrix(c: Bits, sigma: Permutation, g: int) -> Mat2k:
    lifts = canonical_lifts(g)
    if sigma.is_identity():
        return Mat2k.identity(2 * g, 3)
    tr = sigma.as_transposition()
    if tr is not None:
        return lifts.evaluate(y_lift(c, *tr, g), 3)
    out = Mat2k.identity(2 * g, 3)
    for j in symmetric_group(2 * g + 1).star_words[sigma]:
        out = out @ _y_lift_matrix(c, Permutation.transposition(2 * g + 1, 1, j), g)
    return out


def phi0_star(g: int, j: int, level: int = 4) -> np.ndarray:
    rep = standard_rep(g)
    if level == 4:
        return rep.v(*range(2, 2 * g + 2))
    acc = np.zeros(2 * g, dtype=np.uint8)
    if g % 2:
        for k in range(2, 2 * g + 2):
            acc ^= rep.v(1, k)
    return acc


@lru_cache(maxsize=None)
def build_phi_c(c: Bits, g: int, d: int | None = None) -> Cocycle:
    d = 2 * g + 1 if d is None else d
    if d % 2 == 0:
        raise NoCocycleError("no level-4 quasi-cocycle exists for d = 2g + 2 (constraint system infeasible)")
    if len(c) != 2 * g:
        raise ValueError(f"c must have {2 * g} bits")
    rep = standard_rep(g)
    vals = {}
    for j in range(2, 2 * g + 2):
        vals[j] = _bits(phi0_star(g, j) ^ (c[j - 2] * rep.v(1, j)))
    return Cocycle(4, g, vals, c=tuple(c))


@lru_cache(maxsize=None)
def build_phi_cd(c: Bits, dvec: Bits, g: int, reading: str = "disjoint") -> Cocycle:
    rep = standard_rep(g)
    vals = {}
    for j in range(2, 2 * g + 2):
        vals[j] = _bits(phi0_star(g, j, 8) ^ (dvec[j - 2] * rep.v(1, j)))
    return Cocycle(8, g, vals, c=tuple(c), dvec=tuple(dvec), reading=reading)


# -- conditions ---------------------------------------------------------------------------

def condition_failures(phi: Cocycle) -> list[dict]:
    """Violations of <phi((i,j)), v_ij> = target and <phi((i,j)), v_kl> = 0."""
    rep = phi.rep
    target = 1 if phi.level == 4 else phi.g % 2
    out = []
    pts = range(1, phi.d + 1)
    for i, j in itertools.combinations(pts, 2):
        val = phi.transposition_value(i, j)
        if rep.pair2(val, rep.v(i, j)) != target:
            out.append({"transposition": [i, j], "condition": "i", "value": list(map(int, val))})
        for k, l in itertools.combinations([p for p in pts if p not in (i, j)], 2):
            if rep.pair2(val, rep.v(k, l)) != 0:
                out.append({"transposition": [i, j], "condition": "ii", "pair": [k, l],
                            "value": list(map(int, val))})
    return out


def check_conditions(phi: Cocycle) -> bool:
    return not condition_failures(phi)


def check_conditions_l4(phi: Cocycle) -> bool:
    return check_conditions(phi)


def check_conditions_l8(phi: Cocycle) -> bool:
    return check_conditions(phi)


def star_constraint_system(g: int, d: int, j: int = 2, target: int = 1):
    """Rows/rhs of the conditions on phi((1, j)) as a linear system over F_2."""
    rep = standard_rep(g, d)
    rows, rhs = [rep.gram2 @ rep.v(1, j) % 2], [target]
    others = [p for p in range(1, d + 1) if p not in (1, j)]
    for k, l in itertools.combinations(others, 2):
        rows.append(rep.gram2 @ rep.v(k, l) % 2)
        rhs.append(0)
    return np.array(rows, dtype=np.uint8), np.array(rhs, dtype=np.uint8)


def infeasibility_certificate(g: int, d: int | None = None, j: int = 2) -> dict:
    """Ranks of the constraint matrix and its augmentation; infeasible iff they differ."""
    from .zmod import f2_rank

    d = 2 * g + 2 if d is None else d
    A, b = star_constraint_system(g, d, j)
    r = f2_rank(A)
    ra = f2_rank(np.concatenate([A, b[:, None]], axis=1))
    return {"g": g, "d": d, "rank": r, "augmented_rank": ra, "infeasible": ra > r}


def star_solutions(g: int, j: int, level: int = 4) -> list[Bits]:
    """All m in F_2^{2g} satisfying the conditions for phi((1, j)), by brute force."""
    A, b = star_constraint_system(g, 2 * g + 1, j, 1 if level == 4 else g % 2)
    out = []
    for m in itertools.product((0, 1), repeat=2 * g):
        if np.array_equal((A.astype(np.int64) @ np.array(m)) & 1, b):
            out.append(tuple(m))
    return out


def enumerate_l4(g: int) -> list[Cocycle]:
    """Every level-4 quasi-cocycle on S_{2g+1}, in lexicographic order of c."""
    return [build_phi_c(c, g) for c in itertools.product((0, 1), repeat=2 * g)]


def enumerate_l4_bruteforce(g: int) -> list[dict]:
    """Star assignments obtained by solving the conditions independently for each j."""
    per_star = [star_solutions(g, j) for j in range(2, 2 * g + 2)]
    return [dict(zip(range(2, 2 * g + 2), combo)) for combo in itertools.product(*per_star)]


def enumerate_l8(g: int, c: Bits | None = None) -> list[Cocycle]:
    cs = [tuple(c)] if c is not None else list(itertools.product((0, 1), repeat=2 * g))
    return [build_phi_cd(cc, dd, g) for cc in cs for dd in itertools.product((0, 1), repeat=2 * g)]


# -- full cocycle condition ------------------------------------------------------------------

def cocycle_defect_table(phi: Cocycle) -> np.ndarray:
    """defect(sigma, tau) for all pairs, shape (n, n, 2g), rows/cols in group element order."""
    elems = phi.group.elements
    n = len(elems)
    index = phi.group.index
    k = 2 if phi.level == 4 else 3
    lifts = np.array([phi.lift(s).a for s in elems], dtype=np.int64)
    invs = np.array([phi.lift(s).inverse().a for s in elems], dtype=np.int64)
    mod = 1 << k
    out = np.zeros((n, n, 2 * phi.g), dtype=np.uint8)
    L = layer_space(phi.g, phi.d)
    ctx = tilde_context(phi.g, phi.reading) if phi.level == 8 else None
    for a, s in enumerate(elems):
        prod_idx = np.array([index[s * tt] for tt in elems])
        X = (lifts[a][None] @ lifts) % mod
        X = (X @ invs[prod_idx]) % mod
        if phi.level == 4:
            out[a] = (layer_coords_batch(X, 1, phi.g) @ L._pi.T) & 1
        else:
            for b in range(n):
                out[a, b] = ctx.level4_value(Mat2k(X[b], 3))
    return out


def cocycle_pair_failures(phi: Cocycle, limit: int = 5) -> list[dict]:
    """Pairs (sigma, tau) violating phi(st) = phi(s) + s.phi(t) + defect(s, t)."""
    elems = phi.group.elements
    index = phi.group.index
    table = np.array([phi.value(s) for s in elems], dtype=np.uint8)
    rhos = np.array([phi.rep.rho(s).a for s in elems], dtype=np.int64)
    D = cocycle_defect_table(phi)
    bad = []
    for a, s in enumerate(elems):
        prod_idx = np.array([index[s * tt] for tt in elems])
        rhs = table[a][None] ^ ((table.astype(np.int64) @ rhos[a].T) & 1).astype(np.uint8) ^ D[a]
        wrong = np.flatnonzero((rhs != table[prod_idx]).any(axis=1))
        for b in wrong[: max(0, limit - len(bad))]:
            bad.append({"sigma": str(s), "tau": str(elems[b])})
        if len(bad) >= limit:
            break
    return bad


# -- subgroups ------------------------------------------------------------------------------

def section_word(m, level: int) -> Word:
    """A Gamma(2) (level 4) or Gamma(4) (level 8) element projecting to m."""
    e = 2 if level == 4 else 4
    return word_product(t(p + 1, p + 2, e) for p in np.flatnonzero(np.asarray(m) & 1))


def subgroup_generators(phi: Cocycle) -> list[Word]:
    """One generator word per star transposition."""
    out = []
    for j in range(2, phi.d + 1):
        m = phi.value(phi.group.star(j))
        if phi.level == 4:
            out.append(section_word(m, 4) * t(1, j))
        else:
            out.append(section_word(m, 8) * y_lift(phi.c, 1, j, phi.g))
    return out


def generator_matrices(phi: Cocycle, k: int | None = None, lifts: Lifts | None = None) -> list[Mat2k]:
    k = (2 if phi.level == 4 else 3) if k is None else k
    lifts = canonical_lifts(phi.g) if lifts is None else lifts
    return [lifts.evaluate(w, k) for w in subgroup_generators(phi)]


def _star_of(u: Mat2k, g: int) -> int:
    rep = standard_rep(g)
    u2 = u.reduce(1)
    for j in range(2, 2 * g + 2):
        if rep.rho(rep.group.star(j)) == u2:
            return j
    from .closure import LabelRecoveryError

    raise LabelRecoveryError("generator does not reduce to a star transposition mod 2")


def recover_label_l4(gens, g: int) -> Bits:
    """Read c off generators lying over the star transpositions (mod 4)."""
    from .closure import LabelRecoveryError

    rep, lifts = standard_rep(g), canonical_lifts(g)
    L = layer_space(g)
    c = [None] * (2 * g)
    for u in gens:
        u4 = u.reduce(2)
        j = _star_of(u4, g)
        val = L.m_project(layer_coords(u4 @ lifts.t(1, j, 2).inverse(), 1))
        diff = val ^ phi0_star(g, j)
        if not diff.any():
            bit = 0
        elif np.array_equal(diff, rep.v(1, j)):
            bit = 1
        else:
            raise LabelRecoveryError(f"value at (1,{j}) is not of the classified form")
        if c[j - 2] is not None and c[j - 2] != bit:
            raise LabelRecoveryError(f"inconsistent values at (1,{j})")
        c[j - 2] = bit
    if None in c:
        raise LabelRecoveryError("some star transposition has no generator over it")
    return tuple(c)


def recover_label_l8(gens, g: int, reading: str = "disjoint") -> tuple[Bits, Bits]:
    from .closure import LabelRecoveryError

    rep = standard_rep(g)
    c = recover_label_l4(gens, g)
    ctx = tilde_context(g, reading)
    dv = [None] * (2 * g)
    for u in gens:
        u8 = u.reduce(3)
        j = _star_of(u8, g)
        y = y_lift_matrix(c, rep.group.star(j), g)
        try:
            val = ctx.level4_value(u8 @ y.inverse())
        except ValueError as exc:
            raise LabelRecoveryError(str(exc)) from exc
        diff = val ^ phi0_star(g, j, 8)
        if not diff.any():
            bit = 0
        elif np.array_equal(diff, rep.v(1, j)):
            bit = 1
        else:
            raise LabelRecoveryError(f"level-8 value at (1,{j}) is not of the classified form")
        if dv[j - 2] is not None and dv[j - 2] != bit:
            raise LabelRecoveryError(f"inconsistent level-8 values at (1,{j})")
        dv[j - 2] = bit
    return c, tuple(dv)


def pairing_shift(i: int, j: int, g: int) -> Bits:
    """(<v_{i,j}, v_{1,k}>)_{k=2..2g+1}, the predicted label shift under conjugation."""
    rep = standard_rep(g)
    return tuple(rep.pair2(rep.v(i, j), rep.v(1, k)) for k in range(2, 2 * g + 2))


def add_bits(a: Bits, b: Bits) -> Bits:
    return tuple((x + y) % 2 for x, y in zip(a, b))


def epsilon_uniqueness(g: int) -> dict:
    """For each triple, try eps in {0, v_complement}; only eps = 0 may satisfy the
    four-term relation for every fourth index.  Maps each triple to the surviving choices."""
    rep = standard_rep(g)
    pts = range(1, 2 * g + 2)
    survivors = {}
    for tri in itertools.combinations(pts, 3):
        alive = []
        for choice in (0, 1):
            def eps(T):
                return (choice * rep.v(*[p for p in pts if p not in T])).astype(np.uint8)
            i, j, k = tri
            if all(not (eps((i, j, k)) ^ eps((i, j, l)) ^ eps((i, k, l)) ^ eps((j, k, l))).any()
                   for l in pts if l not in tri):
                alive.append(choice)
        survivors[tri] = alive
    return survivors

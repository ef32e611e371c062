"""Registry of executable checks, one per verified statement, with structured verdicts."""

from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import cocycles as cc
from .closure import (ClosureOverflowError, GroupHandle, LabelRecoveryError, close,
                      congruence_intersection, conjugacy_orbit, conjugate_generators)
from .gamma8 import Gamma8Verifier, expected_delta_square_pairs
from .layers import (SubspaceF2, intersect, layer_coords, layer_element, layer_space,
                     lemma_complement_holds, saturate_invariant)
from .standard_rep import Permutation, image_order, standard_rep, symmetric_group, v_of_subset
from .tilde import TildeContext, delta8, floor_bracket
from .transvections import (PreconditionError, canonical_lifts, commutator,
                            lemma_a_plus_c_preconditions, a_plus_c_sides, mod4_commutator_identity,
                            mod8_commutator_identity, proof_a_plus_c_instance,
                            random_a_plus_c_triple, random_symplectic_integer, random_unit_pair,
                            square_commutator_identity, t, transvection,
                            verify_braid_identity_mod8, verify_lemma_a_plus_c, verify_lemma_minus1,
                            Lifts)
from .zmod import Mat2k, dump_line, f2_rank, is_symplectic, mat_inverse, mat_mul, pair, reduce_mod

STATUSES = ("verified", "falsified", "inconclusive")


class UnknownCheckError(KeyError):
    pass


@dataclass(frozen=True)
class CheckSpec:
    id: str
    g: int = 2
    seed: int = 0
    trials: int = 100
    sample: int = 8
    cap: int = 10_000_000
    profile: str = "quick"
    mutate_delta: bool = False

    @property
    def reading(self) -> str:
        return "meeting" if self.mutate_delta else "disjoint"

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass
class Verdict:
    id: str
    status: str
    evidence: dict
    params: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {"id": self.id, "status": self.status, "params": self.params,
                "evidence": _jsonable(self.evidence)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, Mat2k):
        return dump_line(x)
    if isinstance(x, Permutation):
        return str(x)
    return x


class Recorder:
    """Collects evidence and the first few failures of a check."""

    def __init__(self):
        self.evidence: dict = {}
        self.failures: list[dict] = []
        self.inconclusive: str | None = None

    def expect(self, ok, what: str, **detail) -> bool:
        ok = bool(ok)
        if not ok and len(self.failures) < 5:
            self.failures.append({"claim": what, **detail})
        return ok

    def __setitem__(self, key, value):
        self.evidence[key] = value

    def verdict(self, spec: CheckSpec) -> Verdict:
        ev = dict(self.evidence)
        if self.failures:
            status = "falsified"
            ev["counterexample"] = self.failures
        elif self.inconclusive:
            status = "inconclusive"
            ev["reason"] = self.inconclusive
        else:
            status = "verified"
        params = {"g": spec.g, "seed": spec.seed, "trials": spec.trials, "sample": spec.sample,
                  "profile": spec.profile}
        if spec.mutate_delta:
            params["mutate_delta"] = True
        return Verdict(spec.id, status, ev, params)


REGISTRY: dict[str, Callable[[CheckSpec, Recorder], None]] = {}
COVERAGE: dict[str, list[str]] = {}
LINEAR_ONLY: set[str] = set()


def register(cid: str, covers: list[str], linear: bool = False):
    def deco(fn):
        REGISTRY[cid] = fn
        COVERAGE[cid] = covers
        if linear:
            LINEAR_ONLY.add(cid)
        return fn
    return deco


def _vec_str(x) -> str:
    return "".join(str(int(b)) for b in np.asarray(x).ravel())


def _labels(g: int):
    return list(itertools.product((0, 1), repeat=2 * g))


def _sample_labels8(spec: CheckSpec):
    allpairs = [(c, d) for c in _labels(spec.g) for d in _labels(spec.g)]
    if spec.profile == "full":
        return allpairs
    rng = spec.rng()
    pick = sorted(rng.choice(len(allpairs), size=min(spec.sample, len(allpairs)), replace=False))
    chosen = [allpairs[i] for i in pick]
    zero = allpairs[0]
    return chosen if zero in chosen else [zero] + chosen[:-1]


# -- standard representation ----------------------------------------------------------------

@register("rep-image-order", ["rho", "image_order", "subset_pairing", "v_of_subset", "is_symplectic"],
          linear=True)
def _rep_image_order(spec, rec):
    g = spec.g
    for d in (2 * g + 1, 2 * g + 2):
        rep = standard_rep(g, d)
        order = image_order(d)
        rec[f"order_d{d}"] = order
        rec.expect(order == math.factorial(d), "rho is injective", d=d, order=order)
        for s in rep.group.stars:
            rec.expect(_preserves_pairing(rep, s), "rho preserves the pairing", sigma=s)
            rec.expect(is_symplectic(rep.rho(s), rep.form), "rho lands in Sp(V/2V)", sigma=s)
        if d % 2 == 0:
            full = set(range(1, d + 1))
            for I in itertools.combinations(range(1, d + 1), 2):
                rec.expect(v_of_subset(set(I), d) == v_of_subset(full - set(I), d),
                           "v_I is identified with its complement", d=d, subset=list(I))
        rng = spec.rng()
        els = rep.group.elements
        for _ in range(50):
            a, b = els[rng.integers(len(els))], els[rng.integers(len(els))]
            rec.expect(rep.rho(a * b) == rep.rho(a) @ rep.rho(b), "rho is a homomorphism",
                       sigma=a, tau=b)
    if g == 1:
        rec["order_d4"] = image_order(4)
        rec.expect(image_order(4) == 6, "rho has a kernel for d = 4")


def _preserves_pairing(rep, s) -> bool:
    R = rep.rho(s).a
    return np.array_equal((R.T @ rep.gram2 @ R) % 2, rep.gram2 % 2)


# -- layers -----------------------------------------------------------------------------------

@register("prop-2group-a", ["layer_coords", "transvection", "mat_mul", "mat_inverse", "reduce_mod",
                             "pair"], linear=True)
def _prop_2group_a(spec, rec):
    g = spec.g
    L = layer_space(g)
    rank = f2_rank(L.T.reshape(L.npairs, -1) % 2)
    rec["dim"] = L.npairs
    rec["rank_T"] = rank
    rec.expect(L.npairs == 2 * g * g + g and rank == L.npairs, "the T_{i,j} are a basis")
    lifts = canonical_lifts(g)
    for n in (1, 2, 3):
        for (i, j) in L.pairs:
            A = lifts.t(i, j, n + 1) ** (2 ** n)
            x = layer_coords(A, n)
            rec.expect(np.array_equal(x, L.unit(i, j)), "t^{2^n} has unit coordinates", n=n, pair=[i, j])
            rec.expect(reduce_mod(A, n).is_identity(), "t^{2^n} lies in Gamma(2^n)", n=n, pair=[i, j])
    for (i, j) in L.pairs:
        a = lifts.a(i, j)
        T = lifts.t(i, j, 3)
        rec.expect(pair(a, a, lifts.form, 3) == 0, "the pairing is alternating", pair=[i, j])
        rec.expect(mat_mul(T, mat_inverse(T)).is_identity(), "t_a is invertible", pair=[i, j])
    if g == 2:
        gens = [lifts.t(i, j, 2) ** 2 for i, j in L.pairs]
        res = close(GroupHandle(2, g, gens), cap=spec.cap)
        rec["order_gamma2_mod4"] = res.order
        rec.expect(res.order == 2 ** L.npairs, "layer order is 2^(2g^2+g)", order=res.order)
        sq = (res.elements.astype(np.int64) @ res.elements.astype(np.int64)) % 4
        rec.expect(bool((sq == np.eye(2 * g, dtype=np.int64)).all()), "layer is elementary abelian")


@register("prop-2group-b", ["sd_act"])
def _prop_2group_b(spec, rec):
    g = spec.g
    rng = spec.rng()
    lifts = canonical_lifts(g)
    L = layer_space(g)
    els = symmetric_group(2 * g + 1).elements
    count = 0
    for trial in range(5 * spec.trials):
        n = int(rng.integers(1, 4))
        sigma = els[rng.integers(len(els))]
        x = rng.integers(0, 2, L.npairs)
        u = lifts.sigma_tilde(sigma, n + 1)
        A = layer_element(x, n, g, n + 1)
        lhs = layer_coords(u @ A @ u.inverse(), n)
        rec.expect(np.array_equal(lhs, L.act(sigma, x)), "conjugation permutes [i,j]",
                   n=n, sigma=sigma, x=_vec_str(x))
        count += 1
    rec["cases"] = count


@register("lemma-complement", ["layer_coords"], linear=True)
def _lemma_complement(spec, rec):
    g = spec.g
    for d in (2 * g + 1, 2 * g + 2):
        ok = lemma_complement_holds(g, d)
        rec[f"d{d}"] = ok
        rec.expect(ok, "T_I is the sum of T_{i,j}", d=d)


@register("lemma-sufficient", ["close"])
def _lemma_sufficient(spec, rec):
    g = spec.g
    lifts = canonical_lifts(g)
    L = layer_space(g)
    for n in (1, 2) if g == 2 else (1,):
        e = 2 ** n
        low = close(GroupHandle(n + 1, g, [lifts.t(i, j, n + 1) ** e for i, j in L.pairs]), cap=spec.cap)
        high = close(GroupHandle(n + 2, g, [lifts.t(i, j, n + 2) ** e for i, j in L.pairs]), cap=spec.cap)
        inter = congruence_intersection(high, n + 1)
        rec[f"n{n}"] = {"order_low": low.order, "order_high": high.order,
                        "next_layer_dim": inter.subspace.dim}
        rec.expect(low.order == 2 ** L.npairs, "hypothesis: full layer at level n", n=n)
        rec.expect(inter.subspace.dim == L.npairs, "conclusion: full next layer", n=n)


@register("prop-N-a", ["n_membership"], linear=True)
def _prop_n_a(spec, rec):
    g = spec.g
    L = layer_space(g)
    for d in (2 * g + 1, 2 * g + 2):
        Ld = layer_space(g, d)
        for A in (Ld.action_matrix(s) for s in Ld.rep.group.stars):
            img = [(A @ b) & 1 for b in L.N.basis().astype(np.int64)]
            rec.expect(all(L.in_n(v) for v in img), "N is S_d-invariant", d=d)
    if g <= 2:
        # row-sum criterion over all d = 2g+2 points, exhaustive over coefficient vectors
        d = 2 * g + 2
        Ld = layer_space(g, d)
        pairs = list(itertools.combinations(range(1, d + 1), 2))
        units = np.array([Ld.unit(i, j) for i, j in pairs], dtype=np.int64)
        allc = np.array(list(itertools.product((0, 1), repeat=len(pairs))), dtype=np.int64)
        x = (allc @ units) & 1
        innn = np.array([L.in_n(v) for v in x])
        inc = np.zeros((len(pairs), d), dtype=np.int64)
        for n, (i, j) in enumerate(pairs):
            inc[n, i - 1] = inc[n, j - 1] = 1
        sums = (allc @ inc) & 1
        rowok = ~sums.any(axis=1)
        even_last = sums[:, d - 1] == 0
        bad = np.flatnonzero(rowok & ~innn)
        rec.expect(bad.size == 0, "vanishing row sums over all d points imply membership",
                   coefficients=_vec_str(allc[bad[0]]) if bad.size else None)
        bad = np.flatnonzero(even_last & (innn != rowok))
        rec.expect(bad.size == 0, "row-sum criterion for expansions with an even number of [k,d] terms",
                   coefficients=_vec_str(allc[bad[0]]) if bad.size else None)
        rec["d_even_expansions"] = int(allc.shape[0])
        # expansions with an odd number of [k,d] terms can lie in N with odd row sums
        rec["odd_count_expansions_in_N"] = int((innn & ~even_last).sum())


@register("prop-N-b", ["n_membership", "saturate_invariant"], linear=True)
def _prop_n_b(spec, rec):
    g = spec.g
    L = layer_space(g)
    pts = range(1, 2 * g + 2)
    triples = list(itertools.combinations(pts, 3))
    D = SubspaceF2(L.npairs, [L.delta(*t) for t in triples])
    rec["span_dim"] = D.dim
    rec.expect(D == L.N, "N is spanned by the Delta")
    # four-term relations span the full relation space among the Delta
    tidx = {t: n for n, t in enumerate(triples)}
    rels = []
    for q in itertools.combinations(pts, 4):
        v = np.zeros(len(triples), dtype=np.uint8)
        for t in itertools.combinations(q, 3):
            v[tidx[t]] = 1
        rels.append(v)
    R = SubspaceF2(len(triples), rels)
    rec["relation_dim"] = R.dim
    rec.expect(R.dim == len(triples) - D.dim, "four-term relations are a full set",
               relations=R.dim, expected=len(triples) - D.dim)
    Dm = np.array([L.delta(*t) for t in triples], dtype=np.int64)
    for v in rels:
        rec.expect(not ((v.astype(np.int64) @ Dm) & 1).any(), "four-term relation holds")
    sat = saturate_invariant([L.delta(1, 2, 3)], g)
    rec.expect(sat == L.N, "saturation of Delta_{1,2,3} is N")


@register("prop-N-c", ["m_project"], linear=True)
def _prop_n_c(spec, rec):
    g = spec.g
    L = layer_space(g)
    rep = standard_rep(g)
    rec["dim_N"] = L.N.dim
    rec.expect(L.N.dim == 2 * g * g - g, "dim N = 2g^2 - g", dim=L.N.dim)
    images = [L.m_project(L.unit(i, 2 * g + 1)) for i in range(1, 2 * g + 1)]
    from .zmod import f2_rank

    rec["dim_M"] = f2_rank(np.array(images))
    rec.expect(f2_rank(np.array(images)) == 2 * g, "[i,2g+1] give a basis of M")
    for i, j in L.pairs:
        rec.expect(np.array_equal(L.m_project(L.unit(i, j)), rep.v(i, j)), "[i,j] maps to v_{i,j}")
    for i, j, k in itertools.permutations(range(1, 2 * g + 2), 3):
        x = L.unit(i, j) ^ L.unit(i, k) ^ L.unit(min(j, k), max(j, k))
        rec.expect(L.in_n(x), "[i,j] + [i,k] = [j,k] mod N", triple=[i, j, k])
    rng = spec.rng()
    els = rep.group.elements
    for _ in range(5 * spec.trials):
        s = els[rng.integers(len(els))]
        x = rng.integers(0, 2, L.npairs)
        rec.expect(np.array_equal(L.m_project(L.act(s, x)), rep.rho_vec(s, L.m_project(x))),
                   "induced action on M is rho", sigma=s, x=_vec_str(x))


def _outside_n(L, exhaustive: bool):
    """Every vector outside N, or one representative m_section(m) per nonzero class of M."""
    if exhaustive:
        for v in itertools.product((0, 1), repeat=L.npairs):
            v = np.array(v, dtype=np.uint8)
            if not L.in_n(v):
                yield v
        return
    for m in itertools.product((0, 1), repeat=L.dim):
        if any(m):
            yield L.m_section(np.array(m, dtype=np.uint8))


@register("prop-N-d", ["saturate_invariant"], linear=True)
def _prop_n_d(spec, rec):
    g = spec.g
    exhaustive = g == 2
    for d in (2 * g + 1, 2 * g + 2):
        L = layer_space(g, d)
        count = 0
        for x in _outside_n(L, exhaustive):
            sat = saturate_invariant([x], g, d, start=L.N)
            count += 1
            rec.expect(sat.dim == L.npairs, "N + x saturates to the full layer", d=d, x=_vec_str(x))
        rec[f"cases_d{d}"] = count


@register("prop-N-e", ["saturate_invariant"], linear=True)
def _prop_n_e(spec, rec):
    g = spec.g
    d = 2 * g + 1
    L = layer_space(g, d)
    rec["codim_N0_in_N"] = L.N.dim - L.N0.dim
    rec.expect(L.N.dim - L.N0.dim == 1, "N_0 has codimension 1 in N")
    for s in L.rep.group.stars:
        A = L.action_matrix(s)
        rec.expect(all(L.in_layer0((A @ b) & 1) for b in L.layer0.basis().astype(np.int64)),
                   "zero-sum subspace is invariant", d=d)
    count = 0
    if g == 2:
        source = (np.array(v, dtype=np.uint8) for v in itertools.product((0, 1), repeat=L.npairs))
    else:
        rng = spec.rng()
        source = (rng.integers(0, 2, L.npairs).astype(np.uint8) for _ in range(10 * spec.trials))
    for x in source:
        if L.in_layer0(x):
            continue
        sat = saturate_invariant([x], g, d, start=L.N0)
        count += 1
        rec.expect(L.N <= sat, "W contains N_0 and leaves the zero-sum part, so W contains N",
                   x=_vec_str(x))
    rec["cases"] = count


@register("prop-N-f", ["commutator"], linear=True)
def _prop_n_f(spec, rec):
    g = spec.g
    lifts = canonical_lifts(g)
    L = layer_space(g)
    count = 0
    for n in (2, 3):
        k = n + 1
        for s in range(1, n):
            for i, j, kk in itertools.permutations(range(1, 2 * g + 2), 3):
                A = lifts.t(i, j, k) ** (2 ** s)
                B = lifts.t(i, kk, k) ** (2 ** (n - s))
                C = commutator(A, B)
                rec.expect(np.array_equal(layer_coords(C, n), L.delta(i, j, kk)),
                           "commutator is Delta_{i,j,k}", n=n, s=s, triple=[i, j, kk])
                count += 1
            for (p, q) in itertools.product(L.pairs, repeat=2):
                A = lifts.t(*p, k) ** (2 ** s)
                B = lifts.t(*q, k) ** (2 ** (n + 1 - s))
                rec.expect(A @ B == B @ A, "Gamma(2^s) and Gamma(2^(n+1-s)) commute", n=n, s=s)
    rec["cases"] = count


@register("prop-N-g", ["transvection", "n_membership"], linear=True)
def _prop_n_g(spec, rec):
    g = spec.g
    rng = spec.rng()
    form = standard_rep(g).form
    L = layer_space(g)
    def sample(n, s):
        k = n + 1
        a = rng.integers(0, 2 ** k, 2 * g)
        b = (a + (2 ** s) * rng.integers(0, 2 ** k, 2 * g)) % (2 ** k)
        e = 2 ** (n - s)
        X = (transvection(b, form, k) ** e) @ (transvection(a, form, k) ** -e)
        return a, b, L.in_n(layer_coords(X, n))

    count = 0
    for _ in range(spec.trials):
        n = int(rng.integers(2, 4))
        s = int(rng.integers(1, n))
        a, b, ok = sample(n, s)
        rec.expect(ok, "t_b^{2^(n-s)} t_a^{-2^(n-s)} lies in N", n=n, s=s, a=a.tolist(), b=b.tolist())
        count += 1
    rec["cases"] = count
    # outside 1 <= s <= n-1 the statement fails: s = 0 and s = n both give elements off N
    boundary = {"s=0": 0, "s=n": 0}
    for _ in range(20):
        n = int(rng.integers(1, 4))
        boundary["s=0"] += not sample(n, 0)[2]
        boundary["s=n"] += not sample(n, n)[2]
    rec["boundary_failures_of_20"] = boundary


@register("rmk-N-pairing", ["n_membership"], linear=True)
def _rmk_n_pairing(spec, rec):
    g = spec.g
    L = layer_space(g)
    rep = standard_rep(g)
    G = L.bracket_gram
    kernel = SubspaceF2(L.npairs, [v for v in _nullspace(G)])
    rec["kernel_dim"] = kernel.dim
    rec.expect(kernel == L.N, "N is the kernel of the bracket pairing")
    for p, q in itertools.product(L.pairs, repeat=2):
        rec.expect(L.bracket_pairing(L.unit(*p), L.unit(*q)) == rep.pair2(rep.v(*p), rep.v(*q)),
                   "induced pairing on M is the standard pairing", p=list(p), q=list(q))


def _nullspace(G: np.ndarray) -> list[np.ndarray]:
    """Basis of the F_2 kernel of G, by reduction to row echelon form."""
    A = np.asarray(G, dtype=np.int64) & 1
    n = A.shape[1]
    piv, r = [], 0
    for col in range(n):
        rows = [i for i in range(r, A.shape[0]) if A[i, col]]
        if not rows:
            continue
        A[[r, rows[0]]] = A[[rows[0], r]]
        for i in range(A.shape[0]):
            if i != r and A[i, col]:
                A[i] ^= A[r]
        piv.append(col)
        r += 1
    out = []
    for f in (c for c in range(n) if c not in piv):
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(piv):
            v[pc] = A[i, f]
        out.append(v)
    return out


# -- level 4 ----------------------------------------------------------------------------------

def _random_star_lifts(g: int, d: int, k: int, rng) -> list[Mat2k]:
    lifts = canonical_lifts(g, d)
    L = layer_space(g)
    return [lifts.t(1, j, k) @ layer_element(rng.integers(0, 2, L.npairs), 1, g, k)
            for j in range(2, d + 1)]


@register("lemma-contains-N", ["congruence_intersection"])
def _lemma_contains_n(spec, rec):
    g = spec.g
    rng = spec.rng()
    L = layer_space(g)
    kinds = {"equal_N": 0, "full": 0}
    for trial in range(max(1, spec.trials // 5)):
        gens = _random_star_lifts(g, 2 * g + 1, 2, rng)
        res = close(GroupHandle(2, g, gens), cap=spec.cap)
        sub = congruence_intersection(res, 1).subspace
        rec.expect(L.N <= sub, "N is contained in H", generators=[dump_line(x) for x in gens])
        if sub == L.N:
            kinds["equal_N"] += 1
        elif sub.dim == L.npairs:
            kinds["full"] += 1
        else:
            rec.expect(False, "intersection is N or the full layer", dim=sub.dim,
                       generators=[dump_line(x) for x in gens])
    rec["random_groups"] = kinds


@register("cor-contains-N", ["subgroup_generators"])
def _cor_contains_n(spec, rec):
    g = spec.g
    lifts = canonical_lifts(g)
    for c in [(0,) * (2 * g), (1,) + (0,) * (2 * g - 1)]:
        phi = cc.build_phi_c(c, g)
        star = close(GroupHandle(2, g, cc.generator_matrices(phi)), cap=spec.cap)
        allg = [lifts.evaluate(cc.section_word(phi.value(s), 4), 2) @ lifts.sigma_tilde(s, 2)
                for s in phi.group.elements]
        full = close(GroupHandle(2, g, allg), cap=spec.cap)
        rec[f"order_c{_vec_str(c)}"] = star.order
        rec.expect(star.fingerprint() == full.fingerprint(), "star generators suffice", c=_vec_str(c))


@register("lemma-lift-identities", ["verify_braid_identity_mod8", "lift_transposition"], linear=True)
def _lemma_lift_identities(spec, rec):
    g = spec.g
    L = layer_space(g)
    lifts = canonical_lifts(g)
    n3 = n4 = 0
    for i, j, k in itertools.permutations(range(1, 2 * g + 2), 3):
        rec.expect(verify_braid_identity_mod8(i, j, k, lifts), "braid identity mod 8", triple=[i, j, k])
        n3 += 1
    for i, j, k, l in itertools.permutations(range(1, 2 * g + 2), 4):
        C = commutator(lifts.t(i, j, 2), lifts.t(k, l, 2))
        rec.expect(L.in_n(layer_coords(C, 1)), "disjoint lifts commute modulo N", quad=[i, j, k, l])
        rec.expect(mod4_commutator_identity(lifts.a(i, j), lifts.a(k, l), lifts.form),
                   "mod-4 commutator identity", quad=[i, j, k, l])
        n4 += 1
    rng = spec.rng()
    for _ in range(spec.trials):
        pert = {p: rng.integers(-2, 3, 2 * g) for p in L.pairs}
        pl = Lifts(g, None, pert)
        i, j, k, l = (int(x) for x in rng.permutation(np.arange(1, 2 * g + 2))[:4])
        rec.expect(verify_braid_identity_mod8(i, j, k, pl), "braid identity for perturbed lifts",
                   triple=[i, j, k])
        rec.expect(mod4_commutator_identity(pl.a(i, j), pl.a(k, l), pl.form),
                   "mod-4 commutator identity for perturbed lifts", quad=[i, j, k, l])
        C = commutator(pl.t(i, j, 2), pl.t(k, l, 2))
        rec.expect(L.in_n(layer_coords(C, 1)), "perturbed disjoint lifts commute modulo N")
    rec["triples"] = n3
    rec["quadruples"] = n4
    # a Gamma(4) perturbation of one lift breaks the braid identity in general
    t12 = lifts.t(1, 2, 3) @ layer_element(L.unit(1, 3), 2, g, 3)
    t13 = lifts.t(1, 3, 3)
    rec["gamma4_perturbation_breaks_braid"] = not (t12 @ t13 @ t12 == t13 @ t12 @ t13)


@register("lemma-quasi-cocycle", ["build_phi_c", "subgroup_generators", "congruence_intersection"])
def _lemma_quasi_cocycle(spec, rec):
    g = spec.g
    L = layer_space(g)
    good = {tuple(tuple(phi.star_values[j]) for j in range(2, 2 * g + 2)) for phi in cc.enumerate_l4(g)}
    for phi in cc.enumerate_l4(g)[:4]:
        rec.expect(not cc.cocycle_pair_failures(phi), "phi_c satisfies the cocycle rule on all pairs",
                   c=_vec_str(phi.c), failures=cc.cocycle_pair_failures(phi))
    rng = spec.rng()
    lifts = canonical_lifts(g)
    counts = {"cocycle": 0, "non_cocycle": 0}
    target = math.factorial(2 * g + 1) * 2 ** L.N.dim
    for trial in range(max(4, spec.trials // 5)):
        if trial % 2 == 0:
            stars = list(good)[rng.integers(len(good))]
        else:
            stars = tuple(tuple(int(b) for b in rng.integers(0, 2, 2 * g)) for _ in range(2 * g))
        gens = [lifts.evaluate(cc.section_word(m, 4) * t(1, j), 2)
                for j, m in zip(range(2, 2 * g + 2), stars)]
        try:
            res = close(GroupHandle(2, g, gens), cap=target)
            meets_n = congruence_intersection(res, 1).subspace == L.N
        except ClosureOverflowError:
            meets_n = False
        is_cocycle = stars in good
        counts["cocycle" if is_cocycle else "non_cocycle"] += 1
        rec.expect(meets_n == is_cocycle, "H meets the layer in N iff the values form a quasi-cocycle",
                   star_values=[_vec_str(m) for m in stars])
    rec["assignments"] = counts


@register("lemma-quasi-cocycle2", ["build_phi_c", "check_conditions_l4", "enumerate_l4"])
def _lemma_quasi_cocycle2(spec, rec):
    g = spec.g
    for phi in cc.enumerate_l4(g):
        fails = cc.condition_failures(phi)
        rec.expect(not fails, "conditions (i) and (ii) hold", c=_vec_str(phi.c), failures=fails[:2])
        for j, k in itertools.permutations(range(2, 2 * g + 2), 2):
            rec.expect(np.array_equal(phi.evaluate_word([j, k, j]), phi.evaluate_word([k, j, k])),
                       "value does not depend on the braid decomposition", c=_vec_str(phi.c), jk=[j, k])
    brute = cc.enumerate_l4_bruteforce(g)
    rec["bruteforce_assignments"] = len(brute)
    rec.expect(len(brute) == 2 ** (2 * g), "conditions have 2^{2g} star solutions")
    for stars in brute[:4]:
        phi = cc.Cocycle(4, g, stars)
        rec.expect(not cc.cocycle_pair_failures(phi), "solutions extend to quasi-cocycles")
    bad = cc.Cocycle(4, g, {**cc.build_phi_c((0,) * (2 * g), g).star_values, 2: (0,) * (2 * g)})
    rec["perturbed_fails"] = not cc.check_conditions(bad)
    rec.expect(not cc.check_conditions(bad), "phi((1,2)) = 0 violates the conditions")


@register("thm-mod4-a", ["build_phi_c", "check_conditions_l4", "congruence_intersection"])
def _thm_mod4_a(spec, rec):
    g = spec.g
    cert = cc.infeasibility_certificate(g)
    rec["certificate"] = cert
    rec.expect(cert["infeasible"], "quasi-cocycle constraints are infeasible for d = 2g+2", **cert)
    rep = standard_rep(g, 2 * g + 2)
    total = np.zeros(2 * g, dtype=np.uint8)
    for i, j in itertools.combinations(range(3, 2 * g + 3), 2):
        total ^= rep.v(i, j)
    rec.expect(np.array_equal(total, rep.v(1, 2)), "v_12 is the sum of v_ij over i,j >= 3")
    try:
        cc.build_phi_c((0,) * (2 * g), g, 2 * g + 2)
        rec.expect(False, "constructing a level-4 cocycle for even d must fail")
    except cc.NoCocycleError:
        pass
    if g != 2:
        return
    rng = spec.rng()
    orders = []
    for trial in range(3 if spec.profile == "quick" else 6):
        gens = _random_star_lifts(g, 2 * g + 2, 2, rng) if trial else [
            canonical_lifts(g, 2 * g + 2).t(1, j, 2) for j in range(2, 2 * g + 3)]
        res = close(GroupHandle(2, g, gens), cap=spec.cap)
        inter = congruence_intersection(res, 1)
        orders.append(res.order)
        rec.expect(inter.order == 2 ** (2 * g * g + g), "every lift contains the full layer",
                   generators=[dump_line(x) for x in gens], intersection=inter.order)
    rec["orders"] = orders


@register("thm-mod4-b", ["enumerate_l4", "subgroup_generators", "conjugacy_orbit", "close"])
def _thm_mod4_b(spec, rec):
    g = spec.g
    L = layer_space(g)
    lifts = canonical_lifts(g)
    phis = cc.enumerate_l4(g)
    rec["cocycles"] = len(phis)
    rec.expect(len(phis) == 2 ** (2 * g), "2^{2g} quasi-cocycles")
    prints, orders = set(), set()
    for phi in phis:
        gens = cc.generator_matrices(phi)
        res = close(GroupHandle(2, g, gens), cap=spec.cap)
        inter = congruence_intersection(res, 1)
        orders.add(res.order)
        prints.add(res.fingerprint())
        rec.expect(res.order == math.factorial(2 * g + 1) * 2 ** (2 * g * g - g), "order of H_c",
                   c=_vec_str(phi.c), order=res.order)
        rec.expect(inter.subspace == L.N and inter.order == 2 ** L.N.dim, "H_c meets the layer in N",
                   c=_vec_str(phi.c))
        rec.expect(cc.recover_label_l4(gens, g) == phi.c, "label recovery", c=_vec_str(phi.c))
    rec["order_each"] = sorted(orders)
    rec["distinct_subgroups"] = len(prints)
    rec.expect(len(prints) == len(phis), "distinct labels give distinct subgroups")
    conj = {(i, j): lifts.t(i, j, 2) ** 2 for i, j in L.pairs}
    for c in _labels(g)[:4]:
        gens = cc.generator_matrices(cc.build_phi_c(c, g))
        for (i, j), x in conj.items():
            new = cc.recover_label_l4(conjugate_generators(gens, x), g)
            rec.expect(new == cc.add_bits(c, cc.pairing_shift(i, j, g)), "pairing transport law",
                       c=_vec_str(c), conjugator=[i, j], got=_vec_str(new))
    orbit = conjugacy_orbit(_labels(g)[0], lambda c: cc.generator_matrices(cc.build_phi_c(c, g)),
                            conj.values(), lambda gens: cc.recover_label_l4(gens, g))
    rec["orbit"] = len(orbit)
    rec.expect(len(orbit) == 2 ** (2 * g), "conjugation is transitive on labels")
    # closure of a conjugated generator set equals the closure for the recovered label
    c0, x = _labels(g)[1], conj[(1, 2)]
    conjugated = conjugate_generators(cc.generator_matrices(cc.build_phi_c(c0, g)), x)
    lab = cc.recover_label_l4(conjugated, g)
    a = close(GroupHandle(2, g, conjugated), cap=spec.cap).fingerprint()
    b = close(GroupHandle(2, g, cc.generator_matrices(cc.build_phi_c(lab, g))), cap=spec.cap).fingerprint()
    rec.expect(a == b, "recovered label names the conjugated subgroup")


@register("rmk-quasi-cocycle", ["y_lift"])
def _rmk_quasi_cocycle(spec, rec):
    g = spec.g
    count = 0
    for c in _labels(g):
        for i, j in itertools.combinations(range(1, 2 * g + 2), 2):
            try:
                m = cc.m_index(c, i, j, g)
                rec.expect(m in (i, j), "complement is a point of {i, j}")
            except ValueError as exc:
                rec.expect(False, "complement is a singleton inside {i, j}", c=_vec_str(c),
                           pair=[i, j], error=str(exc))
            count += 1
    rec["cases"] = count


# -- level 8 ----------------------------------------------------------------------------------

@register("lemma-contains-N-mod8", ["congruence_intersection"])
def _lemma_contains_n_mod8(spec, rec):
    g = spec.g
    L = layer_space(g)
    rng = spec.rng()
    form = standard_rep(g).form
    for c, d in _sample_labels8(spec)[:4]:
        phi = cc.build_phi_cd(c, d, g, spec.reading)
        res = close(GroupHandle(3, g, cc.generator_matrices(phi)), cap=spec.cap)
        sub = congruence_intersection(res, 2).subspace
        rec.expect(sub == L.N, "H meets Gamma(4) in N^(4)", label=[_vec_str(c), _vec_str(d)])
    n = 0
    while n < spec.trials:
        a = rng.integers(-3, 4, 2 * g)
        b = rng.integers(-3, 4, 2 * g)
        if pair(a, b, form) % 4 != 2:
            continue
        rec.expect(square_commutator_identity(a, b, form), "square-commutator identity mod 8",
                   a=a.tolist(), b=b.tolist())
        n += 1
    rec["identity_cases"] = n


@register("prop-tilde-N", ["delta8", "ntilde_membership", "mtilde_project"])
def _prop_tilde_n(spec, rec):
    g = spec.g
    L = layer_space(g)
    ctx = TildeContext(g, spec.reading)
    lifts = canonical_lifts(g)
    pts = range(1, 2 * g + 2)
    for i, j, k in itertools.permutations(pts, 3):
        D = lifts.evaluate(delta8(i, j, k, g, spec.reading), 3)
        x = layer_coords(D.reduce(2), 1)
        rec.expect(np.array_equal(x, L.delta(i, j, k)), "delta reduces to Delta mod 4",
                   triple=[i, j, k], coords=_vec_str(x))
        if i < j < k:
            D2 = lifts.evaluate(delta8(i, k, j, g, spec.reading), 3)
            y = layer_coords(D2 @ D.inverse(), 2)
            rec.expect(np.array_equal(y, L.delta(i, j, k)), "delta_ikj delta_ijk^-1 is Delta",
                       triple=[i, j, k], coords=_vec_str(y))
    for q in itertools.combinations(pts, 4):
        i, j, k, l = q
        P = Mat2k.identity(2 * g, 3)
        for t in ((i, j, k), (i, j, l), (i, k, l), (j, k, l)):
            P = P @ lifts.evaluate(delta8(*t, g, spec.reading), 3)
        rec.expect(L.in_n(layer_coords(P, 2)), "four-term product lies in N^(4)", quad=list(q))
    # the subgroup generated by the delta words
    gens = [lifts.evaluate(delta8(*t, g, spec.reading), 3) for t in itertools.permutations(pts, 3)]
    res = close(GroupHandle(3, g, gens), cap=spec.cap)
    rec["order_ntilde"] = res.order
    rec.expect(res.order == 2 ** (2 * L.N.dim), "|N-tilde| = 2^{2 dim N}", order=res.order)
    sample = res.elements[:: max(1, res.order // 512)]
    rec.expect(all(ctx.membership(Mat2k(a.astype(np.int64), 3)) for a in sample),
               "generated elements pass the two-layer test")
    for x in L.N.basis():
        rec.expect(ctx.membership(layer_element(x, 2, g, 3)), "N^(4) lies in N-tilde")
    rec.expect(not ctx.membership(floor_bracket(1, 2, g)), "[1,2]_8 is not in N-tilde")
    for s in standard_rep(g).group.stars:
        u = lifts.sigma_tilde(s, 3)
        for G in gens:
            rec.expect(ctx.membership(u @ G @ u.inverse()), "N-tilde is normal", sigma=s)
    # uniqueness of the zero assignment
    surv = cc.epsilon_uniqueness(g)
    rec["epsilon_survivors"] = sorted({tuple(v) for v in surv.values()})
    rec.expect(all(v == [0] for v in surv.values()), "only eps = 0 satisfies the four-term relation")
    # action: t_b^2 for any b = v_{i,j} mod 2 has the class of [i,j]_8
    rng = spec.rng()
    for _ in range(spec.trials):
        i, j = sorted(int(x) for x in rng.choice(np.arange(1, 2 * g + 2), 2, replace=False))
        b = lifts.a(i, j) + 2 * rng.integers(-3, 4, 2 * g)
        lhs = ctx.project(transvection(b, lifts.form, 3) ** 2)
        rhs = ctx.project(floor_bracket(i, j, g))
        rec.expect(lhs == rhs, "class of t_b^2 depends only on b mod 2", pair=[i, j], b=b.tolist())
    classes = set()
    for e in itertools.product(range(4), repeat=2 * g):
        A = Mat2k.identity(2 * g, 3)
        for p, ex in enumerate(e):
            A = A @ (floor_bracket(p + 1, p + 2, g) ** ex)
        classes.add(ctx.project(A))
    rec["mtilde_classes"] = len(classes)
    rec.expect(len(classes) == 2 ** (4 * g), "|M-tilde| = 2^{4g}")


@register("cor-contains-tilde-N", ["subgroup_generators", "close", "ntilde_membership"])
def _cor_contains_tilde_n(spec, rec):
    g = spec.g
    lifts = canonical_lifts(g)
    ctx = TildeContext(g, spec.reading)
    rng = spec.rng()
    target = math.factorial(2 * g + 1) * 2 ** (4 * g * g - 2 * g)
    for c, d in _sample_labels8(spec)[:2]:
        phi = cc.build_phi_cd(c, d, g, spec.reading)
        res = close(GroupHandle(3, g, cc.generator_matrices(phi)), cap=spec.cap)
        rec[f"order_{_vec_str(c)}_{_vec_str(d)}"] = res.order
        rec.expect(res.order == target, "order (2g+1)! 2^{4g^2-2g}", order=res.order)
        inter = congruence_intersection(res, 1)
        rec.expect(inter.order == 4 ** (2 * g * g - g), "Gamma(2) part has |N-tilde| elements",
                   order=inter.order)
        rec.expect(all(ctx.membership(Mat2k(a.astype(np.int64), 3)) for a in inter.elements),
                   "Gamma(2) part lies in N-tilde")
        els = phi.group.elements
        extra = [els[i] for i in rng.choice(len(els), 10, replace=False)]
        more = [lifts.evaluate(cc.section_word(phi.value(s), 8), 3) @ cc.y_lift_matrix(c, s, g)
                for s in extra]
        res2 = close(GroupHandle(3, g, cc.generator_matrices(phi) + more), cap=spec.cap)
        rec.expect(res2.fingerprint() == res.fingerprint(), "star generators suffice")


@register("lemma-a-plus-c", ["verify_lemma_a_plus_c"], linear=True)
def _lemma_a_plus_c(spec, rec):
    g = spec.g
    form = standard_rep(g).form
    rng = spec.rng()
    for _ in range(spec.trials):
        a, b, c = random_a_plus_c_triple(rng, form)
        rec.expect(verify_lemma_a_plus_c(a, b, c, form), "a+c identity on a random triple",
                   a=a.tolist(), b=b.tolist(), c=c.tolist())
    proof = 0
    for q in itertools.permutations(range(1, 2 * g + 2), 4):
        i, j, k, l = q
        rep = standard_rep(g)
        if pair(rep.a(i, j), rep.a(k, l), form) % 4 != 2:
            continue
        inst = proof_a_plus_c_instance(i, j, k, l, g)
        rec.expect(inst is not None, "proof construction finds b", quad=list(q))
        if inst is not None:
            rec.expect(verify_lemma_a_plus_c(*inst, form), "a+c identity on the proof construction",
                       quad=list(q))
            proof += 1
    rec["proof_instances"] = proof
    tried = broken = 0
    for _ in range(20):
        a, b, c = random_a_plus_c_triple(rng, form)
        c2 = c + rng.integers(-1, 2, 2 * g)
        if pair(a, c2, form) == 0:
            continue
        lhs, rhs = a_plus_c_sides(a, b, c2, form, k=16)
        tried += 1
        broken += lhs != rhs
    rec["violating_triples"] = {"tried": tried, "identity_fails": int(broken)}


@register("lemma-lift-identities-mod8", ["y_lift", "mtilde_project"])
def _lemma_lift_identities_mod8(spec, rec):
    g = spec.g
    ctx = TildeContext(g, spec.reading)
    form = standard_rep(g).form
    pts = range(1, 2 * g + 2)
    labels = _labels(g) if spec.profile == "full" else _labels(g)[:: max(1, 2 ** (2 * g) // 4)]
    for c in labels:
        y = {p: cc.y_lift_matrix(c, Permutation.transposition(2 * g + 1, *p), g)
             for p in itertools.combinations(pts, 2)}
        Y = lambda i, j: y[(min(i, j), max(i, j))]
        for i, j, k in itertools.permutations(pts, 3):
            X = Y(i, j) @ Y(i, k) @ Y(i, j) @ (Y(i, k) @ Y(i, j) @ Y(i, k)).inverse()
            rec.expect(ctx.membership(X), "braid identity modulo N-tilde", c=_vec_str(c), triple=[i, j, k])
        for i, j, k, l in itertools.permutations(pts, 4):
            rec.expect(ctx.membership(commutator(Y(i, j), Y(k, l))), "disjoint y-lifts commute modulo N-tilde",
                       c=_vec_str(c), quad=[i, j, k, l])
    rng = spec.rng()
    n = 0
    while n < spec.trials:
        a = rng.integers(-3, 4, 2 * g)
        b = rng.integers(-3, 4, 2 * g)
        if pair(a, b, form) % 2:
            continue
        rec.expect(mod8_commutator_identity(a, b, form), "mod-8 commutator identity",
                   a=a.tolist(), b=b.tolist())
        n += 1
    rec["labels"] = len(labels)


@register("lemma-quasi-cocycle-mod8", ["build_phi_cd", "subgroup_generators", "close"])
def _lemma_quasi_cocycle_mod8(spec, rec):
    g = spec.g
    L = layer_space(g)
    lifts = canonical_lifts(g)
    rng = spec.rng()
    target = math.factorial(2 * g + 1) * 2 ** (4 * g * g - 2 * g)
    c = (0,) * (2 * g)
    good = {tuple(tuple(p.star_values[j]) for j in range(2, 2 * g + 2)) for p in cc.enumerate_l8(g, c)}
    counts = {"cocycle": 0, "non_cocycle": 0}
    for trial in range(4):
        if trial % 2 == 0:
            stars = list(good)[rng.integers(len(good))]
        else:
            stars = tuple(tuple(int(b) for b in rng.integers(0, 2, 2 * g)) for _ in range(2 * g))
        gens = [lifts.evaluate(cc.section_word(m, 8) * cc.y_lift(c, 1, j, g), 3)
                for j, m in zip(range(2, 2 * g + 2), stars)]
        try:
            res = close(GroupHandle(3, g, gens), cap=target)
            ok = res.order == target and congruence_intersection(res, 2).subspace == L.N
        except ClosureOverflowError:
            ok = False
        is_cocycle = stars in good
        counts["cocycle" if is_cocycle else "non_cocycle"] += 1
        rec.expect(ok == is_cocycle, "H is classified iff the values form a level-8 quasi-cocycle",
                   star_values=[_vec_str(m) for m in stars])
    rec["assignments"] = counts
    phi = cc.build_phi_cd(c, c, g, spec.reading)
    fails = cc.cocycle_pair_failures(phi)
    rec.expect(not fails, "phi_{0,0} satisfies the level-8 cocycle rule on all pairs", failures=fails)


@register("lemma-quasi-cocycle2-mod8", ["build_phi_cd", "check_conditions_l4"])
def _lemma_quasi_cocycle2_mod8(spec, rec):
    g = spec.g
    rng = spec.rng()
    allpairs = [(c, d) for c in _labels(g) for d in _labels(g)]
    for c, d in allpairs:
        phi = cc.build_phi_cd(c, d, g, spec.reading)
        fails = cc.condition_failures(phi)
        rec.expect(not fails, "level-8 conditions hold", label=[_vec_str(c), _vec_str(d)], failures=fails[:2])
    for idx in rng.choice(len(allpairs), 4, replace=False):
        c, d = allpairs[idx]
        phi = cc.build_phi_cd(c, d, g, spec.reading)
        for j, k in itertools.permutations(range(2, 2 * g + 2), 2):
            rec.expect(np.array_equal(phi.evaluate_word([j, k, j]), phi.evaluate_word([k, j, k])),
                       "level-8 value does not depend on the braid decomposition",
                       label=[_vec_str(c), _vec_str(d)], jk=[j, k])
    sols = cc.star_solutions(g, 2, level=8)
    rec["star_solutions"] = len(sols)
    rec.expect(len(sols) == 2, "two solutions per star transposition")
    if g % 2 == 0:
        rep = standard_rep(g)
        for c, d in allpairs[:16]:
            phi = cc.build_phi_cd(c, d, g, spec.reading)
            for j in range(2, 2 * g + 2):
                rec.expect(np.array_equal(phi.value(phi.group.star(j)), d[j - 2] * rep.v(1, j)),
                           "constant term vanishes for even g")


def _classify8(g, reading):
    return lambda gens: cc.recover_label_l8(gens, g, reading)


@register("thm-mod8", ["build_phi_cd", "subgroup_generators", "conjugacy_orbit", "congruence_intersection"])
def _thm_mod8(spec, rec):
    g = spec.g
    L = layer_space(g)
    lifts = canonical_lifts(g)
    ctx = TildeContext(g, spec.reading)
    target = math.factorial(2 * g + 1) * 2 ** (4 * g * g - 2 * g)
    labels = _sample_labels8(spec)
    prints, orders = set(), set()
    for c, d in labels:
        phi = cc.build_phi_cd(c, d, g, spec.reading)
        gens = cc.generator_matrices(phi)
        res = close(GroupHandle(3, g, gens), cap=spec.cap)
        orders.add(res.order)
        prints.add(res.fingerprint())
        lab = [_vec_str(c), _vec_str(d)]
        rec.expect(res.order == target, "order of H_{c,d}", label=lab, order=res.order)
        i1 = congruence_intersection(res, 1)
        rec.expect(i1.order == 4 ** L.N.dim, "Gamma(2) part has |N-tilde| elements", label=lab)
        rec.expect(all(ctx.membership(Mat2k(a.astype(np.int64), 3)) for a in i1.elements),
                   "Gamma(2) part is N-tilde", label=lab)
        i2 = congruence_intersection(res, 2)
        rec.expect(i2.subspace == L.N, "Gamma(4) part is N^(4)", label=lab)
        rec.expect(cc.recover_label_l8(gens, g, spec.reading) == (tuple(c), tuple(d)),
                   "label recovery", label=lab)
    rec["labels_closed"] = len(labels)
    rec["order_each"] = sorted(orders)
    rec["distinct_subgroups"] = len(prints)
    rec.expect(len(prints) == len(labels), "distinct labels give distinct subgroups")
    conj4 = {p: lifts.t(*p, 3) ** 4 for p in L.pairs}
    conj2 = {p: lifts.t(*p, 3) ** 2 for p in L.pairs}
    gen_of = lambda lab: cc.generator_matrices(cc.build_phi_cd(lab[0], lab[1], g, spec.reading))
    c0 = labels[0][0]
    for (c, d) in labels[:2]:
        for p, x in conj4.items():
            new = cc.recover_label_l8(conjugate_generators(gen_of((c, d)), x), g, spec.reading)
            rec.expect(new == (c, cc.add_bits(d, cc.pairing_shift(*p, g))), "dvec transport law",
                       label=[_vec_str(c), _vec_str(d)], conjugator=list(p))
        for p, x in conj2.items():
            new = cc.recover_label_l8(conjugate_generators(gen_of((c, d)), x), g, spec.reading)
            rec.expect(new[0] == cc.add_bits(c, cc.pairing_shift(*p, g)), "type transport law",
                       label=[_vec_str(c), _vec_str(d)], conjugator=list(p))
    within = conjugacy_orbit((c0, labels[0][1]), gen_of, conj4.values(), _classify8(g, spec.reading))
    rec["within_type_orbit"] = len(within)
    rec.expect(len(within) == 2 ** (2 * g) and {lab[0] for lab in within} == {c0},
               "within-type conjugation is transitive on dvec")
    full = conjugacy_orbit(labels[0], gen_of, list(conj2.values()) + list(conj4.values()),
                           _classify8(g, spec.reading))
    rec["full_orbit"] = len(full)
    rec["types_reached"] = len({lab[0] for lab in full})
    rec.expect(len({lab[0] for lab in full}) == 2 ** (2 * g), "type transport reaches every c")
    rec.expect(len(full) == 2 ** (4 * g), "all 2^{4g} subgroups are conjugate")
    # a conjugated subgroup equals the one named by its recovered label
    x = conj2[(1, 2)]
    conjugated = conjugate_generators(gen_of(labels[0]), x)
    lab = cc.recover_label_l8(conjugated, g, spec.reading)
    a = close(GroupHandle(3, g, conjugated), cap=spec.cap).fingerprint()
    b = close(GroupHandle(3, g, gen_of(lab)), cap=spec.cap).fingerprint()
    rec.expect(a == b, "recovered label names the conjugated subgroup")


# -- level 16 ----------------------------------------------------------------------------------

@register("lemma-minus1", ["verify_lemma_minus1"], linear=True)
def _lemma_minus1(spec, rec):
    g = spec.g
    rep = standard_rep(g)
    form = rep.form
    rng = spec.rng()
    for _ in range(spec.trials):
        a, b = random_unit_pair(rng, form)
        rec.expect(verify_lemma_minus1(a, b, form), "product is the -1 on span{a,b}",
                   a=a.tolist(), b=b.tolist())
    rec.expect(verify_lemma_minus1(rep.a(1, 2), rep.a(2, 3), form), "instance a_12, a_23")
    rec["trials"] = spec.trials


@register("prop-mod16", ["verify_gamma8_containment"])
def _prop_mod16(spec, rec):
    g = spec.g
    expected = expected_delta_square_pairs(g)
    rec["expected_pairs"] = [list(p) for p in expected]
    if not expected:
        rec.inconclusive = "the predicted square of delta is an empty sum"
    rng = spec.rng()
    statuses = {s: 0 for s in STATUSES}
    labels = _sample_labels8(spec)
    for c, d in labels:
        phi = cc.build_phi_cd(c, d, g, spec.reading)
        ver = Gamma8Verifier(cc.subgroup_generators(phi), g, spec.reading, cap=spec.cap)
        runs = [ver.check(ver.lifted_generators())]
        runs += [ver.check(ver.lifted_generators(rng)) for _ in range(spec.trials)]
        for r in runs:
            statuses[r.status] += 1
            lab = [_vec_str(c), _vec_str(d)]
            if r.status == "inconclusive":
                rec.inconclusive = "saturation argument has no element outside N"
            else:
                rec.expect(r.ok, "Gamma(8) is contained in the mod-16 group", label=lab,
                           stuck_basis=r.stuck_basis)
            rec.expect([tuple(p) for p in r.delta_square_pairs] == expected,
                       "square of delta_123 has the predicted coordinates", label=lab,
                       pairs=[list(p) for p in r.delta_square_pairs])
    rec["labels"] = len(labels)
    rec["runs"] = statuses


# -- driver ------------------------------------------------------------------------------------

def cocycle_verdict(phi: cc.Cocycle, full_rule: bool = True) -> Verdict:
    """Verdict for one candidate cocycle: conditions (i)/(ii) and, optionally, the
    cocycle rule on all pairs.  Failures are reported as counterexamples."""
    rec = Recorder()
    start = time.perf_counter()
    label = phi.serialize()
    for f in cc.condition_failures(phi):
        rec.expect(False, f"condition ({f['condition']}) fails", label=label, **f)
    if full_rule:
        for f in cc.cocycle_pair_failures(phi):
            rec.expect(False, "cocycle rule fails", label=label, **f)
    rec["label"] = label
    rec["star_values"] = {str(j): _vec_str(v) for j, v in sorted(phi.star_values.items())}
    v = rec.verdict(CheckSpec("cocycle-conditions", g=phi.g))
    v.wall_time = time.perf_counter() - start
    return v


def run_check(spec: CheckSpec) -> Verdict:
    if spec.id not in REGISTRY:
        raise UnknownCheckError(spec.id)
    rec = Recorder()
    start = time.perf_counter()
    REGISTRY[spec.id](spec, rec)
    v = rec.verdict(spec)
    v.wall_time = time.perf_counter() - start
    return v


def suite_specs(profile: str = "quick", g: int = 2, ids=None, mutate_delta: bool = False,
                seed: int = 0, trials: int | None = None, sample: int = 8) -> list[CheckSpec]:
    ids = list(REGISTRY) if ids is None else [i for i in REGISTRY if i in set(ids)]
    base = dict(profile=profile, seed=seed, mutate_delta=mutate_delta, sample=sample)
    if trials is not None:
        base["trials"] = trials
    specs = [CheckSpec(i, g=g, **base) for i in ids]
    if profile == "full":
        specs += [CheckSpec(i, g=3, **base) for i in ids if i in LINEAR_ONLY]
    return specs


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("SYMPLIFT_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(profile: str = "quick", g: int = 2, ids=None, mutate_delta: bool = False,
              seed: int = 0, trials: int | None = None, sample: int = 8) -> list[Verdict]:
    """Run checks in a worker pool; results come back in registry order."""
    specs = suite_specs(profile, g, ids, mutate_delta, seed, trials, sample)
    if not specs:
        return []
    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        return list(pool.map(run_check, specs))


def coverage() -> dict[str, list[str]]:
    """Operation name -> check ids exercising it."""
    out: dict[str, list[str]] = {}
    for cid, ops in COVERAGE.items():
        for op in ops:
            out.setdefault(op, []).append(cid)
    return dict(sorted(out.items()))

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symplift.standard_rep import standard_rep
from symplift.transvections import (Lifts, NoCocycleError, PreconditionError, Word,
                                    a_plus_c_orbit_form_agrees, canonical_lifts,
                                    lemma_a_plus_c_preconditions, mod4_commutator_identity,
                                    mod8_commutator_identity, parse_word, proof_a_plus_c_instance,
                                    random_a_plus_c_triple, random_unit_pair, square_commutator_identity,
                                    symplectic_basis, t, transvection, verify_braid_identity_mod8,
                                    verify_lemma_a_plus_c, verify_lemma_minus1, y_lift)
from symplift.zmod import is_symplectic, pair

seeds = st.integers(0, 2 ** 32 - 1)


@pytest.mark.parametrize("g", [2, 3])
def test_braid_identity_mod8_all_triples(g):
    lifts = canonical_lifts(g)
    for i, j, k in itertools.permutations(range(1, 2 * g + 2), 3):
        assert verify_braid_identity_mod8(i, j, k, lifts)


def test_braid_identity_exact_for_canonical_lifts():
    # canonical star pairings are +-1, so the relation holds over Z
    lifts = canonical_lifts(2)
    for i, j, k in itertools.permutations(range(1, 6), 3):
        a, b = lifts.t(i, j, None), lifts.t(i, k, None)
        assert abs(pair(lifts.a(i, j), lifts.a(i, k), lifts.form)) == 1
        assert a @ b @ a == b @ a @ b


@given(seeds)
def test_braid_identity_mod8_perturbed_lifts(seed):
    rng = np.random.default_rng(seed)
    lifts = Lifts(2, perturb={p: rng.integers(-2, 3, 4) for p in itertools.combinations(range(1, 6), 2)})
    for i, j, k in itertools.permutations(range(1, 6), 3):
        assert verify_braid_identity_mod8(i, j, k, lifts)


def test_braid_needs_distinct_indices():
    with pytest.raises(PreconditionError):
        verify_braid_identity_mod8(1, 1, 2, canonical_lifts(2))


@given(seeds, st.sampled_from([2, 3]))
def test_transposition_lifts_are_involutions_mod2(seed, g):
    rng = np.random.default_rng(seed)
    i, j = sorted(rng.choice(np.arange(1, 2 * g + 2), 2, replace=False))
    lifts = Lifts(g, perturb={(int(i), int(j)): rng.integers(-2, 3, 2 * g)})
    T = lifts.t(int(i), int(j), 3)
    assert is_symplectic(T, lifts.form)
    assert (T @ T).reduce(1).is_identity()
    assert T.reduce(1) == canonical_lifts(g).t(int(i), int(j), 1)


@given(seeds, st.sampled_from([2, 3]))
def test_a_plus_c_random_instances(seed, g):
    form = standard_rep(g).form
    a, b, c = random_a_plus_c_triple(np.random.default_rng(seed), form)
    assert lemma_a_plus_c_preconditions(a, b, c, form) == []
    assert verify_lemma_a_plus_c(a, b, c, form)
    assert a_plus_c_orbit_form_agrees(a, b, c, form)


def test_a_plus_c_precondition_violation():
    form = standard_rep(2).form
    x = np.eye(4, dtype=np.int64)
    with pytest.raises(PreconditionError):
        verify_lemma_a_plus_c(x[0], x[0], x[1], form)


@pytest.mark.parametrize("idx", [(1, 2, 3, 4), (1, 2, 3, 5), (2, 3, 4, 5)])
def test_a_plus_c_proof_instances(idx):
    inst = proof_a_plus_c_instance(*idx, g=2)
    assert inst is not None
    form = standard_rep(2).form
    a, b, c = inst
    rep = standard_rep(2)
    assert np.array_equal(b % 2, rep.a(idx[1], idx[2]) % 2)
    assert verify_lemma_a_plus_c(a, b, c, form)


@given(seeds, st.sampled_from([2, 3]))
def test_minus1_random_instances(seed, g):
    form = standard_rep(g).form
    a, b = random_unit_pair(np.random.default_rng(seed), form)
    assert verify_lemma_minus1(a, b, form)


def test_minus1_precondition():
    form = standard_rep(2).form
    with pytest.raises(PreconditionError):
        verify_lemma_minus1([1, 0, 0, 0], [0, 0, 1, 0], form)


def test_symplectic_basis_is_standard():
    for g in (2, 3):
        form = standard_rep(g).form
        basis = symplectic_basis(form)
        vecs = [v for xy in basis for v in xy]
        for (x, y) in basis:
            assert pair(x, y, form) == 1
        gram = np.array([[pair(u, v, form) for v in vecs] for u in vecs])
        assert np.abs(gram).sum() == 2 * g


def _even_pair(rng, form):
    while True:
        a, b = rng.integers(-3, 4, form.dim), rng.integers(-3, 4, form.dim)
        if pair(a, b, form) % 2 == 0:
            return a, b


@given(seeds)
def test_mod4_and_mod8_commutator_identities(seed):
    rng = np.random.default_rng(seed)
    form = standard_rep(2).form
    a, b = _even_pair(rng, form)
    assert mod4_commutator_identity(a, b, form)
    assert mod8_commutator_identity(a, b, form)
    if pair(a, b, form) % 4 == 2:
        assert square_commutator_identity(a, b, form)


def test_commutator_identities_need_even_pairing():
    form = standard_rep(2).form
    a, b = np.array([1, 0, 0, 0]), np.array([0, 1, 0, 0])
    with pytest.raises(PreconditionError):
        mod4_commutator_identity(a, b, form)
    with pytest.raises(PreconditionError):
        mod8_commutator_identity(a, b, form)
    with pytest.raises(PreconditionError):
        square_commutator_identity(a, 4 * b, form)


def test_words_parse_and_evaluate():
    w = parse_word("t[1,2]^2 * t[3,1]^-1 * s[(1 2 3)]", 5)
    assert len(w) == 3
    assert str(parse_word(str(w), 5)) == str(w)
    lifts = canonical_lifts(2)
    assert lifts.evaluate(w * w.inverse(), 3).is_identity()
    assert lifts.evaluate(t(1, 2) ** 2, 3) == lifts.t(1, 2, 3) ** 2
    assert lifts.evaluate(Word(), 2).is_identity()
    with pytest.raises(ValueError):
        parse_word("q[1]", 5)


def test_y_lift_shape_and_even_degree():
    w = y_lift((0, 0, 0, 0), 1, 2, 2)
    assert len(w) == 5  # four squared factors and the transposition lift
    with pytest.raises(NoCocycleError):
        y_lift((0, 0, 0, 0), 1, 2, 2, d=6)


def test_transvection_formula():
    form = standard_rep(2).form
    a = np.array([1, 1, 0, 0])
    T = transvection(a, form)
    v = np.array([0, 0, 1, 0])
    assert np.array_equal(T.a @ v, v + pair(v, a, form) * a)

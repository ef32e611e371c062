import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symplift.layers import (LayerError, SubspaceF2, intersect, layer_coords, layer_element,
                             layer_space, lemma_complement_holds, m_project, n_membership,
                             saturate_invariant, sd_act, solve_f2)
from symplift.standard_rep import Permutation, standard_rep
from symplift.transvections import canonical_lifts

bits10 = st.lists(st.integers(0, 1), min_size=10, max_size=10).map(np.array)


def perms(d):
    return st.permutations(range(1, d + 1)).map(lambda p: Permutation(tuple(p)))


@pytest.mark.parametrize("g, npairs, n_dim", [(2, 10, 6), (3, 21, 15)])
def test_subspace_dimensions(g, npairs, n_dim):
    L = layer_space(g)
    assert L.npairs == npairs
    assert L.N.dim == n_dim
    assert L.layer0.dim == npairs - 1
    assert L.N0.dim == n_dim - 1
    assert np.linalg.matrix_rank(L._pi.astype(float)) == 2 * g
    assert len(L.delta_basis) == n_dim


@pytest.mark.parametrize("g", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_coords_of_transvection_powers(g, n):
    L = layer_space(g)
    lifts = canonical_lifts(g)
    for i, j in L.pairs:
        A = lifts.t(i, j, n + 1) ** (2 ** n)
        assert np.array_equal(layer_coords(A, n), L.unit(i, j))


@given(bits10, st.integers(1, 3))
def test_layer_element_roundtrip(x, n):
    assert np.array_equal(layer_coords(layer_element(x, n, 2), n), x)


def test_layer_coords_rejects():
    with pytest.raises(LayerError):
        layer_coords(canonical_lifts(2).t(1, 2, 2), 1)
    with pytest.raises(LayerError):
        layer_coords(layer_element(np.ones(10), 2, 2), 2 + 1)


@given(perms(5), perms(5), bits10)
def test_action_is_homomorphism(s, t, x):
    assert np.array_equal(sd_act(s * t, x, 2), sd_act(s, sd_act(t, x, 2), 2))


@given(perms(5), bits10)
def test_action_matches_conjugation(s, x):
    lifts = canonical_lifts(2)
    u = lifts.sigma_tilde(s, 2)
    A = layer_element(x, 1, 2)
    assert np.array_equal(layer_coords(u @ A @ u.inverse(), 1), sd_act(s, x, 2))


@given(perms(5), bits10)
def test_m_project_equivariant(s, x):
    rep = standard_rep(2)
    lhs = m_project(sd_act(s, x, 2), 2)
    rhs = rep.rho(s).a @ m_project(x, 2) % 2
    assert np.array_equal(lhs, rhs)


@given(bits10)
def test_n_is_kernel_of_m_project(x):
    assert n_membership(x, 2) == (not m_project(x, 2).any())


@given(bits10)
def test_saturation_outside_n_is_full(x):
    L = layer_space(2)
    sat = saturate_invariant([x], 2, start=L.N)
    assert sat.dim == (L.N.dim if L.in_n(x) else 10)


@given(bits10)
def test_saturation_without_n_stays_in_layer0(x):
    # for d odd the zero-sum subspace is invariant, so x alone cannot leave it
    L = layer_space(2)
    sat = saturate_invariant([x], 2)
    if L.in_layer0(x):
        assert sat <= L.layer0
    elif not L.in_n(x):
        assert sat.dim == 10


def test_n_is_invariant_and_generated_by_one_delta():
    L = layer_space(2)
    assert saturate_invariant([L.delta(1, 2, 3)], 2) == L.N
    for d in (5, 6):
        Ld = layer_space(2, d)
        for s in Ld.rep.group.stars:
            for v in L.N.basis():
                assert Ld.in_n(Ld.act(s, v))


def test_even_degree_unit_expands_complement():
    L = layer_space(2, 6)
    x = L.unit(1, 6)
    assert sorted(L.pairs[p] for p in np.flatnonzero(x)) == [(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]
    assert L.in_n(x) is False
    assert np.array_equal(L.m_project(x), standard_rep(2, 6).v(1, 6))


@pytest.mark.parametrize("g", [2, 3])
def test_complement_identity(g):
    assert lemma_complement_holds(g, 2 * g + 1)
    assert lemma_complement_holds(g, 2 * g + 2)


def test_layer0_invariant_for_odd_degree():
    L = layer_space(2)
    for s in L.rep.group.stars:
        for v in L.layer0.basis():
            assert L.in_layer0(L.act(s, v))


def test_bracket_pairing_values():
    L = layer_space(2)
    assert L.bracket_pairing(L.unit(1, 2), L.unit(2, 3)) == 1
    assert L.bracket_pairing(L.unit(1, 2), L.unit(3, 4)) == 0
    assert L.bracket_pairing(L.unit(1, 2), L.unit(1, 2)) == 0


def test_subspace_and_intersection():
    rng = np.random.default_rng(3)
    for _ in range(20):
        U = SubspaceF2(6, rng.integers(0, 2, (3, 6)))
        W = SubspaceF2(6, rng.integers(0, 2, (3, 6)))
        brute = set(U.elements()) & set(W.elements())
        I = intersect(U, W)
        assert set(I.elements()) == brute
        assert I <= U and I <= W
    S = SubspaceF2(3)
    assert S.add([1, 1, 0]) and not S.add([1, 1, 0])
    assert [1, 1, 0] in S and [1, 0, 0] not in S


def test_solve_f2():
    A = np.array([[1, 1, 0], [0, 1, 1]])
    x = solve_f2(A, np.array([1, 0]))
    assert np.array_equal(A @ x % 2, [1, 0])
    with pytest.raises(LayerError):
        solve_f2(np.array([[1, 1], [1, 1]]), np.array([1, 0]))


def test_delta_expansion():
    L = layer_space(2)
    x = L.delta(1, 2, 4) ^ L.delta(2, 3, 5)
    coeffs = L.delta_expansion(x)
    recon = np.bitwise_xor.reduce([L.delta(*t) for t, c in zip(L.delta_basis, coeffs) if c])
    assert np.array_equal(recon, x)
    with pytest.raises(LayerError):
        L.delta_expansion(L.unit(1, 2))

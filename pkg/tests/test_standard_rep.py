import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symplift.standard_rep import (DomainError, Permutation, StandardRep, image_order, parse_subset,
                                   standard_rep, subset_pairing, symmetric_group, v_of_subset)
from symplift.zmod import is_symplectic


def perms(d):
    return st.permutations(range(1, d + 1)).map(lambda p: Permutation(tuple(p)))


def test_permutation_basics():
    s = Permutation.from_cycles("(1 2 3)", 4)
    assert s(1) == 2 and s(3) == 1 and s(4) == 4
    assert (s * s.inverse()).is_identity()
    assert Permutation.transposition(5, 2, 4).as_transposition() == (2, 4)
    assert str(s) == "(1 2 3)"


def test_symmetric_group_words():
    G = symmetric_group(5)
    assert len(G) == 120
    for sigma, word in G.star_words.items():
        prod = G.identity
        for j in reversed(word):
            prod = G.star(j) * prod
        assert prod == sigma


def test_subset_canonical_form_even_d():
    assert v_of_subset({1, 6}, 6) == v_of_subset({2, 3, 4, 5}, 6)
    assert v_of_subset({1, 2}, 5) != v_of_subset({3, 4}, 5)
    assert parse_subset("1,2", 5) == v_of_subset({1, 2}, 5)
    with pytest.raises(DomainError):
        v_of_subset({1, 2, 3}, 5)
    with pytest.raises(DomainError):
        v_of_subset({1, 7}, 6)


def test_pairing_is_intersection_parity():
    for d in (5, 6):
        rep = standard_rep(2, d)
        subsets = [v_of_subset(I, d) for r in (0, 2, 4) for I in itertools.combinations(range(1, d + 1), r)]
        for a, b in itertools.product(subsets, repeat=2):
            assert rep.pair2(rep.coords(a), rep.coords(b)) == subset_pairing(a, b)


def test_coordinates_roundtrip():
    for d in (5, 6):
        rep = standard_rep(2, d)
        for x in itertools.product((0, 1), repeat=4):
            assert np.array_equal(rep.coords(rep.subset_of(x)), x)


def test_canonical_lifts_are_chain_sums():
    rep = standard_rep(2)
    assert rep.a(1, 2).tolist() == [1, 0, 0, 0]
    assert rep.a(2, 5).tolist() == [0, 1, 1, 1]
    assert rep.a(1, 4).tolist() == [1, 1, 1, 0]
    assert np.array_equal(rep.a(3, 1), rep.a(1, 3))


@pytest.mark.parametrize("d, order", [(3, 6), (4, 6), (5, 120), (6, 720), (7, 5040)])
def test_image_order(d, order):
    assert image_order(d) == order


@given(perms(6), perms(6))
def test_rho_homomorphism_d6(s, t):
    rep = standard_rep(2, 6)
    assert rep.rho(s * t) == rep.rho(s) @ rep.rho(t)
    assert is_symplectic(rep.rho(s), rep.form)


@given(perms(7), st.lists(st.integers(0, 1), min_size=6, max_size=6))
def test_rho_vec_matches_matrix_g3(s, x):
    rep = standard_rep(3)
    assert np.array_equal(rep.rho_vec(s, x), rep.rho(s).a @ np.array(x) % 2)


def test_domain_errors():
    with pytest.raises(DomainError):
        StandardRep(2, 7)
    with pytest.raises(DomainError):
        standard_rep(2).rho(Permutation.identity(6))
    assert math.factorial(5) == len(standard_rep(2).group)

import itertools

import numpy as np
import pytest

from symplift.closure import (ClosureOverflowError, GroupHandle, close, congruence_intersection,
                              conjugacy_orbit, pack_keys, sp_order)
from symplift.layers import layer_space
from symplift.standard_rep import standard_rep
from symplift.transvections import canonical_lifts
from symplift.zmod import Mat2k


def _all_transvections(g, k):
    lifts = canonical_lifts(g, 2 * g + 2)
    return [lifts.t(i, j, k) for i, j in itertools.combinations(range(1, 2 * g + 3), 2)]


def test_sp_order_values():
    assert sp_order(1, 1) == 6
    assert sp_order(2, 1) == 720
    assert sp_order(2, 2) == 720 * 2 ** 10
    assert sp_order(3, 1) == 1451520


@pytest.mark.parametrize("k", [1, 2])
def test_full_symplectic_group(k):
    res = close(GroupHandle(k, 2, _all_transvections(2, k)))
    assert res.order == sp_order(2, k)


def test_star_lifts_mod2_and_mod4():
    lifts = canonical_lifts(2)
    stars = [lifts.t(1, j, 1) for j in range(2, 6)]
    assert close(GroupHandle(1, 2, stars)).order == 120
    stars4 = [lifts.t(1, j, 2) for j in range(2, 6)]
    res = close(GroupHandle(2, 2, stars4))
    assert res.order == 122880
    inter = congruence_intersection(res, 1)
    assert inter.order == 1024 and inter.subspace.dim == 10


def test_even_degree_preimage_meets_whole_layer():
    lifts = canonical_lifts(2, 6)
    stars = [lifts.t(1, j, 2) for j in range(2, 7)]
    res = close(GroupHandle(2, 2, stars))
    assert res.order == 737280
    assert congruence_intersection(res, 1).order == 1024


def test_schedule_does_not_change_result():
    gens = [canonical_lifts(2).t(1, j, 2) for j in range(2, 6)]
    a = close(GroupHandle(2, 2, gens))
    b = close(GroupHandle(2, 2, gens), order=[3, 1, 0, 2])
    assert a.fingerprint() == b.fingerprint()


def test_tracked_words_reproduce_elements():
    gens = [canonical_lifts(2).t(1, j, 2) for j in range(2, 6)]
    res = close(GroupHandle(2, 2, gens), track=True)
    rng = np.random.default_rng(0)
    for idx in rng.choice(res.order, 30, replace=False):
        A = Mat2k.identity(4, 2)
        for w in res.word(int(idx)):
            A = A @ gens[w]
        assert A == res.matrix(int(idx))
        assert res.index_of(A) == idx
    with pytest.raises(ValueError):
        close(GroupHandle(2, 2, gens)).word(1)


def test_overflow():
    gens = [canonical_lifts(2).t(1, j, 2) for j in range(2, 6)]
    with pytest.raises(ClosureOverflowError):
        close(GroupHandle(2, 2, gens), cap=1000)


def test_handle_validation():
    form = standard_rep(2).form
    with pytest.raises(ValueError):
        GroupHandle(3, 2, [Mat2k.identity(4, 2)])
    with pytest.raises(ValueError):
        GroupHandle(2, 2, [Mat2k(np.diag([3, 1, 1, 1]), 2)], form)


def test_wide_keys_are_injective():
    rng = np.random.default_rng(0)
    arr = rng.integers(0, 8, (500, 6, 6))
    keys = pack_keys(arr, 3)
    assert len(set(bytes(k) for k in keys)) == len({a.tobytes() for a in arr})


def test_congruence_intersection_of_layer_group():
    L = layer_space(2)
    lifts = canonical_lifts(2)
    gens = [lifts.t(i, j, 3) ** 4 for i, j in L.pairs]
    res = close(GroupHandle(3, 2, gens))
    assert res.order == 1024
    assert congruence_intersection(res, 2).subspace.dim == 10
    with pytest.raises(ValueError):
        congruence_intersection(res, 3)


def test_conjugacy_orbit_of_transvection_labels():
    # S_5 acts transitively on the ten transposition lifts mod 2
    lifts = canonical_lifts(2)
    pairs = list(itertools.combinations(range(1, 6), 2))
    table = {lifts.t(i, j, 1): (i, j) for i, j in pairs}
    orbit = conjugacy_orbit((1, 2), lambda p: [lifts.t(*p, 1)],
                            [lifts.t(1, j, 1) for j in range(2, 6)], lambda gens: table[gens[0]])
    assert orbit == set(pairs)

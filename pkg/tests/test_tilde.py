import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symplift.closure import GroupHandle, close
from symplift.layers import LayerError, layer_coords, layer_space
from symplift.tilde import (MTilde, delta8, floor_bracket, mtilde_project, ntilde_membership,
                            tilde_context)
from symplift.transvections import canonical_lifts

G = 2
PAIRS = list(itertools.combinations(range(1, 6), 2))


def _floor_word(rng, length=6):
    A = floor_bracket(1, 2, G) ** 0
    for _ in range(length):
        i, j = PAIRS[rng.integers(len(PAIRS))]
        A = A @ floor_bracket(i, j, G) ** int(rng.choice([1, -1]))
    return A


@pytest.mark.parametrize("reading", ["disjoint", "meeting"])
def test_delta_reduces_to_big_delta(reading):
    lifts = canonical_lifts(G)
    L = layer_space(G)
    for tri in itertools.permutations(range(1, 6), 3):
        D = lifts.evaluate(delta8(*tri, G, reading), 3)
        assert np.array_equal(layer_coords(D, 1), L.delta(*tri))


def test_delta_words():
    assert len(delta8(1, 2, 3, G)) == 3 + 1
    assert len(delta8(1, 2, 3, G, "meeting")) == 3 + 9
    with pytest.raises(ValueError):
        delta8(1, 1, 2, G)
    with pytest.raises(ValueError):
        delta8(1, 2, 3, G, "other")


def test_ntilde_order_and_membership():
    lifts = canonical_lifts(G)
    gens = [lifts.evaluate(delta8(*tri, G), 3) for tri in itertools.permutations(range(1, 6), 3)]
    res = close(GroupHandle(3, G, gens))
    assert res.order == 4096
    ctx = tilde_context(G)
    rng = np.random.default_rng(0)
    for idx in rng.choice(res.order, 200, replace=False):
        A = res.matrix(int(idx))
        assert ctx.membership(A)
        assert ctx.project(A).is_zero()


def test_gamma2_mod8_has_256_classes():
    gens = [floor_bracket(i, j, G) for i, j in PAIRS]
    res = close(GroupHandle(3, G, gens))
    assert res.order == 2 ** 20
    rng = np.random.default_rng(1)
    classes = {mtilde_project(res.matrix(int(i))) for i in rng.choice(res.order, 4000, replace=False)}
    assert len(classes) == 256


@given(st.integers(0, 2 ** 32 - 1))
def test_membership_iff_zero_class(seed):
    A = _floor_word(np.random.default_rng(seed))
    assert ntilde_membership(A) == mtilde_project(A).is_zero()


@given(st.integers(0, 2 ** 32 - 1))
def test_projection_constant_on_cosets(seed):
    rng = np.random.default_rng(seed)
    A = _floor_word(rng)
    tri = tuple(int(v) for v in rng.permutation(np.arange(1, 6))[:3])
    D = canonical_lifts(G).evaluate(delta8(*tri, G), 3)
    assert mtilde_project(A @ D) == mtilde_project(A)
    assert mtilde_project(D @ A) == mtilde_project(A)


def test_bracket_classes():
    assert mtilde_project(floor_bracket(1, 2, G)) == MTilde((1, 0, 0, 0), (0, 0, 0, 0))
    sq = floor_bracket(1, 2, G) ** 2
    assert mtilde_project(sq) == MTilde((0, 0, 0, 0), (1, 0, 0, 0))
    assert tilde_context(G).level4_value(sq).tolist() == [1, 0, 0, 0]
    with pytest.raises(LayerError):
        tilde_context(G).level4_value(floor_bracket(1, 2, G))


def test_requires_gamma2_mod8():
    with pytest.raises(LayerError):
        ntilde_membership(canonical_lifts(G).t(1, 2, 3))
    with pytest.raises(LayerError):
        ntilde_membership(floor_bracket(1, 2, G).reduce(2))

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from nctbundles.exterior import BasisOrder, basis, e
from nctbundles.intmat import IntMatrix, ShapeError
from nctbundles.monodromy import (
    MonodromyMatrix, additivity_check, basic_generator, determinant, from_exponents,
    is_trivial, is_trivial_by_action, num_pairs, pair_readout, pairs, representation,
)


def test_pairs_order():
    assert pairs(3) == [(1, 2), (1, 3), (2, 3)]
    assert num_pairs(5) == len(pairs(5)) == 10


def test_two_dim_generator():
    g = basic_generator(2, (1, 2))
    assert g.even.tolist() == [[1, 1], [0, 1]]
    assert g.odd.tolist() == [[1, 0], [0, 1]]


@pytest.mark.parametrize("w12,w23,w13", list(itertools.product(range(-3, 4), repeat=3)))
def test_three_dim_blocks(w12, w23, w13):
    m = from_exponents(3, [w12, w13, w23], BasisOrder.GRADED_DIM3)
    assert m.even.tolist() == [[1, w12, w23, w13], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert m.odd.tolist() == [[1, 0, 0, w23], [0, 1, 0, -w13], [0, 0, 1, w12], [0, 0, 0, 1]]


def test_sign_counts_elements_between():
    # e_1 ^ e_2 ^ e_3 contracted along {1, 3} passes over e_2
    m = basic_generator(3, (1, 3))
    assert m.act(e(3, 1, 2, 3)) == e(3, 1, 2, 3) - e(3, 2)
    assert basic_generator(3, (1, 2)).act(e(3, 1, 2, 3)) == e(3, 1, 2, 3) + e(3, 3)


def test_frozen_rank_four(frozen):
    for case in frozen["monodromy4"]:
        m = from_exponents(4, case["exponents"])
        assert m.matrix.tolist() == case["matrix"]


@given(st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_against_interior_product_oracle(exps):
    got = np.array(from_exponents(4, exps).matrix.tolist())
    assert (got == oracles.monodromy_exp(4, exps).astype(int)).all()


@given(st.integers(2, 5), st.data())
def test_generators_commute_and_unipotent(n, data):
    p, q = data.draw(st.lists(st.sampled_from(pairs(n)), min_size=2, max_size=2))
    a, b = basic_generator(n, p), basic_generator(n, q)
    assert a @ b == b @ a
    assert a.is_unipotent() and a.preserves_grading()
    assert determinant(a) == 1


@pytest.mark.parametrize("n", [2, 3])
def test_injective_on_exponents(n):
    for exps in itertools.product(range(-2, 3), repeat=num_pairs(n)):
        assert from_exponents(n, list(exps)).is_identity() == (not any(exps))


@given(st.integers(2, 4), st.data())
def test_pair_readout(n, data):
    exps = data.draw(st.lists(st.integers(-5, 5), min_size=num_pairs(n), max_size=num_pairs(n)))
    m = from_exponents(n, exps)
    assert [pair_readout(m, p) for p in pairs(n)] == exps


@given(st.integers(2, 4), st.integers(1, 3), st.data())
def test_additive(n, b, data):
    mat = st.lists(st.lists(st.integers(-3, 3), min_size=b, max_size=b),
                   min_size=num_pairs(n), max_size=num_pairs(n))
    w1, w2 = data.draw(mat), data.draw(mat)
    g1, g2 = (data.draw(st.lists(st.integers(-2, 2), min_size=b, max_size=b)) for _ in range(2))
    assert additivity_check(n, w1, w2, g1)
    r = representation(n, w1, [x + y for x, y in zip(g1, g2)])
    assert r == representation(n, w1, g1) @ representation(n, w1, g2)
    assert is_trivial(n, w1) == is_trivial_by_action(n, w1)


def test_reorder_and_json():
    m = from_exponents(3, [1, 2, 3])
    r = m.reorder(BasisOrder.GRADED_DIM3)
    assert r.reorder(BasisOrder.LEX) == m
    assert r == from_exponents(3, [1, 2, 3], BasisOrder.GRADED_DIM3)
    assert MonodromyMatrix.from_json(r.to_json()) == r
    assert r.basis == basis(3, BasisOrder.GRADED_DIM3)


def test_errors():
    with pytest.raises(IndexError):
        basic_generator(3, (2, 4))
    with pytest.raises(ShapeError):
        representation(3, IntMatrix.from_rows([[1], [0]]), [1])
    with pytest.raises(ShapeError):
        representation(2, [[1, 0]], [1])

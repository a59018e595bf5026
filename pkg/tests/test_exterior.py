import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import unimodular
from nctbundles.exterior import (
    BasisOrder, ExteriorElement, RankMismatch, basis, e, even_odd_bases, grade_split,
    induced_matrix, merge_sign, unit, wedge, zero,
)
from nctbundles.intmat import IntMatrix

RANK = 4


@st.composite
def elements(draw, rank=RANK):
    subs = oracles.subsets(rank)
    coeffs = draw(st.dictionaries(st.sampled_from(subs), st.integers(-4, 4), max_size=6))
    return ExteriorElement.from_dict(rank, coeffs)


def _lift(vec, rank, order=BasisOrder.LEX):
    return ExteriorElement.from_vector(rank, basis(rank, order), vec)


def test_wedge_table_matches_sort_parity(frozen):
    for j, k, sign, union in frozen["wedge4"]:
        prod = e(4, *j) ^ e(4, *k)
        assert merge_sign(j, k) == sign == oracles.sort_sign(j + k)
        if sign:
            assert prod.coeffs == {tuple(union): sign}
        else:
            assert prod.is_zero()


@given(elements(), elements(), elements())
def test_associative(a, b, c):
    assert (a ^ b) ^ c == a ^ (b ^ c)


@given(elements(), elements(), elements())
def test_distributive(a, b, c):
    assert a ^ (b + c) == (a ^ b) + (a ^ c)


@given(elements())
def test_unit(a):
    assert unit(RANK) ^ a == a == a ^ unit(RANK)
    assert a - a == zero(RANK)


@given(st.sampled_from(oracles.subsets(RANK)), st.sampled_from(oracles.subsets(RANK)))
def test_graded_commutativity(j, k):
    a, b = e(RANK, *j), e(RANK, *k)
    assert a ^ b == (-1) ** (len(j) * len(k)) * (b ^ a)


@given(st.integers(1, RANK))
def test_generators_square_to_zero(i):
    assert (e(RANK, i) ^ e(RANK, i)).is_zero()


def test_basis_orders():
    assert len(basis(5)) == 32
    assert basis(3, BasisOrder.GRADED_DIM3) == [(), (1, 2), (2, 3), (1, 3), (1,), (2,), (3,), (1, 2, 3)]
    even, odd = even_odd_bases(3, BasisOrder.GRADED_DIM3)
    assert even == [(), (1, 2), (2, 3), (1, 3)] and odd == [(1,), (2,), (3,), (1, 2, 3)]
    with pytest.raises(ValueError):
        basis(4, BasisOrder.GRADED_DIM3)


@given(elements())
def test_vector_round_trip(a):
    for order in (BasisOrder.LEX,):
        assert _lift(a.to_vector(basis(RANK, order)), RANK, order) == a
    assert ExteriorElement.from_json(a.to_json()) == a


@given(elements())
def test_grade_split(a):
    ev, od = grade_split(a)
    assert ev + od == a
    assert all(len(j) % 2 == 0 for j in ev.coeffs)


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        wedge(e(2, 1), e(3, 1))
    with pytest.raises(ValueError):
        e(3, 2, 1)


@given(st.integers(2, 4).flatmap(unimodular), st.data())
def test_induced_matrix_is_algebra_map(g, data):
    n = g.rows
    lam = induced_matrix(g)
    b = basis(n)
    a = data.draw(elements(n))
    c = data.draw(elements(n))
    image = lambda x: _lift(lam.apply(x.to_vector(b)), n)  # noqa: E731
    assert image(a ^ c) == image(a) ^ image(c)
    # on degree one it is g itself
    for i in range(1, n + 1):
        assert image(e(n, i)).to_vector(b)[1:n + 1] == g.col(i - 1)


@given(st.integers(2, 4).flatmap(unimodular), st.integers(2, 4).flatmap(unimodular))
def test_induced_matrix_functorial(g, h):
    if g.rows != h.rows:
        h = IntMatrix.identity(g.rows)
    assert induced_matrix(g @ h) == induced_matrix(g) @ induced_matrix(h)

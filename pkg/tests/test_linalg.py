"""Exact linear algebra: canonical subspaces, kernels, annihilators, solving."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from koszul.errors import DimensionMismatch
from koszul.linalg import (
    Matrix,
    Subspace,
    annihilator,
    full_space,
    intersect,
    kernel,
    rref_canonicalize,
    solve_linear,
    subspace_sum,
    zero_space,
)


def test_rref_rank_one_span():
    s = rref_canonicalize([[2, 4], [1, 2]], 2)
    assert s.pivots == (0,)
    assert s.basis_matrix().row_list() == [[F(1), F(2)]]


def test_rref_empty_span():
    s = rref_canonicalize([], 3)
    assert s.dim == 0 and s.ambient_dim == 3


def test_rref_identity_reorder():
    s = rref_canonicalize([[0, 1], [1, 0]], 2)
    assert s.basis_matrix().row_list() == [[F(1), F(0)], [F(0), F(1)]]


def test_rref_length_mismatch():
    with pytest.raises(DimensionMismatch):
        rref_canonicalize([[1, 2, 3]], 2)


def test_kernel_identity_and_zero():
    assert kernel(Matrix.identity(2)).dim == 0
    assert kernel(Matrix.zero(2, 3)) == full_space(3)


def test_kernel_one_equation():
    k = kernel(Matrix.from_rows([[1, 1, 0]]))
    assert k.dim == 2
    assert k.contains([1, -1, 0])
    # exactness: every basis row solves the equation
    for row in k.rows:
        assert row.get(0, F(0)) + row.get(1, F(0)) == 0


def test_intersect_coordinate_planes():
    e = [rref_canonicalize([[1 if j == i else 0 for j in range(3)]], 3) for i in range(3)]
    a = subspace_sum(e[0], e[1])
    b = subspace_sum(e[1], e[2])
    assert intersect(a, b) == e[1]
    assert intersect(a, a) == a
    assert intersect(e[0], e[1]).dim == 0


def test_intersect_ambient_mismatch():
    with pytest.raises(DimensionMismatch):
        intersect(zero_space(2), zero_space(3))


def test_annihilator_extremes():
    assert annihilator(zero_space(4)) == full_space(4)
    assert annihilator(full_space(3)) == zero_space(3)


def test_annihilator_diagonal_line():
    s = rref_canonicalize([[1, 1]], 2)
    a = annihilator(s)
    assert a.dim == 1 and a.contains([1, -1])
    assert annihilator(a) == s


def test_solve_unique():
    r = solve_linear(Matrix.identity(2), [3, 5])
    assert r.solution == [F(3), F(5)] and r.consistent and r.unique


def test_solve_underdetermined():
    r = solve_linear(Matrix.from_rows([[1, 1]]), [2])
    assert r.consistent and not r.unique
    assert sum(r.solution) == 2


def test_solve_inconsistent():
    r = solve_linear(Matrix.from_rows([[1], [1]]), [1, 2])
    assert not r.consistent and r.solution is None


small_frac = st.fractions(
    min_value=-6, max_value=6, max_denominator=4
)


@st.composite
def subspace_data(draw, max_dim=5):
    n = draw(st.integers(min_value=1, max_value=max_dim))
    k = draw(st.integers(min_value=0, max_value=n))
    rows = draw(
        st.lists(
            st.lists(small_frac, min_size=n, max_size=n), min_size=k, max_size=k
        )
    )
    return n, rows


@settings(max_examples=60, deadline=None)
@given(subspace_data(), st.randoms(use_true_random=False))
def test_canonicality_under_respanning(data, rng):
    n, rows = data
    s1 = rref_canonicalize(rows, n)
    if s1.dim == 0:
        return
    # respan by an invertible sequence of elementary row operations
    dense = [list(r) for r in s1.basis_matrix().row_list()]
    k = len(dense)
    for _ in range(8):
        a = rng.randrange(k)
        b = rng.randrange(k)
        if a == b:
            dense[a] = [F(rng.choice([2, 3, -1, 5])) * x for x in dense[a]]
        else:
            c = F(rng.randint(-3, 3))
            dense[a] = [x + c * y for x, y in zip(dense[a], dense[b])]
    s2 = rref_canonicalize(dense, n)
    assert s1 == s2


@settings(max_examples=60, deadline=None)
@given(subspace_data(), subspace_data())
def test_dimension_formula(da, db):
    n = max(da[0], db[0])
    a = rref_canonicalize([r + [F(0)] * (n - da[0]) for r in da[1]], n)
    b = rref_canonicalize([r + [F(0)] * (n - db[0]) for r in db[1]], n)
    meet = intersect(a, b)
    join = subspace_sum(a, b)
    assert a.dim + b.dim == meet.dim + join.dim
    for row in meet.rows:
        assert a.contains(dict(row)) and b.contains(dict(row))


@settings(max_examples=60, deadline=None)
@given(subspace_data())
def test_annihilator_involution_and_dims(data):
    n, rows = data
    s = rref_canonicalize(rows, n)
    a = annihilator(s)
    assert a.dim == n - s.dim
    assert annihilator(a) == s


@settings(max_examples=60, deadline=None)
@given(subspace_data(), subspace_data())
def test_annihilator_reverses_inclusions(da, db):
    n = max(da[0], db[0])
    a = rref_canonicalize([r + [F(0)] * (n - da[0]) for r in da[1]], n)
    b = subspace_sum(a, rref_canonicalize([r + [F(0)] * (n - db[0]) for r in db[1]], n))
    # a <= b, so ann(b) <= ann(a)
    ann_a, ann_b = annihilator(a), annihilator(b)
    for row in ann_b.rows:
        assert ann_a.contains(dict(row))


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=1, max_value=4),
    st.data(),
)
def test_solve_exactness(rows, cols, data):
    entries = data.draw(
        st.lists(small_frac, min_size=rows * cols, max_size=rows * cols)
    )
    b = data.draw(st.lists(small_frac, min_size=rows, max_size=rows))
    m = Matrix(rows, cols, entries)
    r = solve_linear(m, b)
    if r.consistent:
        assert m.mul_vec(r.solution) == [F(x) for x in b]

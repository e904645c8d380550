from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from killinv.linalg import dense_rank, left_inverse, nullspace, rank, rref

entries = st.integers(-3, 3)
matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)))


def sparse(rows):
    return [{j: Fraction(v) for j, v in enumerate(r) if v} for r in rows]


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rank_matches_sympy(m):
    assert rank(sparse(m)) == sympy.Matrix(m).rank()
    assert dense_rank(m) == sympy.Matrix(m).rank()


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_nullspace_matches_sympy(m):
    ncols = len(m[0])
    basis = nullspace(sparse(m), ncols)
    assert len(basis) == len(sympy.Matrix(m).nullspace())
    for v in basis:
        for row in m:
            assert sum(Fraction(row[j]) * c for j, c in v.items()) == 0
    # independence: each vector owns a distinct free column set to 1
    assert len({max(v) for v in basis}) == len(basis)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rref_matches_sympy(m):
    ours = rref(sparse(m))
    ref, pivots = sympy.Matrix(m).rref()
    assert sorted(ours) == list(pivots)
    for i, pc in enumerate(pivots):
        row = ours[pc]
        assert all(sympy.Rational(row.get(j, 0)) == ref[i, j] for j in range(len(m[0])))


def test_left_inverse_solves_overdetermined_system():
    A = [[1, 2], [0, 1], [1, 3]]
    L, K = left_inverse(sparse(A), 2)
    y = [Fraction(2), Fraction(-1)]
    c = [sum(Fraction(a) * b for a, b in zip(r, y)) for r in A]
    assert [sum(v * c[i] for i, v in row.items()) for row in L] == y
    assert len(K) == 1
    assert sum(v * c[i] for i, v in K[0].items()) == 0
    bad = c[:2] + [c[2] + 1]
    assert sum(v * bad[i] for i, v in K[0].items()) != 0


def test_left_inverse_rejects_kernel():
    with pytest.raises(ValueError):
        left_inverse(sparse([[1, 2, 0], [0, 1, 1], [1, 3, 1]]), 3)

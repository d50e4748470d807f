import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import UNSOLVABLE, DimensionMismatch
from core.exact_linalg import (
    ExactMatrix,
    SparseMatrix,
    annihilator,
    echelon,
    intersect,
    inverse,
    kernel,
    rank,
    rref,
    solve,
    span_of,
    subspace_equal,
    subspace_sum,
)
from core.galois_field import GaloisField

F5 = GaloisField(5)
F9 = GaloisField(3, 2)


def e(i, n=3):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


class TestRowReduction:
    def test_rank_and_kernel(self):
        M = ExactMatrix.from_rows(F5, [[1, 2], [2, 4]])
        assert rank(M) == 1
        K = kernel(M)
        assert K.dim == 1
        assert K.rows[0].tolist() == [1, 2]

    def test_rref_is_reduced(self):
        M = ExactMatrix.from_rows(F5, [[2, 4, 1], [1, 2, 4]])
        R, pivots = rref(M)
        assert pivots == [0, 2]
        assert R.tolist() == [[1, 2, 0], [0, 0, 1]]

    def test_zero_matrix(self):
        M = ExactMatrix.zeros(F5, 2, 3)
        assert rank(M) == 0
        assert kernel(M).dim == 3

    def test_extension_field_entries(self):
        t = F9.gen
        M = ExactMatrix.from_rows(F9, [[F9.one, t], [t, t * t]])
        assert rank(M) == 1
        v = kernel(M).rows[0]
        assert not (M @ v).any()

    def test_dense_and_sparse_agree(self, rng):
        data = rng.integers(0, 5, size=(30, 40))
        data[rng.random((30, 40)) < 0.8] = 0
        M = ExactMatrix(F5, data)
        dense = echelon(M, 'dense')
        sparse = echelon(M, 'sparse')
        assert dense.pivots == sparse.pivots
        assert np.array_equal(dense.to_dense(), sparse.to_dense())
        assert np.array_equal(dense.kernel_matrix(), sparse.kernel_matrix())

    def test_sparse_matrix_input(self):
        S = SparseMatrix(F5, 4, [{0: 1, 3: 2}, {1: 4}, {0: 2, 3: 4}])
        assert S.nnz == 5
        assert rank(S, 'sparse') == 2
        assert kernel(S).dim == 2
        assert S.to_dense().to_sparse().rows == S.rows

    @settings(max_examples=40)
    @given(st.integers(1, 6), st.integers(1, 6), st.data())
    def test_rank_nullity(self, rows, cols, data):
        values = data.draw(st.lists(st.integers(0, 4), min_size=rows * cols, max_size=rows * cols))
        M = ExactMatrix(F5, np.array(values).reshape(rows, cols))
        K = kernel(M)
        assert rank(M) + K.dim == cols
        for v in K.rows:
            assert not (M @ v).any()


class TestSolve:
    def test_unique_solution(self):
        M = ExactMatrix.from_rows(F5, [[1, 1], [0, 2]])
        sol = solve(M, [3, 4])
        assert sol.unique
        assert sol.particular.tolist() == [1, 2]

    def test_free_coordinates_are_zero(self):
        M = ExactMatrix.from_rows(F5, [[1, 0], [0, 0]])
        sol = solve(M, [2, 0])
        assert not sol.unique
        assert sol.particular.tolist() == [2, 0]
        assert sol.kernel.dim == 1

    def test_inconsistent(self):
        M = ExactMatrix.from_rows(F5, [[1, 1], [1, 1]])
        assert solve(M, [0, 1]) is UNSOLVABLE
        assert not UNSOLVABLE

    def test_shape_mismatch(self):
        M = ExactMatrix.from_rows(F5, [[1, 1]])
        with pytest.raises(DimensionMismatch):
            solve(M, [1, 2])

    def test_inverse(self):
        M = ExactMatrix.from_rows(F5, [[2, 1], [1, 1]])
        Minv = inverse(M)
        assert M @ Minv == ExactMatrix.identity(F5, 2)
        assert inverse(ExactMatrix.from_rows(F5, [[1, 2], [2, 4]])) is UNSOLVABLE


class TestSubspaces:
    def test_intersection_and_sum(self):
        U = span_of(F5, [e(0), e(1)])
        V = span_of(F5, [e(1), e(2)])
        meet = intersect(U, V)
        assert meet == span_of(F5, [e(1)])
        assert subspace_sum(U, V).dim == 3

    def test_intersection_of_skew_planes(self):
        U = span_of(F5, [e(0) + e(1), e(2)])
        V = span_of(F5, [e(0), e(1) + e(2)])
        meet = intersect(U, V)
        assert meet.dim == 1
        assert meet.contains(e(0) + e(1) + e(2))

    def test_empty_span_needs_ambient(self):
        with pytest.raises(DimensionMismatch):
            span_of(F5, [])
        assert span_of(F5, [], 4).dim == 0

    def test_annihilator(self):
        U = span_of(F5, [e(0) + e(1)])
        ann = annihilator(U)
        assert ann.dim == 2
        for w in ann.rows:
            assert (w[0] + w[1]) % 5 == 0

    def test_coordinates_and_membership(self):
        U = span_of(F5, [e(0) + 2 * e(2)])
        assert U.contains(np.array([3, 0, 1]))
        assert U.coordinates(e(1)) is None
        assert U.coordinates(np.array([3, 0, 1])).tolist() == [3]

    def test_equality_is_basis_independent(self):
        U = span_of(F5, [e(0), e(1)])
        V = span_of(F5, [e(0) + e(1), 2 * e(1)])
        assert subspace_equal(U, V)
        assert U.contains_space(span_of(F5, [e(0) + 4 * e(1)]))

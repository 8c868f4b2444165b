import numpy as np
import pytest
from hypothesis import given, strategies as st

from grpd.matrices import IntMatrix


def from_dense(rows):
    n, m = len(rows), len(rows[0])
    data = {}
    for i in range(n):
        for j in range(m):
            if rows[i][j]:
                data.setdefault(j, {})[i] = rows[i][j]
    return IntMatrix(n, m, data)


def dense(shape):
    n, m = shape
    return st.lists(st.lists(st.integers(-3, 3), min_size=m, max_size=m), min_size=n, max_size=n)


shapes = st.tuples(st.integers(1, 5), st.integers(1, 5))


class TestArithmetic:
    @given(shapes.flatmap(lambda s: st.tuples(dense(s), dense(s))))
    def test_add_and_sub_match_numpy(self, ab):
        a, b = ab
        A, B = from_dense(a), from_dense(b)
        assert (A + B).to_dense() == (np.array(a) + np.array(b)).tolist()
        assert (A - B).to_dense() == (np.array(a) - np.array(b)).tolist()
        assert (A - A).is_zero()

    @given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.data())
    def test_product_matches_numpy(self, n, k, m, data):
        a = data.draw(dense((n, k)))
        b = data.draw(dense((k, m)))
        assert (from_dense(a) @ from_dense(b)).to_dense() == (np.array(a) @ np.array(b)).tolist()

    @given(shapes.flatmap(dense))
    def test_transpose(self, a):
        A = from_dense(a)
        assert A.T.to_dense() == np.array(a).T.tolist()
        assert A.T.T == A

    @given(shapes.flatmap(dense))
    def test_rank_matches_numpy(self, a):
        assert from_dense(a).rank() == np.linalg.matrix_rank(np.array(a, dtype=float))

    def test_identity_and_diagonal(self):
        I = IntMatrix.identity(3)
        D = IntMatrix.diagonal([1, 0, 2])
        assert I @ D == D @ I == D
        assert D.rank() == 2 and D.nnz() == 2
        assert D.nonzero_columns() == [0, 2] and D.nonzero_rows() == [0, 2]

    def test_restrict_columns(self):
        A = from_dense([[1, 2], [3, 4]])
        assert A.restrict_columns([1]).to_dense() == [[0, 2], [0, 4]]

    def test_zero_entries_dropped(self):
        assert IntMatrix(2, 2, {0: {0: 0}}) == IntMatrix.zeros(2, 2)
        assert hash(IntMatrix(2, 2, {0: {0: 0}})) == hash(IntMatrix.zeros(2, 2))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            IntMatrix.zeros(2, 3) + IntMatrix.zeros(3, 2)
        with pytest.raises(ValueError):
            IntMatrix.zeros(2, 3) @ IntMatrix.zeros(2, 3)

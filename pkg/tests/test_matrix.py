import numpy as np
import pytest

from sinklab import (
    DiagScaling,
    InputError,
    Permutation,
    PositiveMatrix,
    apply_scaling,
    col_sums,
    conjugate,
    is_doubly_stochastic,
    permute_dilate,
    row_sums,
)
from sinklab.matrix import matrix_from_obj, parse_matrix, parse_matrix_csv


def test_positive_matrix_validates_entries():
    with pytest.raises(InputError, match=r"entry \(1,2\)"):
        PositiveMatrix([[1, -1], [1, 1]])
    with pytest.raises(InputError, match=r"entry \(2,1\)"):
        PositiveMatrix([[1, 1], [0, 1]])
    with pytest.raises(InputError):
        PositiveMatrix([[1, float("nan")], [1, 1]])
    with pytest.raises(InputError):
        PositiveMatrix([[1, 2], [3]])


def test_positive_matrix_is_immutable():
    A = PositiveMatrix([[1, 2], [3, 4]])
    with pytest.raises(AttributeError):
        A.values = None
    with pytest.raises(ValueError):
        A.values[0, 0] = 5.0


def test_shape_and_symmetry():
    A = PositiveMatrix([[1, 2, 3], [4, 5, 6]])
    assert A.shape == (2, 3)
    assert not A.is_square
    with pytest.raises(InputError):
        A.n
    S = PositiveMatrix([[1, 2], [2, 3]])
    assert S.is_symmetric()
    assert not PositiveMatrix([[1, 2], [2.1, 3]]).is_symmetric()


def test_sums_and_doubly_stochastic():
    A = PositiveMatrix([[0.5, 0.5], [0.5, 0.5]])
    assert np.allclose(row_sums(A), [1, 1])
    assert np.allclose(col_sums(A), [1, 1])
    assert is_doubly_stochastic(A, 1e-15)
    assert not is_doubly_stochastic(PositiveMatrix([[1, 1], [1, 1]]), 1e-3)


def test_apply_scaling_outer_product():
    A = PositiveMatrix([[1, 2], [3, 4]])
    X = DiagScaling([2, 1])
    Y = DiagScaling([1, 0.5])
    B = apply_scaling(X, A, Y)
    assert np.array_equal(B.values, [[2, 2], [3, 2]])


def test_permutation_basics():
    p = Permutation((1, 2, 0))
    assert p.inverse().mapping == (2, 0, 1)
    assert p.transpose() == p.inverse()
    assert Permutation.identity(3).mapping == (0, 1, 2)
    with pytest.raises(InputError):
        Permutation((0, 0, 1))
    # matrix() convention: row i has a 1 in column mapping[i]
    M = p.matrix()
    expected = np.zeros((3, 3))
    for i, j in enumerate(p.mapping):
        expected[i, j] = 1.0
    assert np.array_equal(M, expected)


def test_compose_matches_matrix_product():
    p = Permutation((1, 2, 0))
    q = Permutation((2, 1, 0))
    assert np.array_equal(p.compose(q).matrix(), p.matrix() @ q.matrix())


def test_permute_dilate_is_literal_product():
    A = PositiveMatrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    P = Permutation((1, 2, 0))
    Q = Permutation((2, 0, 1))
    B = permute_dilate(A, P, Q, 2.0)
    assert np.allclose(B.values, 2.0 * P.matrix() @ A.values @ Q.matrix())


def test_conjugate_indexing():
    A = PositiveMatrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    P = Permutation((2, 0, 1))
    C = conjugate(A, P)
    for i in range(3):
        for j in range(3):
            assert C.values[i, j] == A.values[P.mapping[i], P.mapping[j]]
    # conjugation is the symmetric special case of permute_dilate
    assert np.allclose(
        C.values, permute_dilate(A, P, P.transpose(), 1.0).values
    )


def test_parse_matrix_forms():
    A = parse_matrix("[[2,1],[1,2]]")
    assert A.shape == (2, 2)
    B = parse_matrix('{"n": 2, "rows": [[2,1],[1,2]]}')
    assert np.array_equal(A.values, B.values)
    with pytest.raises(InputError):
        parse_matrix("not json")
    with pytest.raises(InputError):
        parse_matrix('{"rows": "nope"}')
    C = matrix_from_obj([[1.5, 1], [1, 1]])
    assert C.values[0, 0] == 1.5


def test_parse_matrix_csv():
    A = parse_matrix_csv("2,1,1\n1,2,1\n1,1,2\n")
    assert A.shape == (3, 3)
    assert A.values[0, 0] == 2
    with pytest.raises(InputError):
        parse_matrix_csv("1,2\n3\n")

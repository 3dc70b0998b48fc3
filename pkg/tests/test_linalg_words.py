import pytest

from isoquot import words
from isoquot.exactnum import Cyclotomic, root_of_unity
from isoquot.linalg import (CMatrix, DimensionMismatch, det, diag, has_eigenvalue_one,
                            identity, inverse, is_quasireflection, kron, mat_eq, rank)
from isoquot.reps import alpha_q_images, pi_images


def z(j, M):
    return root_of_unity(j % M, M)


def test_quaternion_products():
    q8 = alpha_q_images(3, 1)
    assert q8["P"] @ q8["P"] == diag([-1, -1])
    assert mat_eq(identity(2), q8["Q"] ** 4)
    m = CMatrix([[1, 2, 0], [0, 1, 3], [4, 0, 1]])
    assert identity(3) @ m == m


def test_det_examples():
    assert det(CMatrix([[0, 1], [-1, 0]])) == Cyclotomic.rational(1)
    B = pi_images(5, 4, 4, 1, 1)["B"]
    assert det(B) == Cyclotomic.rational(1)
    assert det(diag([z(1, 7), z(2, 7), z(4, 7)])) == Cyclotomic.rational(1)


def test_inverse_and_rank():
    m = CMatrix([[z(1, 5), 1], [0, z(2, 3)]])
    assert m @ inverse(m) == identity(2)
    assert rank(CMatrix([[1, 2], [2, 4]])) == 1
    with pytest.raises(ZeroDivisionError):
        inverse(CMatrix([[1, 2], [2, 4]]))


def test_eigenvalue_and_quasireflection():
    assert has_eigenvalue_one(identity(2))
    assert not has_eigenvalue_one(diag([z(1, 5), z(2, 5)]))
    assert has_eigenvalue_one(diag([z(1, 3), 1]))
    assert is_quasireflection(diag([z(1, 3), 1]))
    assert not is_quasireflection(diag([z(1, 5), z(2, 5)]))
    assert not is_quasireflection(-identity(2))


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        identity(2) @ identity(3)


def test_kron_dims():
    assert kron(identity(2), diag([1, 2, 3])).dim == 6


def test_words_parse_and_eval():
    imgs = alpha_q_images(3, 1)
    I = identity(2)
    assert words.check("P^2 = Q^2", imgs, I)
    assert words.check("P Q P^-1 = Q^-1", imgs, I, inverse)
    assert words.check("(P Q)^2 = P^2", imgs, I, inverse)
    assert words.evaluate("1", imgs, I) == I
    with pytest.raises(ValueError):
        words.parse("(P Q")
    with pytest.raises(ValueError):
        words.parse("^2")

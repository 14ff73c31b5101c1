from fractions import Fraction

from app.services import linalg


def test_det_rank_solve():
    m = [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]
    assert linalg.det(m) == -2
    assert linalg.rank(m) == 2
    assert linalg.rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1
    assert linalg.solve(m, [Fraction(5), Fraction(6)]) == [Fraction(-4), Fraction(9, 2)]
    assert linalg.solve([[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]], [Fraction(1), Fraction(2)]) is None


def test_inverse_and_matmul():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    inv = linalg.inverse(m)
    assert linalg.matmul(m, inv) == [[1, 0], [0, 1]]


def test_cofactor_normal_orientation():
    normal = linalg.cofactor_normal([[Fraction(1), Fraction(0)]])
    assert normal == [0, 1]
    vectors = [[Fraction(1), Fraction(0), Fraction(0)], [Fraction(0), Fraction(1), Fraction(0)]]
    normal = linalg.cofactor_normal(vectors)
    assert linalg.dot(normal, vectors[0]) == 0 and linalg.dot(normal, vectors[1]) == 0
    assert linalg.det(vectors + [normal]) > 0


def test_hermite_normal_form():
    assert linalg.hermite_normal_form([[2, 0], [1, 1]]) == [[1, 1], [0, 2]]
    assert linalg.hermite_normal_form([[4, 6], [6, 9], [0, 0]]) == [[2, 3]]
    hnf = linalg.hermite_normal_form([[3, 1, 4], [1, 5, 9], [2, 6, 5]])
    for k, row in enumerate(hnf):
        assert row[k] > 0
        assert all(x == 0 for x in row[:k])
        for above in hnf[:k]:
            assert 0 <= above[k] < row[k]


def test_clear_denominators():
    rows, scale = linalg.clear_denominators([[Fraction(1, 2), Fraction(1, 3)]])
    assert scale == 6
    assert rows == [[3, 2]]

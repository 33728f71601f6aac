import random

import pytest

from symspec.linalg import (
    Matrix, char_poly, commutes, conjugate, det, det_bareiss, inverse, mat_arith, poly_at_matrix, solve, trace,
)
from symspec.rings import PolyRing

from conftest import F101, QQ


def laplace_det(rows):
    """Cofactor expansion along the first row; the oracle for det and char_poly."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * laplace_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def laplace_char_poly(m: Matrix):
    ring = PolyRing(m.field, ("t",))
    t = ring.gen("t")
    n = m.dim
    rows = [[(t if i == j else ring.zero) - m[i, j] for j in range(n)] for i in range(n)]
    return laplace_det(rows)


def random_matrix(field, n, rng, bound=4):
    return Matrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)], field)


def test_matrix_arith_examples():
    rng = random.Random(1)
    m = random_matrix(QQ, 3, rng)
    ident = Matrix.identity(3, QQ)
    assert mat_arith(ident, "mul", m) == m
    assert mat_arith(m, "add", mat_arith(m, "scale", -1)).is_zero()
    J = Matrix([[0, 1], [-1, 0]], QQ)
    assert J @ J == Matrix.identity(2, QQ) * -1


def test_dimension_and_ring_mismatch():
    with pytest.raises(ValueError):
        Matrix.identity(2, QQ) + Matrix.identity(3, QQ)
    with pytest.raises(ValueError):
        Matrix.identity(2, QQ) + Matrix.identity(2, F101)
    with pytest.raises(ValueError):
        Matrix([[1, 2]], QQ)


def test_trace_examples():
    y = Matrix.diag([2, 3, -3, -2], QQ)
    assert trace(y) == 0
    assert trace(y @ y) == 4 + 9 + 9 + 4 == 26
    rng = random.Random(2)
    for _ in range(50):
        a, b = random_matrix(QQ, 4, rng), random_matrix(QQ, 4, rng)
        assert trace(a @ b) == trace(b @ a)


def test_char_poly_examples():
    m = Matrix([[1, 2], [3, 4]], QQ)
    t = PolyRing(QQ, ("t",)).gen("t")
    assert laplace_char_poly(m) == t ** 2 - 5 * t - 2
    assert char_poly(m) == t ** 2 - 5 * t - 2
    assert det(m) == laplace_det([[1, 2], [3, 4]]) == -2

    b1, b2 = PolyRing(QQ, ("b1", "b2")).gens
    ring = b1.ring
    diag = Matrix.diag([b1, b2, -b2, -b1], ring)
    tt = ring.extend("t").gen("t")
    assert char_poly(diag) == (tt ** 2 - b1 ** 2) * (tt ** 2 - b2 ** 2)

    jordan = Matrix([[int(j == i + 1) for j in range(5)] for i in range(5)], QQ)
    assert char_poly(jordan) == t ** 5


@pytest.mark.parametrize("field", [QQ, F101], ids=str)
def test_char_poly_matches_cofactor_oracle(field):
    rng = random.Random(3)
    for n in range(1, 6):
        for _ in range(8):
            m = random_matrix(field, n, rng)
            cp = char_poly(m)
            assert cp == laplace_char_poly(m)
            assert cp.coeff({"t": n}) == 1
            assert cp.coeff({"t": n - 1}) == -trace(m)


def test_det_identity_and_multiplicativity():
    assert det(Matrix.identity(4, QQ)) == 1
    rng = random.Random(4)
    for _ in range(100):
        a, b = random_matrix(QQ, 4, rng), random_matrix(QQ, 4, rng)
        assert det(a @ b) == det(a) * det(b)


@pytest.mark.parametrize("field", [QQ, F101], ids=str)
def test_berkowitz_det_matches_bareiss(field):
    rng = random.Random(5)
    for n in range(1, 7):
        for _ in range(10):
            m = random_matrix(field, n, rng)
            assert det(m) == det_bareiss(m)


def test_bareiss_over_polynomial_ring():
    ring = PolyRing(QQ, ("t",))
    t = ring.gen("t")
    rng = random.Random(6)
    m = random_matrix(QQ, 4, rng)
    shifted = Matrix.identity(4, ring) * t - m
    assert det_bareiss(shifted) == det(shifted) == char_poly(m)


@pytest.mark.parametrize("n", [4, 6])
def test_cayley_hamilton(n):
    rng = random.Random(n)
    for _ in range(5):
        m = random_matrix(QQ, n, rng)
        assert poly_at_matrix(char_poly(m), m).is_zero()


def test_cayley_hamilton_polynomial_entries():
    ring = PolyRing(QQ, ("a", "b"))
    a, b = ring.gens
    m = Matrix([[a, 1, 0, b], [0, b, a, 1], [1, 0, a + b, 0], [b, a, 0, 1]], ring)
    cp = char_poly(m)
    # substitute m for t with the coefficients in k[a, b]
    out = Matrix.zeros(4, ring)
    power = Matrix.identity(4, ring)
    for k in range(5):
        out = out + power * cp.coeff_in("t", k)
        power = power @ m
    assert out.to_ring(cp.ring).is_zero()


def test_commutes_examples():
    rng = random.Random(7)
    m = random_matrix(QQ, 3, rng)
    assert commutes(m, m @ m)
    assert not commutes(Matrix.diag([1, 2], QQ), Matrix([[0, 1], [0, 0]], QQ))


def test_conjugation_invariants():
    rng = random.Random(8)
    checked = 0
    while checked < 100:
        n = rng.randint(1, 4)
        g = random_matrix(QQ, n, rng, bound=3)
        if not det(g):
            continue
        x = random_matrix(QQ, n, rng)
        y = conjugate(g, x)
        assert conjugate(Matrix.identity(n, QQ), x) == x
        assert trace(y) == trace(x)
        assert det(y) == det(x)
        assert char_poly(y) == char_poly(x)
        x2 = x @ x
        assert commutes(conjugate(g, x), conjugate(g, x2))
        checked += 1


def test_inverse_and_singular():
    g = Matrix([[2, 1], [1, 1]], QQ)
    assert g @ inverse(g) == Matrix.identity(2, QQ)
    with pytest.raises(ZeroDivisionError):
        conjugate(Matrix([[1, 2], [2, 4]], QQ), g)


def test_solve():
    sol = solve([[1, 1], [1, -1]], [3, 1], QQ)
    assert sol == [2, 1]
    assert solve([[1, 1], [2, 2]], [1, 3], QQ) is None


def test_matrix_json_roundtrip():
    m = Matrix([[QQ(1) / 2, 0], [-3, 4]], QQ)
    data = m.to_json()
    assert data == {"dim": 2, "ring": "q", "rows": [["1/2", "0"], ["-3", "4"]]}
    assert Matrix.from_json(data) == m
    f = Matrix([[1, -1], [2, 0]], F101)
    assert Matrix.from_json(f.to_json()) == f
    ring = PolyRing(QQ, ("t",))
    p = Matrix.identity(2, ring) * ring.gen("t") - m
    assert Matrix.from_json(p.to_json()) == p

import random
from fractions import Fraction

import pytest

from evokit import linalg
from evokit.errors import SingularMatrix
from evokit.field import make_field

from oracles import frac_rref, modp_rref


def random_matrix(field, rows, cols, rng):
    return [[field.random_scalar(rng) for _ in range(cols)] for _ in range(rows)]


def test_rref_matches_oracle_modp():
    rng = random.Random(1)
    f = make_field("F5")
    for _ in range(100):
        rows = random_matrix(f, rng.randint(1, 6), rng.randint(1, 6), rng)
        red, _ = linalg.rref(f, rows)
        assert [tuple(r) for r in red] == modp_rref(rows, 5)


def test_rref_matches_oracle_rationals():
    rng = random.Random(2)
    q = make_field("Q")
    for _ in range(40):
        rows = random_matrix(q, rng.randint(1, 5), rng.randint(1, 5), rng)
        red, _ = linalg.rref(q, rows)
        assert [tuple(r) for r in red] == frac_rref(rows)


def test_rref_idempotent():
    rng = random.Random(3)
    f = make_field("F7")
    for _ in range(30):
        rows = random_matrix(f, 4, 5, rng)
        red, piv = linalg.rref(f, rows)
        again, piv2 = linalg.rref(f, red)
        assert red == again and piv == piv2


def test_kernel_annihilates():
    rng = random.Random(4)
    for field in (make_field("F3"), make_field("Q")):
        for _ in range(30):
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            rows = random_matrix(field, n, m, rng)
            basis = linalg.kernel_basis(field, rows, n)
            for v in basis:
                image = linalg.vec_mat(field, v, rows)
                assert all(field.is_zero(a) for a in image)
            assert len(basis) == n - linalg.rank(field, rows)


def test_inverse_round_trip():
    rng = random.Random(5)
    for field in (make_field("F5"), make_field("Q")):
        for _ in range(20):
            n = rng.randint(1, 5)
            m = linalg.random_invertible(field, n, rng)
            inv = linalg.mat_inv(field, m)
            assert linalg.mat_mul(field, m, inv) == linalg.identity(field, n)


def test_singular_matrix_raises():
    f = make_field("F3")
    with pytest.raises(SingularMatrix):
        linalg.mat_inv(f, [[1, 1], [1, 1]])
    with pytest.raises(SingularMatrix):
        linalg.mat_inv(f, [[1, 2], [2, 1]])  # det = -3 = 0 mod 3


def test_exact_rationals_no_drift():
    # Hilbert-style matrix: classic float killer, exact here.
    q = make_field("Q")
    n = 6
    hil = [[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)]
    inv = linalg.mat_inv(q, hil)
    assert linalg.mat_mul(q, hil, inv) == linalg.identity(q, n)

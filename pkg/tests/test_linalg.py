import random
from fractions import Fraction

import numpy as np

from residuum import linalg
from residuum.exact import ExactComplex, I, ONE, ZERO


def _to_numpy(rows):
    return np.array([[x.to_complex() for x in row] for row in rows])


def _random_matrix(rng, n_rows, n_cols):
    return [
        [
            ExactComplex(Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4)))
            for _ in range(n_cols)
        ]
        for _ in range(n_rows)
    ]


def test_rank_known():
    m = [
        [ONE, ExactComplex(2), ExactComplex(3)],
        [ExactComplex(2), ExactComplex(4), ExactComplex(6)],
        [ZERO, ONE, ONE],
    ]
    assert linalg.rank(m) == 2
    assert linalg.rank([[ZERO, ZERO]]) == 0
    assert linalg.rank([[I]]) == 1


def test_rank_matches_numpy_oracle():
    rng = random.Random(3)
    for _ in range(40):
        m = _random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        assert linalg.rank(m) == np.linalg.matrix_rank(_to_numpy(m))


def test_nullspace_annihilates():
    rng = random.Random(5)
    for _ in range(30):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 6))
        basis = linalg.nullspace(m)
        assert len(basis) == len(m[0]) - linalg.rank(m)
        for v in basis:
            assert all(x.is_zero() for x in linalg.matvec(m, v))


def test_solve_roundtrip_and_inconsistency():
    rng = random.Random(9)
    for _ in range(30):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        x = [ExactComplex(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in m[0]]
        b = linalg.matvec(m, x)
        sol = linalg.solve(m, b)
        assert sol is not None
        assert linalg.matvec(m, sol) == b
    # inconsistent system
    m = [[ONE, ONE], [ONE, ONE]]
    assert linalg.solve(m, [ZERO, ONE]) is None


def test_transpose():
    m = [[ONE, ZERO, I], [ZERO, ONE, -I]]
    t = linalg.transpose(m)
    assert len(t) == 3 and len(t[0]) == 2
    assert t[2][0] == I and t[2][1] == -I

"""Exact linear algebra: rank/kernel/rref over F_p and Q."""

from fractions import Fraction
import random

import numpy as np
import pytest

from projsyz.fields import FieldError, GF, QQ, DEFAULT_FIELD
from projsyz.linalg import (
    ExactMatrix,
    dense_matmul,
    rank,
    rank_kernel,
    rref,
    rref_modp,
)

F7 = GF(7)


def naive_rank_modp(a, p):
    """Reference dense Gaussian elimination, scalar loops only."""
    a = [[int(x) % p for x in row] for row in a]
    m, n = len(a), len(a[0]) if a else 0
    r = 0
    for j in range(n):
        piv = next((i for i in range(r, m) if a[i][j]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][j], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(m):
            if i != r and a[i][j]:
                f = a[i][j]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def test_identity_over_f7():
    m = ExactMatrix.identity(2, F7)
    rk, kern = rank_kernel(m)
    assert rk == 2
    assert kern == []


def test_zero_matrix():
    m = ExactMatrix(3, 4, F7)
    rk, kern = rank_kernel(m)
    assert rk == 0
    assert len(kern) == 4


def test_rank_one_over_q():
    m = ExactMatrix.from_dense([[1, 2], [2, 4]], QQ)
    rk, kern = rank_kernel(m)
    assert rk == 1
    assert len(kern) == 1
    (v,) = kern
    # spanned by (2, -1) up to scale
    assert v[0] * Fraction(-1) == v[1] * Fraction(2)


def test_mixed_field_entries_rejected():
    with pytest.raises(FieldError):
        ExactMatrix(1, 1, F7, [(0, 0, QQ.element(1))])


@pytest.mark.parametrize("seed", range(6))
def test_random_rank_matches_naive_and_transpose(seed):
    rng = random.Random(seed)
    p = 32003
    m = rng.randrange(1, 40)
    n = rng.randrange(1, 40)
    data = [[rng.randrange(p) if rng.random() < 0.4 else 0 for _ in range(n)]
            for _ in range(m)]
    mat = ExactMatrix.from_dense(data, DEFAULT_FIELD)
    rk, kern = rank_kernel(mat)
    assert rk == naive_rank_modp(data, p)
    assert rk == rank(mat.transpose())
    assert rk + len(kern) == n
    for v in kern:
        assert all(x == 0 for x in mat.mul_vector(v))


@pytest.mark.parametrize("seed", range(4))
def test_sparse_path_agrees_with_dense(seed):
    rng = random.Random(100 + seed)
    p = 32003
    m, n = 30, 45
    data = [[rng.randrange(p) if rng.random() < 0.08 else 0 for _ in range(n)]
            for _ in range(m)]
    mat = ExactMatrix.from_dense(data, DEFAULT_FIELD)
    rk_d, _ = rank_kernel(mat, method="dense")
    rk_s, kern_s = rank_kernel(mat, method="sparse")
    assert rk_d == rk_s
    for v in kern_s:
        assert all(x == 0 for x in mat.mul_vector(v))
    rd, pd_ = rref(mat, method="dense")
    rs, ps = rref(mat, method="sparse")
    assert pd_ == ps
    assert rd == rs


def test_sparse_q_kernel_exact():
    rows = [[1, 0, 2, 0], [0, 1, 0, 3], [1, 1, 2, 3]]
    mat = ExactMatrix.from_dense(rows, QQ)
    rk, kern = rank_kernel(mat, method="sparse")
    assert rk == 2
    assert len(kern) == 2
    for v in kern:
        assert all(x == 0 for x in mat.mul_vector(v))


def test_blocked_echelon_large_random():
    # exercises the panel/dgemm code path across several panel boundaries
    rng = np.random.default_rng(7)
    p = 32003
    a = rng.integers(0, p, size=(400, 350)).astype(np.float64)
    a[:, 40] = (3 * a[:, 12] + 5 * a[:, 30]) % p  # force a dependency
    r, pivots = rref_modp(a.copy(), p)
    assert naive_rank_modp(a[:60, :60].tolist(), p) == len(
        rref_modp(a[:60, :60].copy(), p)[1]
    )
    assert 40 not in pivots or len(pivots) == 350  # dependent column not a pivot
    # RREF property: unit pivots, zeros elsewhere in pivot columns
    for i, pc in enumerate(pivots):
        col = r[: len(pivots), pc]
        assert col[i] == 1
        assert np.count_nonzero(col) == 1


def test_exact_matmul_modp():
    p = 32003
    rng = np.random.default_rng(3)
    a = rng.integers(0, p, size=(37, 53)).astype(np.float64)
    b = rng.integers(0, p, size=(53, 29)).astype(np.float64)
    c = dense_matmul(DEFAULT_FIELD, a, b)
    i, j = 17, 11
    expect = sum(int(a[i, k]) * int(b[k, j]) for k in range(53)) % p
    assert int(c[i, j]) == expect

import numpy as np
import pytest

from hunter_saxton.banded import BandedMatrix


@pytest.mark.parametrize("lower, upper", [(1, 1), (0, 2), (2, 0), (3, 1)])
def test_dense_roundtrip_and_solve(lower, upper):
    rng = np.random.default_rng(lower * 10 + upper)
    n = 12
    M = np.zeros((n, n))
    for k in range(-lower, upper + 1):
        M += np.diag(rng.normal(size=n - abs(k)), k)
    M += 5 * np.eye(n)
    B = BandedMatrix.from_dense(M)
    assert (B.lower, B.upper) == (lower, upper)
    np.testing.assert_array_equal(B.to_dense(), M)
    x = rng.normal(size=n)
    np.testing.assert_allclose(B @ x, M @ x, rtol=1e-14, atol=1e-14)
    np.testing.assert_array_equal(B.T.to_dense(), M.T)
    b = rng.normal(size=n)
    y = B.solve(b)
    assert np.max(np.abs(M @ y - b)) <= 1e-12 * np.max(np.abs(b))


def test_cholesky_path_and_reuse():
    n = 20
    M = 2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    B = BandedMatrix.from_dense(M, symmetric=True)
    f = B.factor()
    assert B.factor() is f
    for seed in range(3):
        b = np.random.default_rng(seed).normal(size=n)
        np.testing.assert_allclose(M @ B.solve(b), b, atol=1e-12)


def test_singular_raises():
    B = BandedMatrix.from_dense(np.diag([1.0, 0.0, 1.0]), lower=1, upper=1)
    with pytest.raises(np.linalg.LinAlgError):
        B.solve(np.ones(3))

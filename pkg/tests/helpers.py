"""Shared test oracles: dense linear algebra over GF(2^p), kept independent
of the recursions they are used to check."""

import numpy as np

from nbpolar.gf import Field


def gf_matrix_inverse(field: Field, M: np.ndarray) -> np.ndarray:
    """Invert a matrix over the field by Gauss-Jordan elimination."""
    n = M.shape[0]
    A = M.astype(np.int64).copy()
    I = np.eye(n, dtype=np.int64)
    for col in range(n):
        pivot = next(r for r in range(col, n) if A[r, col] != 0)
        if pivot != col:
            A[[col, pivot]] = A[[pivot, col]]
            I[[col, pivot]] = I[[pivot, col]]
        inv_p = field.inv(int(A[col, col]))
        A[col] = field.mul(inv_p, A[col])
        I[col] = field.mul(inv_p, I[col])
        for r in range(n):
            if r != col and A[r, col] != 0:
                factor = int(A[r, col])
                A[r] ^= field.mul(factor, A[col])
                I[r] ^= field.mul(factor, I[col])
    assert np.array_equal(A, np.eye(n, dtype=np.int64))
    return I


def random_triples(field: Field, count: int, rng) -> np.ndarray:
    """Random nonzero (mu, gamma, delta) coefficient triples."""
    return rng.integers(1, field.q, size=(count, 3))

"""Shared fixtures and independent oracles for the test suite."""

import itertools

import numpy as np
import pytest

from classm import SymmetricMatrix


def random_symmetric(rng, n, scale=1.0):
    raw = rng.uniform(-scale, scale, (n, n))
    return SymmetricMatrix((raw + raw.T) / 2.0)


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    # fix the QR sign ambiguity so columns are deterministic per draw
    return q * np.sign(np.diag(r))


def random_psd(rng, n, scale=1.0):
    p = rng.uniform(-scale, scale, (n, n))
    return p.T @ p


def brute_sk(values, k):
    """Subset-enumeration oracle for the k-th elementary symmetric polynomial."""
    total = 0
    for combo in itertools.combinations(values, k):
        prod = 1
        for v in combo:
            prod = prod * v
        total += prod
    return total


def random_blocks(rng, half_dim, target_norm=1.2):
    """Random 2N x 2N block triple with operator norm pinned to target_norm.

    The recentered admissible-family construction is only guaranteed when
    eps * ||A|| <= sqrt(3)/2, so bulk tests with geometric schedules starting
    at eps = 0.5 keep ||A|| at or below 1.5.
    """
    from classm import block_compose, block_extract, operator_norm

    raw = rng.uniform(-1, 1, (2 * half_dim, 2 * half_dim))
    a = SymmetricMatrix((raw + raw.T) / 2.0)
    norm = operator_norm(a)
    if norm > 0:
        a = SymmetricMatrix(a.entries * (target_norm / norm))
    return block_compose(*block_extract(a))


def eig2_oracle(a, b, c):
    """Eigenvalues of [[a, b], [b, c]] by the quadratic formula, ascending."""
    half_trace = (a + c) / 2.0
    disc = ((a - c) / 2.0) ** 2 + b * b
    root = disc ** 0.5
    return half_trace - root, half_trace + root


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

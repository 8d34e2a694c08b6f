"""Shared helpers for the test suite."""

import numpy as np
import pytest


def emaf_direct(x):
    """Brute-force double-loop empirical ambiguity function (oracle)."""
    x = np.asarray(x, dtype=complex)
    n = x.size
    out = np.zeros((2 * n - 1, 2 * n), dtype=complex)
    for m in range(2 * n - 1):
        tau = m - (n - 1)
        for k in range(2 * n):
            nu = (k - n) / (2.0 * n)
            acc = 0.0 + 0.0j
            for t in range(max(0, tau), n + min(0, tau)):
                acc += x[t] * np.conj(x[t - tau]) * np.exp(-2j * np.pi * nu * t)
            out[m, k] = acc
    return out


def emaf_at(x, nu, tau):
    """Single-cell empirical ambiguity function by direct summation."""
    x = np.asarray(x, dtype=complex)
    n = x.size
    if tau >= 0:
        t = np.arange(tau, n)
        prod = x[tau:] * np.conj(x[: n - tau])
    else:
        t = np.arange(0, n + tau)
        prod = x[: n + tau] * np.conj(x[-tau:])
    return complex(np.sum(prod * np.exp(-2j * np.pi * nu * t)))


def random_complex_signal(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)

"""Shared random generators for the test suite."""

import numpy as np


def complex_randn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng, d, scale=1.0):
    a = complex_randn(rng, d, d)
    return scale * 0.5 * (a + a.conj().T)


def random_unitary(rng, d):
    a = complex_randn(rng, d, d)
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_unit(rng, d):
    f = complex_randn(rng, d)
    return f / np.linalg.norm(f)


def random_psd(rng, d, scale=1.0):
    a = complex_randn(rng, d, d)
    return scale * (a @ a.conj().T) / d

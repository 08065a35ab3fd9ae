"""Compiled Jacobi kernel and numpy fallback must agree."""

import numpy as np
import pytest
from helpers import random_hermitian

from semiframes import _kernels

pytestmark = pytest.mark.skipif(
    "compiled" not in _kernels.available_backends(),
    reason="compiled kernel not built",
)


def _sorted_eigs(fn, a):
    vals, vecs, sweeps = fn(a, 1e-13, 100)
    assert sweeps >= 0
    order = np.argsort(vals)
    return vals[order], vecs[:, order]


@pytest.mark.parametrize("d", [2, 3, 8, 24])
def test_backends_agree(rng, d):
    backends = _kernels.available_backends()
    a = random_hermitian(rng, d, scale=2.0)
    vals_c, vecs_c = _sorted_eigs(backends["compiled"], a)
    vals_p, vecs_p = _sorted_eigs(backends["python"], a)
    np.testing.assert_allclose(vals_c, vals_p, atol=1e-10 * max(1, np.linalg.norm(a)))
    for vecs in (vecs_c, vecs_p):
        recon = vecs @ np.diag(vals_c) @ vecs.conj().T
        assert np.linalg.norm(recon - a) <= 1e-10 * max(1.0, np.linalg.norm(a))


def test_diagonal_converges_without_sweeps():
    a = np.diag([3.0, 1.0, 2.0]).astype(complex)
    for fn in _kernels.available_backends().values():
        vals, vecs, sweeps = fn(a, 1e-13, 100)
        assert sweeps == 0
        np.testing.assert_allclose(sorted(vals), [1.0, 2.0, 3.0], atol=1e-15)


def test_backends_do_not_mutate_input(rng):
    a = random_hermitian(rng, 5)
    before = a.copy()
    for fn in _kernels.available_backends().values():
        fn(a, 1e-13, 100)
        np.testing.assert_array_equal(a, before)

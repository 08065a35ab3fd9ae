import numpy as np
import pytest
from helpers import complex_randn, random_hermitian

from semiframes import duality
from semiframes.errors import DimensionMismatch, SingularFrameOperator
from semiframes.spaces import MeasureSpace, OperatorSpec, VectorFamily, frame_operator


def onb(d):
    return VectorFamily(np.eye(d))


def scaled_basis(d, fn):
    rows = np.zeros((d, d), dtype=complex)
    for n in range(1, d + 1):
        rows[n - 1, n - 1] = fn(n)
    return VectorFamily(rows)


def counting(n):
    return MeasureSpace.counting(n)


class TestCanonicalDual:
    def test_onb_self_dual(self):
        chi = duality.canonical_dual(onb(3), counting(3))
        np.testing.assert_allclose(chi.vectors, np.eye(3), atol=1e-12)

    def test_diagonal_inverse_weights(self):
        chi = duality.canonical_dual(scaled_basis(3, lambda n: n), counting(3))
        np.testing.assert_allclose(chi.vectors, np.diag([1.0, 0.5, 1.0 / 3.0]), atol=1e-12)

    def test_reconstruction_identity(self, rng):
        fam = VectorFamily(complex_randn(rng, 9, 5))
        sp = MeasureSpace(rng.uniform(0.4, 2.0, size=9))
        chi = duality.canonical_dual(fam, sp)
        for _ in range(20):
            f = complex_randn(rng, 5)
            coeff = sp.weights * (np.conj(fam.vectors) @ f)
            recon = chi.vectors.T @ coeff
            assert np.linalg.norm(recon - f) <= 1e-9 * max(1.0, np.linalg.norm(f))

    def test_tightness_in_graph_inner_product(self, rng):
        fam = VectorFamily(complex_randn(rng, 8, 5))
        sp = counting(8)
        chi = duality.canonical_dual(fam, sp)
        probes = [complex_randn(rng, 5) for _ in range(100)]
        assert duality.tightness_defect(fam, chi, sp, probes) <= 1e-8

    def test_singular_frame_operator(self):
        fam = VectorFamily(np.eye(3)[:2])  # rank 2 in dimension 3
        with pytest.raises(SingularFrameOperator):
            duality.canonical_dual(fam, counting(2))

    def test_scaling_antihomogeneity(self, rng):
        fam = VectorFamily(complex_randn(rng, 6, 4))
        sp = counting(6)
        chi = duality.canonical_dual(fam, sp)
        chi_scaled = duality.canonical_dual(fam.scaled(2.5), sp)
        np.testing.assert_allclose(chi_scaled.vectors, chi.vectors / 2.5, atol=1e-10)


class TestDualPairCheck:
    def test_onb_pair(self):
        report = duality.dual_pair_check(onb(3), onb(3), counting(3))
        assert report.verdict and report.max_residual <= 1e-12

    def test_reciprocal_diagonal_pair(self):
        phi = scaled_basis(3, lambda n: n)
        psi = scaled_basis(3, lambda n: 1.0 / n)
        assert duality.dual_pair_check(phi, psi, counting(3)).verdict

    def test_scaled_pair_off_by_factor(self):
        report = duality.dual_pair_check(onb(2), VectorFamily(2.0 * np.eye(2)), counting(2))
        assert not report.verdict
        assert abs(report.max_residual - 1.0) < 1e-12
        basis, direction = report.witness
        assert np.linalg.norm(basis) == pytest.approx(1.0)

    def test_conjugate_symmetry_of_residuals(self, rng):
        phi = VectorFamily(complex_randn(rng, 6, 4))
        psi = VectorFamily(complex_randn(rng, 6, 4))
        sp = MeasureSpace(rng.uniform(0.5, 1.5, size=6))
        r1 = duality.dual_pair_check(phi, psi, sp).max_residual
        r2 = duality.dual_pair_check(psi, phi, sp).max_residual
        assert abs(r1 - r2) <= 1e-12 * max(1.0, r1)

    def test_canonical_dual_is_dual_pair(self, rng):
        fam = VectorFamily(complex_randn(rng, 7, 4))
        sp = MeasureSpace(rng.uniform(0.5, 1.5, size=7))
        chi = duality.canonical_dual(fam, sp)
        assert duality.dual_pair_check(fam, chi, sp, tol=1e-9).verdict

    def test_dimension_guards(self):
        with pytest.raises(DimensionMismatch):
            duality.dual_pair_check(onb(3), onb(2), counting(3))


class TestWeakGDualCheck:
    def test_identity_reduces_to_dual_pair(self, rng):
        phi = VectorFamily(complex_randn(rng, 6, 4))
        sp = counting(6)
        chi = duality.canonical_dual(phi, sp)
        plain = duality.dual_pair_check(phi, chi, sp, tol=1e-9)
        viag = duality.weak_G_dual_check(phi, chi, sp, OperatorSpec.identity(), tol=1e-9)
        assert plain.verdict == viag.verdict

    def test_partition_scaled_family(self, rng):
        # one block per ambient direction; block members share the scaled
        # vectors and the block weights cancel in the duality sum
        g = np.eye(2) + 0.5 * random_hermitian(rng, 2)
        blocks = ((0, 1), (2, 3, 4))
        sp = MeasureSpace(np.array([1.0, 1.0, 1.0, 1.0, 1.0]), partition=blocks)
        phi_rows, psi_rows = [], []
        for k, block in enumerate(blocks):
            wk = sum(sp.weights[i] for i in block)
            for _ in block:
                phi_rows.append(g[:, k] / np.sqrt(wk))
                psi_rows.append(np.eye(2)[k] / np.sqrt(wk))
        phi = VectorFamily(np.array(phi_rows))
        psi = VectorFamily(np.array(psi_rows))
        report = duality.weak_G_dual_check(phi, psi, sp, OperatorSpec.dense(g), tol=1e-9)
        assert report.verdict

    def test_operator_image_of_frame_with_any_dual(self, rng):
        zeta = VectorFamily(complex_randn(rng, 8, 4))
        sp = MeasureSpace(rng.uniform(0.5, 2.0, size=8))
        psi = duality.canonical_dual(zeta, sp)
        g = np.eye(4) + 0.3 * complex_randn(rng, 4, 4)
        phi = VectorFamily(zeta.vectors @ g.T)  # phi_n = G zeta_n
        report = duality.weak_G_dual_check(phi, psi, sp, OperatorSpec.dense(g), tol=1e-9)
        assert report.verdict

    def test_zero_family_flagged(self):
        phi = VectorFamily(np.zeros((3, 3)))
        report = duality.weak_G_dual_check(phi, onb(3), counting(3), OperatorSpec.zero())
        assert report.detail["zero_family"]
        assert report.verdict  # zero operator is matched exactly, but flagged

    def test_broken_duality_fails_with_residual(self, rng):
        phi = VectorFamily(complex_randn(rng, 6, 4))
        sp = counting(6)
        chi = duality.canonical_dual(phi, sp)
        noisy = VectorFamily(chi.vectors + 0.1 * complex_randn(rng, 6, 4))
        report = duality.weak_G_dual_check(phi, noisy, sp, OperatorSpec.identity())
        assert not report.verdict
        assert report.max_residual > 1e-3


class TestLowerFromFrame:
    def test_roundtrip_through_canonical_dual(self, rng):
        fam = VectorFamily(complex_randn(rng, 7, 4))
        sp = MeasureSpace(rng.uniform(0.5, 1.5, size=7))
        chi = duality.canonical_dual(fam, sp)
        eta = duality.lower_from_frame(chi, fam, sp)
        np.testing.assert_allclose(eta.vectors, fam.vectors, atol=1e-9)

    def test_onb_fixed_point(self):
        eta = duality.lower_from_frame(onb(3), onb(3), counting(3))
        np.testing.assert_allclose(eta.vectors, np.eye(3), atol=1e-12)

    def test_diagonal_example(self):
        phi = scaled_basis(3, lambda n: n)
        chi = scaled_basis(3, lambda n: 1.0 / n)
        eta = duality.lower_from_frame(chi, phi, counting(3))
        np.testing.assert_allclose(eta.vectors, phi.vectors, atol=1e-12)

    def test_double_dual_recovers_dual(self, rng):
        # canonical-dual construction applied to eta recovers chi
        fam = VectorFamily(complex_randn(rng, 6, 4))
        sp = counting(6)
        chi = duality.canonical_dual(fam, sp)
        eta = duality.lower_from_frame(chi, fam, sp)
        chi_back = duality.canonical_dual(eta, sp)
        np.testing.assert_allclose(chi_back.vectors, chi.vectors, atol=1e-8)

    def test_singular_reference_rejected(self):
        with pytest.raises(SingularFrameOperator):
            duality.lower_from_frame(onb(3), VectorFamily(np.eye(3)[:2], ""), counting(2))

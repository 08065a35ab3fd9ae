import numpy as np
import pytest
from helpers import complex_randn, random_hermitian, random_unitary
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import frame_operator_by_sum, omega_by_sum

from semiframes import spaces
from semiframes.errors import DimensionMismatch, NotHermitian, NotPSD, NotPSDKernel
from semiframes.numkernel import hermitian_eig
from semiframes.spaces import (
    MeasureSpace,
    OperatorSpec,
    TruncationSchedule,
    VectorFamily,
)


def onb(d):
    return VectorFamily(np.eye(d), label="onb")


def scaled_basis(d, scale_fn):
    rows = np.zeros((d, d), dtype=complex)
    for n in range(1, d + 1):
        rows[n - 1, n - 1] = scale_fn(n)
    return VectorFamily(rows)


class TestMeasureSpace:
    def test_counting(self):
        sp = MeasureSpace.counting(4)
        assert sp.size == 4
        np.testing.assert_array_equal(sp.weights, np.ones(4))

    def test_rejects_nonpositive_weights(self):
        with pytest.raises(ValueError):
            MeasureSpace(np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            MeasureSpace(np.array([1.0, -2.0]))

    def test_partition_block_weights(self):
        sp = MeasureSpace(np.array([1.0, 2.0, 3.0, 4.0, 5.0]), partition=((0, 1), (2, 3, 4)))
        assert sp.block_weights == (3.0, 12.0)

    def test_partition_must_cover_disjointly(self):
        with pytest.raises(ValueError):
            MeasureSpace(np.ones(4), partition=((0, 1), (1, 2, 3)))
        with pytest.raises(ValueError):
            MeasureSpace(np.ones(4), partition=((0, 1),))


class TestVectorFamily:
    def test_from_generator_is_one_based(self):
        fam = VectorFamily.from_generator(lambda n: n * np.eye(3)[n - 1], 3, 3)
        np.testing.assert_allclose(fam.vectors, np.diag([1.0, 2.0, 3.0]))

    def test_generator_length_checked(self):
        with pytest.raises(DimensionMismatch):
            VectorFamily.from_generator(lambda n: np.ones(2), 3, 3)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            VectorFamily(np.array([[np.inf, 0.0]]))

    def test_vectors_are_readonly(self):
        fam = onb(2)
        with pytest.raises(ValueError):
            fam.vectors[0, 0] = 5.0


class TestTruncationSchedule:
    def test_valid(self):
        assert list(TruncationSchedule((2, 4, 8))) == [2, 4, 8]

    @pytest.mark.parametrize("dims", [(4,), (4, 4), (8, 4), (0, 2)])
    def test_invalid(self, dims):
        with pytest.raises(ValueError):
            TruncationSchedule(dims)


class TestOperatorSpec:
    def test_dense_adjoint(self, rng):
        m = complex_randn(rng, 3, 3)
        op = OperatorSpec.dense(m)
        np.testing.assert_allclose(op.adjoint().matrix_at(3), m.conj().T)

    def test_dense_dimension_guard(self, rng):
        op = OperatorSpec.dense(complex_randn(rng, 3, 3))
        with pytest.raises(DimensionMismatch):
            op.matrix_at(4)

    def test_diagonal_truncation_consistent(self):
        op = OperatorSpec.diagonal(lambda n: 1.0 / n)
        small = op.matrix_at(3)
        large = op.matrix_at(6)
        np.testing.assert_allclose(large[:3, :3], small)

    def test_diagonal_adjoint_conjugates(self):
        op = OperatorSpec.diagonal(lambda n: 1j * n)
        np.testing.assert_allclose(op.adjoint().matrix_at(2), np.diag([-1j, -2j]))

    def test_identity_zero_scaled(self):
        np.testing.assert_allclose(OperatorSpec.identity().matrix_at(2), np.eye(2))
        np.testing.assert_allclose(OperatorSpec.zero().matrix_at(2), np.zeros((2, 2)))
        np.testing.assert_allclose(
            OperatorSpec.scaled_identity(2j).matrix_at(2), 2j * np.eye(2)
        )
        np.testing.assert_allclose(
            OperatorSpec.scaled_identity(2j).adjoint().matrix_at(2), -2j * np.eye(2)
        )


class TestAnalysisOperator:
    def test_onb_counting_is_identity(self):
        c = spaces.analysis_operator(onb(3), MeasureSpace.counting(3))
        np.testing.assert_allclose(c.matrix, np.eye(3), atol=1e-15)

    def test_diagonal_family(self):
        fam = scaled_basis(3, lambda n: n)
        c = spaces.analysis_operator(fam, MeasureSpace.counting(3))
        np.testing.assert_allclose(c.matrix, np.diag([1.0, 2.0, 3.0]), atol=1e-15)

    def test_weight_scaling(self):
        c = spaces.analysis_operator(onb(2), MeasureSpace(np.array([4.0, 1.0])))
        np.testing.assert_allclose(c.matrix, np.diag([2.0, 1.0]), atol=1e-15)

    def test_count_mismatch(self):
        with pytest.raises(DimensionMismatch):
            spaces.analysis_operator(onb(3), MeasureSpace.counting(4))

    def test_row_contract(self, rng):
        fam = VectorFamily(complex_randn(rng, 5, 3))
        sp = MeasureSpace(rng.uniform(0.5, 2.0, size=5))
        c = spaces.analysis_operator(fam, sp)
        f = complex_randn(rng, 3)
        cf = c.matrix @ f
        for n in range(5):
            expected = np.sqrt(sp.weights[n]) * np.vdot(fam.vectors[n], f)
            assert abs(cf[n] - expected) <= 1e-12

    def test_row_contract_with_gram(self, rng):
        gram = np.eye(3) + 0.2 * random_hermitian(rng, 3)
        fam = VectorFamily(complex_randn(rng, 4, 3))
        sp = MeasureSpace(rng.uniform(0.5, 2.0, size=4))
        c = spaces.analysis_operator(fam, sp, gram=gram)
        f = complex_randn(rng, 3)
        cf = c.matrix @ f
        for n in range(4):
            expected = np.sqrt(sp.weights[n]) * spaces.gram_inner(f, fam.vectors[n], gram)
            assert abs(cf[n] - expected) <= 1e-12


class TestFrameOperator:
    def test_onb(self):
        t = spaces.frame_operator(onb(3), MeasureSpace.counting(3))
        np.testing.assert_allclose(t, np.eye(3), atol=1e-15)

    def test_diagonal(self):
        t = spaces.frame_operator(scaled_basis(3, lambda n: n), MeasureSpace.counting(3))
        np.testing.assert_allclose(t, np.diag([1.0, 4.0, 9.0]), atol=1e-14)

    def test_against_summation_oracle(self, rng):
        fam = VectorFamily(complex_randn(rng, 7, 4))
        sp = MeasureSpace(rng.uniform(0.1, 3.0, size=7))
        t = spaces.frame_operator(fam, sp)
        expected = frame_operator_by_sum(fam.vectors, sp.weights)
        assert np.linalg.norm(t - expected) <= 1e-10 * max(1.0, np.linalg.norm(expected))

    def test_psd_within_tolerance(self, rng):
        fam = VectorFamily(complex_randn(rng, 4, 6))  # rank-deficient on purpose
        t = spaces.frame_operator(fam, MeasureSpace.counting(4))
        lam = hermitian_eig(t).eigenvalues
        assert lam[0] >= -1e-10

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_unitary_covariance(self, seed):
        gen = np.random.default_rng(seed)
        fam = VectorFamily(complex_randn(gen, 6, 4))
        sp = MeasureSpace(gen.uniform(0.5, 2.0, size=6))
        u = random_unitary(gen, 4)
        t = spaces.frame_operator(fam, sp)
        t_rot = spaces.frame_operator(VectorFamily(fam.vectors @ u.T), sp)
        np.testing.assert_allclose(
            hermitian_eig(t).eigenvalues, hermitian_eig(t_rot).eigenvalues, atol=1e-9
        )
        np.testing.assert_allclose(t_rot, u @ t @ u.conj().T, atol=1e-10)

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), c=st.floats(0.1, 10.0))
    def test_scaling_covariance(self, seed, c):
        gen = np.random.default_rng(seed)
        fam = VectorFamily(complex_randn(gen, 5, 3))
        sp = MeasureSpace.counting(5)
        t = spaces.frame_operator(fam, sp)
        t_scaled = spaces.frame_operator(fam.scaled(c), sp)
        np.testing.assert_allclose(t_scaled, c * c * t, rtol=1e-10, atol=1e-12)


class TestOmegaForm:
    def test_onb_basis_vector(self):
        sp = MeasureSpace.counting(3)
        val = spaces.omega_form(onb(3), sp, np.eye(3)[0], np.eye(3)[0])
        assert abs(val - 1.0) <= 1e-15

    def test_diagonal_average(self):
        fam = scaled_basis(3, lambda n: n)
        f = np.ones(3) / np.sqrt(3.0)
        val = spaces.omega_form(fam, MeasureSpace.counting(3), f, f)
        assert abs(val - 14.0 / 3.0) <= 1e-12

    def test_nonnegative_on_diagonal(self, rng):
        fam = VectorFamily(complex_randn(rng, 6, 4))
        sp = MeasureSpace(rng.uniform(0.2, 2.0, size=6))
        for _ in range(10):
            f = complex_randn(rng, 4)
            assert spaces.omega_form(fam, sp, f, f).real >= -1e-12

    def test_matches_brute_force_oracle(self, rng):
        fam = VectorFamily(complex_randn(rng, 5, 3))
        sp = MeasureSpace(rng.uniform(0.2, 2.0, size=5))
        f, g = complex_randn(rng, 3), complex_randn(rng, 3)
        got = spaces.omega_form(fam, sp, f, g)
        expected = omega_by_sum(fam.vectors, sp.weights, f, g)
        assert abs(got - expected) <= 1e-12 * (1 + abs(expected))

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_agrees_with_analysis_pairing(self, seed):
        gen = np.random.default_rng(seed)
        fam = VectorFamily(complex_randn(gen, 6, 3))
        sp = MeasureSpace(gen.uniform(0.3, 2.0, size=6))
        f, g = complex_randn(gen, 3), complex_randn(gen, 3)
        c = spaces.analysis_operator(fam, sp).matrix
        pairing = complex(np.vdot(c @ g, c @ f))
        omega = spaces.omega_form(fam, sp, f, g)
        assert abs(omega - pairing) <= 1e-12 * (
            1 + np.linalg.norm(f) * np.linalg.norm(g)
        )


class TestScaleNorm:
    def test_alpha_zero_is_plain_norm(self, rng):
        b = complex_randn(rng, 4, 4)
        g = OperatorSpec.dense(b @ b.conj().T)
        f = complex_randn(rng, 4)
        assert abs(spaces.scale_norm(g, 0.0, f) - np.linalg.norm(f)) <= 1e-10

    def test_diagonal_example(self):
        g = OperatorSpec.dense(np.diag([1.0, 3.0]))
        val = spaces.scale_norm(g, 2.0, np.array([1.0, 1.0]))
        assert abs(val - np.sqrt(20.0)) <= 1e-12

    def test_monotone_in_alpha_for_psd(self, rng):
        for _ in range(5):
            b = complex_randn(rng, 4, 4)
            g = OperatorSpec.dense(b @ b.conj().T)
            f = complex_randn(rng, 4)
            f = f / np.linalg.norm(f)
            vals = [spaces.scale_norm(g, a, f) for a in (0.0, 0.5, 1.0, 2.0)]
            assert all(v2 >= v1 - 1e-12 for v1, v2 in zip(vals, vals[1:]))

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            spaces.scale_norm(OperatorSpec.dense(np.diag([-2.0, 0.0])), 1.0, np.ones(2))

    def test_not_hermitian(self, rng):
        with pytest.raises(NotHermitian):
            spaces.scale_norm(
                OperatorSpec.dense(np.array([[0.0, 1.0], [0.0, 0.0]])), 1.0, np.ones(2)
            )


class TestGramGeometry:
    def test_gram_inner_reproduces_entries(self, rng):
        gram = np.eye(4) + 0.3 * random_hermitian(rng, 4)
        for x in range(4):
            for y in range(4):
                val = spaces.gram_inner(np.eye(4)[x], np.eye(4)[y], gram)
                assert abs(val - gram[x, y]) <= 1e-12

    def test_whitener_roundtrip(self, rng):
        gram = np.eye(3) + 0.4 * random_hermitian(rng, 3)
        w, winv = spaces.gram_whitener(gram, 3)
        np.testing.assert_allclose(w @ winv, np.eye(3), atol=1e-10)
        f, g = complex_randn(rng, 3), complex_randn(rng, 3)
        assert abs(
            spaces.gram_inner(f, g, gram) - complex(np.vdot(w @ g, w @ f))
        ) <= 1e-10

    def test_non_pd_gram_rejected(self):
        with pytest.raises(NotPSDKernel):
            spaces.gram_whitener(np.diag([1.0, 0.0]), 2)
        with pytest.raises(NotPSDKernel):
            spaces.gram_metric(np.array([[1.0, 1.0], [0.0, 1.0]]), 2)

    def test_frame_operator_gram_self_adjointness(self, rng):
        gram = np.eye(3) + 0.25 * random_hermitian(rng, 3)
        fam = VectorFamily(complex_randn(rng, 5, 3))
        sp = MeasureSpace.counting(5)
        t = spaces.frame_operator(fam, sp, gram=gram)
        m = spaces.gram_metric(gram, 3)
        mt = m @ t
        assert np.linalg.norm(mt - mt.conj().T) <= 1e-9 * max(1.0, np.linalg.norm(mt))
        # pairing identity: omega(f, g) == <T f, g>_gram
        f, g = complex_randn(rng, 3), complex_randn(rng, 3)
        omega = spaces.omega_form(fam, sp, f, g, gram=gram)
        paired = spaces.gram_inner(t @ f, g, gram)
        assert abs(omega - paired) <= 1e-9 * (1 + abs(omega))

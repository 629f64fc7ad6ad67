import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctcsim import qlin

from conftest import bell_projector

X = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2)
P0 = np.diag([1, 0]).astype(complex)
P1 = np.diag([0, 1]).astype(complex)

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def oracle_partial_transpose_first(rho):
    """Partial transpose on qubit 0 of a two-qubit matrix, by explicit index swap."""
    out = np.zeros_like(rho)
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    out[2 * a + b, 2 * c + d] = rho[2 * c + b, 2 * a + d]
    return out


class TestKron:
    def test_identity(self):
        np.testing.assert_array_equal(qlin.kron(I2, I2), np.eye(4))

    def test_basis_projectors(self):
        expected = np.zeros((4, 4))
        expected[1, 1] = 1
        np.testing.assert_array_equal(qlin.kron(P0, P1), expected)

    def test_xx_flips_both(self):
        # |00> -> |11>, worked by hand
        out = qlin.kron(X, X) @ qlin.ket("00")
        np.testing.assert_array_equal(out, qlin.ket("11"))

    def test_matches_numpy(self, rng):
        a = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        b = rng.normal(size=(4, 1))
        np.testing.assert_allclose(qlin.kron(a, b), np.kron(a, b), atol=1e-15)

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_associative(self, seed):
        r = np.random.default_rng(seed)
        a, b, c = (r.normal(size=(2, 2)) + 1j * r.normal(size=(2, 2)) for _ in range(3))
        lhs = qlin.kron(qlin.kron(a, b), c)
        rhs = qlin.kron(a, qlin.kron(b, c))
        assert np.max(np.abs(lhs - rhs)) <= 1e-12


class TestPartialTrace:
    def test_product_state(self):
        rho = qlin.projector(qlin.ket("01"))
        np.testing.assert_allclose(qlin.partial_trace(rho, [2, 2], {0}), P0)

    def test_bell_reduces_to_half_identity(self):
        np.testing.assert_allclose(qlin.partial_trace(bell_projector(), [2, 2], {0}), I2 / 2, atol=1e-15)

    def test_keeps_order_of_kept_factors(self):
        rho = qlin.projector(qlin.ket("011"))
        np.testing.assert_allclose(qlin.partial_trace(rho, [2, 2, 2], [2, 0]), qlin.projector(qlin.ket("01")))

    @given(seeds, st.integers(1, 3), st.integers(1, 3))
    @settings(max_examples=30, deadline=None)
    def test_recovers_kron_factor(self, seed, d1, d2):
        r = np.random.default_rng(seed)
        rho, sigma = qlin.random_density_matrix(d1, r), qlin.random_density_matrix(d2, r)
        joint = qlin.kron(rho, sigma)
        np.testing.assert_allclose(qlin.partial_trace(joint, [d1, d2], {1}), sigma, atol=1e-12)
        np.testing.assert_allclose(qlin.partial_trace(joint, [d1, d2], {0}), rho, atol=1e-12)

    @given(seeds, st.integers(1, 4), st.data())
    @settings(max_examples=30, deadline=None)
    def test_reduced_states_are_valid(self, seed, n, data):
        r = np.random.default_rng(seed)
        rho = qlin.random_density_matrix(2 ** n, r)
        keep = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
        red = qlin.partial_trace(rho, [2] * n, keep)
        assert abs(np.trace(red) - 1) <= 1e-10
        assert qlin.min_eigenvalue(red) >= -1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(qlin.LinalgError):
            qlin.partial_trace(np.eye(4), [2, 3], {0})

    def test_empty_keep(self):
        with pytest.raises(qlin.LinalgError):
            qlin.partial_trace(np.eye(4), [2, 2], set())


class TestEigHermitian:
    def test_identity(self):
        w, _ = qlin.eig_hermitian(I2)
        np.testing.assert_allclose(w, [1, 1])

    def test_pauli_x(self):
        w, _ = qlin.eig_hermitian(X)
        np.testing.assert_allclose(w, [1, -1], atol=1e-15)

    def test_diagonal_readoff(self):
        w, _ = qlin.eig_hermitian(I2 / 2 + 0.3 * np.diag([1, -1]))
        np.testing.assert_allclose(w, [0.8, 0.2], atol=1e-15)

    def test_rejects_non_hermitian(self):
        with pytest.raises(qlin.LinalgError):
            qlin.eig_hermitian(np.array([[0, 1], [0, 0]]))

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16, 33, 64])
    def test_reconstruction_and_unitarity(self, n, rng):
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = g + g.conj().T
        w, v = qlin.eig_hermitian(m)
        assert np.all(np.diff(w) <= 0)
        assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - m)) <= 1e-9 * np.max(np.abs(m))
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-9
        # LAPACK as an independent oracle for the spectrum
        np.testing.assert_allclose(w, np.linalg.eigvalsh(m)[::-1], atol=1e-9 * np.max(np.abs(m)))

    def test_degenerate_spectrum(self, rng):
        q = qlin.haar_unitary(6, rng)
        m = q @ np.diag([2, 2, 2, -1, -1, 0]) @ q.conj().T
        w, v = qlin.eig_hermitian(m)
        np.testing.assert_allclose(w, [2, 2, 2, 0, -1, -1], atol=1e-12)
        assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - m)) <= 1e-12


class TestNegativity:
    def test_product_state(self):
        assert qlin.negativity(qlin.projector(qlin.ket("01")), [2, 2], {0}) == pytest.approx(0, abs=1e-12)

    def test_bell_state(self):
        # oracle: LAPACK spectrum of an index-swapped partial transpose
        pt = oracle_partial_transpose_first(bell_projector())
        w = np.linalg.eigvalsh(pt)
        expected = -w[w < 0].sum()
        assert expected == pytest.approx(0.5, abs=1e-12)
        assert qlin.negativity(bell_projector(), [2, 2], {0}) == pytest.approx(expected, abs=1e-12)
        assert qlin.negativity(bell_projector(), [2, 2], {1}) == pytest.approx(expected, abs=1e-12)

    def test_classical_mixture(self):
        rho = 0.5 * (qlin.projector(qlin.ket("00")) + qlin.projector(qlin.ket("11")))
        assert qlin.negativity(rho, [2, 2], {0}) == pytest.approx(0, abs=1e-12)

    def test_partial_transpose_matches_oracle(self, rng):
        rho = qlin.random_density_matrix(4, rng)
        np.testing.assert_allclose(qlin.partial_transpose(rho, [2, 2], [0]), oracle_partial_transpose_first(rho))

    @given(seeds, st.integers(1, 4))
    @settings(max_examples=30, deadline=None)
    def test_separable_mixtures_have_zero_negativity(self, seed, terms):
        r = np.random.default_rng(seed)
        p = r.dirichlet(np.ones(terms))
        rho = sum(
            pk * qlin.kron(qlin.random_density_matrix(2, r), qlin.random_density_matrix(2, r))
            for pk in p
        )
        assert qlin.negativity(rho, [2, 2], {0}) <= 1e-12

    def test_invalid_bipartition(self):
        with pytest.raises(qlin.LinalgError):
            qlin.negativity(np.eye(4) / 4, [2, 2], {0, 1})
        with pytest.raises(qlin.LinalgError):
            qlin.negativity(np.eye(4) / 4, [2, 2], set())


class TestEntropyAndHelpers:
    def test_pure_state(self):
        assert qlin.von_neumann_entropy(P0) == 0.0

    def test_maximally_mixed_qubit(self):
        assert qlin.von_neumann_entropy(I2 / 2) == pytest.approx(1.0, abs=1e-14)

    def test_two_level_mixture(self):
        expected = -(0.8 * np.log2(0.8) + 0.2 * np.log2(0.2))
        assert expected == pytest.approx(0.72193, abs=1e-5)
        assert qlin.von_neumann_entropy(np.diag([0.8, 0.2])) == pytest.approx(expected, abs=1e-14)

    def test_purity_and_trace_distance(self):
        assert qlin.purity(I2 / 2) == pytest.approx(0.5)
        assert qlin.trace_distance(P0, P1) == pytest.approx(1.0)
        assert qlin.trace_distance(P0, I2 / 2) == pytest.approx(0.5)

    def test_fidelity_pure(self):
        plus = np.array([1, 1]) / np.sqrt(2)
        assert qlin.fidelity_pure(plus, [1, 0]) == pytest.approx(0.5)

    def test_density_matrix_violations_named(self):
        assert qlin.density_matrix_violations(I2 / 2) == []
        problems = qlin.density_matrix_violations(np.diag([1.5, -0.5]))
        assert len(problems) == 1 and "positive semidefinite" in problems[0]
        assert any("trace" in p for p in qlin.density_matrix_violations(I2))
        assert any("Hermitian" in p for p in qlin.density_matrix_violations([[0.5, 1], [0, 0.5]]))
        assert not qlin.is_density_matrix(np.ones((2, 3)))

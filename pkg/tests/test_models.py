import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lindblad_echo.models import (
    DegenerateGroundWarning,
    LindbladModel,
    SykEnsemble,
    coupling_variance,
    dissipative_syk,
    ground_state,
    majorana_ops,
    majorana_string_basis,
    model_from_json,
    model_to_json,
    syk_hamiltonian,
)
from lindblad_echo.operators import PAULI_X, PAULI_Y, is_hermitian

from conftest import rng_for


class TestMajoranaOps:
    def test_single_qubit_pair(self):
        chi = majorana_ops(2)
        np.testing.assert_allclose(chi[0], PAULI_X / np.sqrt(2))
        np.testing.assert_allclose(chi[1], PAULI_Y / np.sqrt(2))

    def test_normalization_and_anticommutator_n6(self):
        chi = majorana_ops(6)
        dim = chi[0].shape[0]
        assert dim == 8
        np.testing.assert_allclose(chi[0] @ chi[0], np.eye(dim) / 2, atol=1e-14)
        anti = chi[0] @ chi[1] + chi[1] @ chi[0]
        np.testing.assert_allclose(anti, np.zeros((dim, dim)), atol=1e-14)

    def test_exhaustive_algebra_n8(self):
        chi = majorana_ops(8)
        dim = chi[0].shape[0]
        for i in range(8):
            for j in range(i, 8):
                anti = chi[i] @ chi[j] + chi[j] @ chi[i]
                target = np.eye(dim) if i == j else np.zeros((dim, dim))
                assert np.max(np.abs(anti - target)) < 1e-12

    def test_all_hermitian(self):
        assert all(is_hermitian(c) for c in majorana_ops(6))

    def test_odd_count_rejected(self):
        with pytest.raises(ValueError, match="even"):
            majorana_ops(5)


class TestSykEnsemble:
    def test_n4_single_term(self):
        ens = SykEnsemble(4, 1.0, seed=0)
        assert list(ens.couplings) == [(0, 1, 2, 3)]
        h = syk_hamiltonian(ens)
        chi = majorana_ops(4)
        coeff = ens.couplings[(0, 1, 2, 3)]
        np.testing.assert_allclose(h, coeff * chi[0] @ chi[1] @ chi[2] @ chi[3], atol=1e-14)
        assert is_hermitian(h)

    def test_coupling_statistics(self):
        # pool ~1e4 draws through the real construction path
        draws = []
        for seed in range(700):
            draws.extend(SykEnsemble(6, 1.0, seed).couplings.values())
        draws = np.asarray(draws)
        assert draws.size >= 10_000
        target = coupling_variance(6, 1.0, "paper")
        assert target == pytest.approx(36.0 / 6**3)
        assert abs(draws.mean()) < 3 * np.sqrt(target / draws.size) + 1e-3
        assert draws.var() == pytest.approx(target, rel=0.05)

    def test_standard_convention(self):
        assert coupling_variance(8, 2.0, "standard") == pytest.approx(6 * 4.0 / 8**3)
        with pytest.raises(ValueError, match="convention"):
            coupling_variance(6, 1.0, "other")

    def test_seed_reproducibility(self):
        a = SykEnsemble(6, 1.0, seed=42).couplings
        b = SykEnsemble(6, 1.0, seed=42).couplings
        assert a == b

    def test_hamiltonian_hermitian_traceless(self):
        h = syk_hamiltonian(SykEnsemble(6, 1.0, seed=2))
        assert is_hermitian(h, tol=1e-10)
        assert abs(np.trace(h)) < 1e-10

    @given(st.integers(0, 10**6))
    @settings(max_examples=10, deadline=None)
    def test_hermitian_traceless_any_seed(self, seed):
        h = syk_hamiltonian(SykEnsemble(6, 1.0, seed=seed))
        assert is_hermitian(h, tol=1e-10)
        assert abs(np.trace(h)) < 1e-10


class TestDissipativeSyk:
    def test_all_sites_jump_count(self):
        model = dissipative_syk(SykEnsemble(6, 1.0, 0), 0.5, sites="all")
        assert len(model.jumps) == 6
        assert model.gamma == 0.5
        assert model.all_jumps_hermitian()

    def test_half_sites_jump_count(self):
        ens = SykEnsemble(6, 1.0, 0)
        model = dissipative_syk(ens, 0.5, sites="half")
        chi = majorana_ops(6)
        assert len(model.jumps) == 3
        for got, want in zip(model.jumps, chi[:3]):
            np.testing.assert_array_equal(got, want)

    def test_invalid_sites(self):
        with pytest.raises(ValueError, match="sites"):
            dissipative_syk(SykEnsemble(6, 1.0, 0), 0.5, sites="third")

    def test_gamma_zero_allowed(self):
        model = dissipative_syk(SykEnsemble(6, 1.0, 0), 0.0, sites="all")
        assert model.gamma == 0.0


class TestGroundState:
    def test_diagonal_hamiltonian(self):
        rho = ground_state(np.diag([-1.0, 1.0]))
        np.testing.assert_allclose(rho, np.diag([1.0, 0.0]), atol=1e-14)

    def test_degenerate_flags_and_returns_first(self):
        with pytest.warns(DegenerateGroundWarning):
            rho = ground_state(np.zeros((2, 2)))
        np.testing.assert_allclose(rho, np.diag([1.0, 0.0]), atol=1e-14)

    def test_syk_ground_is_pure_and_minimal(self):
        h = syk_hamiltonian(SykEnsemble(6, 1.0, seed=1))
        with pytest.warns(DegenerateGroundWarning):  # N mod 8 = 6: doubly degenerate
            rho = ground_state(h)
        assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-10)
        lam_min = np.linalg.eigvalsh(h)[0]
        assert np.trace(rho @ h).real == pytest.approx(lam_min, abs=1e-10)

    def test_phase_fixing_deterministic(self):
        h = syk_hamiltonian(SykEnsemble(6, 1.0, seed=1))
        with pytest.warns(DegenerateGroundWarning):
            a = ground_state(h)
        with pytest.warns(DegenerateGroundWarning):
            b = ground_state(h)
        np.testing.assert_array_equal(a, b)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            ground_state(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestStringBasis:
    def test_even_basis_orthonormal(self):
        basis = majorana_string_basis(6, "even")
        assert basis.shape == (64, 32)
        gram = basis.conj().T @ basis
        np.testing.assert_allclose(gram, np.eye(32), atol=1e-12)

    def test_even_plus_odd_complete(self):
        even = majorana_string_basis(6, "even")
        odd = majorana_string_basis(6, "odd")
        full = np.hstack([even, odd])
        np.testing.assert_allclose(full.conj().T @ full, np.eye(64), atol=1e-12)


class TestModelSerialization:
    def test_round_trip(self):
        text = model_to_json(6, 1.0, seed=7, gamma=0.3, sites="half")
        payload = json.loads(text)
        assert payload["N"] == 6 and payload["sites"] == "half"
        model = model_from_json(text)
        want = dissipative_syk(SykEnsemble(6, 1.0, 7), 0.3, sites="half")
        np.testing.assert_array_equal(model.hamiltonian, want.hamiltonian)
        assert len(model.jumps) == 3

    def test_unknown_model_rejected(self):
        with pytest.raises(ValueError, match="unsupported"):
            model_from_json(json.dumps({"model": "other"}))


class TestLindbladModel:
    def test_negative_gamma_rejected(self):
        with pytest.raises(ValueError, match="gamma"):
            LindbladModel(np.eye(2), [], -0.1)

    def test_jump_dim_mismatch_rejected(self):
        with pytest.raises(ValueError, match="dimension"):
            LindbladModel(np.eye(2), [np.eye(4)], 0.1)

    def test_non_hermitian_hamiltonian_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            LindbladModel(np.array([[0.0, 1.0], [0.0, 0.0]]), [], 0.1)

    def test_with_gamma(self):
        m = LindbladModel(np.eye(2), [np.eye(2)], 0.1)
        assert m.with_gamma(0.7).gamma == 0.7
        assert m.with_gamma(0.7).dim == 2

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lindblad_echo.doubled import (
    StepSizeError,
    build_doubled,
    check_evolution_invariants,
    doubled_invariant_report,
    propagate,
    rk4_oracle,
    trace_functional,
)
from lindblad_echo.models import LindbladModel, SykEnsemble, dissipative_syk
from lindblad_echo.operators import PAULI_Z, is_psd, kron, mat_func_propagator, unvec, vec

from conftest import random_complex, random_density, random_hermitian, rng_for

PLUS = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)


def dephasing_model(gamma):
    return LindbladModel(np.zeros((2, 2)), [PAULI_Z], gamma)


class TestBuildDoubled:
    def test_dephasing_closed_form(self):
        gamma = 0.3
        doubled = build_doubled(dephasing_model(gamma))
        want = 2 * gamma * (np.eye(4) - kron(PAULI_Z, PAULI_Z))
        np.testing.assert_allclose(doubled.hd, want, atol=1e-14)
        np.testing.assert_allclose(np.linalg.eigvalsh(doubled.hd),
                                   [0, 0, 4 * gamma, 4 * gamma], atol=1e-12)
        np.testing.assert_allclose(doubled.hs, np.zeros((4, 4)), atol=1e-14)

    def test_gamma_zero(self, rng):
        h = random_hermitian(rng, 4)
        doubled = build_doubled(LindbladModel(h, [random_hermitian(rng, 4)], 0.0))
        np.testing.assert_allclose(doubled.hd, np.zeros((16, 16)), atol=1e-14)
        np.testing.assert_allclose(doubled.hD, doubled.hs, atol=1e-14)

    def test_hs_structure(self, rng):
        h = random_hermitian(rng, 3)
        doubled = build_doubled(LindbladModel(h, [], 0.0))
        np.testing.assert_allclose(doubled.hs, kron(h, np.eye(3)) - kron(np.eye(3), h.T),
                                   atol=1e-14)

    def test_all_site_syk_hd_psd_with_identity_kernel(self):
        model = dissipative_syk(SykEnsemble(6, 1.0, 5), 0.4, sites="all")
        doubled = build_doubled(model)
        assert is_psd(doubled.hd, tol=1e-8)
        ident = np.eye(8, dtype=complex).reshape(-1)
        assert np.max(np.abs(doubled.hD @ ident)) < 1e-10

    def test_left_vacuum_for_non_hermitian_jumps(self, rng):
        # trace preservation holds for arbitrary jump sets
        jumps = [random_complex(rng, 3), random_complex(rng, 3)]
        doubled = build_doubled(LindbladModel(random_hermitian(rng, 3), jumps, 0.7))
        ident = np.eye(3, dtype=complex).reshape(-1)
        assert np.max(np.abs(doubled.hD.conj().T @ ident)) < 1e-10

    def test_invariant_report_keys(self, rng):
        model = LindbladModel(random_hermitian(rng, 2), [PAULI_Z], 0.2)
        report = doubled_invariant_report(model, build_doubled(model))
        assert report["hs_hermitian"] and report["hd_hermitian"]
        assert report["left_vacuum_residual"] < 1e-10
        assert report["identity_steady_residual"] < 1e-10
        assert report["hd_min_eigenvalue"] > -1e-8


class TestPropagate:
    def test_time_zero_identity(self, rng):
        doubled = build_doubled(LindbladModel(random_hermitian(rng, 2), [PAULI_Z], 0.3))
        psi0 = vec(random_density(rng, 2))
        out = propagate(doubled, psi0, [0.0])[0]
        np.testing.assert_allclose(out, psi0, atol=1e-12)

    def test_unitary_single_qubit_phase(self):
        # H = Z, rho0 = |+><+|: off-diagonal acquires exp(-2it)
        doubled = build_doubled(LindbladModel(PAULI_Z, [], 0.0))
        times = [0.3, 1.1]
        for t, psi in zip(times, propagate(doubled, vec(PLUS), times)):
            rho = unvec(psi)
            assert rho[0, 1] == pytest.approx(0.5 * np.exp(-2j * t), abs=1e-12)
            u = mat_func_propagator(PAULI_Z, t)
            np.testing.assert_allclose(rho, u @ PLUS @ u.conj().T, atol=1e-12)

    def test_dephasing_off_diagonal_decay(self):
        gamma = 0.25
        doubled = build_doubled(dephasing_model(gamma))
        times = [0.5, 2.0, 5.0]
        for t, psi in zip(times, propagate(doubled, vec(PLUS), times)):
            rho = unvec(psi)
            assert rho[0, 1] == pytest.approx(0.5 * np.exp(-4 * gamma * t), abs=1e-12)

    def test_trace_positivity_along_trajectory(self, rng):
        model = dissipative_syk(SykEnsemble(6, 1.0, 3), 0.2, sites="half")
        doubled = build_doubled(model)
        psi0 = vec(random_density(rng, 8))
        times = np.linspace(0.0, 8.0, 25)
        states = propagate(doubled, psi0, times)
        check_evolution_invariants(doubled, states, trace_functional(doubled, psi0))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=10, deadline=None)
    def test_trace_preserved_arbitrary_jumps(self, seed):
        rng = rng_for(seed)
        jumps = [random_complex(rng, 2)]
        model = LindbladModel(random_hermitian(rng, 2), jumps, float(rng.uniform(0, 1)))
        doubled = build_doubled(model)
        psi0 = vec(random_density(rng, 2))
        tr0 = trace_functional(doubled, psi0)
        for psi in propagate(doubled, psi0, [0.7, 3.0]):
            assert abs(trace_functional(doubled, psi) - tr0) < 1e-8

    def test_negative_time_rejected(self, rng):
        doubled = build_doubled(dephasing_model(0.1))
        with pytest.raises(ValueError, match=">= 0"):
            propagate(doubled, vec(PLUS), [-1.0])


class TestRk4Oracle:
    def test_gamma_zero_matches_unitary_conjugation(self, rng):
        h = random_hermitian(rng, 4)
        model = LindbladModel(h, [], 0.0)
        rho0 = random_density(rng, 4)
        times = [0.5, 1.5]
        states = rk4_oracle(model, rho0, times, dt=2e-3)
        for t, rho in zip(times, states):
            u = mat_func_propagator(h, t)
            np.testing.assert_allclose(rho, u @ rho0 @ u.conj().T, atol=1e-8)

    def test_matches_spectral_propagation_on_syk(self, rng):
        model = dissipative_syk(SykEnsemble(4, 1.0, 1), 0.3, sites="all")
        rho0 = random_density(rng, 4)
        times = [0.5, 2.0, 6.0, 10.0]
        via_rk4 = rk4_oracle(model, rho0, times, dt=2e-3)
        doubled = build_doubled(model)
        via_spectral = propagate(doubled, vec(rho0), times)
        for a, b in zip(via_rk4, via_spectral):
            assert np.max(np.abs(a - unvec(b))) < 1e-6

    def test_steady_state_is_maximally_mixed(self, rng):
        gamma = 0.5
        model = dissipative_syk(SykEnsemble(4, 1.0, 2), gamma, sites="all")
        rho0 = random_density(rng, 4)
        t_end = 50.0 / gamma
        final = rk4_oracle(model, rho0, [t_end], dt=5e-3, validate=False)[-1]
        assert np.max(np.abs(final - np.eye(4) / 4)) < 1e-4

    def test_trace_constant(self, rng):
        model = LindbladModel(random_hermitian(rng, 2), [random_complex(rng, 2)], 0.4)
        rho0 = random_density(rng, 2)
        for rho in rk4_oracle(model, rho0, [1.0, 4.0], dt=1e-3):
            assert abs(np.trace(rho) - 1.0) < 1e-8

    def test_step_size_validation_failure(self, rng):
        model = dephasing_model(5.0)
        with pytest.raises(StepSizeError):
            rk4_oracle(model, PLUS, [2.0], dt=0.5)

    def test_unsorted_times_rejected(self, rng):
        with pytest.raises(ValueError, match="sorted"):
            rk4_oracle(dephasing_model(0.1), PLUS, [1.0, 0.5], dt=1e-2)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lindblad_echo.echo import (
    EchoFeatures,
    TimeSeries,
    check_scalings,
    closed_le,
    extract_features,
    generalized_le,
    le_time_series,
    moving_average3,
    relative_purity,
    renyi2,
    saturation_time,
    series_to_csv,
)
from lindblad_echo.models import LindbladModel, SykEnsemble, dissipative_syk, syk_hamiltonian
from lindblad_echo.operators import PAULI_Z, vec

from conftest import random_density, random_hermitian, rng_for

PLUS = np.array([1.0, 1.0]) / np.sqrt(2)


class TestGeneralizedLE:
    def test_identical_states(self, rng):
        rho = random_density(rng, 4)
        assert generalized_le(rho, rho) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_projectors(self):
        assert generalized_le(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == 0.0

    def test_two_level_arithmetic(self):
        # Tr[rho1 rho2] = 1/2; purities 5/8 and 1/2 -> 0.5/sqrt(5/16)
        rho1 = np.diag([0.75, 0.25])
        rho2 = np.eye(2) / 2
        want = 0.5 / np.sqrt(0.625 * 0.5)
        assert generalized_le(rho1, rho2) == pytest.approx(want, abs=1e-12)
        assert want == pytest.approx(0.89443, abs=1e-5)

    def test_zero_purity_rejected(self):
        with pytest.raises(ValueError, match="purity"):
            generalized_le(np.zeros((2, 2)), np.eye(2) / 2)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_bounds_cauchy_schwarz(self, seed):
        rng = rng_for(seed)
        value = generalized_le(random_density(rng, 3), random_density(rng, 3))
        assert -1e-10 <= value <= 1.0 + 1e-10


class TestRelativePurity:
    def test_identical(self, rng):
        rho = random_density(rng, 3)
        assert relative_purity(rho, rho) == pytest.approx(1.0, abs=1e-12)

    def test_pure_vs_mixed(self):
        pure = np.diag([1.0, 0.0, 0.0, 0.0])
        assert relative_purity(pure, np.eye(4) / 4) == pytest.approx(0.25, abs=1e-12)

    def test_matches_direct_traces(self, rng):
        rho1, rho2 = random_density(rng, 4), random_density(rng, 4)
        want = np.trace(rho1 @ rho2).real / np.trace(rho1 @ rho1).real
        assert relative_purity(rho1, rho2) == pytest.approx(want, abs=1e-12)


class TestRenyi2:
    def test_pure_state(self):
        assert renyi2(np.diag([1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        assert renyi2(np.eye(8) / 8) == pytest.approx(np.log(8), abs=1e-12)

    def test_matches_doubled_norm(self, rng):
        rho = random_density(rng, 4)
        psi = vec(rho)
        assert renyi2(rho) == pytest.approx(-np.log(np.real(psi.conj() @ psi)), abs=1e-12)

    def test_non_unit_trace_rejected(self):
        with pytest.raises(ValueError, match="trace"):
            renyi2(np.eye(2))


class TestClosedLE:
    def test_equal_hamiltonians(self, rng):
        h = random_hermitian(rng, 4)
        psi0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        psi0 /= np.linalg.norm(psi0)
        for t in (0.0, 0.7, 3.0):
            assert closed_le(h, h, psi0, t) == pytest.approx(1.0, abs=1e-12)

    def test_single_qubit_closed_form(self):
        # H1 = Z, H2 = -Z, |+>: M(t) = cos(2t)^2
        for t in (0.2, 0.9, 2.0):
            got = closed_le(PAULI_Z, -PAULI_Z, PLUS, t)
            assert got == pytest.approx(np.cos(2 * t) ** 2, abs=1e-12)


class TestLeTimeSeries:
    def test_identical_models_constant_one(self, rng):
        model = dissipative_syk(SykEnsemble(4, 1.0, 3), 0.2, sites="all")
        rho0 = random_density(rng, 4)
        echo, _, _ = le_time_series(model, model, rho0, np.linspace(0.1, 5, 12))
        np.testing.assert_allclose(echo.values, 1.0, atol=1e-10)

    def test_gamma_zero_reduces_to_closed_le(self):
        h1 = syk_hamiltonian(SykEnsemble(6, 1.0, 1))
        h2 = syk_hamiltonian(SykEnsemble(6, 1.0, 2))
        psi0 = np.linalg.eigh(h1)[1][:, 0]
        rho0 = np.outer(psi0, psi0.conj())
        times = np.logspace(-1, 1, 15)
        echo, _, _ = le_time_series(LindbladModel(h1, [], 0.0),
                                    LindbladModel(h2, [], 0.0), rho0, times)
        for k, t in enumerate(times):
            assert echo.values[k] == pytest.approx(closed_le(h1, h2, psi0, t), abs=1e-8)

    def test_values_in_unit_interval_and_start_at_one(self, rng):
        ens = SykEnsemble(4, 1.0, 5)
        m1 = dissipative_syk(ens, 0.1, sites="all")
        m2 = m1.with_gamma(0.5)
        rho0 = random_density(rng, 4)
        times = np.concatenate([[1e-9], np.logspace(-2, 2, 30)])
        echo, s1, s2 = le_time_series(m1, m2, rho0, times)
        assert echo.values[0] == pytest.approx(1.0, abs=1e-6)
        assert np.all(echo.values >= -1e-10) and np.all(echo.values <= 1 + 1e-10)
        # entropies grow toward log d for the unital all-site model
        assert s1.values[-1] <= s2.values[-1] + 1e-6

    def test_dimension_mismatch_rejected(self, rng):
        m1 = LindbladModel(np.eye(2), [], 0.0)
        m2 = LindbladModel(np.eye(4), [], 0.0)
        with pytest.raises(ValueError, match="dimension"):
            le_time_series(m1, m2, np.eye(2) / 2, [0.1])

    def test_dissipative_echo_against_rk4_states(self, rng):
        # independent route: master-equation integration + direct trace
        # arithmetic, no doubled-space inner products anywhere
        from lindblad_echo.doubled import rk4_oracle
        ens = SykEnsemble(4, 1.0, 9)
        m1 = dissipative_syk(ens, 0.15, sites="all")
        m2 = m1.with_gamma(0.6)
        rho0 = random_density(rng, 4)
        times = [0.4, 1.2, 3.0, 8.0]
        echo, s1, s2 = le_time_series(m1, m2, rho0, times)
        states1 = rk4_oracle(m1, rho0, times, dt=2e-3)
        states2 = rk4_oracle(m2, rho0, times, dt=2e-3)
        for k in range(len(times)):
            r1, r2 = states1[k], states2[k]
            overlap = np.trace(r1 @ r2).real
            p1 = np.trace(r1 @ r1).real
            p2 = np.trace(r2 @ r2).real
            assert echo.values[k] == pytest.approx(overlap / np.sqrt(p1 * p2), abs=1e-6)
            assert s1.values[k] == pytest.approx(-np.log(p1), abs=1e-6)
            assert s2.values[k] == pytest.approx(-np.log(p2), abs=1e-6)

    def test_renyi_monotone_on_all_site_model(self):
        # unital evolution from a pure state: S2 never decreases until it
        # saturates at log d (asserted on the weak-regime parameter set)
        import warnings

        from lindblad_echo.models import DegenerateGroundWarning, ground_state
        ens = SykEnsemble(6, 1.0, 17)
        m1 = dissipative_syk(ens, 0.02, sites="all")
        m2 = m1.with_gamma(0.1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateGroundWarning)
            rho0 = ground_state(m1.hamiltonian)
        times = np.logspace(-1, np.log10(5000.0), 200)
        _, s1, s2 = le_time_series(m1, m2, rho0, times)
        for series in (s1.values, s2.values):
            saturated = series >= np.log(8) - 1e-3
            active = ~saturated
            diffs = np.diff(series)
            assert np.all(diffs[active[:-1]] >= -1e-10)
            assert series[-1] == pytest.approx(np.log(8), abs=1e-3)


class TestTimeSeries:
    def test_validation(self):
        with pytest.raises(ValueError, match="increasing"):
            TimeSeries(np.array([0.0, 0.0, 1.0]), np.zeros(3))
        with pytest.raises(ValueError, match="matching"):
            TimeSeries(np.array([0.0, 1.0]), np.zeros(3))


class TestExtractFeatures:
    def test_constant_one(self):
        times = np.linspace(0, 1, 20)
        feats = extract_features(TimeSeries(times, np.ones(20)))
        assert feats.t_min_list == []
        assert feats.t_plateau == times[0]

    def test_v_shape_single_minimum(self):
        times = np.linspace(0, 2, 21)
        values = np.concatenate([np.linspace(1, 0.2, 11), np.linspace(0.2, 1, 11)[1:]])
        feats = extract_features(TimeSeries(times, values))
        assert len(feats.t_min_list) == 1
        assert feats.t_min_list[0][0] == pytest.approx(1.0, abs=0.11)

    def test_double_dip_with_ordering(self):
        times = np.linspace(0, 4, 81)
        values = (1.0 - 0.5 * np.exp(-((times - 1.0) / 0.2) ** 2)
                  - 0.3 * np.exp(-((times - 3.0) / 0.2) ** 2))
        feats = extract_features(TimeSeries(times, values))
        assert len(feats.t_min_list) == 2
        assert len(feats.t_max_list) == 1
        t1 = feats.t_min_list[0][0]
        t2 = feats.t_min_list[1][0]
        assert t1 < feats.t_max_list[0][0] < t2

    def test_prominence_filters_ripple(self):
        times = np.linspace(0, 1, 101)
        values = 1.0 + 1e-4 * np.sin(40 * times)
        feats = extract_features(TimeSeries(times, values), min_prominence=0.005)
        assert feats.t_min_list == []

    def test_too_short_rejected(self):
        with pytest.raises(ValueError, match="short"):
            extract_features(TimeSeries(np.linspace(0, 1, 5), np.ones(5)))

    def test_moving_average_endpoints(self):
        values = np.array([1.0, 2.0, 3.0, 4.0])
        out = moving_average3(values)
        assert out[0] == 1.0 and out[-1] == 4.0
        assert out[1] == pytest.approx(2.0)


class TestSaturationTime:
    def test_step_series(self):
        times = np.linspace(0, 1, 11)
        values = np.where(times < 0.5, 0.0, 2.0)
        assert saturation_time(TimeSeries(times, values)) == pytest.approx(0.5)


class TestCheckScalings:
    def test_weak_regime_pass(self):
        feats = EchoFeatures(t_min_list=[(10.0, 0.7)], t_plateau=50.0, regime_label="weak")
        report = check_scalings(feats, gamma1=0.02, gamma2=0.1, j_scale=1.0, regime="weak")
        assert report.ratios["t_min*gamma2"] == pytest.approx(1.0)
        assert report.ratios["t_plateau*gamma1"] == pytest.approx(1.0)
        assert report.all_pass

    def test_strong_degenerate_ordering(self):
        feats = EchoFeatures(t_min_list=[(0.01, 0.6), (20.0, 0.9)],
                             t_max_list=[(1.0, 0.99)], t_plateau=300.0)
        report = check_scalings(feats, gamma1=10.0, gamma2=100.0, j_scale=1.0,
                                regime="strong_degenerate")
        assert report.ordering_ok
        assert report.ratios["t_min1*gamma2"] == pytest.approx(1.0)
        assert report.ratios["t_min2*J^2/gamma1"] == pytest.approx(2.0)
        assert report.ratios["t_plateau*J^2/gamma2"] == pytest.approx(3.0)
        assert report.all_pass

    def test_wrong_minima_count_raises(self):
        feats = EchoFeatures(t_min_list=[(1.0, 0.5), (2.0, 0.6)])
        with pytest.raises(ValueError, match="one minimum"):
            check_scalings(feats, 0.02, 0.1, 1.0, regime="weak")

    def test_out_of_band_flagged(self):
        feats = EchoFeatures(t_min_list=[(100.0, 0.7)], t_plateau=50.0)
        report = check_scalings(feats, gamma1=0.02, gamma2=0.1, j_scale=1.0, regime="weak")
        assert not report.passes["t_min*gamma2"]
        assert not report.all_pass


class TestCsvOutput:
    def test_schema_and_precision(self, tmp_path):
        times = np.array([0.1, 1.0])
        echo = TimeSeries(times, np.array([1.0, 0.123456789012345]))
        s1 = TimeSeries(times, np.array([0.0, 1.5]))
        s2 = TimeSeries(times, np.array([0.0, 2.5]))
        path = tmp_path / "series.csv"
        series_to_csv(path, echo, s1, s2)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,le,renyi2_g1,renyi2_g2"
        assert lines[2].split(",")[1] == "0.123456789012"
        assert len(lines) == 3

"""Configuration-driven experiment orchestration.

Each experiment writes machine-readable artifacts (CSV series, JSON reports,
a manifest sufficient to re-run the experiment) into an output directory.
Outputs are deterministic given the config: fixed seeds, declared thread
count, no timestamps.
"""

from __future__ import annotations

import dataclasses
import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import spearmanr

from . import __version__
from .doubled import build_doubled, check_evolution_invariants, propagate, trace_functional
from .echo import (
    TimeSeries,
    check_scalings,
    extract_features,
    le_time_series,
    saturation_time,
    series_to_csv,
)
from .models import (
    DegenerateGroundWarning,
    LindbladModel,
    SykEnsemble,
    dissipative_syk,
    ground_state,
    model_to_json,
)
from .operators import Tolerances, haar_unitary, vec
from .scrambling import (
    BipartiteSplit,
    NoiseEnsemble,
    average_otoc_AB,
    noise_averaged_le,
    otoc_open,
    otoc_renyi_check,
    protocol_simulate,
)
from .spectrum import eigenvalues_to_csv, spectrum_report

EXPERIMENTS = ("fig2_weak", "fig4a_strong_all", "fig4b_strong_half", "spectrum",
               "otoc_renyi", "otoc_le_demo", "protocol")

CONFIG_SCHEMA = 1

THREADS_ENV_VAR = "LECHO_THREADS"


class ConfigError(ValueError):
    """Invalid or unknown experiment configuration."""


@dataclass(frozen=True)
class TimeGrid:
    t_min: float
    t_max: float
    n_points: int = 400
    spacing: str = "log"

    def __post_init__(self):
        if self.n_points < 10:
            raise ConfigError("time grid needs n_points >= 10")
        if self.t_max <= self.t_min:
            raise ConfigError("time grid needs t_max > t_min")
        if self.spacing not in ("log", "linear"):
            raise ConfigError(f"spacing must be log|linear, got {self.spacing!r}")
        if self.spacing == "log" and self.t_min <= 0:
            raise ConfigError("log spacing needs t_min > 0")

    def times(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(np.log10(self.t_min), np.log10(self.t_max), self.n_points)
        return np.linspace(self.t_min, self.t_max, self.n_points)


@dataclass
class ExperimentConfig:
    experiment: str
    N: int = 6
    J: float = 1.0
    gamma1: float = 0.02
    gamma2: float = 0.1
    seed: int = 17
    n_realizations: int = 1
    time_grid: TimeGrid | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    output_dir: str = "out"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; "
                              f"choose from {EXPERIMENTS}")
        if self.experiment.startswith("fig") and not self.gamma1 < self.gamma2:
            raise ConfigError("echo experiments need gamma1 < gamma2")
        if self.J <= 0:
            raise ConfigError("J must be positive")
        if self.n_realizations < 1:
            raise ConfigError("n_realizations must be >= 1")
        if self.time_grid is None:
            self.time_grid = default_time_grid(self.experiment, self.J,
                                               self.gamma1, self.gamma2)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["schema"] = CONFIG_SCHEMA
        return out


def default_time_grid(experiment: str, j_scale: float, gamma1: float,
                      gamma2: float) -> TimeGrid:
    """Regime-adapted grids spanning every characteristic scale.

    weak: [1e-2/gamma2, 1e2/gamma1] log; strong: [1e-2/gamma2, 10*gamma2/J^2]
    log; identity/demo experiments use short linear grids.
    """
    if experiment == "fig2_weak":
        return TimeGrid(1e-2 / gamma2, 1e2 / gamma1, 400, "log")
    if experiment in ("fig4a_strong_all", "fig4b_strong_half"):
        return TimeGrid(1e-2 / gamma2, 10.0 * gamma2 / j_scale**2, 400, "log")
    if experiment == "otoc_le_demo":
        return TimeGrid(0.0, 5.0 / j_scale, 21, "linear")
    return TimeGrid(1e-2 / j_scale, 10.0 / j_scale, 50, "log")


_CONFIG_KEYS = {"schema", "experiment", "N", "J", "gamma1", "gamma2", "seed",
                "n_realizations", "time_grid", "tolerances", "output_dir"}
_GRID_KEYS = {"t_min", "t_max", "n_points", "spacing"}


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Strict parse: versioned schema, unknown keys rejected."""
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if raw.get("schema") != CONFIG_SCHEMA:
        raise ConfigError(f"config schema must be {CONFIG_SCHEMA}, got {raw.get('schema')!r}")
    if "experiment" not in raw:
        raise ConfigError("config needs an 'experiment' key")
    kwargs = {k: v for k, v in raw.items() if k not in ("schema", "time_grid", "tolerances")}
    if raw.get("time_grid") is not None:
        grid_raw = raw["time_grid"]
        unknown = set(grid_raw) - _GRID_KEYS
        if unknown:
            raise ConfigError(f"unknown time_grid keys: {sorted(unknown)}")
        kwargs["time_grid"] = TimeGrid(**grid_raw)
    if raw.get("tolerances") is not None:
        tol_raw = raw["tolerances"]
        known = {f.name for f in dataclasses.fields(Tolerances)}
        unknown = set(tol_raw) - known
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        kwargs["tolerances"] = Tolerances(**tol_raw)
    try:
        return ExperimentConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def thread_count() -> int:
    return max(1, int(os.environ.get(THREADS_ENV_VAR, "1")))


def _write_manifest(outdir: Path, config: ExperimentConfig, extra: dict | None = None) -> None:
    manifest = {
        "schema": CONFIG_SCHEMA,
        "library_version": __version__,
        "threads": thread_count(),
        "config": config.to_dict(),
    }
    if extra:
        manifest.update(extra)
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True),
                                          encoding="utf-8")


def _echo_regime(experiment: str) -> str:
    return {"fig2_weak": "weak",
            "fig4a_strong_all": "strong_nondegenerate",
            "fig4b_strong_half": "strong_degenerate"}[experiment]


def _build_echo_models(config: ExperimentConfig, seed: int):
    sites = "half" if config.experiment == "fig4b_strong_half" else "all"
    ens = SykEnsemble(config.N, config.J, seed)
    model1 = dissipative_syk(ens, config.gamma1, sites=sites)
    model2 = model1.with_gamma(config.gamma2)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateGroundWarning)
        rho0 = ground_state(model1.hamiltonian)
    degenerate = any(issubclass(w.category, DegenerateGroundWarning) for w in caught)
    return model1, model2, rho0, sites, degenerate


def run_echo_experiment(config: ExperimentConfig, seed: int | None = None):
    """One disorder realization of a weak- or strong-regime echo run."""
    seed = config.seed if seed is None else seed
    model1, model2, rho0, sites, degenerate = _build_echo_models(config, seed)
    times = config.time_grid.times()
    echo, s1, s2 = le_time_series(model1, model2, rho0, times)

    # positivity/trace invariants on both trajectories at every sampled time
    tol = config.tolerances.trace
    for model in (model1, model2):
        doubled = build_doubled(model)
        states = propagate(doubled, vec(rho0), times)
        check_evolution_invariants(doubled, states, trace_functional(doubled, vec(rho0)),
                                   tol=tol)

    regime = _echo_regime(config.experiment)
    features = extract_features(echo, config.tolerances.plateau_band,
                                config.tolerances.min_prominence, regime_label=regime)
    scaling = check_scalings(features, config.gamma1, config.gamma2, config.J, regime)
    from .models import majorana_string_basis
    from .spectrum import hd_ground_degeneracy
    degeneracy = hd_ground_degeneracy(build_doubled(model1), config.gamma1,
                                      config.tolerances.degeneracy_rel,
                                      sector_basis=majorana_string_basis(config.N, "even"))
    return {
        "echo": echo, "renyi_1": s1, "renyi_2": s2,
        "features": features, "scaling": scaling,
        "hd_zero_degeneracy": degeneracy,
        "ground_degenerate": degenerate,
        "renyi2_saturation_g2": saturation_time(s2),
        "sites": sites, "seed": seed,
    }


def disorder_average(series_list: list[TimeSeries]) -> tuple[TimeSeries, TimeSeries]:
    """Pointwise mean and standard error over realizations on a shared grid."""
    if len(series_list) < 2:
        raise ValueError("disorder averaging needs >= 2 realizations")
    t0 = series_list[0].times
    for ts in series_list[1:]:
        if ts.times.shape != t0.shape or not np.allclose(ts.times, t0, rtol=0, atol=0):
            raise ValueError("realizations disagree on the time grid")
    stack = np.stack([np.asarray(ts.values, dtype=float) for ts in series_list])
    mean = stack.mean(axis=0)
    stderr = stack.std(axis=0, ddof=1) / np.sqrt(stack.shape[0])
    return TimeSeries(t0, mean), TimeSeries(t0, stderr)


def _random_hermitian(rng: np.random.Generator, dim: int, scale: float) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * 0.5 * (a + a.conj().T) / np.sqrt(dim)


def run_experiment(config: ExperimentConfig) -> dict:
    """Dispatch on the experiment kind; returns {artifact name: path}."""
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    runner = {
        "fig2_weak": _run_echo_to_disk,
        "fig4a_strong_all": _run_echo_to_disk,
        "fig4b_strong_half": _run_echo_to_disk,
        "spectrum": _run_spectrum_to_disk,
        "otoc_renyi": _run_otoc_renyi_to_disk,
        "otoc_le_demo": _run_otoc_le_demo_to_disk,
        "protocol": _run_protocol_to_disk,
    }[config.experiment]
    return runner(config, outdir)


def _run_echo_to_disk(config: ExperimentConfig, outdir: Path) -> dict:
    seeds = [config.seed + k for k in range(config.n_realizations)]
    if len(seeds) == 1:
        results = [run_echo_experiment(config, seeds[0])]
    else:
        with ThreadPoolExecutor(max_workers=thread_count()) as pool:
            results = list(pool.map(lambda s: run_echo_experiment(config, s), seeds))
    primary = results[0]

    series_path = outdir / "series.csv"
    series_to_csv(series_path, primary["echo"], primary["renyi_1"], primary["renyi_2"])
    features_path = outdir / "features.json"
    features_path.write_text(primary["features"].to_json(), encoding="utf-8")
    report = {
        "experiment": config.experiment,
        "regime": primary["features"].regime_label,
        "scaling": json.loads(primary["scaling"].to_json()),
        "hd_zero_degeneracy": primary["hd_zero_degeneracy"],
        "ground_degenerate": primary["ground_degenerate"],
        "renyi2_saturation_g2": primary["renyi2_saturation_g2"],
        "n_minima": len(primary["features"].t_min_list),
    }
    artifacts = {"series": str(series_path), "features": str(features_path)}
    if len(results) > 1:
        mean_ts, stderr_ts = disorder_average([r["echo"] for r in results])
        mean_s1, _ = disorder_average([r["renyi_1"] for r in results])
        mean_s2, _ = disorder_average([r["renyi_2"] for r in results])
        avg_path = outdir / "series_avg.csv"
        series_to_csv(avg_path, mean_ts, mean_s1, mean_s2)
        stderr_path = outdir / "series_stderr.csv"
        with open(stderr_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("t,le_stderr\n")
            for t, se in zip(stderr_ts.times, stderr_ts.values):
                fh.write(f"{t:.12g},{se:.12g}\n")
        report["n_realizations"] = len(results)
        artifacts["series_avg"] = str(avg_path)
        artifacts["series_stderr"] = str(stderr_path)
    report_path = outdir / "report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True), encoding="utf-8")
    artifacts["report"] = str(report_path)
    model_path = outdir / "model.json"
    model_path.write_text(model_to_json(config.N, config.J, config.seed, config.gamma1,
                                        primary["sites"]), encoding="utf-8")
    artifacts["model"] = str(model_path)
    _write_manifest(outdir, config)
    return artifacts


def _run_spectrum_to_disk(config: ExperimentConfig, outdir: Path) -> dict:
    from .models import majorana_string_basis
    ens = SykEnsemble(config.N, config.J, config.seed)
    gamma = config.gamma1
    even_basis = majorana_string_basis(config.N, "even")
    artifacts = {}
    for sites in ("all", "half"):
        model = dissipative_syk(ens, gamma, sites=sites)
        report = spectrum_report(build_doubled(model), gamma, config.J,
                                 sector_basis=even_basis)
        json_path = outdir / f"spectrum_{sites}.json"
        json_path.write_text(report.to_json(), encoding="utf-8")
        csv_path = outdir / f"spectrum_{sites}.csv"
        eigenvalues_to_csv(csv_path, report.eigenvalues)
        artifacts[f"spectrum_{sites}_json"] = str(json_path)
        artifacts[f"spectrum_{sites}_csv"] = str(csv_path)
    _write_manifest(outdir, config)
    return artifacts


def random_hermitian_jump_model(rng: np.random.Generator, n_qubits: int, j_scale: float,
                                gamma: float, n_jumps: int = 2) -> LindbladModel:
    dim = 2 ** n_qubits
    h = _random_hermitian(rng, dim, j_scale)
    jumps = [_random_hermitian(rng, dim, 1.0) for _ in range(n_jumps)]
    return LindbladModel(h, jumps, gamma)


def random_general_jump_model(rng: np.random.Generator, n_qubits: int, j_scale: float,
                              gamma: float, n_jumps: int = 2) -> LindbladModel:
    dim = 2 ** n_qubits
    h = _random_hermitian(rng, dim, j_scale)
    jumps = []
    for _ in range(n_jumps):
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        jumps.append(a / np.sqrt(2 * dim))
    return LindbladModel(h, jumps, gamma)


def _run_otoc_renyi_to_disk(config: ExperimentConfig, outdir: Path) -> dict:
    n_models = max(20, config.n_realizations)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    split = BipartiteSplit(4, 4)
    times = [0.0, 0.5 / config.J, 1.0 / config.J]
    records = []
    for k in range(n_models):
        model = random_hermitian_jump_model(rng, 4, config.J, 0.3 * config.J)
        op = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        for t in times:
            lhs, rhs = otoc_renyi_check(model, op, split, t)
            records.append({"model": k, "t": t, "lhs": lhs, "rhs": rhs,
                            "abs_err": abs(lhs - rhs)})
    max_err = max(r["abs_err"] for r in records)
    payload = {"suite": "otoc_renyi", "n_models": n_models, "max_abs_err": max_err,
               "tolerance": 1e-8, "passed": bool(max_err <= 1e-8), "records": records}
    path = outdir / "otoc_renyi.json"
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    _write_manifest(outdir, config)
    if not payload["passed"]:
        raise FloatingPointError(f"otoc_renyi identity failed: max err {max_err:.3e}")
    return {"otoc_renyi": str(path)}


def _run_protocol_to_disk(config: ExperimentConfig, outdir: Path) -> dict:
    n_models = max(20, config.n_realizations)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    split = BipartiteSplit(2, 4)
    records = []
    for k in range(n_models):
        model = (random_general_jump_model(rng, 3, config.J, 0.25 * config.J)
                 if k % 2 else random_hermitian_jump_model(rng, 3, config.J, 0.25 * config.J))
        w_a = np.kron(haar_unitary(2, int(rng.integers(2**31))), np.eye(4, dtype=complex))
        m_b = np.kron(np.eye(2, dtype=complex), _random_hermitian(rng, 4, 1.0))
        t = float(rng.uniform(0.2, 1.5)) / config.J
        lhs = protocol_simulate(model, w_a, m_b, split, t)
        rhs = split.d * otoc_open(model, w_a, m_b, split, t)
        records.append({"model": k, "t": t, "protocol": lhs,
                        "d_times_otoc": float(rhs.real), "abs_err": abs(lhs - rhs)})
    max_err = max(r["abs_err"] for r in records)
    payload = {"suite": "protocol", "n_models": n_models, "max_abs_err": max_err,
               "tolerance": 1e-8, "passed": bool(max_err <= 1e-8), "records": records}
    path = outdir / "protocol.json"
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    _write_manifest(outdir, config)
    if not payload["passed"]:
        raise FloatingPointError(f"protocol identity failed: max err {max_err:.3e}")
    return {"protocol": str(path)}


def otoc_le_chain_model(config: ExperimentConfig, delta: float = 0.1):
    """1+2-qubit chain: H = H_A + H_B + delta * X_A (x) G_B, dissipation on B."""
    rng = np.random.Generator(np.random.PCG64(config.seed))
    h_a = _random_hermitian(rng, 2, config.J)
    h_b = _random_hermitian(rng, 4, config.J)
    g_b = _random_hermitian(rng, 4, config.J)
    x_a = np.array([[0, 1], [1, 0]], dtype=complex)
    eye2, eye4 = np.eye(2, dtype=complex), np.eye(4, dtype=complex)
    h_full = (np.kron(h_a, eye4) + np.kron(eye2, h_b)
              + delta * config.J * np.kron(x_a, g_b))
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    jumps_b = [np.kron(z, np.eye(2, dtype=complex)), np.kron(np.eye(2, dtype=complex), z)]
    gamma = 0.1 * config.J
    full = LindbladModel(h_full, [np.kron(eye2, L) for L in jumps_b], gamma)
    sub_b = LindbladModel(h_b, jumps_b, gamma)
    return full, sub_b


def _run_otoc_le_demo_to_disk(config: ExperimentConfig, outdir: Path) -> dict:
    delta = 0.1
    full, sub_b = otoc_le_chain_model(config, delta)
    split = BipartiteSplit(2, 4)
    noise = NoiseEnsemble(n_samples=32, strength=delta * config.J, seed=config.seed + 1)
    times = config.time_grid.times()
    rows = []
    for t in times:
        avg = average_otoc_AB(full, split, float(t))
        le = noise_averaged_le(sub_b, noise, float(t))
        rows.append((float(t), avg, le.mean, le.stderr))
    otoc_curve = [r[1] for r in rows]
    le_curve = [r[2] for r in rows]
    rho, _ = spearmanr(otoc_curve, le_curve)
    csv_path = outdir / "otoc_le.csv"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,avg_otoc,noise_le_mean,noise_le_stderr\n")
        for row in rows:
            fh.write(",".join(f"{x:.12g}" for x in row) + "\n")
    records = []
    for t, avg, le_mean, le_stderr in rows:
        records.append({"t": t, "value": avg, "method": "exact_double_twirl",
                        "n_samples": None, "stderr": None})
        records.append({"t": t, "value": le_mean, "method": "noise_averaged_le",
                        "n_samples": noise.n_samples, "stderr": le_stderr})
    payload = {"suite": "otoc_le_demo", "delta": delta, "spearman": float(rho),
               "threshold": 0.8, "passed": bool(rho > 0.8), "records": records}
    json_path = outdir / "otoc_le.json"
    json_path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    _write_manifest(outdir, config)
    return {"otoc_le_csv": str(csv_path), "otoc_le_json": str(json_path)}

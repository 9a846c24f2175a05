"""Loschmidt echoes, Renyi entropy, and echo-curve feature extraction."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .doubled import build_doubled, propagate
from .models import LindbladModel
from .operators import DEFAULT_TOLS, as_operator, mat_func_propagator, vec


@dataclass
class TimeSeries:
    """Strictly increasing time grid (units 1/J) with real or complex values."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values)
        if self.times.shape != self.values.shape[:1] or self.times.ndim != 1:
            raise ValueError("times and values must have matching leading length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return self.times.size


@dataclass
class EchoFeatures:
    """Locations of echo minima/maxima and the late-time plateau onset."""

    t_min_list: list = field(default_factory=list)   # [(time, value), ...]
    t_max_list: list = field(default_factory=list)   # maxima between minima
    t_plateau: float | None = None
    regime_label: str = ""

    def to_json(self) -> str:
        return json.dumps({
            "t_min_list": [[float(t), float(v)] for t, v in self.t_min_list],
            "t_max_list": [[float(t), float(v)] for t, v in self.t_max_list],
            "t_plateau": None if self.t_plateau is None else float(self.t_plateau),
            "regime_label": self.regime_label,
        }, indent=2)


def generalized_le(rho1: np.ndarray, rho2: np.ndarray,
                   tol: float = DEFAULT_TOLS.structural) -> float:
    """Normalized state overlap Tr[rho1 rho2] / sqrt(Tr rho1^2 * Tr rho2^2).

    Computed as a doubled-space inner product; both inputs must be Hermitian
    PSD with nonzero purity.
    """
    p1, p2 = vec(rho1), vec(rho2)
    n1 = float(np.real(p1.conj() @ p1))
    n2 = float(np.real(p2.conj() @ p2))
    if n1 <= tol or n2 <= tol:
        raise ValueError("zero-purity input")
    overlap = p1.conj() @ p2
    if abs(overlap.imag) > tol * max(1.0, abs(overlap.real)):
        raise ValueError(f"overlap has imaginary part {overlap.imag:.3e}; "
                         "inputs must be Hermitian")
    return float(overlap.real / np.sqrt(n1 * n2))


def relative_purity(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """Tr(rho1 rho2) / Tr(rho1^2)."""
    p1, p2 = vec(rho1), vec(rho2)
    n1 = float(np.real(p1.conj() @ p1))
    if n1 <= DEFAULT_TOLS.structural:
        raise ValueError("zero-purity input")
    return float(np.real(p1.conj() @ p2) / n1)


def renyi2(rho: np.ndarray, trace_tol: float = 1e-8) -> float:
    """Second Renyi entropy -log Tr rho^2 of a unit-trace Hermitian state."""
    rho = as_operator(rho)
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace {tr} differs from 1 beyond tolerance")
    purity = float(np.real(np.sum(np.abs(rho) ** 2)))
    return float(-np.log(purity))


def closed_le(h1: np.ndarray, h2: np.ndarray, psi0: np.ndarray, t: float) -> float:
    """|<psi0| exp(i*h2*t) exp(-i*h1*t) |psi0>|**2."""
    psi0 = np.asarray(psi0, dtype=complex).reshape(-1)
    fwd = mat_func_propagator(h1, t) @ psi0
    back = mat_func_propagator(h2, t) @ psi0
    return float(np.abs(back.conj() @ fwd) ** 2)


def le_time_series(model1: LindbladModel, model2: LindbladModel,
                   rho0: np.ndarray, times) -> tuple[TimeSeries, TimeSeries, TimeSeries]:
    """Echo M(t) plus the Renyi-entropy curves of both evolutions.

    Returns (echo, renyi_1, renyi_2). Everything is evaluated from doubled-
    space inner products: Tr[rho1 rho2] = <psi1|psi2>, Tr rho^2 = <psi|psi>.
    """
    if model1.dim != model2.dim:
        raise ValueError("models act on different dimensions")
    psi0 = vec(rho0)
    traj1 = propagate(build_doubled(model1), psi0, times)
    traj2 = propagate(build_doubled(model2), psi0, times)
    echo = np.empty(len(traj1))
    s1 = np.empty(len(traj1))
    s2 = np.empty(len(traj1))
    for k, (p1, p2) in enumerate(zip(traj1, traj2)):
        n1 = float(np.real(p1.conj() @ p1))
        n2 = float(np.real(p2.conj() @ p2))
        echo[k] = float(np.real(p1.conj() @ p2) / np.sqrt(n1 * n2))
        s1[k] = -np.log(n1)
        s2[k] = -np.log(n2)
    t = np.asarray(times, dtype=float)
    return TimeSeries(t, echo), TimeSeries(t, s1), TimeSeries(t, s2)


def moving_average3(values: np.ndarray) -> np.ndarray:
    """3-point moving average with untouched endpoints."""
    values = np.asarray(values, dtype=float)
    out = values.copy()
    if values.size >= 3:
        out[1:-1] = (values[:-2] + values[1:-1] + values[2:]) / 3.0
    return out


def extract_features(ts: TimeSeries, plateau_band: float = DEFAULT_TOLS.plateau_band,
                     min_prominence: float = DEFAULT_TOLS.min_prominence,
                     regime_label: str = "") -> EchoFeatures:
    """Locate echo minima, the maxima between them, and the plateau onset.

    Minima are interior dips of the 3-point-smoothed curve with prominence
    at least min_prominence; the plateau onset is the earliest time after
    which |value - 1| <= plateau_band through the end of the series.
    """
    if len(ts) < 10:
        raise ValueError("series too short for feature extraction (need >= 10 samples)")
    values = np.asarray(ts.values, dtype=float)
    smooth = moving_average3(values)
    dip_idx, _ = find_peaks(-smooth, prominence=min_prominence)
    t_min_list = [(float(ts.times[i]), float(values[i])) for i in dip_idx]
    t_max_list = []
    for left, right in zip(dip_idx[:-1], dip_idx[1:]):
        seg = np.argmax(smooth[left:right + 1]) + left
        t_max_list.append((float(ts.times[seg]), float(values[seg])))
    inside = np.abs(values - 1.0) <= plateau_band
    t_plateau = None
    if inside[-1]:
        k = len(values) - 1
        while k > 0 and inside[k - 1]:
            k -= 1
        t_plateau = float(ts.times[k])
    return EchoFeatures(t_min_list, t_max_list, t_plateau, regime_label)


def saturation_time(ts: TimeSeries, rel_band: float = 0.05) -> float | None:
    """Earliest time after which the series stays within rel_band of its final value."""
    values = np.asarray(ts.values, dtype=float)
    final = values[-1]
    scale = abs(final) if abs(final) > 0 else 1.0
    inside = np.abs(values - final) <= rel_band * scale
    if not inside[-1]:
        return None
    k = len(values) - 1
    while k > 0 and inside[k - 1]:
        k -= 1
    return float(ts.times[k])


@dataclass
class ScalingReport:
    """Order-of-magnitude check of feature times against the regime scalings."""

    regime: str
    ratios: dict
    passes: dict
    ordering_ok: bool | None = None

    @property
    def all_pass(self) -> bool:
        ok = all(self.passes.values())
        if self.ordering_ok is not None:
            ok = ok and self.ordering_ok
        return ok

    def to_json(self) -> str:
        return json.dumps({
            "regime": self.regime,
            "ratios": {k: float(v) for k, v in self.ratios.items()},
            "passes": self.passes,
            "ordering_ok": self.ordering_ok,
            "all_pass": self.all_pass,
        }, indent=2)


SCALING_BAND = (0.2, 5.0)


def _in_band(x: float) -> bool:
    return SCALING_BAND[0] <= x <= SCALING_BAND[1]


def check_scalings(features: EchoFeatures, gamma1: float, gamma2: float,
                   j_scale: float, regime: str) -> ScalingReport:
    """Compare extracted times to the characteristic scales of each regime.

    weak / strong non-degenerate: one minimum at ~1/gamma2, plateau ~1/gamma1.
    strong degenerate: minima at ~1/gamma2 and ~gamma1/J^2, plateau ~gamma2/J^2,
    with ordering t_min1 < t_max < t_min2 < t_plateau.
    """
    ratios: dict = {}
    passes: dict = {}
    ordering_ok = None
    if regime in ("weak", "strong_nondegenerate"):
        if len(features.t_min_list) != 1:
            raise ValueError(f"{regime} regime expects exactly one minimum, "
                             f"found {len(features.t_min_list)}")
        t_min = features.t_min_list[0][0]
        ratios["t_min*gamma2"] = t_min * gamma2
        passes["t_min*gamma2"] = _in_band(ratios["t_min*gamma2"])
        if features.t_plateau is not None:
            ratios["t_plateau*gamma1"] = features.t_plateau * gamma1
            passes["t_plateau*gamma1"] = _in_band(ratios["t_plateau*gamma1"])
    elif regime == "strong_degenerate":
        if len(features.t_min_list) != 2:
            raise ValueError("strong degenerate regime expects exactly two minima, "
                             f"found {len(features.t_min_list)}")
        (t1, _), (t2, _) = features.t_min_list
        ratios["t_min1*gamma2"] = t1 * gamma2
        ratios["t_min2*J^2/gamma1"] = t2 * j_scale**2 / gamma1
        passes["t_min1*gamma2"] = _in_band(ratios["t_min1*gamma2"])
        passes["t_min2*J^2/gamma1"] = _in_band(ratios["t_min2*J^2/gamma1"])
        if features.t_plateau is not None:
            ratios["t_plateau*J^2/gamma2"] = features.t_plateau * j_scale**2 / gamma2
            passes["t_plateau*J^2/gamma2"] = _in_band(ratios["t_plateau*J^2/gamma2"])
        t_max = features.t_max_list[0][0] if features.t_max_list else None
        ordering_ok = (t_max is not None and features.t_plateau is not None
                       and t1 < t_max < t2 < features.t_plateau)
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return ScalingReport(regime, ratios, passes, ordering_ok)


def series_to_csv(path, echo: TimeSeries, renyi_1: TimeSeries, renyi_2: TimeSeries) -> None:
    """Write the echo CSV contract: header t,le,renyi2_g1,renyi2_g2, 12 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,le,renyi2_g1,renyi2_g2\n")
        for t, le, s1, s2 in zip(echo.times, echo.values, renyi_1.values, renyi_2.values):
            fh.write(f"{t:.12g},{le:.12g},{s1:.12g},{s2:.12g}\n")

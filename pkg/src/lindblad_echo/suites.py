"""Identity check suites: exact reductions and dualities run as batch checks.

Each suite returns a SuiteResult; the CLI prints one line per suite and the
acceptance tests assert on the same objects.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .echo import closed_le, le_time_series
from .experiments import random_general_jump_model, random_hermitian_jump_model
from .models import (
    DegenerateGroundWarning,
    LindbladModel,
    SykEnsemble,
    ground_state,
    syk_hamiltonian,
)
from .operators import haar_unitary
from .scrambling import (
    BipartiteSplit,
    _evolve,
    op_evolve_adjoint,
    op_evolve_forward,
    otoc_open,
    otoc_renyi_check,
    protocol_simulate,
)

SUITES = ("reductions", "otoc-renyi", "protocol", "duality")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_err: float
    tolerance: float
    details: list = field(default_factory=list)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: max error {self.max_err:.3e} (tol {self.tolerance:.1e})"


def reductions_suite(seed: int = 1, n_times: int = 50) -> SuiteResult:
    """gamma = 0 reduction: generalized echo equals the closed-system echo."""
    ens1 = SykEnsemble(6, 1.0, seed)
    ens2 = SykEnsemble(6, 1.0, seed + 100)
    h1, h2 = syk_hamiltonian(ens1), syk_hamiltonian(ens2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateGroundWarning)
        rho0 = ground_state(h1)
    psi0 = np.linalg.eigh(h1)[1][:, 0]
    model1 = LindbladModel(h1, [], 0.0)
    model2 = LindbladModel(h2, [], 0.0)
    times = np.logspace(-2, 1, n_times)
    echo, _, _ = le_time_series(model1, model2, rho0, times)
    errs = [abs(echo.values[k] - closed_le(h1, h2, psi0, t))
            for k, t in enumerate(times)]
    max_err = float(max(errs))
    return SuiteResult("reductions", max_err <= 1e-8, max_err, 1e-8,
                       [f"{len(times)} log-spaced times on N=6, seeds {seed}/{seed + 100}"])


def otoc_renyi_suite(seed: int = 7, n_models: int = 20) -> SuiteResult:
    """Purity-OTOC identity on random 2+2-qubit Hermitian-jump models."""
    rng = np.random.Generator(np.random.PCG64(seed))
    split = BipartiteSplit(4, 4)
    max_err = 0.0
    for _ in range(n_models):
        model = random_hermitian_jump_model(rng, 4, 1.0, 0.3)
        op = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        for t in (0.0, 0.5, 1.0):
            lhs, rhs = otoc_renyi_check(model, op, split, t)
            max_err = max(max_err, abs(lhs - rhs))
    return SuiteResult("otoc-renyi", max_err <= 1e-8, max_err, 1e-8,
                       [f"{n_models} models x 3 times"])


def protocol_suite(seed: int = 9, n_models: int = 20) -> SuiteResult:
    """Five-step protocol equals d x OTOC on random 3-qubit models."""
    rng = np.random.Generator(np.random.PCG64(seed))
    split = BipartiteSplit(2, 4)
    max_err = 0.0
    for k in range(n_models):
        model = (random_general_jump_model(rng, 3, 1.0, 0.25)
                 if k % 2 else random_hermitian_jump_model(rng, 3, 1.0, 0.25))
        w_a = np.kron(haar_unitary(2, int(rng.integers(2**31))), np.eye(4, dtype=complex))
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        m_b = np.kron(np.eye(2, dtype=complex), 0.5 * (g + g.conj().T))
        t = float(rng.uniform(0.2, 1.5))
        lhs = protocol_simulate(model, w_a, m_b, split, t)
        rhs = split.d * otoc_open(model, w_a, m_b, split, t)
        max_err = max(max_err, abs(lhs - rhs))
    return SuiteResult("protocol", max_err <= 1e-8, max_err, 1e-8,
                       [f"{n_models} models, mixed Hermitian/non-Hermitian jumps"])


def duality_suite(seed: int = 3, n_models: int = 10) -> SuiteResult:
    """Trace duality of the adjoint evolution and the Hermitian-jump identity."""
    rng = np.random.Generator(np.random.PCG64(seed))
    max_err = 0.0
    for k in range(n_models):
        model = (random_general_jump_model(rng, 2, 1.0, 0.4)
                 if k % 2 else random_hermitian_jump_model(rng, 2, 1.0, 0.4))
        dim = model.dim
        r = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        w = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        t = float(rng.uniform(0.3, 2.0))
        lhs = np.trace(r @ op_evolve_forward(model, w, t))
        rhs = np.trace(op_evolve_adjoint(model, r, t) @ w)
        max_err = max(max_err, abs(lhs - rhs))
        if model.all_jumps_hermitian():
            diff = np.max(np.abs(_evolve(model, r, t, "adjoint_backward")
                                 - op_evolve_forward(model, r, t)))
            max_err = max(max_err, float(diff))
    return SuiteResult("duality", max_err <= 1e-8, max_err, 1e-8,
                       [f"{n_models} models, random R/W"])


def run_suite(name: str, seed: int | None = None) -> SuiteResult:
    table = {
        "reductions": reductions_suite,
        "otoc-renyi": otoc_renyi_suite,
        "protocol": protocol_suite,
        "duality": duality_suite,
    }
    if name not in table:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    return table[name]() if seed is None else table[name](seed=seed)

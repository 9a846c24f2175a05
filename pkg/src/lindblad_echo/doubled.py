"""Doubled-space representation of Lindblad dynamics.

Row-stacking vec maps the master equation onto i d|psi>/dt = hD |psi> with
hD = hs - i*hd,
hs = H (x) I - I (x) H^T,
hd = gamma * sum_m [ -2 L_m (x) L_m^* + (L_m^dag L_m) (x) I + I (x) (L_m^dag L_m)^* ].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .models import LindbladModel
from .operators import (
    DEFAULT_TOLS,
    IllConditionedError,
    is_hermitian,
    mat_func_propagator,
    spectral_decomposition,
    unvec,
    vec_identity,
)


@dataclass
class DoubledHamiltonian:
    """hs, hd and hD = hs - i*hd with an eagerly built spectral cache.

    The cache is (eigenvalues, eigenvectors, inverse eigenvectors) of hD, or
    None when the eigenvector matrix was too ill-conditioned; propagation then
    falls back to per-time scaling-and-squaring.
    """

    hs: np.ndarray
    hd: np.ndarray
    dim: int  # original Hilbert-space dimension d (matrices act on d**2)
    spectral_cache: tuple | None = field(default=None, repr=False)

    @property
    def hD(self) -> np.ndarray:
        return self.hs - 1j * self.hd

    def eigenvalues(self) -> np.ndarray:
        if self.spectral_cache is not None:
            return self.spectral_cache[0].copy()
        return np.linalg.eigvals(self.hD)


def build_doubled(model: LindbladModel) -> DoubledHamiltonian:
    """Assemble hs and hd from a Lindblad model and cache the hD spectrum."""
    h = model.hamiltonian
    d = model.dim
    eye = np.eye(d, dtype=complex)
    hs = np.kron(h, eye) - np.kron(eye, h.T)
    hd = np.zeros((d * d, d * d), dtype=complex)
    for L in model.jumps:
        ldl = L.conj().T @ L
        hd += -2.0 * np.kron(L, L.conj()) + np.kron(ldl, eye) + np.kron(eye, ldl.conj())
    hd *= model.gamma
    doubled = DoubledHamiltonian(hs=hs, hd=hd, dim=d)
    try:
        doubled.spectral_cache = spectral_decomposition(doubled.hD)
    except IllConditionedError:
        doubled.spectral_cache = None
    return doubled


def propagate(doubled: DoubledHamiltonian, psi0: np.ndarray, times) -> list[np.ndarray]:
    """psi(t) = exp(-i*hD*t) psi0 at each requested time.

    Uses the cached eigendecomposition (one decomposition, many times); falls
    back to scaling-and-squaring per time point if the cache is unavailable.
    """
    psi0 = np.asarray(psi0, dtype=complex).reshape(-1)
    if psi0.size != doubled.hs.shape[0]:
        raise ValueError("state dimension does not match the doubled space")
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise ValueError("times must be >= 0")
    out = []
    if doubled.spectral_cache is not None:
        w, v, vinv = doubled.spectral_cache
        coeffs = vinv @ psi0
        for t in times:
            out.append(v @ (np.exp(-1j * w * t) * coeffs))
    else:
        for t in times:
            out.append(mat_func_propagator(doubled.hD, t) @ psi0)
    return out


def trace_functional(doubled: DoubledHamiltonian, psi: np.ndarray) -> complex:
    """<vec(I)|psi> = Tr unvec(psi); conserved along any Lindblad evolution."""
    return complex(vec_identity(doubled.dim).conj() @ np.asarray(psi).reshape(-1))


def lindblad_rhs(model: LindbladModel, rho: np.ndarray) -> np.ndarray:
    """Right-hand side of the master equation for one density matrix."""
    h = model.hamiltonian
    out = -1j * (h @ rho - rho @ h)
    g = model.gamma
    for L in model.jumps:
        ld = L.conj().T
        ldl = ld @ L
        out += 2.0 * g * (L @ rho @ ld) - g * (ldl @ rho + rho @ ldl)
    return out


class StepSizeError(ValueError):
    """Halving dt moved the RK4 solution more than the validation tolerance."""


def rk4_oracle(model: LindbladModel, rho0: np.ndarray, times, dt: float,
               validate: bool = True, validation_tol: float = DEFAULT_TOLS.trace) -> list[np.ndarray]:
    """Fixed-step fourth-order integration of the master equation.

    Independent of the doubled-space machinery on purpose: the RHS is the
    commutator/jump form acting on the d x d density matrix. Sampled at the
    requested times by stepping with dt and landing a partial step on each
    sample point. validate=True repeats the run at dt/2 and errors if the
    sampled states move by more than validation_tol.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")

    def run(step: float) -> list[np.ndarray]:
        rho = np.asarray(rho0, dtype=complex).copy()
        t_now = 0.0
        sampled = []
        for t_target in np.asarray(times, dtype=float):
            if t_target < t_now - 1e-12:
                raise ValueError("times must be sorted ascending")
            while t_now < t_target - 1e-12:
                h = min(step, t_target - t_now)
                k1 = lindblad_rhs(model, rho)
                k2 = lindblad_rhs(model, rho + 0.5 * h * k1)
                k3 = lindblad_rhs(model, rho + 0.5 * h * k2)
                k4 = lindblad_rhs(model, rho + h * k3)
                rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                t_now += h
            sampled.append(rho.copy())
        return sampled

    coarse = run(dt)
    if validate:
        fine = run(0.5 * dt)
        worst = max(np.max(np.abs(c - f)) for c, f in zip(coarse, fine))
        if worst > validation_tol:
            raise StepSizeError(f"dt={dt} not converged: halving moved states by {worst:.3e}")
        return fine
    return coarse


def check_evolution_invariants(doubled: DoubledHamiltonian, states: list[np.ndarray],
                               trace0: complex, tol: float = DEFAULT_TOLS.trace) -> None:
    """Assert trace conservation, hermiticity and positivity along a trajectory.

    Raises AssertionError with a description on the first violation.
    """
    for k, psi in enumerate(states):
        tr = trace_functional(doubled, psi)
        if abs(tr - trace0) > tol:
            raise AssertionError(f"trace drifted by {abs(tr - trace0):.3e} at sample {k}")
        rho = unvec(psi)
        herm_err = np.max(np.abs(rho - rho.conj().T))
        if herm_err > tol:
            raise AssertionError(f"hermiticity violated by {herm_err:.3e} at sample {k}")
        evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
        if evals.min() < -tol:
            raise AssertionError(f"negativity {evals.min():.3e} at sample {k}")


def doubled_invariant_report(model: LindbladModel, doubled: DoubledHamiltonian,
                             tol_structural: float = DEFAULT_TOLS.structural) -> dict:
    """Structural checks of hs/hd: hermiticity, PSD, vacuum conditions."""
    d = doubled.dim
    ident = vec_identity(d)
    report = {
        "hs_hermitian": is_hermitian(doubled.hs, tol_structural),
        "left_vacuum_residual": float(np.max(np.abs(doubled.hD.conj().T @ ident))),
    }
    if model.all_jumps_hermitian():
        hd_herm = is_hermitian(doubled.hd, 1e-8)
        report["hd_hermitian"] = hd_herm
        if hd_herm:
            report["hd_min_eigenvalue"] = float(
                np.linalg.eigvalsh(0.5 * (doubled.hd + doubled.hd.conj().T)).min())
        report["identity_steady_residual"] = float(np.max(np.abs(doubled.hD @ ident)))
    return report

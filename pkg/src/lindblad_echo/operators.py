"""Dense complex linear algebra and quantum-operator utilities.

Everything here works on plain ``numpy`` arrays: operators are square
complex matrices, vectorized states are 1-D complex arrays of length d**2
using the row-stacking convention rho_{mn} -> component m*d + n.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
import scipy.linalg


@dataclass(frozen=True)
class Tolerances:
    """Central tolerance record shared by all modules.

    structural: exact algebraic identities (hermiticity, unitarity, ...)
    dynamical: cross-method agreement of time evolutions
    trace: trace/positivity drift along an evolution
    cond_threshold: eigenvector condition number above which the
        eigendecomposition propagator path is abandoned
    degeneracy_rel: zero-eigenvalue threshold relative to gamma
    plateau_band: |value - 1| band defining the echo late-time plateau
    min_prominence: minimum dip prominence registered as a local minimum
    """

    structural: float = 1e-10
    dynamical: float = 1e-6
    trace: float = 1e-8
    cond_threshold: float = 1e8
    degeneracy_rel: float = 1e-6
    plateau_band: float = 0.01
    min_prominence: float = 0.005


DEFAULT_TOLS = Tolerances()

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class IllConditionedError(np.linalg.LinAlgError):
    """Eigenvector matrix too ill-conditioned for the spectral path."""


def as_operator(a) -> np.ndarray:
    """Coerce to a square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def is_hermitian(a: np.ndarray, tol: float = DEFAULT_TOLS.structural) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_unitary(a: np.ndarray, tol: float = DEFAULT_TOLS.structural) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))) <= tol)


def is_psd(a: np.ndarray, tol: float = DEFAULT_TOLS.structural) -> bool:
    """Positive semidefinite up to -tol, checked on the hermitized matrix."""
    a = np.asarray(a)
    if not is_hermitian(a, tol=max(tol, 1e-12)):
        return False
    evals = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    return bool(evals.min() >= -tol)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, (A kron B)[(m,n),(i,j)] = A[m,i] B[n,j]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def vec(rho: np.ndarray) -> np.ndarray:
    """Row-stack a matrix into a d**2 vector (component m*d + n = rho[m, n])."""
    return as_operator(rho).reshape(-1)


def unvec(psi: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec`; requires a perfect-square length."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    d = round(np.sqrt(psi.size))
    if d * d != psi.size:
        raise ValueError(f"vector length {psi.size} is not a perfect square")
    return psi.reshape(d, d)


def vec_identity(d: int) -> np.ndarray:
    """vec(I_d), the trace functional / EPR direction of the doubled space."""
    return np.eye(d, dtype=complex).reshape(-1)


def spectral_decomposition(a: np.ndarray, cond_threshold: float = DEFAULT_TOLS.cond_threshold):
    """Diagonalize a (generally non-Hermitian) matrix as a = V diag(w) Vinv.

    Raises IllConditionedError when the eigenvector matrix condition number
    exceeds ``cond_threshold``; callers fall back to scaling-and-squaring.
    """
    a = as_operator(a)
    w, v = np.linalg.eig(a)
    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond > cond_threshold:
        raise IllConditionedError(f"eigenvector condition number {cond:.3e}")
    vinv = np.linalg.inv(v)
    return w, v, vinv


def mat_func_propagator(a: np.ndarray, t: float,
                        cond_threshold: float = DEFAULT_TOLS.cond_threshold) -> np.ndarray:
    """exp(-i*a*t) for general complex square a.

    Eigendecomposition when a is diagonalizable within the conditioning
    threshold, otherwise scipy's scaling-and-squaring Pade approximant.
    """
    a = as_operator(a)
    try:
        w, v, vinv = spectral_decomposition(a, cond_threshold)
    except IllConditionedError:
        return scipy.linalg.expm(-1j * t * a)
    return (v * np.exp(-1j * w * t)) @ vinv


def partial_trace(op: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Trace out one tensor factor of an operator on A (x) B.

    dims = (dA, dB) with the A factor first; keep is "A" or "B".
    """
    da, db = dims
    op = as_operator(op)
    if op.shape[0] != da * db:
        raise ValueError(f"dim {op.shape[0]} != {da}*{db}")
    four = op.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ibjb->ij", four)
    if keep == "B":
        return np.einsum("aiaj->ij", four)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def haar_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def pauli_basis(n_qubits: int) -> list[np.ndarray]:
    """All 4**n Pauli strings on n qubits, lexicographic in (I, X, Y, Z).

    Unitary, pairwise trace-orthogonal: Tr(Pi^dag Pj) = d delta_ij.
    """
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    singles = [PAULI_I, PAULI_X, PAULI_Y, PAULI_Z]
    strings = []
    for combo in product(singles, repeat=n_qubits):
        m = combo[0]
        for factor in combo[1:]:
            m = np.kron(m, factor)
        strings.append(m)
    return strings


def embed_on_subsystem(op: np.ndarray, dims: tuple[int, int], subsystem: str) -> np.ndarray:
    """Lift an operator on A or B to A (x) B (A-first layout)."""
    da, db = dims
    op = as_operator(op)
    if subsystem == "A":
        if op.shape[0] != da:
            raise ValueError(f"operator dim {op.shape[0]} != dA={da}")
        return np.kron(op, np.eye(db, dtype=complex))
    if subsystem == "B":
        if op.shape[0] != db:
            raise ValueError(f"operator dim {op.shape[0]} != dB={db}")
        return np.kron(np.eye(da, dtype=complex), op)
    raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")

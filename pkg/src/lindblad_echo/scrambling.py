"""Open-system OTOC machinery: operator Lindblad evolutions, exact and
sampled twirl averages, the OTOC-purity identity, and the five-step
measurement protocol.

Operator evolutions act on vec(R) through d**2-dimensional generators built
from the same Kronecker formula as the doubled space, with the commutator
sign and the left/right roles of the jump operators swapped per equation:

forward          dR/dt = +i[H,R] + 2g sum L^dag R L - g sum {L^dag L, R}
backward         dR/dt = -i[H,R] + 2g sum L^dag R L - g sum {L^dag L, R}
adjoint          dR/dt = -i[H,R] + 2g sum L R L^dag - g sum {L^dag L, R}
adjoint_backward dR/dt = +i[H,R] + 2g sum L R L^dag - g sum {L^dag L, R}

"adjoint" is the trace dual of "forward" (Tr[R e^{Lt}[W]] = Tr[e^{L~t}[R] W]);
with Hermitian jumps adjoint_backward coincides with forward.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .doubled import build_doubled
from .models import LindbladModel
from .operators import (
    as_operator,
    haar_unitary,
    is_hermitian,
    mat_func_propagator,
    partial_trace,
    pauli_basis,
    unvec,
    vec,
)

EVOLUTION_KINDS = ("forward", "backward", "adjoint", "adjoint_backward")


class SupportError(ValueError):
    """Operator is not of the required single-subsystem product form."""


@dataclass(frozen=True)
class BipartiteSplit:
    """A-first bipartition of a d = dA*dB Hilbert space."""

    dA: int
    dB: int

    @property
    def d(self) -> int:
        return self.dA * self.dB

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dA, self.dB)

    def n_qubits(self, subsystem: str) -> int:
        d = self.dA if subsystem == "A" else self.dB
        n = d.bit_length() - 1
        if 2 ** n != d:
            raise ValueError(f"subsystem {subsystem} (dim {d}) is not qubit-factorable")
        return n


@dataclass(frozen=True)
class NoiseEnsemble:
    """Gaussian Hermitian noise operators standing in for a traced-out coupling."""

    n_samples: int
    strength: float
    seed: int
    kind: str = "gaussian_hermitian"

    def sample(self, dim: int) -> list[np.ndarray]:
        if self.kind != "gaussian_hermitian":
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.strength < 0:
            raise ValueError("noise strength must be >= 0")
        rng = np.random.Generator(np.random.PCG64(self.seed))
        out = []
        for _ in range(self.n_samples):
            a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            out.append(self.strength * 0.5 * (a + a.conj().T))
        return out


def operator_generator(model: LindbladModel, kind: str,
                       fermionic_sign: bool = False) -> np.ndarray:
    """d**2 x d**2 generator G with vec(dR/dt) = G vec(R) for the given kind."""
    if kind not in EVOLUTION_KINDS:
        raise ValueError(f"kind must be one of {EVOLUTION_KINDS}, got {kind!r}")
    if fermionic_sign and kind != "forward":
        raise ValueError("the fermionic sign flag applies to the forward equation only")
    h = model.hamiltonian
    d = model.dim
    eye = np.eye(d, dtype=complex)
    ham_sign = 1.0 if kind in ("forward", "adjoint_backward") else -1.0
    g = ham_sign * 1j * (np.kron(h, eye) - np.kron(eye, h.T))
    recycle_sign = -1.0 if fermionic_sign else 1.0
    for L in model.jumps:
        ldl = L.conj().T @ L
        if kind in ("forward", "backward"):
            recycle = np.kron(L.conj().T, L.T)
        else:
            recycle = np.kron(L, L.conj())
        g += model.gamma * (2.0 * recycle_sign * recycle
                            - np.kron(ldl, eye) - np.kron(eye, ldl.T))
    return g


def operator_propagator(model: LindbladModel, t: float, kind: str,
                        fermionic_sign: bool = False) -> np.ndarray:
    """exp(G*t) for the requested operator-evolution kind."""
    g = operator_generator(model, kind, fermionic_sign)
    return mat_func_propagator(1j * g, t)


def _evolve(model: LindbladModel, r: np.ndarray, t: float, kind: str,
            fermionic_sign: bool = False) -> np.ndarray:
    r = as_operator(r)
    if r.shape[0] != model.dim:
        raise ValueError("operator dimension does not match the model")
    prop = operator_propagator(model, t, kind, fermionic_sign)
    return unvec(prop @ vec(r))


def op_evolve_forward(model: LindbladModel, r: np.ndarray, t: float,
                      fermionic_sign: bool = False) -> np.ndarray:
    return _evolve(model, r, t, "forward", fermionic_sign)


def op_evolve_backward(model: LindbladModel, r: np.ndarray, t: float) -> np.ndarray:
    return _evolve(model, r, t, "backward")


def op_evolve_adjoint(model: LindbladModel, r: np.ndarray, t: float) -> np.ndarray:
    return _evolve(model, r, t, "adjoint")


def local_factor(op: np.ndarray, split: BipartiteSplit, subsystem: str,
                 tol: float = 1e-9) -> np.ndarray:
    """Extract W from op = W (x) I_B (or I_A (x) W); raise SupportError otherwise."""
    op = as_operator(op)
    if op.shape[0] != split.d:
        raise ValueError("operator dimension does not match the split")
    if subsystem == "A":
        w = partial_trace(op, split.dims, keep="A") / split.dB
        rebuilt = np.kron(w, np.eye(split.dB))
    else:
        w = partial_trace(op, split.dims, keep="B") / split.dA
        rebuilt = np.kron(np.eye(split.dA), w)
    scale = max(1.0, float(np.max(np.abs(op))))
    if np.max(np.abs(op - rebuilt)) > tol * scale:
        raise SupportError(f"operator is not supported on subsystem {subsystem} alone")
    return w


def otoc_open(model: LindbladModel, w_a: np.ndarray, r_b: np.ndarray,
              split: BipartiteSplit, t: float) -> complex:
    """F(t) = (1/d) Tr{ R_B^dag backward_t[ W_A^dag forward_t[R_B] W_A ] }.

    W_A and R_B must be product-form operators supported on A and B.
    At gamma = 0 this reduces to the closed four-point correlator at
    infinite temperature.
    """
    local_factor(w_a, split, "A")
    local_factor(r_b, split, "B")
    w_a = as_operator(w_a)
    r_b = as_operator(r_b)
    inner = op_evolve_forward(model, r_b, t)
    echoed = op_evolve_backward(model, w_a.conj().T @ inner @ w_a, t)
    return complex(np.trace(r_b.conj().T @ echoed) / split.d)


def _real_or_raise(value: complex, tol: float = 1e-9) -> float:
    if abs(value.imag) > tol * max(1.0, abs(value.real)):
        raise ValueError(f"expected a real result, got imaginary part {value.imag:.3e}")
    return float(value.real)


def haar_average_W_samples(model: LindbladModel, r_b: np.ndarray, split: BipartiteSplit,
                           t: float, n_samples: int, seed: int = 0) -> np.ndarray:
    """Monte-Carlo samples of the OTOC over Haar-random W_A (complex array)."""
    local_factor(r_b, split, "B")
    r_b = as_operator(r_b)
    inner = op_evolve_forward(model, r_b, t)
    back = operator_propagator(model, t, "backward")
    rng = np.random.default_rng(seed)
    eye_b = np.eye(split.dB, dtype=complex)
    out = np.empty(n_samples, dtype=complex)
    for k in range(n_samples):
        w = np.kron(haar_unitary(split.dA, rng), eye_b)
        echoed = unvec(back @ vec(w.conj().T @ inner @ w))
        out[k] = np.trace(r_b.conj().T @ echoed) / split.d
    return out


def haar_average_W(model: LindbladModel, r_b: np.ndarray, split: BipartiteSplit,
                   t: float, method: str = "exact", n_samples: int = 10_000,
                   seed: int = 0) -> float:
    """Average of the open OTOC over unitaries on A.

    exact: partial-trace twirl formula,
           (1/(d*dA)) Tr_B{ Tr_A(adjoint_backward_t[R_B^dag]) Tr_A(forward_t[R_B]) };
    pauli: mean of otoc_open over the 4**n_A Pauli strings on A (identical to
           exact, the Pauli set being a unitary 1-design);
    montecarlo: mean over Haar samples (real part; the estimand is real).
    """
    if method == "exact":
        local_factor(r_b, split, "B")
        r_b = as_operator(r_b)
        fwd = op_evolve_forward(model, r_b, t)
        adj_back = _evolve(model, r_b.conj().T, t, "adjoint_backward")
        na = partial_trace(adj_back, split.dims, keep="B")
        nb = partial_trace(fwd, split.dims, keep="B")
        return _real_or_raise(complex(np.trace(na @ nb)) / (split.d * split.dA))
    if method == "pauli":
        local_factor(r_b, split, "B")
        r_b = as_operator(r_b)
        inner = op_evolve_forward(model, r_b, t)
        back = operator_propagator(model, t, "backward")
        eye_b = np.eye(split.dB, dtype=complex)
        total = 0.0 + 0.0j
        strings = pauli_basis(split.n_qubits("A"))
        for p in strings:
            w = np.kron(p, eye_b)
            echoed = unvec(back @ vec(w.conj().T @ inner @ w))
            total += np.trace(r_b.conj().T @ echoed) / split.d
        return _real_or_raise(total / len(strings))
    if method == "montecarlo":
        samples = haar_average_W_samples(model, r_b, split, t, n_samples, seed)
        return float(samples.real.mean())
    raise ValueError(f"method must be exact|pauli|montecarlo, got {method!r}")


def _transpose_permutation(d: int) -> np.ndarray:
    """Permutation T on C^{d**2} with T vec(X) = vec(X^T)."""
    perm = np.zeros((d * d, d * d))
    for m in range(d):
        for n in range(d):
            perm[m * d + n, n * d + m] = 1.0
    return perm


def _reduced_map_matrices(model: LindbladModel, split: BipartiteSplit,
                          t: float) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of r -> Tr_A(forward_t[I_A (x) r]) and the adjoint_backward twin."""
    fwd = operator_propagator(model, t, "forward")
    adjb = operator_propagator(model, t, "adjoint_backward")
    db = split.dB
    f_mat = np.empty((db * db, db * db), dtype=complex)
    g_mat = np.empty((db * db, db * db), dtype=complex)
    eye_a = np.eye(split.dA, dtype=complex)
    for k in range(db * db):
        unit = np.zeros((db, db), dtype=complex)
        unit[k // db, k % db] = 1.0
        lifted = vec(np.kron(eye_a, unit))
        f_mat[:, k] = vec(partial_trace(unvec(fwd @ lifted), split.dims, keep="B"))
        g_mat[:, k] = vec(partial_trace(unvec(adjb @ lifted), split.dims, keep="B"))
    return f_mat, g_mat


def average_otoc_AB(model: LindbladModel, split: BipartiteSplit, t: float) -> float:
    """OTOC averaged exactly over unitaries on both A and B.

    Collapses to a trace of reduced doubled-space propagators:
    (1/(d*dA*dB)) Tr[K^dag F] with F the reduced forward map and
    K = T conj(G) T the dagger-conjugated reduced adjoint_backward map.
    Equals the nested Pauli-string double average of otoc_open.
    """
    split.n_qubits("A")
    split.n_qubits("B")
    f_mat, g_mat = _reduced_map_matrices(model, split, t)
    perm = _transpose_permutation(split.dB)
    k_mat = perm @ g_mat.conj() @ perm
    value = complex(np.trace(k_mat.conj().T @ f_mat)) / (split.d * split.dA * split.dB)
    return _real_or_raise(value)


def pauli_double_average_otoc(model: LindbladModel, split: BipartiteSplit,
                              t: float) -> complex:
    """Brute-force nested Pauli mean of otoc_open over both subsystems."""
    strings_a = pauli_basis(split.n_qubits("A"))
    strings_b = pauli_basis(split.n_qubits("B"))
    eye_a = np.eye(split.dA, dtype=complex)
    eye_b = np.eye(split.dB, dtype=complex)
    total = 0.0 + 0.0j
    for pb in strings_b:
        r_b = np.kron(eye_a, pb)
        inner = op_evolve_forward(model, r_b, t)
        back = operator_propagator(model, t, "backward")
        for pa in strings_a:
            w = np.kron(pa, eye_b)
            echoed = unvec(back @ vec(w.conj().T @ inner @ w))
            total += np.trace(r_b.conj().T @ echoed) / split.d
    return complex(total / (len(strings_a) * len(strings_b)))


@dataclass(frozen=True)
class NoiseAveragedLE:
    mean: float
    stderr: float
    n_pairs: int


def noise_averaged_le(model_b: LindbladModel, noise: NoiseEnsemble, t: float) -> NoiseAveragedLE:
    """Noise-averaged unnormalized echo of doubled-space propagator pairs.

    Each noise draw V shifts the Hamiltonian; a pair (a, a') contributes
    |Tr[P_a^dag P_a']| / dB**2 with P = exp(-i (hD + V (x) I - I (x) V^T) t).
    All ordered pairs (including a = a') enter the mean; the standard error
    treats pair values as samples and is a rough bar only.
    """
    if noise.n_samples < 2:
        raise ValueError("need at least 2 noise samples")
    hd_full = build_doubled(model_b).hD
    db = model_b.dim
    eye = np.eye(db, dtype=complex)
    props = []
    for v in noise.sample(db):
        v_doubled = np.kron(v, eye) - np.kron(eye, v.T)
        props.append(mat_func_propagator(hd_full + v_doubled, t))
    vals = []
    for pa in props:
        for pb in props:
            vals.append(abs(np.vdot(pa, pb)) / db**2)
    vals = np.asarray(vals)
    stderr = float(vals.std(ddof=1) / np.sqrt(vals.size)) if vals.size > 1 else 0.0
    return NoiseAveragedLE(mean=float(vals.mean()), stderr=stderr, n_pairs=int(vals.size))


def otoc_renyi_check(model: LindbladModel, op: np.ndarray, split: BipartiteSplit,
                     t: float) -> tuple[float, float]:
    """Both sides of the purity-OTOC identity for a quench V = O O^dag / Tr.

    lhs: exp(-S2_A) = Tr_A[rho_A(t)^2] with rho_A(t) = Tr_B forward_t[V].
    rhs: dB * (Pauli-mean over R_B of Tr{ V backward_t[R_B^dag forward_t[V] R_B] }).
    The dB scale is the normalization under which the identity is exact.
    Requires Hermitian jump operators.
    """
    if not model.all_jumps_hermitian(tol=1e-10):
        raise ValueError("the identity requires Hermitian jump operators")
    op = as_operator(op)
    v = op @ op.conj().T
    tr = np.trace(v).real
    if tr <= 0:
        raise ValueError("O O^dag has nonpositive trace")
    v = v / tr
    v_t = op_evolve_forward(model, v, t)
    rho_a = partial_trace(v_t, split.dims, keep="A")
    lhs = float(np.real(np.trace(rho_a @ rho_a)))

    back = operator_propagator(model, t, "backward")
    eye_a = np.eye(split.dA, dtype=complex)
    strings = pauli_basis(split.n_qubits("B"))
    total = 0.0 + 0.0j
    for p in strings:
        r_b = np.kron(eye_a, p)
        echoed = unvec(back @ vec(r_b.conj().T @ v_t @ r_b))
        total += np.trace(v.conj().T @ echoed)
    rhs = _real_or_raise(total / len(strings)) * split.dB
    return lhs, rhs


def protocol_simulate(model: LindbladModel, w_a: np.ndarray, m_b: np.ndarray,
                      split: BipartiteSplit, t: float) -> float:
    """Five-step echo protocol: polarization state, forward evolution,
    perturbation by W_A, backward evolution, measurement of M_B.

    Returns Tr[rho_2 M_B], which equals d * otoc_open(model, W_A, M_B, t).
    """
    m_b = as_operator(m_b)
    if not is_hermitian(m_b, tol=1e-10):
        raise ValueError("M_B must be Hermitian")
    local_factor(m_b, split, "B")
    local_factor(w_a, split, "A")
    w_a = as_operator(w_a)
    rho = m_b                                      # step 1: rho_0 ~ M_B
    rho = op_evolve_forward(model, rho, t)         # step 2
    rho = w_a.conj().T @ rho @ w_a                 # step 3
    rho = op_evolve_backward(model, rho, t)        # step 4
    return _real_or_raise(complex(np.trace(rho @ m_b)))   # step 5

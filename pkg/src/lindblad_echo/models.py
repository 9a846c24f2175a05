"""Physical models: Majorana operators, the SYK Hamiltonian, and Lindblad models.

Majorana normalization is {chi_i, chi_j} = delta_ij * I (so chi**2 = I/2),
realized by a Jordan-Wigner string construction on N/2 qubits.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .operators import (
    DEFAULT_TOLS,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    as_operator,
    is_hermitian,
)

SYK_Q = 4  # quartic interactions only


class DegenerateGroundWarning(UserWarning):
    """Ground level is degenerate within tolerance; a deterministic member is returned."""


@dataclass
class LindbladModel:
    """Hamiltonian + jump operators + dissipation strength gamma.

    The master equation convention carries an explicit factor 2*gamma on the
    recycling term and gamma on the anticommutator:
    drho/dt = -i[H, rho] + 2*gamma*sum_m L_m rho L_m^dag
              - gamma*sum_m {L_m^dag L_m, rho}.
    """

    hamiltonian: np.ndarray
    jumps: list
    gamma: float

    def __post_init__(self):
        self.hamiltonian = as_operator(self.hamiltonian)
        self.jumps = [as_operator(L) for L in self.jumps]
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if not is_hermitian(self.hamiltonian, tol=1e-8):
            raise ValueError("hamiltonian must be Hermitian")
        for L in self.jumps:
            if L.shape != self.hamiltonian.shape:
                raise ValueError("all jumps must match the Hamiltonian dimension")

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def all_jumps_hermitian(self, tol: float = DEFAULT_TOLS.structural) -> bool:
        return all(is_hermitian(L, tol) for L in self.jumps)

    def with_gamma(self, gamma: float) -> "LindbladModel":
        return LindbladModel(self.hamiltonian, list(self.jumps), gamma)


def majorana_ops(n_majorana: int) -> list[np.ndarray]:
    """N Majorana operators on N/2 qubits via Jordan-Wigner strings.

    chi_{2k-1} = Z_1 ... Z_{k-1} X_k / sqrt(2),
    chi_{2k}   = Z_1 ... Z_{k-1} Y_k / sqrt(2).
    """
    if n_majorana % 2 != 0 or n_majorana < 2:
        raise ValueError("number of Majorana operators must be even and >= 2")
    n_qubits = n_majorana // 2
    dim = 2 ** n_qubits
    ops = []
    for idx in range(n_majorana):
        site = idx // 2
        tail = PAULI_X if idx % 2 == 0 else PAULI_Y
        m = np.ones((1, 1), dtype=complex)
        for q in range(n_qubits):
            if q < site:
                m = np.kron(m, PAULI_Z)
            elif q == site:
                m = np.kron(m, tail)
            else:
                m = np.kron(m, np.eye(2, dtype=complex))
        ops.append(m / np.sqrt(2.0))
    assert ops[0].shape == (dim, dim)
    return ops


def coupling_variance(n_majorana: int, j_scale: float, convention: str = "paper") -> float:
    """Variance of the Gaussian quartic couplings.

    "paper" carries the duplicated factorial, 3! * J^2 * (q-1)! / N^3 = 36 J^2/N^3;
    "standard" is the more common 3! * J^2 / N^3.
    """
    if convention == "paper":
        return math.factorial(3) * math.factorial(SYK_Q - 1) * j_scale**2 / n_majorana**3
    if convention == "standard":
        return math.factorial(SYK_Q - 1) * j_scale**2 / n_majorana**3
    raise ValueError(f"unknown variance convention {convention!r}")


@dataclass
class SykEnsemble:
    """One disorder realization of the quartic all-to-all random Hamiltonian."""

    n_majorana: int
    j_scale: float
    seed: int
    variance_convention: str = "paper"
    couplings: dict = field(init=False)

    def __post_init__(self):
        if self.n_majorana % 2 != 0:
            raise ValueError("n_majorana must be even")
        quads = list(combinations(range(self.n_majorana), SYK_Q))
        sigma = np.sqrt(coupling_variance(self.n_majorana, self.j_scale, self.variance_convention))
        rng = np.random.Generator(np.random.PCG64(self.seed))
        draws = rng.normal(loc=0.0, scale=sigma, size=len(quads))
        self.couplings = dict(zip(quads, draws))


def syk_hamiltonian(ens: SykEnsemble) -> np.ndarray:
    """H = sum_{i<j<k<l} J_{ijkl} chi_i chi_j chi_k chi_l."""
    chi = majorana_ops(ens.n_majorana)
    dim = chi[0].shape[0]
    h = np.zeros((dim, dim), dtype=complex)
    for (i, j, k, l), coeff in ens.couplings.items():
        h += coeff * (chi[i] @ chi[j] @ chi[k] @ chi[l])
    return h


def dissipative_syk(ens: SykEnsemble, gamma: float, sites: str = "all") -> LindbladModel:
    """Dissipative SYK model with single-Majorana jump operators.

    sites="all" couples every chi_j to the bath; sites="half" couples only
    the first N/2 (degenerate dissipative ground space in the doubled picture).
    """
    chi = majorana_ops(ens.n_majorana)
    if sites == "all":
        jumps = chi
    elif sites == "half":
        if ens.n_majorana % 2 != 0:
            raise ValueError("half-site dissipation needs even N")
        jumps = chi[: ens.n_majorana // 2]
    else:
        raise ValueError(f"sites must be 'all' or 'half', got {sites!r}")
    return LindbladModel(syk_hamiltonian(ens), list(jumps), gamma)


def majorana_string_basis(n_majorana: int, parity: str = "even") -> np.ndarray:
    """Orthonormal vectorized Majorana strings of fixed parity.

    Returns a (d**2, 2**(N-1)) matrix whose columns are normalized vec(chi_S)
    with |S| even (or odd). The even sector is invariant under any Lindblad
    generator built from an even Hamiltonian and single-Majorana jumps, and it
    is where fermion-parity-symmetric density matrices live.
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    chi = majorana_ops(n_majorana)
    dim = chi[0].shape[0]
    rem = 0 if parity == "even" else 1
    cols = []
    for r in range(n_majorana + 1):
        if r % 2 != rem:
            continue
        for subset in combinations(range(n_majorana), r):
            m = np.eye(dim, dtype=complex)
            for i in subset:
                m = m @ chi[i]
            v = m.reshape(-1)
            cols.append(v / np.linalg.norm(v))
    return np.array(cols).T


def ground_state(h: np.ndarray, gap_tol: float = 1e-10) -> np.ndarray:
    """Pure density matrix of the minimal-eigenvalue eigenvector.

    Deterministic tie-breaking: lowest eigenvalue index, phase fixed so the
    first nonzero amplitude is real positive. Warns (DegenerateGroundWarning)
    when the ground gap is below gap_tol.
    """
    h = as_operator(h)
    if not is_hermitian(h, tol=1e-8):
        raise ValueError("ground_state requires a Hermitian matrix")
    evals, evecs = np.linalg.eigh(h)
    if h.shape[0] > 1 and evals[1] - evals[0] < gap_tol:
        warnings.warn("ground level degenerate within tolerance; returning the "
                      "deterministic lowest-index member", DegenerateGroundWarning)
    g = evecs[:, 0]
    nz = np.flatnonzero(np.abs(g) > 1e-12 * np.abs(g).max())
    g = g * (np.abs(g[nz[0]]) / g[nz[0]])
    return np.outer(g, g.conj())


def model_to_json(n_majorana: int, j_scale: float, seed: int, gamma: float,
                  sites: str, variance_convention: str = "paper") -> str:
    """Serialize the ensemble parameters that reproduce a dissipative SYK model."""
    return json.dumps({
        "model": "dissipative_syk",
        "N": n_majorana,
        "J": j_scale,
        "seed": seed,
        "gamma": gamma,
        "sites": sites,
        "variance_convention": variance_convention,
    }, indent=2, sort_keys=True)


def model_from_json(text: str) -> LindbladModel:
    """Rebuild a dissipative SYK model from :func:`model_to_json` output."""
    payload = json.loads(text)
    if payload.get("model") != "dissipative_syk":
        raise ValueError(f"unsupported model record {payload.get('model')!r}")
    ens = SykEnsemble(payload["N"], payload["J"], payload["seed"],
                      variance_convention=payload.get("variance_convention", "paper"))
    return dissipative_syk(ens, payload["gamma"], sites=payload["sites"])

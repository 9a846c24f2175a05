"""Lindblad spectrum: eigenvalues of hD, imaginary-axis segmentation, and
the zero-eigenvalue multiplicity of the dissipative part hd."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .doubled import DoubledHamiltonian
from .operators import DEFAULT_TOLS, is_hermitian


@dataclass
class SpectrumSegment:
    center_imag: float
    width_imag: float
    count: int


@dataclass
class SpectrumReport:
    """Eigenvalues of hD plus their segmentation along the imaginary axis."""

    eigenvalues: np.ndarray
    segments: list = field(default_factory=list)
    hd_zero_degeneracy: int = 0
    gap_ratio: float = 1.0
    segmented: bool = False

    def to_json(self) -> str:
        return json.dumps({
            "eigenvalues": [[float(ev.real), float(ev.imag)] for ev in self.eigenvalues],
            "segments": [{"center_imag": s.center_imag, "width_imag": s.width_imag,
                          "count": s.count} for s in self.segments],
            "hd_zero_degeneracy": self.hd_zero_degeneracy,
            "gap_ratio": self.gap_ratio,
            "segmented": self.segmented,
        }, indent=2)


def lindblad_spectrum(doubled: DoubledHamiltonian) -> np.ndarray:
    """All eigenvalues of hD, sorted by descending imaginary part.

    Under the exp(-i*hD*t) convention every eigenvalue sits in the closed
    lower half-plane; zero modes are steady states.
    """
    eigs = doubled.eigenvalues()
    return eigs[np.argsort(-eigs.imag, kind="stable")]


def segment_spectrum(eigs: np.ndarray, gamma: float,
                     j_scale: float = 1.0) -> tuple[list[SpectrumSegment], float, bool]:
    """1-D clustering of imaginary parts with gap threshold max(gamma, J)/2.

    Imaginary-axis gaps only resolve the strong-regime segment structure when
    they beat both half the dissipative spacing (~gamma) and half the
    Hamiltonian scale J; in the weak regime the threshold therefore merges
    everything into one cluster. Returns (segments, gap_ratio, segmented);
    gap_ratio is the smallest inter-segment gap over the largest intra-segment
    width, reported as 1.0 with segmented=False for a single cluster.
    """
    if gamma <= 0:
        raise ValueError("segmentation needs gamma > 0")
    if j_scale < 0:
        raise ValueError("j_scale must be >= 0")
    imag = np.sort(np.asarray(eigs).imag)
    gaps = np.diff(imag)
    cut_after = np.flatnonzero(gaps > 0.5 * max(gamma, j_scale))
    bounds = [0, *list(cut_after + 1), imag.size]
    segments = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        chunk = imag[lo:hi]
        segments.append(SpectrumSegment(
            center_imag=float(chunk.mean()),
            width_imag=float(chunk.max() - chunk.min()),
            count=int(chunk.size),
        ))
    segments.sort(key=lambda s: -s.center_imag)
    if len(segments) < 2:
        return segments, 1.0, False
    inter = []
    for a, b in zip(segments[:-1], segments[1:]):
        top_of_lower = b.center_imag + 0.5 * b.width_imag
        bottom_of_upper = a.center_imag - 0.5 * a.width_imag
        inter.append(bottom_of_upper - top_of_lower)
    max_width = max(s.width_imag for s in segments)
    if max_width == 0.0:
        gap_ratio = float("inf")
    else:
        gap_ratio = float(min(inter) / max_width)
    return segments, gap_ratio, True


def hd_ground_degeneracy(doubled: DoubledHamiltonian, gamma: float,
                         rel_tol: float = DEFAULT_TOLS.degeneracy_rel,
                         sector_basis: np.ndarray | None = None) -> int:
    """Multiplicity of the hd zero level: eigenvalues below rel_tol*gamma.

    Requires Hermitian hd (all jumps Hermitian); > 1 signals the degenerate
    dissipative ground space behind the two-minima echo structure.

    sector_basis, when given, must hold orthonormal columns spanning an
    hd-invariant subspace; counting is then restricted to it. For fermionic
    models the parity-even string sector is the one density matrices of
    parity-symmetric states occupy, and the raw kernel also contains
    parity-odd strings that never couple to such states.
    """
    if not is_hermitian(doubled.hd, tol=1e-8):
        raise ValueError("hd is not Hermitian; degeneracy counting needs Hermitian jumps")
    if gamma <= 0:
        raise ValueError("degeneracy threshold is relative to gamma > 0")
    hd = 0.5 * (doubled.hd + doubled.hd.conj().T)
    if sector_basis is not None:
        b = np.asarray(sector_basis)
        hd = b.conj().T @ hd @ b
        hd = 0.5 * (hd + hd.conj().T)
    evals = np.linalg.eigvalsh(hd)
    return int(np.count_nonzero(evals < rel_tol * gamma))


def spectrum_report(doubled: DoubledHamiltonian, gamma: float, j_scale: float = 1.0,
                    hermitian_jumps: bool = True,
                    sector_basis: np.ndarray | None = None) -> SpectrumReport:
    """Full spectrum analysis: eigenvalues, segmentation, hd degeneracy."""
    eigs = lindblad_spectrum(doubled)
    segments, gap_ratio, segmented = segment_spectrum(eigs, gamma, j_scale)
    degeneracy = (hd_ground_degeneracy(doubled, gamma, sector_basis=sector_basis)
                  if hermitian_jumps else 0)
    return SpectrumReport(eigenvalues=eigs, segments=segments,
                          hd_zero_degeneracy=degeneracy, gap_ratio=gap_ratio,
                          segmented=segmented)


def eigenvalues_to_csv(path, eigs: np.ndarray) -> None:
    """Write the spectrum CSV contract: header re,im, one eigenvalue per row."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("re,im\n")
        for ev in np.asarray(eigs):
            fh.write(f"{ev.real:.12g},{ev.imag:.12g}\n")

"""Loschmidt echo, OTOC, and Lindblad-spectrum toolkit for dissipative quantum systems."""

__version__ = "0.1.0"

from .echo import (
    EchoFeatures,
    TimeSeries,
    check_scalings,
    closed_le,
    extract_features,
    generalized_le,
    le_time_series,
    relative_purity,
    renyi2,
)
from .doubled import DoubledHamiltonian, build_doubled, propagate, rk4_oracle
from .models import (
    LindbladModel,
    SykEnsemble,
    dissipative_syk,
    ground_state,
    majorana_ops,
    syk_hamiltonian,
)
from .operators import (
    DEFAULT_TOLS,
    Tolerances,
    haar_unitary,
    kron,
    mat_func_propagator,
    partial_trace,
    pauli_basis,
    unvec,
    vec,
)
from .scrambling import (
    BipartiteSplit,
    NoiseEnsemble,
    average_otoc_AB,
    haar_average_W,
    noise_averaged_le,
    op_evolve_adjoint,
    op_evolve_backward,
    op_evolve_forward,
    otoc_open,
    otoc_renyi_check,
    protocol_simulate,
)
from .spectrum import SpectrumReport, hd_ground_degeneracy, lindblad_spectrum, segment_spectrum

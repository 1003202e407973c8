"""Two-qubit entanglement dynamics: the signed separability distance Lambda,
concurrence, dephasing and double Jaynes-Cummings evolution, and detection
of entanglement sudden death."""

from .dephasing import DephasingParams, dephase, esd_time_dephasing, lambda_dephasing_closed
from .entanglement import (
    LambdaResult,
    concurrence,
    lambda_distance,
    lambda_x_closed,
    negativity,
    spin_flip_product,
)
from .esd import Classification, CrossingReport, Trajectory, analyze, find_crossings, sample
from .jc import (
    JCInitialFamily,
    JCParams,
    JCSimulator,
    build_hamiltonian,
    esd_onset_jc_phi,
    lambda_jc_phi,
    lambda_jc_psi,
    simulate,
)
from .linalg import eig4_general, eig_hermitian, kron
from .state import (
    DensityMatrix,
    XStateParams,
    from_pure,
    partial_trace,
    partial_transpose,
    purity,
    x_state,
)

__version__ = "0.1.0"

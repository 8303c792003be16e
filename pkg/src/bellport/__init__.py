"""Simulation of single photons interfering in a Bell multiport beam splitter with one-photon-per-port postselection."""

from bellport.analysis import (
    DecompositionResult,
    StateKind,
    apply_local_pauli,
    canonical_state,
    decompose_general4,
    fidelity,
)
from bellport.errors import (
    BellportError,
    ConfigurationError,
    EmptyStateError,
    InsufficientDataError,
    InvalidDimensionError,
    InvalidIndexError,
    ParseError,
    SizeLimitError,
)
from bellport.matrixcore import TransitionMatrix, build_bell_multiport, check_unitary, reduced_matrix
from bellport.permanent import permanent_fast, permanent_naive
from bellport.scattering import (
    FockOccupation,
    InputConfiguration,
    PhotonState,
    PostselectedState,
    normalize,
    oracle_full_expansion,
    postselect,
    success_probability,
    w_input,
)
from bellport.sweep import FitResult, SweepRecord, fit_exponential, sweep_w_success

__version__ = "0.1.0"

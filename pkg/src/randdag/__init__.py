"""Uniform random acyclic digraphs, unrestricted or connected, by Markov chain."""
from .chain import (
    CONNECTED,
    UNRESTRICTED,
    ChainConfig,
    MarkovChain,
    TransitionOutcome,
    default_start,
    run_chain,
    step_connected,
    step_unrestricted,
)
from .dag import Dag, UndirectedView, is_connected, is_disconnecting, would_create_circuit
from .exceptions import ConfigError, InputError, OracleLimitError
from .oracle import (
    StateSpace,
    TransitionMatrix,
    build_matrix,
    check_convergence,
    check_irreducible,
    check_symmetric,
    diameter,
    enumerate_space,
    path_length_bound,
)
from .proofpath import PathCertificate, build_path
from .stats import SampleSummary, arc_count_profile, chi_square_uniform, sample_chain

__version__ = "0.1.0"

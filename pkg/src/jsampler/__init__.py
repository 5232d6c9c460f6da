"""Statevector simulator and metrics toolkit for layered chain-sampler circuits.

The package simulates the Josephson-sampler family of circuits (columns of
single-qubit rotations interleaved with nearest-neighbor CZ gates on a chain)
and evaluates the quantities used to benchmark them: state and information
fidelity, sampling statistics, purity-based entanglement measures with Haar
and Page references, Porter-Thomas chaos signatures, and out-of-time-order
correlators with stochastic trace estimation.
"""

from .chaos import (
    OtocRecord,
    PtHistogram,
    otoc_f_exact,
    otoc_f_stochastic,
    otoc_g,
    otoc_g_all,
    otoc_ratio,
    otoc_record,
    pt_entropy,
    pt_histogram,
    wvvw_average,
    wvvw_correlator,
)
from .circuit import (
    ENSEMBLES,
    ControlledZ,
    Rotation,
    RotationDagger,
    SamplerSpec,
    apply_gates,
    apply_inverse_sampler,
    apply_sampler,
    build_circuit,
    build_layer,
    circuit_unitary,
    inverse_gates,
    param_count,
    random_params,
    random_spec,
    sampler_state,
)
from .embedding import JosephsonEmbedding
from .entanglement import (
    EntanglementReport,
    HaarReferenceSample,
    entanglement_entropy,
    entanglement_report,
    entanglement_report_tomographic,
    haar_q,
    haar_random_state,
    haar_reference_sample,
    linearized_renyi,
    page_entropy,
    purity,
    q_measure,
    qubit_purities,
    renyi2,
)
from .experiments import (
    ConfigError,
    ExperimentConfig,
    circuit_seed,
    config_from_dict,
    entanglement_record,
    fidelity_record,
    load_config,
    run_entanglement_sweep,
    run_fidelity_sweep,
    run_haar_oracle,
    run_otoc_sweep,
    run_pt_histogram,
    run_sampling_experiment,
)
from .fidelity import (
    DistSummary,
    FidelityEstimate,
    cross_entropy,
    dfe_estimate,
    dist_summary,
    information_fidelity,
    l1_error,
    pauli_expectation,
    pauli_index_to_string,
    pauli_traces,
    shannon_entropy,
    state_fidelity_exact,
    surprise_moments,
)
from .noise import (
    ReadoutModel,
    apply_readout_error,
    depolarize_dist,
    depolarized_state_fidelity,
)
from .statevector import (
    DEFAULT_SHOTS,
    StateVector,
    rdm_eigenvalues,
    repair_rdm,
    sample_counts,
    u_matrix,
)
from .validation import MAX_QUBITS, ConsistencyError

__version__ = "0.1.0"

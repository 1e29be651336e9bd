"""Deterministic state-vector simulator for counterfactual-computation protocols."""

from qcf._kernels import BACKEND_NAME, available_backends
from qcf.errors import (
    ConfigurationError,
    DomainError,
    InvariantError,
    QcfError,
    ResourceError,
)
from qcf.measure import (
    Branch,
    BranchDistribution,
    DiscardIfStep,
    GateStep,
    MeasureStep,
    MeasurementProgram,
    enumerate_branches,
    measure_qubit,
    outcome_probabilities,
    sample_history,
)
from qcf.protocols import (
    ComputerModel,
    OutcomeClass,
    ProtocolReport,
    SwitchRotation,
    ZenoConfig,
    basic_counterfactual,
    choose_stage_count,
    classify_history,
    mach_zehnder,
    run_protocol_exact,
    run_protocol_sampled,
    zeno_counterfactual,
    zeno_keep_probability,
)
from qcf.qft import GateProgram, dft_inverse, dft_oracle, qft_program, verify_qft
from qcf.state import (
    GateMatrix,
    OpCounter,
    StateVector,
    apply_dense,
    apply_local,
    basis_state,
    embed_gate,
    zero_state,
)

__version__ = "0.1.0"

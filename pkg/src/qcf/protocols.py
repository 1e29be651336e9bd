"""Counterfactual-computation protocols.

Three experiments are built as measurement programs over one or two qubits:

* ``mach_zehnder``: a balanced interferometer. The path qubit uses 0 for the
  upper arm and 1 for the lower arm before the second beamsplitter, and 0 for
  detector F, 1 for detector G after it. Both beamsplitters act as the
  Hadamard. An optional non-destructive detector in the lower arm is one
  ancilla qubit entangled by a CNOT.

* ``basic_counterfactual``: a computer with an on/off switch (qubit 0,
  off=0/on=1) and an output register (qubit 1). The switch is put into an
  equal superposition, the controlled computation acts for its nominal run
  time, the switch is rotated again, and both qubits are measured. When the
  answer is 1, a quarter of the runs certify the answer from a history in
  which the output register never showed 1, i.e. the computer never ran.

* ``zeno_counterfactual``: the improved scheme. N stages of a small switch
  rotation by pi/2N are each followed by the controlled computation and a read
  of the output register, discarding the attempt whenever the output shows 1.
  Repeated reading freezes the switch when the answer is 1 (the watched-pot
  effect), so the certify-for-free probability (cos^2 pi/2N)^N approaches 1
  for large N.

Whether "the computation ran" is decided by the measurement record: some
output read showed 1, or (for the Zeno scheme with answer 0) the final switch
read "on", which can only be reached by letting the computation act.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from qcf.errors import DomainError
from qcf.measure import (
    Branch,
    BranchDistribution,
    DiscardIfStep,
    GateStep,
    MeasureStep,
    MeasurementProgram,
    enumerate_branches,
    sample_history,
)
from qcf.state import GateMatrix, controlled_not, hadamard, identity

SWITCH_QUBIT = 0
OUTPUT_QUBIT = 1
PATH_QUBIT = 0
DETECTOR_QUBIT = 1

DEFAULT_RESTART_CAP = 1000


@dataclass(frozen=True)
class ComputerModel:
    """Decision-problem computer with an on/off switch.

    Acts as |off>|y> -> |off>|y>, |on>|y> -> |on>|y xor r>. The program/data
    registers never entangle with switch or output, so they are not part of
    the state. `run_time` is the nominal duration T of one run; it is carried
    as metadata only and causes no delay.
    """

    r: int
    run_time: float = 1.0

    def __post_init__(self) -> None:
        if self.r not in (0, 1):
            raise DomainError(f"decision result r must be 0 or 1, got {self.r}")

    def gate(self) -> GateMatrix:
        return controlled_not() if self.r else identity(2)


@dataclass(frozen=True)
class SwitchRotation:
    """Rotation |off> -> cos a|off> + sin a|on>, |on> -> -sin a|off> + cos a|on>."""

    alpha: float

    def gate(self) -> GateMatrix:
        c, s = math.cos(self.alpha), math.sin(self.alpha)
        return GateMatrix(np.array([[c, -s], [s, c]]))


@dataclass(frozen=True)
class ZenoConfig:
    """Stage count N for the Zeno scheme; the per-stage angle is pi/2N."""

    stages: int
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.stages < 1:
            raise DomainError(f"stage count must be >= 1, got {self.stages}")

    @property
    def alpha(self) -> float:
        return math.pi / (2 * self.stages)

    @classmethod
    def for_failure_probability(cls, epsilon: float) -> "ZenoConfig":
        return cls(choose_stage_count(epsilon), epsilon)


class OutcomeClass(enum.Enum):
    LEARNED_R1_FREE = "LearnedR1_Free"
    LEARNED_R1_COMPUTED = "LearnedR1_Computed"
    LEARNED_R0_COMPUTED = "LearnedR0_Computed"
    INCONCLUSIVE = "Inconclusive"
    DISCARDED = "Discarded"


# ---------------------------------------------------------------------------
# program builders

def mach_zehnder(detector_present: bool) -> MeasurementProgram:
    """Balanced interferometer, optionally with a which-path detector in the lower arm."""
    h = hadamard()
    if not detector_present:
        return MeasurementProgram(
            1,
            (
                GateStep(h, (PATH_QUBIT,)),
                GateStep(h, (PATH_QUBIT,)),
                MeasureStep(PATH_QUBIT, "photon"),
            ),
        )
    return MeasurementProgram(
        2,
        (
            GateStep(h, (PATH_QUBIT,)),
            GateStep(controlled_not(), (PATH_QUBIT, DETECTOR_QUBIT)),
            GateStep(h, (PATH_QUBIT,)),
            MeasureStep(PATH_QUBIT, "photon"),
            MeasureStep(DETECTOR_QUBIT, "detector"),
        ),
    )


def basic_counterfactual(computer: ComputerModel) -> MeasurementProgram:
    """Single-shot scheme: superpose the switch, run, rotate, measure switch then output."""
    h = hadamard()
    return MeasurementProgram(
        2,
        (
            GateStep(h, (SWITCH_QUBIT,)),
            GateStep(computer.gate(), (SWITCH_QUBIT, OUTPUT_QUBIT)),
            GateStep(h, (SWITCH_QUBIT,)),
            MeasureStep(SWITCH_QUBIT, "switch"),
            MeasureStep(OUTPUT_QUBIT, "output"),
        ),
    )


def zeno_counterfactual(computer: ComputerModel, config: ZenoConfig) -> MeasurementProgram:
    """N stages of rotate/run/read-output (discarding on 1), then measure the switch."""
    rotation = SwitchRotation(config.alpha).gate()
    computation = computer.gate()
    steps: list = []
    for stage in range(1, config.stages + 1):
        label = f"out_{stage}"
        steps.append(GateStep(rotation, (SWITCH_QUBIT,)))
        steps.append(GateStep(computation, (SWITCH_QUBIT, OUTPUT_QUBIT)))
        steps.append(MeasureStep(OUTPUT_QUBIT, label))
        steps.append(DiscardIfStep(label, 1))
    steps.append(MeasureStep(SWITCH_QUBIT, "switch"))
    return MeasurementProgram(2, tuple(steps))


# ---------------------------------------------------------------------------
# closed-form Zeno quantities

def zeno_keep_probability(stages: int) -> float:
    """Probability that all N stages survive the output read when the answer is 1."""
    if stages < 1:
        raise DomainError(f"stage count must be >= 1, got {stages}")
    return math.cos(math.pi / (2 * stages)) ** (2 * stages)


def choose_stage_count(epsilon: float) -> int:
    """Smallest N whose keep-all probability is at least 1 - epsilon."""
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must be in (0, 1), got {epsilon}")
    target = 1.0 - epsilon
    if zeno_keep_probability(1) >= target:
        return 1
    hi = 2
    while zeno_keep_probability(hi) < target:
        hi *= 2
    lo = hi // 2          # keep(lo) < target <= keep(hi); keep is increasing in N
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if zeno_keep_probability(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# outcome classification

_PROTOCOLS = ("mz", "basic", "zeno")


def _output_labels(record: dict[str, int], protocol: str) -> list[str]:
    if protocol == "basic":
        return [label for label in record if label == "output"]
    if protocol == "zeno":
        return [label for label in record if label.startswith("out_")]
    return [label for label in record if label == "detector"]


def classify_history(branch: Branch, protocol: str, r: int | None = None) -> OutcomeClass:
    """Classify one measurement history.

    A history is "free" when every output-register read returned 0 and the
    record still certifies the answer: for the basic scheme switch=on with
    output=0, for the Zeno scheme all stages kept with the final switch=off.
    For the interferometer the same reading applies with the detector in the
    computer's role: photon at G with the detector still showing M0 certifies
    the detector's presence without interaction. The record is
    self-certifying; `r` (detector presence for "mz") is accepted for report
    context and not consulted.
    """
    if protocol not in _PROTOCOLS:
        raise DomainError(f"unknown protocol {protocol!r}")
    if branch.discarded:
        return OutcomeClass.DISCARDED
    ran = any(branch.record[label] == 1 for label in _output_labels(branch.record, protocol))
    if protocol == "basic":
        if ran:
            return OutcomeClass.LEARNED_R1_COMPUTED
        if branch.record["switch"] == 1:
            return OutcomeClass.LEARNED_R1_FREE
        return OutcomeClass.INCONCLUSIVE
    if protocol == "zeno":
        if ran:
            return OutcomeClass.LEARNED_R1_COMPUTED
        if branch.record["switch"] == 0:
            return OutcomeClass.LEARNED_R1_FREE
        return OutcomeClass.LEARNED_R0_COMPUTED
    # interferometer
    if "detector" not in branch.record:
        return OutcomeClass.INCONCLUSIVE
    if ran:
        return OutcomeClass.LEARNED_R1_COMPUTED
    if branch.record["photon"] == 1:
        return OutcomeClass.LEARNED_R1_FREE
    return OutcomeClass.INCONCLUSIVE


def computation_ran(branch: Branch, protocol: str) -> bool:
    """Operational criterion: an output read showed 1, or the Zeno run ended switch=on."""
    if any(branch.record[label] == 1 for label in _output_labels(branch.record, protocol)):
        return True
    return protocol == "zeno" and not branch.discarded and branch.record.get("switch") == 1


# ---------------------------------------------------------------------------
# reports

_LABEL_NAMES = {
    "photon": ("F", "G"),
    "detector": ("M0", "M1"),
    "switch": ("off", "on"),
}


def outcome_names(record: dict[str, int]) -> dict[str, str]:
    """Measurement record with bits replaced by their physical outcome names."""
    return {
        label: _LABEL_NAMES.get(label, ("0", "1"))[bit]
        for label, bit in record.items()
    }


@dataclass(frozen=True)
class OutcomeStat:
    labels: dict[str, str]
    outcome_class: OutcomeClass
    computation_ran: bool
    probability: float | None = None
    count: int | None = None


@dataclass(frozen=True)
class ProtocolReport:
    """Classified outcome distribution of one protocol run."""

    protocol: str
    r: int | None
    mode: str
    seed: int | None
    outcomes: tuple[OutcomeStat, ...]
    counterfactual_free_probability: float
    detector_present: bool | None = None
    stages: int | None = None
    p_keep_all: float | None = None
    trials: int | None = None
    restarts: int | None = None
    restart_computation_ran: bool | None = None
    would_have_exploded: bool | None = None


def _build_program(
    protocol: str,
    r: int | None,
    detector_present: bool,
    config: ZenoConfig | None,
) -> MeasurementProgram:
    if protocol == "mz":
        return mach_zehnder(detector_present)
    if protocol == "basic":
        return basic_counterfactual(ComputerModel(r))
    if protocol == "zeno":
        return zeno_counterfactual(ComputerModel(r), config)
    raise DomainError(f"unknown protocol {protocol!r}")


def _explodes(protocol: str, r: int | None, ran_outcomes: list[bool]) -> bool | None:
    if protocol == "mz":
        return None
    return r == 1 and any(ran_outcomes)


def run_protocol_exact(
    protocol: str,
    *,
    r: int | None = None,
    detector_present: bool = False,
    config: ZenoConfig | None = None,
    seed: int | None = None,
) -> ProtocolReport:
    """Run by exhaustive branch enumeration: probabilities are exact."""
    program = _build_program(protocol, r, detector_present, config)
    dist = enumerate_branches(program)
    outcomes = tuple(
        OutcomeStat(
            labels=outcome_names(b.record),
            outcome_class=classify_history(b, protocol, r),
            computation_ran=computation_ran(b, protocol),
            probability=b.probability,
        )
        for b in dist.branches
    )
    free = sum(
        o.probability for o in outcomes if o.outcome_class is OutcomeClass.LEARNED_R1_FREE
    )
    return ProtocolReport(
        protocol=protocol,
        r=r,
        mode="exact",
        seed=seed,
        outcomes=outcomes,
        counterfactual_free_probability=float(free),
        detector_present=detector_present if protocol == "mz" else None,
        stages=config.stages if config else None,
        p_keep_all=dist.kept_probability() if protocol == "zeno" else None,
        would_have_exploded=_explodes(
            protocol, r, [o.computation_ran and o.probability > 0 for o in outcomes]
        ),
    )


def run_protocol_sampled(
    protocol: str,
    *,
    r: int | None = None,
    detector_present: bool = False,
    config: ZenoConfig | None = None,
    seed: int | None = None,
    trials: int = 10_000,
    restart_cap: int = DEFAULT_RESTART_CAP,
) -> ProtocolReport:
    """Run by seeded sampling; Zeno discards restart from scratch up to `restart_cap`."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    program = _build_program(protocol, r, detector_present, config)
    rng = np.random.default_rng(seed)
    counts: dict[tuple[tuple[str, int], ...], int] = {}
    samples: dict[tuple[tuple[str, int], ...], Branch] = {}
    restarts = 0
    restart_ran = False
    for _ in range(trials):
        branch = sample_history(program, rng)
        attempts = 0
        while branch.discarded and attempts < restart_cap:
            attempts += 1
            restarts += 1
            restart_ran = restart_ran or computation_ran(branch, protocol)
            branch = sample_history(program, rng)
        key = tuple(branch.record.items()) + (("#discarded", int(branch.discarded)),)
        counts[key] = counts.get(key, 0) + 1
        samples[key] = branch
    outcomes = []
    for key in sorted(counts):
        branch = samples[key]
        outcomes.append(
            OutcomeStat(
                labels=outcome_names(branch.record),
                outcome_class=classify_history(branch, protocol, r),
                computation_ran=computation_ran(branch, protocol),
                count=counts[key],
            )
        )
    free_trials = sum(
        o.count for o in outcomes if o.outcome_class is OutcomeClass.LEARNED_R1_FREE
    )
    kept_trials = sum(
        o.count for o in outcomes if o.outcome_class is not OutcomeClass.DISCARDED
    )
    ran_observed = [o.computation_ran for o in outcomes]
    return ProtocolReport(
        protocol=protocol,
        r=r,
        mode="sample",
        seed=seed,
        outcomes=tuple(outcomes),
        counterfactual_free_probability=free_trials / trials,
        detector_present=detector_present if protocol == "mz" else None,
        stages=config.stages if config else None,
        p_keep_all=(
            kept_trials / (trials + restarts) if protocol == "zeno" else None
        ),
        trials=trials,
        restarts=restarts if protocol == "zeno" else None,
        restart_computation_ran=restart_ran if protocol == "zeno" else None,
        would_have_exploded=_explodes(protocol, r, ran_observed + [restart_ran]),
    )

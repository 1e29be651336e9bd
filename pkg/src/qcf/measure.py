"""Born-rule measurement, collapse, and exact enumeration of measurement histories.

`enumerate_branches` walks every measurement outcome of a program and returns
each history with its exact probability (the product of conditional Born
probabilities), so protocol statistics can be verified with zero sampling
error. `sample_history` draws a single history from the same distribution with
a seeded generator.

Programs always start from the all-zeros state; state preparation is expressed
as explicit gate steps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from qcf.errors import DomainError, InvariantError, ResourceError
from qcf.state import GateMatrix, StateVector, apply_local, zero_state

PRUNE_THRESHOLD = 1e-15       # conditional probabilities below this are roundoff ghosts
DEFAULT_BRANCH_LIMIT = 1 << 20


@dataclass(frozen=True)
class GateStep:
    gate: GateMatrix
    targets: tuple[int, ...]


@dataclass(frozen=True)
class MeasureStep:
    qubit: int
    label: str


@dataclass(frozen=True)
class DiscardIfStep:
    """Abandon the attempt when an earlier measurement `label` read `bit`."""

    label: str
    bit: int


Step = GateStep | MeasureStep | DiscardIfStep


@dataclass(frozen=True)
class MeasurementProgram:
    num_qubits: int
    steps: tuple[Step, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        seen: set[str] = set()
        for step in self.steps:
            if isinstance(step, GateStep):
                if len(step.targets) != step.gate.arity:
                    raise DomainError("gate arity does not match its target count")
                for q in step.targets:
                    if not 0 <= q < self.num_qubits:
                        raise DomainError(f"gate target {q} out of range")
            elif isinstance(step, MeasureStep):
                if not 0 <= step.qubit < self.num_qubits:
                    raise DomainError(f"measured qubit {step.qubit} out of range")
                if step.label in seen:
                    raise DomainError(f"duplicate measurement label {step.label!r}")
                seen.add(step.label)
            elif isinstance(step, DiscardIfStep):
                if step.label not in seen:
                    raise DomainError(
                        f"discard refers to label {step.label!r} with no earlier measurement"
                    )
                if step.bit not in (0, 1):
                    raise DomainError("discard bit must be 0 or 1")
            else:
                raise DomainError(f"unknown step type {type(step).__name__}")

    def measure_count(self) -> int:
        return sum(isinstance(s, MeasureStep) for s in self.steps)


@dataclass(frozen=True)
class Branch:
    """One measurement history: record of outcomes, exact probability, final state."""

    probability: float
    record: dict[str, int]
    final_state: StateVector
    discarded: bool = False


@dataclass(frozen=True)
class BranchDistribution:
    branches: tuple[Branch, ...] = field(default_factory=tuple)

    def total_probability(self) -> float:
        return float(sum(b.probability for b in self.branches))

    def kept(self) -> tuple[Branch, ...]:
        return tuple(b for b in self.branches if not b.discarded)

    def kept_probability(self) -> float:
        return float(sum(b.probability for b in self.branches if not b.discarded))

    def discarded_probability(self) -> float:
        return float(sum(b.probability for b in self.branches if b.discarded))


@lru_cache(maxsize=None)
def _bit_mask(dim: int, qubit: int) -> np.ndarray:
    """Boolean mask of basis indices whose `qubit` bit is 1 (shared, do not mutate)."""
    return ((np.arange(dim) >> qubit) & 1).astype(bool)


def outcome_probabilities(state: StateVector, qubit: int) -> tuple[float, float]:
    """Born probabilities (p0, p1) of measuring `qubit` in the computational basis."""
    if not 0 <= qubit < state.num_qubits:
        raise DomainError(f"qubit {qubit} out of range for {state.num_qubits}-qubit state")
    mask = _bit_mask(state.amplitudes.shape[0], qubit)
    ones = state.amplitudes[mask]
    zeros = state.amplitudes[~mask]
    return float(np.vdot(zeros, zeros).real), float(np.vdot(ones, ones).real)


def _collapse(state: StateVector, qubit: int, bit: int, probability: float) -> StateVector:
    if probability < PRUNE_THRESHOLD:
        raise InvariantError(
            f"collapse onto outcome {bit} of qubit {qubit} has probability {probability:.3e}"
        )
    mask = _bit_mask(state.amplitudes.shape[0], qubit)
    if not bit:
        mask = ~mask
    amps = np.where(mask, state.amplitudes, 0.0)
    amps /= np.sqrt(probability)
    return StateVector(state.num_qubits, amps)


def measure_qubit(
    state: StateVector, qubit: int, rng: np.random.Generator
) -> tuple[int, float, StateVector]:
    """Sample one computational-basis measurement; returns (bit, probability, collapsed state)."""
    p0, p1 = outcome_probabilities(state, qubit)
    bit = 1 if rng.random() < p1 else 0
    probability = p1 if bit else p0
    return bit, probability, _collapse(state, qubit, bit, probability)


def enumerate_branches(
    program: MeasurementProgram, branch_limit: int = DEFAULT_BRANCH_LIMIT
) -> BranchDistribution:
    """Every measurement history of `program` with its exact probability.

    Outcomes with conditional probability below PRUNE_THRESHOLD are dropped; a
    matching DiscardIf marks the branch discarded and stops executing it (its
    probability mass is retained). Branches are listed in depth-first order,
    outcome 0 before outcome 1.
    """
    leaves: list[Branch] = []

    def emit(branch: Branch) -> None:
        if len(leaves) >= branch_limit:
            raise ResourceError(f"branch count exceeds limit {branch_limit}")
        leaves.append(branch)

    def walk(state: StateVector, step_index: int, probability: float, record: dict[str, int]) -> None:
        for i in range(step_index, len(program.steps)):
            step = program.steps[i]
            if isinstance(step, GateStep):
                state = apply_local(state, step.gate, step.targets)
            elif isinstance(step, MeasureStep):
                p0, p1 = outcome_probabilities(state, step.qubit)
                for bit, p in ((0, p0), (1, p1)):
                    if p < PRUNE_THRESHOLD:
                        continue
                    walk(
                        _collapse(state, step.qubit, bit, p),
                        i + 1,
                        probability * p,
                        {**record, step.label: bit},
                    )
                return
            else:
                if record[step.label] == step.bit:
                    emit(Branch(probability, record, state, discarded=True))
                    return
        emit(Branch(probability, record, state, discarded=False))

    walk(zero_state(program.num_qubits), 0, 1.0, {})
    return BranchDistribution(tuple(leaves))


def sample_history(program: MeasurementProgram, rng: np.random.Generator) -> Branch:
    """Draw one measurement history; deterministic for a given generator state."""
    state = zero_state(program.num_qubits)
    probability = 1.0
    record: dict[str, int] = {}
    for step in program.steps:
        if isinstance(step, GateStep):
            state = apply_local(state, step.gate, step.targets)
        elif isinstance(step, MeasureStep):
            bit, p, state = measure_qubit(state, step.qubit, rng)
            probability *= p
            record[step.label] = bit
        else:
            if record[step.label] == step.bit:
                return Branch(probability, record, state, discarded=True)
    return Branch(probability, record, state, discarded=False)

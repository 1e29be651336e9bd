"""Quantum Fourier transform circuit and its classical FFT oracle.

The circuit uses n(n+1)/2 + floor(n/2) gates (Hadamards, controlled phases,
and the final qubit-order swaps), while the classical radix-2 FFT needs on the
order of n*2^n complex multiplications for the same transform; the
`gate_vs_fft_counts` table exhibits that contrast directly.

Both the circuit and the oracle use the kernel exp(+2*pi*i*j*k / 2^n) with
unitary 1/sqrt(2^n) normalization, so simulator output and oracle output are
comparable entrywise. Note the plain operation-count comparison charges the
classical side for naive (FFT) arithmetic and excludes circuit-compilation
overhead on the quantum side; the swap gates for output ordering are included
in the gate count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qcf.errors import ConfigurationError, DomainError
from qcf.state import (
    GateMatrix,
    OpCounter,
    StateVector,
    apply_local,
    controlled_phase,
    hadamard,
    random_state,
    swap_gate,
)

QFT_QUBIT_LIMIT = 14
VERIFY_QUBIT_LIMIT = 12


@dataclass(frozen=True)
class GateProgram:
    """Ordered list of (gate, targets) pairs on a fixed-width register."""

    num_qubits: int
    gates: tuple[tuple[GateMatrix, tuple[int, ...]], ...]

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def apply(self, state: StateVector, counter: OpCounter | None = None) -> StateVector:
        for gate, targets in self.gates:
            state = apply_local(state, gate, targets, counter)
        return state

    def inverse(self) -> "GateProgram":
        return GateProgram(
            self.num_qubits,
            tuple((gate.dagger(), targets) for gate, targets in reversed(self.gates)),
        )


def qft_program(num_qubits: int) -> GateProgram:
    """Fourier-transform circuit: |j> -> 2^{-n/2} sum_k exp(2 pi i jk / 2^n) |k>.

    Hadamard-plus-controlled-phase cascade from the top qubit down, then
    floor(n/2) swaps to restore ascending output order.
    """
    if not 1 <= num_qubits <= QFT_QUBIT_LIMIT:
        raise ConfigurationError(
            f"qft circuit supports 1..{QFT_QUBIT_LIMIT} qubits, got {num_qubits}"
        )
    h = hadamard()
    gates: list[tuple[GateMatrix, tuple[int, ...]]] = []
    for q in reversed(range(num_qubits)):
        gates.append((h, (q,)))
        for t in reversed(range(q)):
            gates.append((controlled_phase(math.pi / (1 << (q - t))), (t, q)))
    swap = swap_gate()
    for q in range(num_qubits // 2):
        gates.append((swap, (q, num_qubits - 1 - q)))
    return GateProgram(num_qubits, tuple(gates))


def expected_gate_count(num_qubits: int) -> int:
    return num_qubits * (num_qubits + 1) // 2 + num_qubits // 2


def _fft(values: np.ndarray, sign: float, counter: OpCounter | None) -> np.ndarray:
    n = values.shape[0]
    if n == 1:
        return values.copy()
    even = _fft(values[0::2], sign, counter)
    odd = _fft(values[1::2], sign, counter)
    twiddle = np.exp(sign * 2j * np.pi * np.arange(n // 2) / n) * odd
    if counter is not None:
        counter.record(n // 2, n)   # one mult per butterfly, two adds
    return np.concatenate([even + twiddle, even - twiddle])


def dft_oracle(
    values, direction: str = "forward", counter: OpCounter | None = None
) -> np.ndarray:
    """Unitary DFT with kernel exp(+2 pi i jk/2^n)/sqrt(2^n) via radix-2 recursion.

    The inverse direction conjugates the kernel. Multiplications (butterfly
    twiddles plus the final normalization) are counted when a counter is given.
    """
    values = np.asarray(values, dtype=np.complex128)
    n = values.shape[0]
    if n < 1 or (n & (n - 1)) != 0:
        raise DomainError(f"length must be a power of two, got {n}")
    if direction == "forward":
        sign = +1.0
    elif direction == "inverse":
        sign = -1.0
    else:
        raise DomainError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    out = _fft(values, sign, counter)
    out /= math.sqrt(n)
    if counter is not None:
        counter.record(n, 0)
    return out


def dft_inverse(values, counter: OpCounter | None = None) -> np.ndarray:
    return dft_oracle(values, direction="inverse", counter=counter)


def gate_vs_fft_counts(n_values=range(2, 13)) -> tuple[tuple[int, int, int], ...]:
    """Table of (n, circuit gate count, classical FFT multiplication count).

    The quadratic-vs-exponential contrast at a glance; the FFT column is the
    instrumented count of `dft_oracle` on a length-2^n input.
    """
    rows = []
    for n in n_values:
        counter = OpCounter()
        dft_oracle(np.zeros(1 << n), counter=counter)
        rows.append((n, expected_gate_count(n), counter.complex_mults))
    return tuple(rows)


def verify_qft(num_qubits: int, trials: int, rng: np.random.Generator) -> float:
    """Max entrywise |simulator - oracle| over random input states."""
    if not 1 <= num_qubits <= VERIFY_QUBIT_LIMIT:
        raise ConfigurationError(
            f"verification supports 1..{VERIFY_QUBIT_LIMIT} qubits, got {num_qubits}"
        )
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    program = qft_program(num_qubits)
    max_error = 0.0
    for _ in range(trials):
        state = random_state(num_qubits, rng)
        simulated = program.apply(state)
        expected = dft_oracle(state.amplitudes)
        max_error = max(max_error, float(np.abs(simulated.amplitudes - expected).max()))
    return max_error

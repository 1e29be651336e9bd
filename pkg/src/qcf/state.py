"""State vectors and unitary gate application.

Two gate-application routes are provided: `apply_local` runs the
tensor-structured kernel (gate on k target qubits, identity on the rest) and
`apply_dense` multiplies by the full 2^n x 2^n matrix. The dense route exists
as an oracle and benchmark baseline for the local kernel; `embed_gate` bridges
the two. Both routes can record exact complex-operation counts in an
`OpCounter`, which is what the cost-ratio benchmark is built on.

Basis index convention: bit q of a basis index is the computational value of
qubit q, i.e. qubit 0 is the least-significant bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qcf import _kernels
from qcf._kernels._pykernels import bystander_bases, target_offsets
from qcf.errors import ConfigurationError, DomainError, InvariantError, ResourceError

MAX_QUBITS = 26           # 2^26 complex128 amplitudes = 1 GiB
DENSE_QUBIT_LIMIT = 12    # largest n for which a full 2^n x 2^n matrix is allowed
NORM_TOL = 1e-12
UNITARY_TOL = 1e-10


@dataclass
class OpCounter:
    """Accumulates exact complex multiplication/addition counts."""

    complex_mults: int = 0
    complex_adds: int = 0

    def record(self, mults: int, adds: int) -> None:
        self.complex_mults += mults
        self.complex_adds += adds


@dataclass
class StateVector:
    """Normalized amplitude vector over the 2^n computational basis states."""

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ConfigurationError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}"
            )
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise DomainError(
                f"expected {1 << self.num_qubits} amplitudes, got shape {self.amplitudes.shape}"
            )
        norm_sq = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise InvariantError(f"state norm^2 = {norm_sq!r} deviates from 1 beyond {NORM_TOL}")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())


class GateMatrix:
    """Unitary on k qubits; unitarity is checked once, at construction."""

    def __init__(self, entries: np.ndarray):
        entries = np.ascontiguousarray(entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError(f"gate matrix must be square, got shape {entries.shape}")
        dim = entries.shape[0]
        arity = dim.bit_length() - 1
        if dim < 2 or (1 << arity) != dim:
            raise DomainError(f"gate dimension must be a power of two >= 2, got {dim}")
        deviation = np.abs(entries.conj().T @ entries - np.eye(dim)).max()
        if deviation > UNITARY_TOL:
            raise DomainError(f"matrix is not unitary (max |U†U - I| = {deviation:.3e})")
        self.arity = arity
        self.entries = entries

    def dagger(self) -> "GateMatrix":
        return GateMatrix(self.entries.conj().T)

    def __repr__(self) -> str:
        return f"GateMatrix(arity={self.arity})"


def zero_state(num_qubits: int) -> StateVector:
    """The all-zeros basis state |0...0>."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ConfigurationError(f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def basis_state(num_qubits: int, index: int) -> StateVector:
    """The basis state with amplitude 1 at the given index."""
    state = zero_state(num_qubits)
    if not 0 <= index < (1 << num_qubits):
        raise DomainError(f"basis index {index} out of range for {num_qubits} qubits")
    state.amplitudes[0] = 0.0
    state.amplitudes[index] = 1.0
    return state


def _check_targets(num_qubits: int, targets, arity: int) -> tuple[int, ...]:
    targets = tuple(int(q) for q in targets)
    if len(targets) != arity:
        raise DomainError(f"gate acts on {arity} qubits but {len(targets)} targets given")
    if len(set(targets)) != len(targets):
        raise DomainError(f"duplicate target qubits in {targets}")
    for q in targets:
        if not 0 <= q < num_qubits:
            raise DomainError(f"target qubit {q} out of range for {num_qubits} qubits")
    return targets


def local_mult_count(num_qubits: int, arity: int) -> int:
    """Complex multiplications of the local kernel: 4^k * 2^(n-k)."""
    return (1 << (2 * arity)) << (num_qubits - arity)


def local_add_count(num_qubits: int, arity: int) -> int:
    """Complex additions of the local kernel: 2^k (2^k - 1) * 2^(n-k)."""
    dim_k = 1 << arity
    return dim_k * (dim_k - 1) << (num_qubits - arity)


def apply_local(
    state: StateVector,
    gate: GateMatrix,
    targets,
    counter: OpCounter | None = None,
) -> StateVector:
    """Apply `gate` to the target qubits, identity on all others.

    Bit m of the gate's own index space addresses qubit ``targets[m]``. The
    amplitude update touches each 2^k-amplitude block once, so the cost is one
    2^k x 2^k matrix-vector product per non-target configuration.
    """
    n = state.num_qubits
    targets = _check_targets(n, targets, gate.arity)
    amps = state.amplitudes.copy()
    _kernels.apply_local_inplace(amps, n, targets, gate.entries)
    if counter is not None:
        counter.record(local_mult_count(n, gate.arity), local_add_count(n, gate.arity))
    return StateVector(n, amps)


def embed_gate(gate: GateMatrix, targets, num_qubits: int, limit: int = DENSE_QUBIT_LIMIT) -> GateMatrix:
    """Expand a local gate to the full 2^n x 2^n unitary (gate on targets, identity elsewhere)."""
    if num_qubits > limit:
        raise ResourceError(f"dense embedding limited to {limit} qubits, got {num_qubits}")
    targets = _check_targets(num_qubits, targets, gate.arity)
    bases = bystander_bases(num_qubits, targets)
    offs = target_offsets(targets)
    idx = bases[:, None] | offs[None, :]          # (blocks, 2^k)
    full = np.zeros((1 << num_qubits, 1 << num_qubits), dtype=np.complex128)
    full[idx[:, :, None], idx[:, None, :]] = gate.entries[None, :, :]
    return GateMatrix(full)


def apply_dense(
    state: StateVector,
    full: GateMatrix,
    counter: OpCounter | None = None,
) -> StateVector:
    """Plain matrix-vector product with a full n-qubit unitary."""
    n = state.num_qubits
    if full.arity != n:
        raise DomainError(f"dense gate acts on {full.arity} qubits, state has {n}")
    if n > DENSE_QUBIT_LIMIT:
        raise ResourceError(f"dense application limited to {DENSE_QUBIT_LIMIT} qubits, got {n}")
    amps = full.entries @ state.amplitudes
    if counter is not None:
        dim = 1 << n
        counter.record(dim * dim, dim * (dim - 1))
    return StateVector(n, amps)


# ---------------------------------------------------------------------------
# standard gates

_SQRT1_2 = 1.0 / np.sqrt(2.0)


def identity(arity: int = 1) -> GateMatrix:
    return GateMatrix(np.eye(1 << arity, dtype=np.complex128))


def hadamard() -> GateMatrix:
    return GateMatrix(np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]]))


def pauli_x() -> GateMatrix:
    return GateMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))


def controlled_not() -> GateMatrix:
    """CNOT with control on gate qubit 0 and target on gate qubit 1."""
    m = np.zeros((4, 4))
    m[0, 0] = m[2, 2] = 1.0   # control bit 0: identity
    m[3, 1] = m[1, 3] = 1.0   # control bit 1: flip target bit
    return GateMatrix(m)


def controlled_phase(theta: float) -> GateMatrix:
    """Phase e^{i theta} on |11>; symmetric in its two qubits."""
    return GateMatrix(np.diag([1.0, 1.0, 1.0, np.exp(1j * theta)]))


def swap_gate() -> GateMatrix:
    m = np.zeros((4, 4))
    m[0, 0] = m[3, 3] = 1.0
    m[1, 2] = m[2, 1] = 1.0
    return GateMatrix(m)


# ---------------------------------------------------------------------------
# random inputs for verification and benchmarks

def random_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    """Haar-ish random state: normalized complex gaussian amplitudes."""
    dim = 1 << num_qubits
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    amps /= np.linalg.norm(amps)
    return StateVector(num_qubits, amps)


def random_unitary(arity: int, rng: np.random.Generator) -> GateMatrix:
    """Haar-distributed random unitary via QR of a complex gaussian matrix."""
    dim = 1 << arity
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return GateMatrix(q * (d / np.abs(d)))

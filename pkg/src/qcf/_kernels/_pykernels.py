"""Pure-numpy gate kernel (fallback backend).

Index convention: bit q of a basis index is the value of qubit q, so qubit 0
is the least-significant bit. A k-qubit gate addresses its own index space the
same way: bit m of the gate index is the qubit ``targets[m]``.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def target_offsets(targets) -> np.ndarray:
    """Basis offsets of the 2^k target-bit patterns, bits placed at `targets`."""
    k = len(targets)
    combos = np.arange(1 << k, dtype=np.intp)
    offs = np.zeros(1 << k, dtype=np.intp)
    for m, q in enumerate(targets):
        offs |= ((combos >> m) & 1) << q
    return offs


def bystander_bases(num_qubits: int, targets) -> np.ndarray:
    """Basis indices with all target bits zero, one per non-target configuration."""
    rest = [q for q in range(num_qubits) if q not in targets]
    g = np.arange(1 << len(rest), dtype=np.intp)
    base = np.zeros(1 << len(rest), dtype=np.intp)
    for a, q in enumerate(rest):
        base |= ((g >> a) & 1) << q
    return base


def apply_local_inplace(amps: np.ndarray, num_qubits: int, targets, matrix: np.ndarray) -> None:
    """Apply a k-qubit unitary to `targets`, identity on the other qubits."""
    if len(targets) == 1:
        stride = 1 << targets[0]
        dim = amps.shape[0]
        idx0 = np.arange(dim, dtype=np.intp)
        idx0 = idx0[(idx0 & stride) == 0]
        a = amps[idx0]
        b = amps[idx0 + stride]
        amps[idx0] = matrix[0, 0] * a + matrix[0, 1] * b
        amps[idx0 + stride] = matrix[1, 0] * a + matrix[1, 1] * b
        return
    idx = bystander_bases(num_qubits, targets)[:, None] | target_offsets(targets)[None, :]
    amps[idx] = amps[idx] @ matrix.T

"""Local-vs-dense gate cost benchmark.

For each (n, k) a random k-qubit unitary is applied to an n-qubit state both
ways: through the tensor-structured local kernel (4^k * 2^(n-k) complex
multiplications) and as a dense embedded 2^n x 2^n matrix (4^n). Their count
ratio is 2^(k-n), which shrinks when k drops at fixed n or n grows at fixed k:
the cost of the dense route is dominated by the qubits the gate does nothing
to. Wall times are informative only; the counts are exact by construction.

With `compare_backends=True` the local row is timed once per available kernel
backend (compiled and pure-numpy), which is the honesty check that the
compiled kernel actually pays for itself.
"""
from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from qcf import _kernels
from qcf.errors import DomainError
from qcf.state import (
    DENSE_QUBIT_LIMIT,
    OpCounter,
    apply_dense,
    apply_local,
    embed_gate,
    local_add_count,
    local_mult_count,
    random_state,
    random_unitary,
)

CSV_HEADER = "n,k,method,complex_mults,wall_nanos,reps"


@dataclass(frozen=True)
class BenchRow:
    n: int
    k: int
    method: str
    complex_mults: int
    wall_nanos: int | None
    reps: int
    ratio: float | None = None      # local count / dense count, local rows only
    skipped: bool = False


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[BenchRow, ...]
    seed: int | None = None
    backend: str = _kernels.BACKEND_NAME


def _median_nanos(func, reps: int) -> int:
    times = []
    for _ in range(reps):
        start = time.perf_counter_ns()
        func()
        times.append(time.perf_counter_ns() - start)
    return int(statistics.median(times))


def bench_local_vs_dense(
    n_values,
    k_values,
    reps: int = 5,
    seed: int | None = None,
    compare_backends: bool = False,
) -> BenchReport:
    """Count and time local vs dense application for each (n, k) with k <= n."""
    if reps < 3:
        raise DomainError(f"reps must be >= 3, got {reps}")
    rng = np.random.default_rng(seed)
    rows: list[BenchRow] = []
    if compare_backends:
        local_methods = [
            (f"local_{name}", _kernels.get_backend(name).apply_local_inplace)
            for name in _kernels.available_backends()
        ]
    else:
        local_methods = [("local", _kernels.apply_local_inplace)]
    for n in n_values:
        for k in k_values:
            if k > n:
                continue
            gate = random_unitary(k, rng)
            state = random_state(n, rng)
            targets = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
            local_mults = local_mult_count(n, k)
            dense_mults = 1 << (2 * n)
            ratio = local_mults / dense_mults
            for method, kernel in local_methods:
                counter = OpCounter()
                apply_local(state, gate, targets, counter)
                assert counter.complex_mults == local_mults

                def run_local(kernel=kernel):
                    kernel(state.amplitudes.copy(), n, targets, gate.entries)

                rows.append(
                    BenchRow(n, k, method, counter.complex_mults,
                             _median_nanos(run_local, reps), reps, ratio=ratio)
                )
            if n > DENSE_QUBIT_LIMIT:
                rows.append(BenchRow(n, k, "dense", dense_mults, None, 0, skipped=True))
                continue
            full = embed_gate(gate, targets, n)
            counter = OpCounter()
            apply_dense(state, full, counter)
            assert counter.complex_mults == dense_mults

            def run_dense():
                apply_dense(state, full)

            rows.append(
                BenchRow(n, k, "dense", counter.complex_mults,
                         _median_nanos(run_dense, reps), reps)
            )
    return BenchReport(tuple(rows), seed=seed)


def expected_counts(n: int, k: int) -> tuple[int, int, int, int]:
    """Closed-form (local_mults, local_adds, dense_mults, dense_adds) for one gate."""
    dim = 1 << n
    return (
        local_mult_count(n, k),
        local_add_count(n, k),
        dim * dim,
        dim * (dim - 1),
    )

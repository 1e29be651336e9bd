# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled gate kernel. Same contract and index convention as _pykernels."""

import numpy as np

BACKEND_NAME = "cython"


cdef void _apply_1q(double complex[::1] amps, Py_ssize_t dim, Py_ssize_t target,
                    double complex u00, double complex u01,
                    double complex u10, double complex u11) noexcept nogil:
    cdef Py_ssize_t stride = 1 << target
    cdef Py_ssize_t blocks = dim >> (target + 1)
    cdef Py_ssize_t b_index, base, j, i0, i1
    cdef double complex a, b
    for b_index in range(blocks):
        base = b_index << (target + 1)
        for j in range(stride):
            i0 = base + j
            i1 = i0 + stride
            a = amps[i0]
            b = amps[i1]
            amps[i0] = u00 * a + u01 * b
            amps[i1] = u10 * a + u11 * b


cdef void _apply_kq(double complex[::1] amps, Py_ssize_t blocks, Py_ssize_t dim_k,
                    Py_ssize_t[::1] sorted_targets, Py_ssize_t k,
                    Py_ssize_t[::1] offs, double complex[:, ::1] u,
                    double complex[::1] buf) noexcept nogil:
    cdef Py_ssize_t g, base, m, p, i, j
    cdef double complex acc
    for g in range(blocks):
        # spread the bystander bits of g around the target positions
        base = g
        for m in range(k):
            p = sorted_targets[m]
            base = ((base >> p) << (p + 1)) | (base & ((1 << p) - 1))
        for i in range(dim_k):
            buf[i] = amps[base + offs[i]]
        for j in range(dim_k):
            acc = 0
            for i in range(dim_k):
                acc = acc + u[j, i] * buf[i]
            amps[base + offs[j]] = acc


def apply_local_inplace(amps, num_qubits, targets, matrix):
    """Apply a k-qubit unitary to `targets`, identity on the other qubits."""
    cdef double complex[::1] view = amps
    cdef double complex[:, ::1] u = np.ascontiguousarray(matrix)
    cdef Py_ssize_t k = len(targets)
    if k == 1:
        _apply_1q(view, amps.shape[0], targets[0], u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        return
    combos = np.arange(1 << k, dtype=np.intp)
    offs_arr = np.zeros(1 << k, dtype=np.intp)
    for m, q in enumerate(targets):
        offs_arr |= ((combos >> m) & 1) << q
    cdef Py_ssize_t[::1] offs = offs_arr
    cdef Py_ssize_t[::1] sorted_t = np.array(sorted(targets), dtype=np.intp)
    cdef double complex[::1] buf = np.empty(1 << k, dtype=np.complex128)
    _apply_kq(view, 1 << (num_qubits - k), 1 << k, sorted_t, k, offs, u, buf)

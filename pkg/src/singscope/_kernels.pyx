# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops for the numeric verification harness."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, cos, sin

cnp.import_array()


def grid_count(
    double[:] coeffs,
    long[:] e1,
    long[:] e2,
    double x1_lo,
    double x1_hi,
    Py_ssize_t n1,
    double x2_lo,
    double x2_hi,
    Py_ssize_t n2,
    double target,
    double tol,
):
    """Number of midpoint cells of the n1 x n2 grid with |phi - target| <= tol."""
    cdef Py_ssize_t nterms = coeffs.shape[0]
    cdef Py_ssize_t deg2 = 0
    cdef Py_ssize_t t, a, b, j
    for t in range(nterms):
        if e2[t] > deg2:
            deg2 = e2[t]
    cdef double[:] col = np.zeros(deg2 + 1)
    cdef double h1 = (x1_hi - x1_lo) / n1
    cdef double h2 = (x2_hi - x2_lo) / n2
    cdef double x1, x2, val, pw
    cdef long long count = 0
    cdef long k
    for a in range(n1):
        x1 = x1_lo + (a + 0.5) * h1
        for j in range(deg2 + 1):
            col[j] = 0.0
        for t in range(nterms):
            pw = 1.0
            for k in range(e1[t]):
                pw *= x1
            col[e2[t]] += coeffs[t] * pw
        for b in range(n2):
            x2 = x2_lo + (b + 0.5) * h2
            val = col[deg2]
            j = deg2 - 1
            while j >= 0:
                val = val * x2 + col[j]
                j -= 1
            if fabs(val - target) <= tol:
                count += 1
    return count


def osc_sum(
    double[:] nodes,
    double[:] weights,
    double[:] amplitude,
    double[:] phase_coeffs,
    double lam,
):
    """Sum of w * a * exp(i*lam*phase(x)) over the nodes; phase given by ascending coefficients."""
    cdef Py_ssize_t n = nodes.shape[0]
    cdef Py_ssize_t deg = phase_coeffs.shape[0] - 1
    cdef Py_ssize_t i, j
    cdef double x, ph, re = 0.0, im = 0.0, wa
    for i in range(n):
        x = nodes[i]
        ph = phase_coeffs[deg]
        j = deg - 1
        while j >= 0:
            ph = ph * x + phase_coeffs[j]
            j -= 1
        wa = weights[i] * amplitude[i]
        re += wa * cos(lam * ph)
        im += wa * sin(lam * ph)
    return complex(re, im)

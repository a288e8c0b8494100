# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of kernels._reference.

Keep every arithmetic expression identical to the reference module; the
selection logic in kernels/__init__.py treats the two as interchangeable.
"""
from libc.math cimport exp, log, sqrt

import numpy as np


cdef inline double _value(double mu1, double mu2, double sa, double sb,
                          double sc, double x) nogil:
    # cancellation-free square-root arguments; see _reference.py for the
    # derivation from the literal objective
    cdef double f1 = (x * x + 1.0) / x
    cdef double g = (mu2 * mu2 * x * x + mu1 * mu1) / x
    cdef double cross = 2.0 * mu1 * mu2 * sb * sc
    cdef double f2 = g + cross
    cdef double h1 = (x * x - 1.0) / x
    cdef double h2 = (mu2 * mu2 * x * x - mu1 * mu1) / x
    cdef double num1 = h1 * h1 + 4.0 * sa * sa
    cdef double num2 = (h2 * h2 + 2.0 * cross * g
                        + 4.0 * mu1 * mu1 * mu2 * mu2 * (sb * sb + sc * sc))
    cdef double t1 = 1.0 - sqrt(num1 if num1 > 0.0 else 0.0) / f1
    cdef double t2 = 1.0 - sqrt(num2 if num2 > 0.0 else 0.0) / f2
    return 0.5 * f1 * f2 * t1 * t2


def objective_value(double mu1, double mu2, double sa, double sb, double sc,
                    double x):
    """Objective at a single x > 0 (domain is checked by the caller)."""
    return _value(mu1, mu2, sa, sb, sc, x)


def objective_batch(double mu1, double mu2, double sa, double sb, double sc, xs):
    """Vectorized objective over an array of x values."""
    cdef double[::1] x = np.ascontiguousarray(xs, dtype=np.float64)
    out_arr = np.empty(x.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(x.shape[0]):
            out[i] = _value(mu1, mu2, sa, sb, sc, x[i])
    return out_arr


def grid_max(double mu1, double mu2, double sa, double sb, double sc,
             double x_lo, double x_hi, Py_ssize_t n):
    """Best (value, x) over an n-point logarithmic grid on [x_lo, x_hi].

    Ties resolve to the lowest x, matching the reference implementation's
    first-running-maximum rule.
    """
    cdef double u_lo = log(x_lo)
    cdef double u_hi = log(x_hi)
    cdef double step = (u_hi - u_lo) / (n - 1) if n > 1 else 0.0
    cdef double best_v = -1.0
    cdef double best_x = x_lo
    cdef double x, v
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            x = exp(u_lo + step * i) if i < n - 1 else x_hi
            v = _value(mu1, mu2, sa, sb, sc, x)
            if v > best_v:
                best_v = v
                best_x = x
    return best_v, best_x

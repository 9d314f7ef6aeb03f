# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled hot kernels: cyclic Jacobi sweeps and quadrature reductions.

Same API as ``_kernels_py``; summation order matches the fallback so both
backends agree to roundoff.
"""

import numpy as np

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex cconj "conj"(double complex)
    double creal(double complex)
    double cabs(double complex)

cdef extern from "math.h" nogil:
    double sqrt(double)
    double fabs(double)

BACKEND = "compiled"


def jacobi_eigh(a_in, double tol=1e-14, int max_sweeps=60):
    """Eigensystem of a complex Hermitian matrix by cyclic Jacobi rotations."""
    a_arr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = a_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    if n == 0:
        return np.zeros(0), v_arr

    cdef double complex[:, ::1] a = a_arr
    cdef double complex[:, ::1] v = v_arr
    cdef double scale = np.linalg.norm(a_arr)
    if scale == 0.0:
        return np.zeros(n), v_arr

    cdef Py_ssize_t p, q, k, sweep
    cdef double complex apq, phase, akp, akq
    cdef double mag, zeta, t, c, s, off
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += cabs(a[p, q]) ** 2
        off = sqrt(2.0 * off)
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = cabs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                zeta = (creal(a[q, q]) - creal(a[p, p])) / (2.0 * mag)
                t = 1.0 / (fabs(zeta) + sqrt(1.0 + zeta * zeta))
                if zeta < 0.0:
                    t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * cconj(phase) * akq
                    a[k, q] = s * akp + c * cconj(phase) * akq
                for k in range(n):
                    akp = a[p, k]
                    akq = a[q, k]
                    a[p, k] = c * akp - s * phase * akq
                    a[q, k] = s * akp + c * phase * akq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = creal(a[p, p])
                a[q, q] = creal(a[q, q])
                for k in range(n):
                    akp = v[k, p]
                    akq = v[k, q]
                    v[k, p] = c * akp - s * cconj(phase) * akq
                    v[k, q] = s * akp + c * cconj(phase) * akq

    w = np.diag(a_arr).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v_arr[:, order]


def quad_sum(double[::1] u, double[::1] v, double[::1] wu, double[::1] wv,
             double complex a, double complex b, double complex c,
             double complex d, double complex e):
    """Tensor quadrature of exp(a y^2 + b y conj(y) + c conj(y)^2 + d y + e conj(y))."""
    cdef Py_ssize_t m1 = u.shape[0], m2 = v.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex acc = 0.0, row, y, yc
    for i in range(m1):
        row = 0.0
        for j in range(m2):
            y = u[i] + 1j * v[j]
            yc = cconj(y)
            row += wv[j] * cexp(a * y * y + b * y * yc + c * yc * yc + d * y + e * yc)
        acc += wu[i] * row
    return complex(acc)


def quad_sum_weighted(double[::1] u, double[::1] v, double[::1] wu, double[::1] wv,
                      double complex[:, ::1] vals,
                      double complex a, double complex b, double complex c,
                      double complex d, double complex e):
    """Like quad_sum but with extra per-node complex factors vals[i, j]."""
    cdef Py_ssize_t m1 = u.shape[0], m2 = v.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex acc = 0.0, row, y, yc
    for i in range(m1):
        row = 0.0
        for j in range(m2):
            y = u[i] + 1j * v[j]
            yc = cconj(y)
            row += wv[j] * vals[i, j] * cexp(a * y * y + b * y * yc + c * yc * yc + d * y + e * yc)
        acc += wu[i] * row
    return complex(acc)


def kernel_apply(targets_in, double[::1] u, double[::1] v,
                 double[::1] wu, double[::1] wv,
                 double complex[:, ::1] vals, double complex alpha):
    """out[k] = sum_ij wu[i] wv[j] vals[i,j] exp(alpha * targets[k] * conj(y_ij))."""
    targets_arr = np.ascontiguousarray(np.asarray(targets_in, dtype=np.complex128).ravel())
    cdef double complex[::1] targets = targets_arr
    cdef Py_ssize_t nt = targets.shape[0], m1 = u.shape[0], m2 = v.shape[0]
    out_arr = np.empty(nt, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t k, i, j
    cdef double complex acc, row, x, yc
    for k in range(nt):
        x = targets[k]
        acc = 0.0
        for i in range(m1):
            row = 0.0
            for j in range(m2):
                yc = u[i] - 1j * v[j]
                row += wv[j] * vals[i, j] * cexp(alpha * x * yc)
            acc += wu[i] * row
        out[k] = acc
    return out_arr

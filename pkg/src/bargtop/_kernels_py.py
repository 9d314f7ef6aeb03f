"""Pure-python (numpy) implementations of the hot kernels.

Mirrors the API of the compiled module ``_kernels_c``; one of the two is
selected at import time by :mod:`bargtop._backend`.  Summation order is
fixed (row-major over the tensor grid) so results are reproducible and,
up to roundoff, backend independent.
"""

import numpy as np

BACKEND = "python"

_CHUNK = 128  # target rows per kernel_apply block, keeps temporaries small


def jacobi_eigh(a, tol=1e-14, max_sweeps=60):
    """Eigensystem of a complex Hermitian matrix by cyclic Jacobi rotations.

    Returns (w, V) with real eigenvalues w ascending and unitary V whose
    columns are the matching eigenvectors, so that a ~ V @ diag(w) @ V^H.
    The input is not checked for Hermiticity; callers do that.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n == 0:
        return np.zeros(0), v
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v

    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                zeta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                if zeta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns: A <- A U with U the plane rotation
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - s * np.conj(phase) * colq
                a[:, q] = s * colp + c * np.conj(phase) * colq
                # rows: A <- U^H A
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - s * phase * rowq
                a[q, :] = s * rowp + c * phase * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = s * vp + c * np.conj(phase) * vq

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _exponent(y, a, b, c, d, e):
    yc = np.conj(y)
    return a * y * y + b * y * yc + c * yc * yc + d * y + e * yc


def quad_sum(u, v, wu, wv, a, b, c, d, e):
    """Tensor quadrature of exp(a y^2 + b y conj(y) + c conj(y)^2 + d y + e conj(y)).

    The grid is y = u[i] + 1j v[j] with weights wu[i] wv[j].
    """
    y = u[:, None] + 1j * v[None, :]
    vals = np.exp(_exponent(y, a, b, c, d, e))
    return complex(wu @ vals @ wv)


def quad_sum_weighted(u, v, wu, wv, vals, a, b, c, d, e):
    """Like quad_sum but with extra per-node complex factors vals[i, j]."""
    y = u[:, None] + 1j * v[None, :]
    integ = vals * np.exp(_exponent(y, a, b, c, d, e))
    return complex(wu @ integ @ wv)


def kernel_apply(targets, u, v, wu, wv, vals, alpha):
    """out[k] = sum_ij wu[i] wv[j] vals[i,j] exp(alpha * targets[k] * conj(y_ij)).

    This is the coupling reduction behind reproducing-kernel transforms:
    for each target point it contracts the weighted node values against
    the exponential kernel.  Work is chunked over targets to bound memory.
    """
    targets = np.asarray(targets, dtype=np.complex128).ravel()
    yc = (u[:, None] - 1j * v[None, :]).ravel()
    g = (wu[:, None] * wv[None, :] * vals).ravel()
    out = np.empty(targets.shape[0], dtype=np.complex128)
    for start in range(0, targets.shape[0], _CHUNK):
        block = targets[start:start + _CHUNK]
        kernel = np.exp(alpha * block[:, None] * yc[None, :])
        out[start:start + _CHUNK] = kernel @ g
    return out

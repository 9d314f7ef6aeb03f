"""Selects the compiled kernels when available, else the numpy fallback.

Set BARGTOP_KERNELS=python to force the fallback, or =compiled to require
the extension (raising at import if it was not built).
"""

import os

import numpy as np

_choice = os.environ.get("BARGTOP_KERNELS", "auto").lower()

if _choice == "python":
    from . import _kernels_py as _impl
elif _choice == "compiled":
    from . import _kernels_c as _impl  # type: ignore[attr-defined]
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

HAVE_COMPILED = _impl.BACKEND == "compiled"


def backend_name() -> str:
    return _impl.BACKEND


def jacobi_eigh(a, tol: float = 1e-14, max_sweeps: int = 60):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    return _impl.jacobi_eigh(a, tol, max_sweeps)


def quad_sum(u, v, wu, wv, a, b, c, d, e) -> complex:
    u, v, wu, wv = (np.ascontiguousarray(x, dtype=np.float64) for x in (u, v, wu, wv))
    return _impl.quad_sum(u, v, wu, wv, complex(a), complex(b), complex(c),
                          complex(d), complex(e))


def quad_sum_weighted(u, v, wu, wv, vals, a, b, c, d, e) -> complex:
    u, v, wu, wv = (np.ascontiguousarray(x, dtype=np.float64) for x in (u, v, wu, wv))
    vals = np.ascontiguousarray(vals, dtype=np.complex128)
    return _impl.quad_sum_weighted(u, v, wu, wv, vals, complex(a), complex(b),
                                   complex(c), complex(d), complex(e))


def kernel_apply(targets, u, v, wu, wv, vals, alpha):
    u, v, wu, wv = (np.ascontiguousarray(x, dtype=np.float64) for x in (u, v, wu, wv))
    vals = np.ascontiguousarray(vals, dtype=np.complex128)
    return _impl.kernel_apply(targets, u, v, wu, wv, vals, complex(alpha))

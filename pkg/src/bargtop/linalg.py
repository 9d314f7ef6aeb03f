"""Dense complex-matrix substrate.

Determinant/solve with a singularity gate, Hermitian eigenvalues via cyclic
Jacobi rotations, and tolerance-aware definiteness classification.  Every
certificate carries an explicit margin so strict inequalities elsewhere in
the package are never silently decided at the tolerance boundary.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _backend

DEFAULT_TOL = 1e-9


class SingularMatrixError(Exception):
    """Raised when a solve is requested against a matrix flagged singular."""

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class Definiteness(enum.Enum):
    POS_DEF = "PosDef"
    POS_SEMI_DEF = "PosSemiDef"
    INDEFINITE = "Indefinite"
    NEG_SEMI_DEF = "NegSemiDef"
    NEG_DEF = "NegDef"
    ZERO = "Zero"


_NONNEG = (Definiteness.POS_DEF, Definiteness.POS_SEMI_DEF, Definiteness.ZERO)
_NONPOS = (Definiteness.NEG_DEF, Definiteness.NEG_SEMI_DEF, Definiteness.ZERO)


@dataclass(frozen=True)
class DefinitenessReport:
    """Classification of a Hermitian matrix with its defining spectrum.

    margin is the smallest-magnitude eigenvalue relative to the matrix
    scale (largest |eigenvalue|); it is the distance of the certificate
    from the nearest status change.
    """

    status: Definiteness
    margin: float
    eigenvalues: tuple[float, ...]

    @property
    def nonnegative(self) -> bool:
        return self.status in _NONNEG

    @property
    def nonpositive(self) -> bool:
        return self.status in _NONPOS


@dataclass(frozen=True)
class SolveResult:
    det: complex
    singular: bool
    condition: float
    x: np.ndarray | None = None


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"square matrix required, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(np.float64))):
        raise ValueError("matrix entries must be finite")
    return m


def solve_det(m, rhs=None, rel_tol: float = DEFAULT_TOL) -> SolveResult:
    """Determinant plus optional linear solve, with a singularity gate.

    The matrix is flagged singular when |det| < rel_tol * scale^N where
    scale is the RMS row scale; a solve against a flagged matrix raises
    SingularMatrixError carrying the condition estimate.
    """
    m = _as_square(m)
    n = m.shape[0]
    if n == 0:
        return SolveResult(det=1.0 + 0.0j, singular=False, condition=1.0)
    det = complex(np.linalg.det(m))
    scale = float(np.linalg.norm(m)) / np.sqrt(n)
    if scale == 0.0:
        singular = True
        condition = np.inf
    else:
        gate = rel_tol * scale**n
        singular = abs(det) < gate
        condition = scale**n / max(abs(det), np.finfo(float).tiny)
    x = None
    if rhs is not None:
        if singular:
            raise SingularMatrixError("matrix flagged singular", condition)
        rhs = np.asarray(rhs, dtype=np.complex128)
        x = np.linalg.solve(m, rhs)
    return SolveResult(det=det, singular=singular, condition=condition, x=x)


def invertibility_margin(m, rel_tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """(invertible, margin) with margin = |det| / scale^N, the gate quantity."""
    res = solve_det(m, rel_tol=rel_tol)
    m_arr = _as_square(m)
    n = m_arr.shape[0]
    scale = float(np.linalg.norm(m_arr)) / np.sqrt(n) if n else 1.0
    if scale == 0.0:
        return False, 0.0
    return (not res.singular), abs(res.det) / scale**n


def herm_eig_system(m, rel_tol: float = DEFAULT_TOL):
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Rejects matrices whose Hermitian defect exceeds rel_tol * ||m||.
    """
    m = _as_square(m)
    norm = np.linalg.norm(m)
    if np.linalg.norm(m - m.conj().T) > rel_tol * max(norm, 1e-300):
        raise ValueError("matrix is not Hermitian within tolerance")
    herm = 0.5 * (m + m.conj().T)
    return _backend.jacobi_eigh(herm)


def herm_eigs(m, rel_tol: float = DEFAULT_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return herm_eig_system(m, rel_tol)[0]


def classify(m, tol: float = DEFAULT_TOL, scale: float | None = None) -> DefinitenessReport:
    """Definiteness of a Hermitian matrix, zeroing eigenvalues within tol * scale.

    The scale defaults to the largest eigenvalue magnitude.  Pass an
    explicit reference scale when the matrix is a difference of larger
    quantities: a cancellation down to roundoff is then recognized as the
    zero form instead of being classified from noise.
    """
    eigs = herm_eigs(m, rel_tol=max(tol, DEFAULT_TOL))
    own = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    ref = max(own, float(scale) if scale is not None else 0.0)
    if ref == 0.0:
        return DefinitenessReport(Definiteness.ZERO, 0.0, tuple(eigs))
    cut = tol * ref
    pos = int(np.sum(eigs > cut))
    neg = int(np.sum(eigs < -cut))
    zero = eigs.size - pos - neg
    if pos and neg:
        status = Definiteness.INDEFINITE
    elif pos:
        status = Definiteness.POS_SEMI_DEF if zero else Definiteness.POS_DEF
    elif neg:
        status = Definiteness.NEG_SEMI_DEF if zero else Definiteness.NEG_DEF
    else:
        status = Definiteness.ZERO
    margin = float(np.min(np.abs(eigs))) / ref
    return DefinitenessReport(status, margin, tuple(float(x) for x in eigs))


def signature(m, tol: float = DEFAULT_TOL) -> tuple[int, int]:
    """(positive, negative) eigenvalue counts after tolerance zeroing."""
    eigs = herm_eigs(m, rel_tol=max(tol, DEFAULT_TOL))
    scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    cut = tol * scale
    return int(np.sum(eigs > cut)), int(np.sum(eigs < -cut))

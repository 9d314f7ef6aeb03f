"""Quadratic forms on complex space: holomorphic, mixed, and real.

Three flavours appear throughout the calculus:

* ``HoloForm`` -- a holomorphic quadratic form f(u) = u.Mu / 2 on C^N,
  stored as a symmetric complex matrix M.
* ``MixedForm`` -- a form q(x) = x.Bx + conj(x).Cx + conj(x).D conj(x)
  on C^n, quadratic over the reals, complex valued.
* ``RealForm`` -- a real quadratic form on C^n viewed as R^2n.

A ``Weight`` is a strictly plurisubharmonic quadratic Phi(x) =
Re(x.Px) + conj(x).Hx with Hermitian part H positive definite; it carries
the graph Lambda = {(x, -2i(Px + H^T conj(x)))} in C^2n used to restrict
phase-space symbols, and the polarizations used by the stationary-phase
pipelines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import DEFAULT_TOL, Definiteness


def _sym(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def _cmat(m, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class HoloForm:
    """Holomorphic quadratic form f(u) = u.(mat)u / 2 with mat symmetric."""

    mat: np.ndarray

    def __post_init__(self):
        m = _cmat(self.mat, "mat")
        object.__setattr__(self, "mat", _sym(m))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __call__(self, u) -> complex:
        u = np.asarray(u, dtype=np.complex128)
        return complex(0.5 * u @ self.mat @ u)

    def subs(self, lin: np.ndarray) -> "HoloForm":
        """Pull back along a linear map: returns f(lin @ v) as a form in v."""
        lin = np.asarray(lin, dtype=np.complex128)
        return HoloForm(lin.T @ self.mat @ lin)

    def __add__(self, other: "HoloForm") -> "HoloForm":
        return HoloForm(self.mat + other.mat)

    def __sub__(self, other: "HoloForm") -> "HoloForm":
        return HoloForm(self.mat - other.mat)

    def __mul__(self, scalar) -> "HoloForm":
        return HoloForm(self.mat * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "HoloForm":
        return HoloForm(-self.mat)

    def block(self, rows, cols) -> np.ndarray:
        """Hessian block mat[rows][:, cols] for index arrays rows, cols."""
        return self.mat[np.ix_(rows, cols)]

    @staticmethod
    def zero(dim: int) -> "HoloForm":
        return HoloForm(np.zeros((dim, dim), dtype=np.complex128))


@dataclass(frozen=True)
class MixedForm:
    """q(x) = x.Bx + conj(x).Cx + conj(x).D conj(x); B and D symmetrized."""

    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        b = _sym(_cmat(self.B, "B"))
        c = _cmat(self.C, "C")
        d = _sym(_cmat(self.D, "D"))
        if not (b.shape == c.shape == d.shape):
            raise ValueError("B, C, D must share one shape")
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "C", c)
        object.__setattr__(self, "D", d)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    def __call__(self, x) -> complex:
        x = np.asarray(x, dtype=np.complex128)
        xc = np.conj(x)
        return complex(x @ self.B @ x + xc @ self.C @ x + xc @ self.D @ xc)

    def __add__(self, other: "MixedForm") -> "MixedForm":
        return MixedForm(self.B + other.B, self.C + other.C, self.D + other.D)

    def __sub__(self, other: "MixedForm") -> "MixedForm":
        return MixedForm(self.B - other.B, self.C - other.C, self.D - other.D)

    def __mul__(self, scalar) -> "MixedForm":
        s = complex(scalar)
        return MixedForm(self.B * s, self.C * s, self.D * s)

    __rmul__ = __mul__

    def __neg__(self) -> "MixedForm":
        return MixedForm(-self.B, -self.C, -self.D)

    def is_real_valued(self, tol: float = DEFAULT_TOL) -> bool:
        """True iff q(x) is real for every x: D = conj(B) and C Hermitian."""
        scale = max(np.linalg.norm(self.B), np.linalg.norm(self.C),
                    np.linalg.norm(self.D), 1e-300)
        return (np.linalg.norm(self.D - np.conj(self.B)) <= tol * scale
                and np.linalg.norm(self.C - self.C.conj().T) <= tol * scale)

    def polarization(self) -> HoloForm:
        """The unique holomorphic form p on C^2n with p(x, conj(x)) = q(x)."""
        n = self.n
        m = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        m[:n, :n] = 2.0 * self.B
        m[:n, n:] = self.C.T
        m[n:, :n] = self.C
        m[n:, n:] = 2.0 * self.D
        return HoloForm(m)

    @staticmethod
    def from_polarization(p: HoloForm) -> "MixedForm":
        """Restrict a holomorphic form on C^2n back to the anti-diagonal."""
        if p.dim % 2 != 0:
            raise ValueError("polarized form must live on C^(2n)")
        n = p.dim // 2
        m = p.mat
        return MixedForm(B=0.5 * m[:n, :n], C=m[n:, :n], D=0.5 * m[n:, n:])

    def real_matrix(self) -> np.ndarray:
        """Complex symmetric 2n x 2n S with q(x) = r.Sr, r = (Re x, Im x)."""
        b, c, d = self.B, self.C, self.D
        cs = 0.5 * (c + c.T)
        ca = 0.5 * (c - c.T)
        s_uu = b + cs + d
        s_vv = -b + cs - d
        s_uv = 1j * b + 1j * ca - 1j * d
        n = self.n
        s = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        s[:n, :n] = s_uu
        s[:n, n:] = s_uv
        s[n:, :n] = s_uv.T
        s[n:, n:] = s_vv
        return s

    @staticmethod
    def from_real_matrix(s) -> "MixedForm":
        """Inverse of real_matrix: rebuild (B, C, D) from a symmetric 2n x 2n."""
        s = _sym(np.asarray(s, dtype=np.complex128))
        if s.shape[0] % 2 != 0:
            raise ValueError("real matrix must be 2n x 2n")
        n = s.shape[0] // 2
        s11, s12, s22 = s[:n, :n], s[:n, n:], s[n:, n:]
        sym12 = _sym(s12)
        asym12 = 0.5 * (s12 - s12.T)
        b = 0.25 * (s11 - s22) - 0.5j * sym12
        d = 0.25 * (s11 - s22) + 0.5j * sym12
        c = 0.5 * (s11 + s22) - 1j * asym12
        return MixedForm(b, c, d)

    def re_part(self) -> "RealForm":
        return RealForm(self.real_matrix().real)

    def im_part(self) -> "RealForm":
        return RealForm(self.real_matrix().imag)

    @staticmethod
    def zero(n: int) -> "MixedForm":
        z = np.zeros((n, n), dtype=np.complex128)
        return MixedForm(z, z, z)


@dataclass(frozen=True)
class RealForm:
    """Real quadratic form on C^n ~ R^2n, value r.(mat)r with r = (Re x, Im x)."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
            raise ValueError("RealForm needs a 2n x 2n matrix")
        object.__setattr__(self, "mat", 0.5 * (m + m.T))

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=np.complex128)
        r = np.concatenate([x.real, x.imag])
        return float(r @ self.mat @ r)

    def __add__(self, other: "RealForm") -> "RealForm":
        return RealForm(self.mat + other.mat)

    def __sub__(self, other: "RealForm") -> "RealForm":
        return RealForm(self.mat - other.mat)

    def classify(self, tol: float = DEFAULT_TOL,
                 scale: float | None = None) -> linalg.DefinitenessReport:
        return linalg.classify(self.mat, tol=tol, scale=scale)

    def signature(self, tol: float = DEFAULT_TOL) -> tuple[int, int]:
        return linalg.signature(self.mat, tol=tol)


def real_form_from_callable(fn, dim: int) -> np.ndarray:
    """Matrix of a real-quadratic (possibly complex-valued) function on R^dim.

    Recovers the symmetric coefficient matrix by polarization on the
    standard basis; exact for quadratic fn up to roundoff.
    """
    basis = np.eye(dim)
    diag = np.array([fn(basis[a]) for a in range(dim)], dtype=np.complex128)
    s = np.zeros((dim, dim), dtype=np.complex128)
    for a in range(dim):
        s[a, a] = diag[a]
        for b in range(a + 1, dim):
            cross = 0.5 * (fn(basis[a] + basis[b]) - diag[a] - diag[b])
            s[a, b] = cross
            s[b, a] = cross
    return s


@dataclass(frozen=True)
class Weight:
    """Strictly plurisubharmonic quadratic Phi(x) = Re(x.Px) + conj(x).Hx.

    P is symmetrized and H Hermitized on construction; H must be positive
    definite (certified with a margin), so the graph chart below is always
    invertible.
    """

    P: np.ndarray
    H: np.ndarray
    hermitian_margin: float = field(init=False)

    def __post_init__(self):
        p = _sym(_cmat(self.P, "P"))
        h = _cmat(self.H, "H")
        h = 0.5 * (h + h.conj().T)
        if p.shape != h.shape:
            raise ValueError("P and H must share one shape")
        report = linalg.classify(h)
        if report.status is not Definiteness.POS_DEF:
            raise ValueError(
                f"Hermitian part must be positive definite, got {report.status.value}")
        object.__setattr__(self, "P", p)
        object.__setattr__(self, "H", h)
        object.__setattr__(self, "hermitian_margin", report.margin)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=np.complex128)
        xc = np.conj(x)
        return float((x @ self.P @ x).real + (xc @ self.H @ x).real)

    def mixed(self) -> MixedForm:
        """The weight as a mixed form: B = P/2, C = H, D = conj(P)/2."""
        return MixedForm(0.5 * self.P, self.H, 0.5 * np.conj(self.P))

    def herm_part(self) -> MixedForm:
        """Hermitian part: the average of the weight at x and ix."""
        z = np.zeros_like(self.P)
        return MixedForm(z, self.H, z)

    def herm_value(self, x) -> float:
        x = np.asarray(x, dtype=np.complex128)
        return float((np.conj(x) @ self.H @ x).real)

    def psi0(self) -> HoloForm:
        """Polarization of the weight, on C^2n."""
        return self.mixed().polarization()

    def psi_herm(self) -> HoloForm:
        """Polarization of the Hermitian part, on C^2n."""
        return self.herm_part().polarization()

    def xi(self, x) -> np.ndarray:
        """The cotangent section of the graph: xi(x) = -2i(Px + H^T conj(x))."""
        x = np.asarray(x, dtype=np.complex128)
        return -2j * (self.P @ x + self.H.T @ np.conj(x))

    def point(self, x) -> np.ndarray:
        """The graph point (x, xi(x)) in C^2n."""
        x = np.asarray(x, dtype=np.complex128)
        return np.concatenate([x, self.xi(x)])

    def chart(self) -> np.ndarray:
        """Linear map T(x, z) = (x, -2i(Px + H^T z)) on C^2n.

        Composing a phase-space form with T polarizes its graph restriction;
        T at z = conj(x) lands on the graph itself.
        """
        n = self.n
        t = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        t[:n, :n] = np.eye(n)
        t[n:, :n] = -2j * self.P
        t[n:, n:] = -2j * self.H.T
        return t

    def chart_inv(self) -> np.ndarray:
        n = self.n
        hti = np.linalg.inv(self.H.T)
        t = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        t[:n, :n] = np.eye(n)
        t[n:, :n] = -hti @ self.P
        t[n:, n:] = 0.5j * hti
        return t


def model_weight(n: int = 1) -> Weight:
    """The rotation-invariant weight |x|^2 / 4 used by the worked examples."""
    return Weight(P=np.zeros((n, n)), H=0.25 * np.eye(n))


def polarize(q: MixedForm) -> HoloForm:
    """Polarization of a mixed form: substitutes an independent variable for conj(x)."""
    return q.polarization()


def weight_parts(w: Weight) -> tuple[MixedForm, HoloForm, HoloForm]:
    """(Hermitian part, polarized weight, polarized Hermitian part)."""
    return w.herm_part(), w.psi0(), w.psi_herm()


@dataclass(frozen=True)
class LambdaRestriction:
    """Restriction of a phase-space form to the weight's graph.

    ``polarized`` is R(x, z) = F(x, -2i(Px + H^T z)); its anti-diagonal
    R(x, conj(x)) is the actual restriction, available as ``mixed`` and as
    the real/imaginary real forms.
    """

    polarized: HoloForm
    mixed: MixedForm
    re: RealForm
    im: RealForm

    def __call__(self, x) -> complex:
        return self.mixed(x)


def restrict_to_lambda(f: HoloForm, w: Weight) -> LambdaRestriction:
    """Restrict a holomorphic form on C^2n (phase-space variables) to the graph of w."""
    if f.dim != 2 * w.n:
        raise ValueError("form must live on C^(2n) for the weight's n")
    polarized = f.subs(w.chart())
    mixed = MixedForm.from_polarization(polarized)
    return LambdaRestriction(polarized=polarized, mixed=mixed,
                             re=mixed.re_part(), im=mixed.im_part())


def dual_form(a) -> np.ndarray:
    """Matrix of the convex dual of the form x -> x.Ax/2, i.e. A^{-1}.

    A must be real symmetric positive definite.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    if np.linalg.norm(a - a.T) > DEFAULT_TOL * max(np.linalg.norm(a), 1e-300):
        raise ValueError("matrix must be symmetric")
    report = linalg.classify(a)
    if report.status is not Definiteness.POS_DEF:
        raise ValueError(f"matrix must be positive definite, got {report.status.value}")
    return np.linalg.inv(a)


# ---------------------------------------------------------------------------
# JSON serialization: complex scalars as [re, im] pairs, matrices as nested
# lists of pairs.  This is the wire format of the command-line interface.

def complex_to_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def pair_to_complex(p) -> complex:
    if not isinstance(p, (list, tuple)) or len(p) != 2:
        raise ValueError(f"expected [re, im] pair, got {p!r}")
    return complex(float(p[0]), float(p[1]))


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[complex_to_pair(z) for z in row] for row in m]


def matrix_from_json(rows) -> np.ndarray:
    return np.array([[pair_to_complex(p) for p in row] for row in rows],
                    dtype=np.complex128)


def mixed_to_json(q: MixedForm) -> dict:
    return {"n": q.n, "B": matrix_to_json(q.B), "C": matrix_to_json(q.C),
            "D": matrix_to_json(q.D)}


def mixed_from_json(obj) -> MixedForm:
    q = MixedForm(matrix_from_json(obj["B"]), matrix_from_json(obj["C"]),
                  matrix_from_json(obj["D"]))
    if "n" in obj and int(obj["n"]) != q.n:
        raise ValueError("declared n does not match matrix shapes")
    return q


def holo_to_json(f: HoloForm) -> dict:
    return {"N": f.dim, "M": matrix_to_json(f.mat)}


def holo_from_json(obj) -> HoloForm:
    f = HoloForm(matrix_from_json(obj["M"]))
    if "N" in obj and int(obj["N"]) != f.dim:
        raise ValueError("declared N does not match matrix shape")
    return f


def weight_to_json(w: Weight) -> dict:
    return {"n": w.n, "P": matrix_to_json(w.P), "H": matrix_to_json(w.H)}


def weight_from_json(obj) -> Weight:
    w = Weight(matrix_from_json(obj["P"]), matrix_from_json(obj["H"]))
    if "n" in obj and int(obj["n"]) != w.n:
        raise ValueError("declared n does not match matrix shapes")
    return w

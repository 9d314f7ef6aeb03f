"""Complex symplectic linear algebra for the symbol calculus.

Fixes the symplectic form once and for all as sigma(mu, nu) = J mu . nu
with the block matrix J = [[0, I], [-I, 0]]; every sign convention in this
module traces back to that single choice.  Provides fundamental matrices
of phase-space forms, the Cayley correspondence with canonical maps, the
composition law, anti-linear reflections in a weight's graph, positivity
certificates, generating-phase checks, weight push-forwards, kernel phases
of the associated integral operators, and adjoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .forms import (HoloForm, RealForm, Weight, real_form_from_callable,
                    restrict_to_lambda)
from .linalg import DEFAULT_TOL, DefinitenessReport

_STRUCT_TOL = 1e-10


class SpectralGateError(Exception):
    """1 + F or 1 - F (or a composition resolvent) is numerically singular."""

    def __init__(self, which: str, margin: float):
        super().__init__(f"spectral gate failed: {which} (margin {margin:.3e})")
        self.which = which
        self.margin = margin


class GraphError(Exception):
    """An image plane fails to be a graph over the base variables."""


def symplectic_j(n: int) -> np.ndarray:
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def symplectic_product(mu, nu) -> complex:
    """sigma(mu, nu) = J mu . nu, bilinear (no conjugation)."""
    mu = np.asarray(mu, dtype=np.complex128)
    nu = np.asarray(nu, dtype=np.complex128)
    n = mu.shape[0] // 2
    return complex(symplectic_j(n) @ mu @ nu)


@dataclass(frozen=True)
class FundamentalMatrix:
    """2n x 2n matrix generating a linear Hamilton flow: J F must be symmetric."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
            raise ValueError("2n x 2n matrix required")
        n = m.shape[0] // 2
        jf = symplectic_j(n) @ m
        defect = np.linalg.norm(jf - jf.T)
        if defect > _STRUCT_TOL * max(np.linalg.norm(m), 1e-300):
            raise ValueError("not a Hamiltonian matrix: J F is not symmetric")
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2

    def hamilton_field(self, rho) -> np.ndarray:
        """The Hamilton vector field of the generating form, 2 F rho."""
        return 2.0 * (self.mat @ np.asarray(rho, dtype=np.complex128))


@dataclass(frozen=True)
class CanonicalMap:
    """Complex linear canonical transformation: kappa^T J kappa = J."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
            raise ValueError("2n x 2n matrix required")
        n = m.shape[0] // 2
        j = symplectic_j(n)
        defect = np.linalg.norm(m.T @ j @ m - j)
        if defect > _STRUCT_TOL * max(np.linalg.norm(m) ** 2, 1.0):
            raise ValueError("matrix is not canonical (kappa^T J kappa != J)")
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2

    def __call__(self, rho) -> np.ndarray:
        return self.mat @ np.asarray(rho, dtype=np.complex128)

    def inverse(self) -> "CanonicalMap":
        return CanonicalMap(np.linalg.inv(self.mat))

    def __matmul__(self, other: "CanonicalMap") -> "CanonicalMap":
        return CanonicalMap(self.mat @ other.mat)


@dataclass(frozen=True)
class AntiLinearMap:
    """Anti-linear map rho -> C conj(rho), kept first class so compositions
    with linear maps reduce to plain matrices mechanically."""

    mat: np.ndarray

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2

    def __call__(self, rho) -> np.ndarray:
        return self.mat @ np.conj(np.asarray(rho, dtype=np.complex128))

    def is_involution(self, tol: float = _STRUCT_TOL) -> bool:
        prod = self.mat @ np.conj(self.mat)
        return np.linalg.norm(prod - np.eye(self.mat.shape[0])) <= tol * max(
            np.linalg.norm(self.mat) ** 2, 1.0)

    def is_conjugate_symplectic(self, tol: float = _STRUCT_TOL) -> bool:
        j = symplectic_j(self.n)
        return np.linalg.norm(self.mat.T @ j @ self.mat - j) <= tol * max(
            np.linalg.norm(self.mat) ** 2, 1.0)

    def after_linear(self, k: np.ndarray) -> "AntiLinearMap":
        """self o k as an anti-linear map (k linear)."""
        return AntiLinearMap(self.mat @ np.conj(k))

    def before_linear(self, k: np.ndarray) -> "AntiLinearMap":
        """k o self as an anti-linear map (k linear)."""
        return AntiLinearMap(k @ self.mat)

    def compose_antilinear(self, other: "AntiLinearMap") -> np.ndarray:
        """self o other is linear; returns its plain matrix."""
        return self.mat @ np.conj(other.mat)


def fundamental_matrix(f: HoloForm) -> FundamentalMatrix:
    """Fundamental matrix (1/2) J Hess(f) of a phase-space form on C^2n."""
    if f.dim % 2 != 0:
        raise ValueError("phase-space form must live on C^2n")
    n = f.dim // 2
    return FundamentalMatrix(0.5 * symplectic_j(n) @ f.mat)


def form_from_fundamental(fm: FundamentalMatrix) -> HoloForm:
    """Inverse of fundamental_matrix: Hess = -2 J F."""
    return HoloForm(-2.0 * symplectic_j(fm.n) @ fm.mat)


def spectral_gates(fm: FundamentalMatrix,
                   rel_tol: float = DEFAULT_TOL) -> dict[str, tuple[bool, float]]:
    """Invertibility of 1 -+ F, i.e. the gates keeping +-1 off the spectrum.

    Implemented as determinant gates with margins, never as eigensolves.
    """
    eye = np.eye(fm.mat.shape[0])
    plus_ok, plus_margin = linalg.invertibility_margin(fm.mat - eye, rel_tol)
    minus_ok, minus_margin = linalg.invertibility_margin(fm.mat + eye, rel_tol)
    return {"plus": (plus_ok, plus_margin), "minus": (minus_ok, minus_margin)}


def cayley(fm: FundamentalMatrix, rel_tol: float = DEFAULT_TOL) -> CanonicalMap:
    """Canonical map (1 - F)(1 + F)^{-1}; fails loudly when 1 + F is singular."""
    eye = np.eye(fm.mat.shape[0])
    ok, margin = linalg.invertibility_margin(eye + fm.mat, rel_tol)
    if not ok:
        raise SpectralGateError("-1 in spectrum (1 + F singular)", margin)
    return CanonicalMap((eye - fm.mat) @ np.linalg.inv(eye + fm.mat))


def inverse_cayley(kappa: CanonicalMap, rel_tol: float = DEFAULT_TOL) -> FundamentalMatrix:
    """Fundamental matrix (1 + kappa)^{-1}(1 - kappa) of a canonical map."""
    eye = np.eye(kappa.mat.shape[0])
    ok, margin = linalg.invertibility_margin(eye + kappa.mat, rel_tol)
    if not ok:
        raise SpectralGateError("-1 in spectrum of the canonical map", margin)
    return FundamentalMatrix(np.linalg.solve(eye + kappa.mat, eye - kappa.mat))


def composition_gate(fm_first: FundamentalMatrix, fm_second: FundamentalMatrix,
                     rel_tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Invertibility of 1 + F2 F1, the resolvent gate of the composition law."""
    eye = np.eye(fm_first.mat.shape[0])
    return linalg.invertibility_margin(eye + fm_second.mat @ fm_first.mat, rel_tol)


def compose_fundamental(fm_first: FundamentalMatrix, fm_second: FundamentalMatrix,
                        rel_tol: float = DEFAULT_TOL) -> FundamentalMatrix:
    """Fundamental matrix of the composed flow, second applied after first:

        (1 + F1)(1 + F2 F1)^{-1}(1 + F2) - 1.

    Requires 1 + F2 F1 invertible, which is exactly the condition that the
    composed canonical map avoids eigenvalue -1.
    """
    ok, margin = composition_gate(fm_first, fm_second, rel_tol)
    if not ok:
        raise SpectralGateError("composition resolvent 1 + F2 F1 singular", margin)
    f1, f2 = fm_first.mat, fm_second.mat
    eye = np.eye(f1.shape[0])
    mat = (eye + f1) @ np.linalg.solve(eye + f2 @ f1, eye + f2) - eye
    return FundamentalMatrix(mat)


def involution(w: Weight) -> AntiLinearMap:
    """The unique anti-linear involution of C^2n fixing the weight's graph.

    Built as T o swap o conj o T^{-1} where T is the graph chart: points
    T(x, conj(x)) are exactly the graph, and swapping the chart slots
    before conjugating leaves them fixed.
    """
    n = w.n
    t = w.chart()
    tinv = w.chart_inv()
    swap = np.zeros((2 * n, 2 * n))
    swap[:n, n:] = np.eye(n)
    swap[n:, :n] = np.eye(n)
    return AntiLinearMap(t @ swap @ np.conj(tinv))


def positivity(kappa: CanonicalMap, w_in: Weight, w_out: Weight,
               tol: float = DEFAULT_TOL) -> DefinitenessReport:
    """Definiteness of the positivity form of kappa relative to the two graphs:

        rho -> (1/i)(sigma(kappa rho, i_out kappa rho) - sigma(rho, i_in rho)),

    a real-valued quadratic form on C^2n viewed as R^4n.  PosDef means the
    map is strictly positive; any nonnegative status means positive.
    """
    n = kappa.n
    iota_in = involution(w_in)
    iota_out = involution(w_out)
    j = symplectic_j(n)

    def value(r):
        rho = r[:2 * n] + 1j * r[2 * n:]
        out = kappa(rho)
        lhs = j @ out @ iota_out(out)
        rhs = j @ rho @ iota_in(rho)
        return (lhs - rhs) / 1j

    s = real_form_from_callable(value, 4 * n)
    # scale of the two constituent forms, so an exact cancellation is
    # recognized as the zero form instead of being classified from roundoff
    ref = max(np.linalg.norm(j @ iota_in.mat),
              np.linalg.norm(kappa.mat.T @ j @ iota_out.mat @ np.conj(kappa.mat)),
              1e-300)
    if np.linalg.norm(s.imag) > 1e-10 * ref:
        raise ValueError("positivity form failed its reality check")
    return RealForm(s.real).classify(tol=tol, scale=ref)


def adjoint_map(kappa: CanonicalMap, w1: Weight, w2: Weight) -> CanonicalMap:
    """Canonical map of the adjoint operator: i_1 o kappa^{-1} o i_2.

    For kappa mapping the w1-space to the w2-space, the adjoint maps back,
    and its positivity is relative to the swapped pair of graphs.
    """
    iota1 = involution(w1)
    iota2 = involution(w2)
    inv = np.linalg.inv(kappa.mat)
    mat = iota1.compose_antilinear(iota2.before_linear(inv))
    return CanonicalMap(mat)


@dataclass(frozen=True)
class PhaseFunction:
    """Holomorphic quadratic phase on C^n_x x C^n_y x C^N_theta."""

    form: HoloForm
    n: int
    fiber_dim: int

    def __post_init__(self):
        if self.form.dim != 2 * self.n + self.fiber_dim:
            raise ValueError("phase dimensions inconsistent with the variable split")

    def _idx(self):
        n, nn = self.n, self.fiber_dim
        x = list(range(n))
        y = list(range(n, 2 * n))
        th = list(range(2 * n, 2 * n + nn))
        return x, y, th


@dataclass(frozen=True)
class PhaseReport:
    nondegenerate: bool
    graph: bool
    graph_margin: float
    kappa: CanonicalMap | None
    signature: tuple[int, int] | None
    deficient_rows: tuple[int, ...] = ()


def phase_checks(phi: PhaseFunction, weight: Weight | None = None,
                 rel_tol: float = DEFAULT_TOL) -> PhaseReport:
    """Rank and graph tests for a quadratic phase, recovering the canonical map.

    The phase is nondegenerate when the theta rows of its Hessian have full
    rank; it generates the graph of a linear canonical map when the mixed
    (x, theta) x (y, theta) block is invertible, and the map is recovered by
    solving the induced linear relations.  With a weight, also reports the
    signature of (y, theta) -> -Im phi(0, y, theta) + Phi(y).
    """
    xi_, yi_, ti_ = phi._idx()
    n, nn = phi.n, phi.fiber_dim
    m = phi.form.mat

    theta_rows = m[np.ix_(ti_, xi_ + yi_ + ti_)]
    svals = np.linalg.svd(theta_rows, compute_uv=False) if nn else np.array([])
    scale = float(svals[0]) if svals.size else 0.0
    rank = int(np.sum(svals > rel_tol * max(scale, 1e-300))) if nn else 0
    nondeg = rank == nn
    deficient = tuple(range(rank, nn)) if not nondeg else ()

    graph_block = np.block([
        [m[np.ix_(xi_, yi_)], m[np.ix_(xi_, ti_)]],
        [m[np.ix_(ti_, yi_)], m[np.ix_(ti_, ti_)]],
    ])
    graph_ok, graph_margin = linalg.invertibility_margin(graph_block, rel_tol)

    kappa = None
    if nondeg and graph_ok:
        # relations on the critical set: rows (y, theta) x cols give
        #   [phi_yx  phi_yth][x    ]   [-eta - phi_yy y]
        #   [phi_thx phi_thth][theta] = [-phi_thy y     ]
        solve_mat = np.block([
            [m[np.ix_(yi_, xi_)], m[np.ix_(yi_, ti_)]],
            [m[np.ix_(ti_, xi_)], m[np.ix_(ti_, ti_)]],
        ])
        k = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        for col in range(2 * n):
            y = np.zeros(n, dtype=np.complex128)
            eta = np.zeros(n, dtype=np.complex128)
            if col < n:
                y[col] = 1.0
            else:
                eta[col - n] = 1.0
            rhs = np.concatenate([
                -eta - m[np.ix_(yi_, yi_)] @ y,
                -m[np.ix_(ti_, yi_)] @ y,
            ])
            sol = np.linalg.solve(solve_mat, rhs)
            x, theta = sol[:n], sol[n:]
            xi_out = m[np.ix_(xi_, xi_)] @ x + m[np.ix_(xi_, yi_)] @ y \
                + m[np.ix_(xi_, ti_)] @ theta
            k[:n, col] = x
            k[n:, col] = xi_out
        kappa = CanonicalMap(k)

    sig = None
    if weight is not None:
        sub = m[np.ix_(yi_ + ti_, yi_ + ti_)]

        def value(r):
            w_vec = r[:n + nn] + 1j * r[n + nn:]
            phase_val = 0.5 * w_vec @ sub @ w_vec
            return -phase_val.imag + weight(w_vec[:n])

        s = real_form_from_callable(value, 2 * (n + nn))
        sig = RealForm(s.real).signature(tol=rel_tol)

    return PhaseReport(nondegenerate=nondeg, graph=graph_ok,
                       graph_margin=graph_margin, kappa=kappa,
                       signature=sig, deficient_rows=deficient)


def weyl_generating_phase(f: HoloForm) -> PhaseFunction:
    """The phase (x - y).theta + f((x + y)/2, theta) on C^(3n).

    Generates the canonical map that the Cayley correspondence attaches to
    the phase-space form f.
    """
    if f.dim % 2 != 0:
        raise ValueError("phase-space form must live on C^2n")
    n = f.dim // 2
    dim = 3 * n
    mat = np.zeros((dim, dim), dtype=np.complex128)
    # (x - y).theta
    for i in range(n):
        mat[i, 2 * n + i] += 1.0
        mat[2 * n + i, i] += 1.0
        mat[n + i, 2 * n + i] -= 1.0
        mat[2 * n + i, n + i] -= 1.0
    # f((x+y)/2, theta) pulled back along the midpoint map
    lin = np.zeros((2 * n, dim), dtype=np.complex128)
    lin[:n, :n] = 0.5 * np.eye(n)
    lin[:n, n:2 * n] = 0.5 * np.eye(n)
    lin[n:, 2 * n:] = np.eye(n)
    mat += f.subs(lin).mat
    return PhaseFunction(HoloForm(mat), n=n, fiber_dim=n)


def _real_linear_blocks(a_plus: np.ndarray, a_minus: np.ndarray) -> np.ndarray:
    """Doubled matrix of the real-linear map x -> A+ x + A- conj(x)."""
    return np.block([[a_plus, a_minus], [np.conj(a_minus), np.conj(a_plus)]])


def pushforward_weight(kappa: CanonicalMap, w: Weight,
                       rel_tol: float = DEFAULT_TOL) -> Weight:
    """The weight whose graph is the image of w's graph under kappa.

    The image is parametrized by the base point; it is a graph precisely
    when the induced real-linear base map is invertible, and the new (P, H)
    blocks are read off the holomorphic/anti-holomorphic split of the fiber
    map.  Raises GraphError when the base map degenerates, and ValueError
    when the recovered Hermitian part is not positive definite.
    """
    n = w.n
    k11, k12 = kappa.mat[:n, :n], kappa.mat[:n, n:]
    k21, k22 = kappa.mat[n:, :n], kappa.mat[n:, n:]
    e_plus, e_minus = -2j * w.P, -2j * w.H.T
    a_plus, a_minus = k11 + k12 @ e_plus, k12 @ e_minus
    b_plus, b_minus = k21 + k22 @ e_plus, k22 @ e_minus

    doubled = _real_linear_blocks(a_plus, a_minus)
    ok, margin = linalg.invertibility_margin(doubled, rel_tol)
    if not ok:
        raise GraphError(
            f"image is not a graph over the base (margin {margin:.3e})")
    g = _real_linear_blocks(b_plus, b_minus) @ np.linalg.inv(doubled)
    g_plus, g_minus = g[:n, :n], g[:n, n:]

    p1 = 0.5j * g_plus
    h1 = (0.5j * g_minus).T
    sym_defect = np.linalg.norm(p1 - p1.T)
    herm_defect = np.linalg.norm(h1 - h1.conj().T)
    scale = max(np.linalg.norm(p1), np.linalg.norm(h1), 1e-300)
    if max(sym_defect, herm_defect) > 1e-8 * scale:
        raise GraphError("image graph is not the graph of a weight")
    return Weight(P=0.5 * (p1 + p1.T), H=0.5 * (h1 + h1.conj().T))


@dataclass(frozen=True)
class KernelPhase:
    """Quadratic phase of the operator kernel against the source weight.

    The kernel is a nonzero constant times exp(2 psi(x, theta)); the
    constant itself is left to the numerical oracle.
    """

    psi: HoloForm
    n: int

    def coupling(self) -> np.ndarray:
        n = self.n
        return self.psi.mat[:n, n:]

    def adjoint_phase(self) -> HoloForm:
        """Phase of the adjoint kernel: psi*(y, x) = conj(psi(conj(x), conj(y)))."""
        n = self.n
        m = self.psi.mat
        out = np.zeros_like(m)
        out[:n, :n] = np.conj(m[n:, n:])
        out[n:, n:] = np.conj(m[:n, :n])
        out[:n, n:] = np.conj(m[:n, n:]).T
        out[n:, :n] = np.conj(m[n:, :n]).T
        return HoloForm(out)


def kappa_of_generating_pair(psi: HoloForm, n: int) -> np.ndarray:
    """Matrix of the map generated by psi(x, theta) in the kernel normal form:

        (theta, 2i d_theta psi) |-> (x, -2i d_x psi).

    Needs the coupling block psi_xtheta invertible.
    """
    m = psi.mat
    p_xx, p_xt = m[:n, :n], m[:n, n:]
    p_tx, p_tt = m[n:, :n], m[n:, n:]
    p_tx_inv = np.linalg.inv(p_tx)
    x_t = -p_tx_inv @ p_tt
    x_eta = -0.5j * p_tx_inv
    top = np.hstack([x_t, x_eta])
    bottom = np.hstack([-2j * (p_xx @ x_t + p_xt), -2j * (p_xx @ x_eta)])
    return np.vstack([top, bottom])


def fio_kernel_phase(kappa: CanonicalMap, w1: Weight, w2: Weight,
                     rel_tol: float = DEFAULT_TOL) -> KernelPhase:
    """Kernel phase of the operator quantizing kappa from the w1- to the w2-space.

    Factors kappa through the projection-type map of the source weight; the
    remaining factor has a generating quadratic provided its theta-to-x
    coupling is invertible.  That failure is reported, not fatal.
    """
    n = kappa.n
    core = kappa.mat @ involution(w1).mat  # kappa o kappa_{2 psi1 / i}
    k11, k12 = core[:n, :n], core[:n, n:]
    k21, k22 = core[n:, :n], core[n:, n:]
    ok, margin = linalg.invertibility_margin(k12, rel_tol)
    if not ok:
        raise GraphError(
            f"no kernel of the exponential-quadratic normal form: "
            f"theta-to-x coupling singular (margin {margin:.3e})")
    k12_inv = np.linalg.inv(k12)
    p_tx = -0.5j * k12_inv
    p_tt = 0.5j * k12_inv @ k11
    p_xx = 0.5j * k22 @ k12_inv
    p_xt_direct = 0.5j * k21 - k22 @ p_tt
    scale = max(np.linalg.norm(p_tx), 1e-300)
    checks = [np.linalg.norm(p_tt - p_tt.T), np.linalg.norm(p_xx - p_xx.T),
              np.linalg.norm(p_xt_direct - p_tx.T)]
    if max(checks) > 1e-8 * scale:
        raise ValueError("generating-phase consistency check failed")
    mat = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    mat[:n, :n] = 0.5 * (p_xx + p_xx.T)
    mat[n:, n:] = 0.5 * (p_tt + p_tt.T)
    mat[:n, n:] = p_tx.T
    mat[n:, :n] = p_tx
    return KernelPhase(psi=HoloForm(mat), n=n)


def map_from_kernel_phase(phase: KernelPhase, w1: Weight) -> CanonicalMap:
    """Reassemble the canonical map from its kernel phase and source weight."""
    core = kappa_of_generating_pair(phase.psi, phase.n)
    return CanonicalMap(core @ np.linalg.inv(involution(w1).mat))


def boundedness_restriction(f: HoloForm, w: Weight, tol: float = DEFAULT_TOL):
    """(classification of Im f on the graph, the restriction object).

    The imaginary part is measured against the size of the whole
    restriction, so a real-valued restriction classifies as the zero form
    (the edge of boundedness) rather than from roundoff.
    """
    restriction = restrict_to_lambda(f, w)
    ref = float(np.linalg.norm(restriction.mixed.real_matrix()))
    return restriction.im.classify(tol=tol, scale=ref), restriction


def weight_difference(w_a: Weight, w_b: Weight) -> RealForm:
    """The real form of w_a - w_b, for monotonicity certificates."""
    diff = w_a.mixed() - w_b.mixed()
    s = diff.real_matrix()
    return RealForm(s.real)

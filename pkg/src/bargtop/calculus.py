"""Exact quadratic stationary phase and the symbol pipelines.

The three headline operations translate between Gaussian Toeplitz symbols
and phase-space (Weyl) exponents and compose two Toeplitz factors:

* ``toeplitz_to_weyl`` -- Gaussian smoothing of the symbol, evaluated in
  closed form by a quadratic critical value, then un-polarized through the
  weight's graph chart.
* ``weyl_to_toeplitz`` -- the inverse critical-value problem.
* ``compose_toeplitz`` -- factor exponents composed through the resolvent
  law of their fundamental matrices, then pushed back to a Toeplitz symbol.

Every hypothesis of the underlying composition theory appears exactly once
in a pipeline's gate trail, with a pass/fail verdict and a numerical
margin.  Multiplicative constants are deliberately not produced here: the
square-root branch in exact stationary phase makes them convention bound,
so pipelines return exponents and the quadrature oracle estimates the
constant numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg, symplectic
from .forms import HoloForm, MixedForm, Weight
from .linalg import DEFAULT_TOL, Definiteness
from .symplectic import (boundedness_restriction, composition_gate,
                         compose_fundamental, form_from_fundamental,
                         fundamental_matrix, spectral_gates)


class DegenerateStationaryPhase(Exception):
    """The fiber Hessian of a critical-value reduction is singular."""

    def __init__(self, message: str, det: complex):
        super().__init__(f"{message} (fiber Hessian determinant {det:.3e})")
        self.det = det


@dataclass(frozen=True)
class CriticalValue:
    """Result of eliminating the trailing variables of a holomorphic form.

    reduced(u) = f(u, critical_map @ u); the critical point is unique and
    non-degenerate whenever this object exists.
    """

    reduced: HoloForm
    critical_map: np.ndarray
    fiber_hessian_det: complex


def critical_value(f: HoloForm, keep: int, rel_tol: float = DEFAULT_TOL) -> CriticalValue:
    """Critical value of f over its last dim - keep variables (Schur reduction)."""
    dim = f.dim
    if not 0 <= keep <= dim:
        raise ValueError("keep must be between 0 and the form dimension")
    m = f.mat
    muu, muv = m[:keep, :keep], m[:keep, keep:]
    mvu, mvv = m[keep:, :keep], m[keep:, keep:]
    res = linalg.solve_det(mvv, rel_tol=rel_tol)
    if res.singular:
        raise DegenerateStationaryPhase("degenerate stationary phase", res.det)
    x = np.linalg.solve(mvv, mvu)
    return CriticalValue(
        reduced=HoloForm(muu - muv @ x),
        critical_map=-x,
        fiber_hessian_det=res.det,
    )


def legendre_invert(f: HoloForm, h: HoloForm, rel_tol: float = DEFAULT_TOL) -> HoloForm:
    """Solve h(X) = vc_Y(f(X, Y) + g(Y)) for g, given the coupling of f.

    f lives on C^N_X x C^N_Y with invertible mixed Hessian block; the
    inversion is g(Y) = vc_X(-f(X, Y) + h(X)), defined when -f(X, 0) + h(X)
    is non-degenerate.
    """
    if f.dim % 2 != 0 or h.dim != f.dim // 2:
        raise ValueError("need f on C^(2N) and h on C^N")
    big_n = h.dim
    ok, margin = linalg.invertibility_margin(f.mat[:big_n, big_n:], rel_tol)
    if not ok:
        raise ValueError(f"coupling block of f is singular (margin {margin:.3e})")
    # variables ordered (Y, X); eliminate the trailing X block
    swap = np.zeros((2 * big_n, 2 * big_n))
    swap[:big_n, big_n:] = np.eye(big_n)
    swap[big_n:, :big_n] = np.eye(big_n)
    embed_x = np.zeros((big_n, 2 * big_n))
    embed_x[:, big_n:] = np.eye(big_n)
    total = (-1.0) * f.subs(swap) + h.subs(embed_x)
    try:
        return critical_value(total, keep=big_n, rel_tol=rel_tol).reduced
    except DegenerateStationaryPhase as exc:
        raise DegenerateStationaryPhase("inversion undefined", exc.det) from None


def gaussian_value(s, b=None) -> complex:
    """Closed form of the Gaussian integral of exp(-u.Su/2 + b.u) over R^m.

    S must be real symmetric positive definite; b may be complex, in which
    case the value continues analytically to (2 pi)^(m/2) det(S)^(-1/2)
    exp(b.S^{-1}b / 2).
    """
    s = np.asarray(s, dtype=np.float64)
    report = linalg.classify(s)
    if report.status is not Definiteness.POS_DEF:
        raise ValueError(f"decay matrix must be positive definite, got {report.status.value}")
    m = s.shape[0]
    det = float(np.linalg.det(s))
    value = (2.0 * np.pi) ** (m / 2.0) / np.sqrt(det)
    if b is not None:
        b = np.asarray(b, dtype=np.complex128)
        value = value * np.exp(0.5 * b @ np.linalg.solve(s, b))
    return complex(value)


@dataclass(frozen=True)
class Gate:
    """One hypothesis of the composition theory: verdict plus margin."""

    name: str
    passed: bool
    margin: float
    detail: str = ""


@dataclass
class PipelineReport:
    """Ordered gate trail and the exponents a pipeline produced.

    Exponent fields stay None unless the gates their computation actually
    needs have passed; certification verdicts require the whole trail.
    constant_estimate is only ever filled by the quadrature oracle.
    """

    gates: list[Gate] = field(default_factory=list)
    weyl_exponent: HoloForm | None = None
    toeplitz_exponent: MixedForm | None = None
    constant_estimate: complex | None = None
    certified_toeplitz: bool | None = None

    @property
    def all_passed(self) -> bool:
        return all(g.passed for g in self.gates)

    def gate(self, name: str) -> Gate:
        for g in self.gates:
            if g.name == name:
                return g
        raise KeyError(name)

    def first_failure(self) -> Gate | None:
        for g in self.gates:
            if not g.passed:
                return g
        return None


def _domination_gate(name: str, w: Weight, q: MixedForm, tol: float) -> Gate:
    """Strict bound of the real part of q by the Hermitian part of the weight."""
    herm = w.herm_part().re_part()
    re_q = q.re_part()
    ref = max(float(np.linalg.norm(herm.mat)), float(np.linalg.norm(re_q.mat)))
    report = (herm - re_q).classify(tol=tol, scale=ref)
    return Gate(name, report.status is Definiteness.POS_DEF, report.margin,
                detail=report.status.value)


def _spectral_gate_pair(fm, prefix: str, tol: float) -> list[Gate]:
    sp = spectral_gates(fm, rel_tol=tol)
    plus_ok, plus_margin = sp["plus"]
    minus_ok, minus_margin = sp["minus"]
    return [Gate(f"{prefix}spectrum-plus-one", plus_ok, plus_margin),
            Gate(f"{prefix}spectrum-minus-one", minus_ok, minus_margin)]


def _bounded_gate(name: str, f: HoloForm, w: Weight, tol: float) -> tuple[Gate, object]:
    report, restriction = boundedness_restriction(f, w, tol=tol)
    detail = report.status.value
    if report.nonnegative and report.status is not Definiteness.POS_DEF:
        detail += " (edge of boundedness)"
    return Gate(name, report.nonnegative, report.margin, detail=detail), restriction


def _difference_embed(n: int, flip: bool) -> np.ndarray:
    """(a, b, c, d) -> (c - a, d - b) when flip else (a - c, b - d), blockwise."""
    eye = np.eye(n)
    lin = np.zeros((2 * n, 4 * n))
    sign = -1.0 if flip else 1.0
    lin[:n, :n] = sign * eye
    lin[:n, 2 * n:3 * n] = -sign * eye
    lin[n:, n:2 * n] = sign * eye
    lin[n:, 3 * n:] = -sign * eye
    return lin


def _tail_embed(n: int) -> np.ndarray:
    """(a, b, c, d) -> (c, d) blockwise."""
    lin = np.zeros((2 * n, 4 * n))
    lin[:, 2 * n:] = np.eye(2 * n)
    return lin


def toeplitz_to_weyl(q: MixedForm, w: Weight, tol: float = DEFAULT_TOL) -> PipelineReport:
    """Phase-space exponent of the Toeplitz operator with symbol exp(q).

    Gate trail: strict domination of Re q by the Hermitian part of the
    weight (which also guarantees the stationary phase below is
    non-degenerate), then the two spectral gates of the resulting
    fundamental matrix, then boundedness of the phase-space symbol on the
    weight's graph.
    """
    if q.n != w.n:
        raise ValueError("symbol and weight dimensions differ")
    n = w.n
    report = PipelineReport()
    dom = _domination_gate("symbol-domination", w, q, tol)
    report.gates.append(dom)
    if not dom.passed:
        return report

    # critical value over the source variables of
    #   -4 PsiHerm(x - y, z - theta) + q_pol(y, theta), variables (x, z, y, theta)
    psih = w.psi_herm()
    total = (-4.0) * psih.subs(_difference_embed(n, flip=False)) \
        + q.polarization().subs(_tail_embed(n))
    reduced = critical_value(total, keep=2 * n, rel_tol=tol).reduced
    f = (-1j) * reduced.subs(w.chart_inv())
    report.weyl_exponent = f

    fm = fundamental_matrix(f)
    report.gates.extend(_spectral_gate_pair(fm, "", tol))
    bounded_gate, _ = _bounded_gate("weyl-bounded", f, w, tol)
    report.gates.append(bounded_gate)
    return report


def weyl_to_toeplitz(g: HoloForm, w: Weight, tol: float = DEFAULT_TOL) -> PipelineReport:
    """Toeplitz symbol exponent of the phase-space quantization of exp(i g).

    Gate trail: nonnegativity of Im g on the weight's graph, the spectral
    pair for g's fundamental matrix, non-degeneracy of the inversion form,
    and finally strict domination of the recovered symbol's real part.

    The exponent algebra only needs the spectral and non-degeneracy gates,
    so the symbol is produced whenever those pass; the boundedness and
    domination verdicts decide whether the result is certified as a bounded
    Toeplitz operator (certified_toeplitz requires the whole trail).
    """
    if g.dim != 2 * w.n:
        raise ValueError("phase-space form and weight dimensions differ")
    n = w.n
    report = PipelineReport()

    bounded_gate, _ = _bounded_gate("weyl-bounded", g, w, tol)
    report.gates.append(bounded_gate)
    fm = fundamental_matrix(g)
    report.gates.extend(_spectral_gate_pair(fm, "", tol))

    graph_pullback = (1j) * g.subs(w.chart())
    inversion_form = graph_pullback + 4.0 * w.psi_herm()
    nondeg_ok, nondeg_margin = linalg.invertibility_margin(inversion_form.mat, tol)
    report.gates.append(Gate("weyl-nondegenerate", nondeg_ok, nondeg_margin))
    computable = nondeg_ok and all(
        gate.passed for gate in report.gates if gate.name.startswith("spectrum"))
    if not computable:
        return report

    # critical value over the phase-space chart variables of
    #   4 PsiHerm(x - y, z - theta) + i g(x, xi(x, z)), variables (y, theta, x, z)
    total = 4.0 * w.psi_herm().subs(_difference_embed(n, flip=True)) \
        + graph_pullback.subs(_tail_embed(n))
    q_pol = critical_value(total, keep=2 * n, rel_tol=tol).reduced
    q = MixedForm.from_polarization(q_pol)
    report.toeplitz_exponent = q

    dom = _domination_gate("toeplitz-domination", w, q, tol)
    report.gates.append(dom)
    report.certified_toeplitz = report.all_passed
    return report


def _prefixed(gates: list[Gate], prefix: str) -> list[Gate]:
    return [Gate(f"{prefix}{g.name}", g.passed, g.margin, g.detail) for g in gates]


def compose_toeplitz(q_first: MixedForm, q_second: MixedForm, w: Weight,
                     tol: float = DEFAULT_TOL) -> PipelineReport:
    """Compose two Gaussian Toeplitz operators, q_first applied first.

    Both factors run through toeplitz_to_weyl (their gates appear in the
    trail under first:/second: prefixes), the factor exponents compose
    through the resolvent law of their fundamental matrices, and the result
    is pushed back through weyl_to_toeplitz (composed: prefix).  A
    composition whose exponent exists but fails the final domination gate
    is a valid negative outcome: the report carries the exponent with
    certified_toeplitz False.
    """
    report = PipelineReport()
    rep_first = toeplitz_to_weyl(q_first, w, tol)
    rep_second = toeplitz_to_weyl(q_second, w, tol)
    report.gates.extend(_prefixed(rep_first.gates, "first:"))
    report.gates.extend(_prefixed(rep_second.gates, "second:"))
    if not (rep_first.all_passed and rep_second.all_passed):
        return report

    fm_first = fundamental_matrix(rep_first.weyl_exponent)
    fm_second = fundamental_matrix(rep_second.weyl_exponent)
    comp_ok, comp_margin = composition_gate(fm_first, fm_second, rel_tol=tol)
    report.gates.append(Gate("composition-resolvent", comp_ok, comp_margin))
    if not comp_ok:
        return report

    fm_hat = compose_fundamental(fm_first, fm_second, rel_tol=tol)
    f_hat = form_from_fundamental(fm_hat)
    report.weyl_exponent = f_hat

    inner = weyl_to_toeplitz(f_hat, w, tol)
    report.gates.extend(_prefixed(inner.gates, "composed:"))
    report.toeplitz_exponent = inner.toeplitz_exponent
    report.certified_toeplitz = inner.certified_toeplitz
    return report

"""Closed-form reference family on the model weight |x|^2 / 4.

Radial symbols exp(lam |x|^2) and their extension by a conj-quadratic term
exp(lam |x|^2 + A conj(x).conj(x)) admit fully explicit calculus: phase
space exponents, boundedness thresholds, composition parameters, and the
action on reproducing Gaussians.  The general engine is required to
reproduce every value produced here, which makes this module the golden
suite for the pipelines and the quadrature oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forms import MixedForm, model_weight

__all__ = [
    "RadialSymbol", "ExtendedSymbol", "RadialAnalysis", "RadialComposition",
    "ExtendedComposition", "CoherentImage", "radial_analyze", "radial_compose",
    "extended_compose", "coherent_action", "sequential_coherent", "model_weight",
]


@dataclass(frozen=True)
class RadialSymbol:
    """Symbol exp(lam |x|^2); admissible iff Re(lam) < 1/4."""

    lam: complex

    def __post_init__(self):
        if self.lam.real >= 0.25:
            raise ValueError(f"inadmissible radial coefficient: Re {self.lam} >= 1/4")

    def as_mixed(self, n: int = 1) -> MixedForm:
        z = np.zeros((n, n))
        return MixedForm(B=z, C=self.lam * np.eye(n), D=z)


@dataclass(frozen=True)
class ExtendedSymbol:
    """Symbol exp(lam |x|^2 + A conj(x).conj(x)) with A complex symmetric.

    Admissibility requires Re(lam) + ||A|| < 1/4, with the Euclidean
    operator norm of A.
    """

    lam: complex
    A: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.A, dtype=np.complex128)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("A must be a square matrix")
        a = 0.5 * (a + a.T)
        object.__setattr__(self, "A", a)
        if self.lam.real + self.norm_a >= 0.25:
            raise ValueError(
                f"inadmissible symbol: Re lam + ||A|| = {self.lam.real + self.norm_a} >= 1/4")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def norm_a(self) -> float:
        return float(np.linalg.norm(self.A, ord=2))

    @property
    def gamma(self) -> complex:
        return 1.0 / (1.0 - 2.0 * self.lam)

    def bounded(self) -> bool:
        """Boundedness of the operator: 4||A|| <= (1 - |gamma|^2)/|gamma|^2."""
        g2 = abs(self.gamma) ** 2
        return 4.0 * self.norm_a <= (1.0 - g2) / g2 + 1e-15

    def as_mixed(self) -> MixedForm:
        n = self.n
        return MixedForm(B=np.zeros((n, n)), C=self.lam * np.eye(n), D=self.A)


@dataclass(frozen=True)
class RadialAnalysis:
    weyl_coeff: complex        # phase-space exponent is 2 weyl_coeff x.xi
    bounded: bool              # |1 - 2 lam| >= 1
    re_weyl: float             # (1 - |1-2lam|^2) / (4 |1-lam|^2)
    gamma: complex             # contraction factor on reproducing Gaussians


def radial_analyze(lam: complex) -> RadialAnalysis:
    """Closed-form analysis of the radial symbol exp(lam |x|^2)."""
    sym = RadialSymbol(complex(lam))  # validates admissibility
    lam = sym.lam
    weyl_coeff = lam / (1.0 - lam)
    one_m2 = abs(1.0 - 2.0 * lam)
    re_weyl = (1.0 - one_m2**2) / (4.0 * abs(1.0 - lam) ** 2)
    return RadialAnalysis(
        weyl_coeff=weyl_coeff,
        bounded=one_m2 >= 1.0 - 1e-15,
        re_weyl=re_weyl,
        gamma=1.0 / (1.0 - 2.0 * lam),
    )


@dataclass(frozen=True)
class RadialComposition:
    s: complex                 # composite symbol coefficient lam + lam~ - 2 lam lam~
    fhat_coeff: complex        # composite phase-space exponent is fhat_coeff x.xi
    toeplitz_ok: bool          # Re s < 1/4: composite is again a Toeplitz exponential
    lemma_product_ok: bool     # product of the factor exponents avoids -1


def radial_compose(lam: complex, lam2: complex) -> RadialComposition:
    """Composition parameters for exp(lam2 |x|^2) applied after exp(lam |x|^2)."""
    first = radial_analyze(lam)
    second = radial_analyze(lam2)
    if not first.bounded or not second.bounded:
        raise ValueError("both factors must be bounded: |1 - 2 lam| >= 1 required")
    s = lam + lam2 - 2.0 * lam * lam2
    product = first.weyl_coeff * second.weyl_coeff
    return RadialComposition(
        s=s,
        fhat_coeff=2.0 * s / (1.0 - s),
        toeplitz_ok=s.real < 0.25,
        lemma_product_ok=abs(product + 1.0) > 1e-12,
    )


@dataclass(frozen=True)
class ExtendedComposition:
    gamma_hat: complex
    a_hat: np.ndarray
    lam_hat: complex
    factor_bounds_ok: bool       # both factors satisfy the boundedness inequality
    factor_bound_margins: tuple[float, float]
    composite_dense_ok: bool     # Re lam_hat + ||a_hat|| < 1/4 (densely defined)
    closure_ok: bool             # 4 ||a_hat|| <= (1 - |gamma_hat|^2)/|gamma_hat|^2
    closure_margin: float


def _bound_margin(sym: ExtendedSymbol) -> float:
    g2 = abs(sym.gamma) ** 2
    return (1.0 - g2) / g2 - 4.0 * sym.norm_a


def extended_compose(first: ExtendedSymbol, second: ExtendedSymbol) -> ExtendedComposition:
    """Composite parameters for second applied after first.

    gamma multiplies, the conj-quadratic blocks add after conjugating the
    first one through the second factor's contraction, and the radial parts
    combine exactly as in the radial family.  The parameter algebra holds
    for any two admissible symbols, so it is always computed; the factor
    boundedness inequalities are reported as verdicts with margins, and the
    closure inequality of the composite, guaranteed whenever both factor
    bounds hold, is certified numerically.  Density of the composite domain
    is a separate verdict that can fail even for two admissible bounded
    factors.
    """
    if first.n != second.n:
        raise ValueError("factors must share one dimension")
    gamma, gamma2 = first.gamma, second.gamma
    gamma_hat = gamma2 * gamma
    a_hat = second.A + first.A / gamma2**2
    lam_hat = first.lam + second.lam - 2.0 * first.lam * second.lam
    norm_hat = float(np.linalg.norm(a_hat, ord=2))
    g2 = abs(gamma_hat) ** 2
    closure_bound = (1.0 - g2) / g2
    margins = (_bound_margin(first), _bound_margin(second))
    return ExtendedComposition(
        gamma_hat=gamma_hat,
        a_hat=a_hat,
        lam_hat=lam_hat,
        factor_bounds_ok=first.bounded() and second.bounded(),
        factor_bound_margins=margins,
        composite_dense_ok=lam_hat.real + norm_hat < 0.25,
        closure_ok=4.0 * norm_hat <= closure_bound + 1e-12,
        closure_margin=closure_bound - 4.0 * norm_hat,
    )


@dataclass(frozen=True)
class CoherentImage:
    """A Gaussian amplitude * exp(2 Psi0(x, center)) on the model space."""

    amplitude: complex
    center: np.ndarray

    def value(self, x) -> complex:
        x = np.atleast_1d(np.asarray(x, dtype=np.complex128))
        return complex(self.amplitude * np.exp(0.5 * x @ self.center))


def coherent_action(sym: ExtendedSymbol, w) -> CoherentImage:
    """Image of the reproducing Gaussian exp(2 Psi0(., conj(w))) under the symbol's
    Toeplitz operator, in closed form:

        gamma^n exp(A gw.gw) exp(2 Psi0(x, gw)),  gw = gamma conj(w).
    """
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    if w.shape[0] != sym.n:
        raise ValueError("point dimension does not match the symbol")
    gw = sym.gamma * np.conj(w)
    amp = sym.gamma ** sym.n * np.exp(gw @ sym.A @ gw)
    return CoherentImage(amplitude=complex(amp), center=gw)


def sequential_coherent(syms, w) -> CoherentImage:
    """Apply a sequence of extended symbols to a reproducing Gaussian, in order."""
    image = CoherentImage(amplitude=1.0 + 0.0j,
                          center=np.conj(np.atleast_1d(np.asarray(w, dtype=np.complex128))))
    for sym in syms:
        step = coherent_action(sym, np.conj(image.center))
        image = CoherentImage(amplitude=image.amplitude * step.amplitude,
                              center=step.center)
    return image

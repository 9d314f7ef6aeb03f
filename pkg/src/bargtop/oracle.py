"""Brute-force verification laboratory at n = 1.

Everything the closed-form calculus produces is checkable here against
tensor Gauss-Legendre quadrature over a truncated plane: the reproducing
projection of the weighted space, Toeplitz operators applied to reproducing
Gaussians (also chained, for composition checks), the Gaussian-smoothing
integral defining the phase-space symbol, and the multiplicative constants
the exact pipelines deliberately leave undetermined.

Truncation is decay aware: the box half-width is c sqrt(log(1/eps) / mu)
with mu the smallest eigenvalue of the integrand's real decay form, which
beats Hermite rules for off-center Gaussians.  Node reductions run in a
fixed summation order, so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .calculus import gaussian_value
from .forms import HoloForm, MixedForm, RealForm, Weight
from .linalg import Definiteness

_MIN_POINTS = 32
_DEFAULT_EPS = 1e-10
_DEFAULT_C = 1.5


class DecayError(Exception):
    """The integrand does not decay on (or inside) the quadrature box."""


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor Gauss-Legendre rule over [-R, R]^2, m points per axis."""

    half_width: float
    m: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.m < _MIN_POINTS:
            raise ValueError(f"at least {_MIN_POINTS} points per axis required")

    @staticmethod
    def build(half_width: float, m: int) -> "QuadratureGrid":
        x, w = np.polynomial.legendre.leggauss(m)
        return QuadratureGrid(half_width=float(half_width), m=m,
                              nodes=half_width * x, weights=half_width * w)

    def complex_nodes(self) -> np.ndarray:
        return self.nodes[:, None] + 1j * self.nodes[None, :]

    def refined(self) -> "QuadratureGrid":
        return QuadratureGrid.build(self.half_width, 2 * self.m)


def grid_for_decay(decay: RealForm, m: int = 200, eps: float = _DEFAULT_EPS,
                   c: float = _DEFAULT_C, half_width: float | None = None) -> QuadratureGrid:
    """Grid sized so the Gaussian decay bound at the box boundary is below eps."""
    report = decay.classify()
    if report.status is not Definiteness.POS_DEF:
        raise DecayError(
            f"integrand decay form is not positive definite ({report.status.value})")
    if half_width is None:
        mu = min(report.eigenvalues)
        half_width = c * np.sqrt(np.log(1.0 / eps) / mu)
    return QuadratureGrid.build(half_width, m)


def _scalars(w: Weight) -> tuple[complex, float]:
    if w.n != 1:
        raise ValueError("the oracle is one-dimensional")
    return complex(w.P[0, 0]), float(w.H[0, 0].real)


def _mixed_scalars(q: MixedForm) -> tuple[complex, complex, complex]:
    if q.n != 1:
        raise ValueError("the oracle is one-dimensional")
    return complex(q.B[0, 0]), complex(q.C[0, 0]), complex(q.D[0, 0])


def _boundary_check(vals: np.ndarray, grid: QuadratureGrid, kernel_slope: float,
                    tol: float) -> None:
    """Flag insufficient decay: boundary magnitude (kernel growth included)
    must be negligible against the interior maximum."""
    mag = np.abs(vals)
    peak = float(mag.max())
    if peak == 0.0:
        return
    boundary = np.concatenate([mag[0, :], mag[-1, :], mag[:, 0], mag[:, -1]])
    bound = float(boundary.max()) * np.exp(kernel_slope * grid.half_width)
    if bound > tol * peak:
        raise DecayError(
            f"insufficient decay on the grid boundary (ratio {bound / peak:.3e})")


def _decay_form(w: Weight, *growths: MixedForm | None) -> RealForm:
    """Real decay form of a projection integrand: weight + Hermitian part
    minus the real growth of every extra Gaussian factor."""
    total = w.mixed() + w.herm_part()
    for g in growths:
        if g is not None:
            total = total - g
    return total.re_part()


def bergman_apply(w: Weight, u, xs, growth: MixedForm | None = None,
                  grid: QuadratureGrid | None = None,
                  boundary_tol: float = 1e-6):
    """Orthogonal projection of u onto the weighted space, at the points xs.

    u is a callable evaluated on the grid; if its modulus grows like
    exp(Re g) for a quadratic g, pass g so the grid can be sized for the
    joint decay.  The normalization is the one that reproduces constants:
    projecting u = 1 returns 1 up to quadrature error.
    """
    p, h = _scalars(w)
    if grid is None:
        grid = grid_for_decay(_decay_form(w, growth))
    y = grid.complex_nodes()
    vals = u(y) * np.exp(-p * y * y - 2.0 * h * (y * np.conj(y)))
    xs_arr = np.atleast_1d(np.asarray(xs, dtype=np.complex128))
    _boundary_check(vals, grid, 2.0 * h * float(np.abs(xs_arr).max(initial=0.0)),
                    boundary_tol)
    a0 = 2.0 * h / np.pi
    raw = _backend.kernel_apply(xs_arr, grid.nodes, grid.nodes, grid.weights,
                                grid.weights, vals, 2.0 * h)
    out = a0 * np.exp(p * xs_arr * xs_arr) * raw
    return complex(out[0]) if np.isscalar(xs) or np.ndim(xs) == 0 else out


def toeplitz_apply(w: Weight, q: MixedForm, u, xs, growth: MixedForm | None = None,
                   grid: QuadratureGrid | None = None,
                   boundary_tol: float = 1e-6):
    """Top(exp(q)) u at the points xs: projection of exp(q) u."""
    if grid is None:
        grid = grid_for_decay(_decay_form(w, q, growth))

    def integrand(y):
        b, c, d = _mixed_scalars(q)
        yc = np.conj(y)
        return np.exp(b * y * y + c * yc * y + d * yc * yc) * u(y)

    return bergman_apply(w, integrand, xs, grid=grid, boundary_tol=boundary_tol)


def toeplitz_chain(w: Weight, qs, u, xs, growth: MixedForm | None = None,
                   grid: QuadratureGrid | None = None,
                   boundary_tol: float = 1e-6):
    """Apply Top(exp(q)) for each q in qs, in order, fully by quadrature.

    Intermediate stages are held as samples on the grid nodes, so the cost
    is (stages) x m^4 kernel evaluations; keep m moderate.  The grid must
    decay against every factor; the default uses the worst stage.
    """
    qs = list(qs)
    if grid is None:
        decays = [_decay_form(w, q, growth) for q in qs]
        mu = min(min(d.classify().eigenvalues) for d in decays)
        worst = next(d for d in decays if min(d.classify().eigenvalues) <= mu + 1e-15)
        grid = grid_for_decay(worst, m=64)
    p, h = _scalars(w)
    y = grid.complex_nodes()
    yc = np.conj(y)
    targets = y.ravel()
    a0 = 2.0 * h / np.pi
    weight_factor = np.exp(-p * y * y - 2.0 * h * (y * yc))

    fvals = u(y)
    for k, q in enumerate(qs):
        b, c, d = _mixed_scalars(q)
        vals = np.exp(b * y * y + c * yc * y + d * yc * yc) * fvals * weight_factor
        # intermediate targets sit on the grid itself; kernel growth toward
        # them is repaid by the weight factor of the next stage, so only the
        # decay of the weighted samples is checked here
        last = k + 1 == len(qs)
        xs_arr = np.atleast_1d(np.asarray(xs, dtype=np.complex128))
        slope = 2.0 * h * float(np.abs(xs_arr).max(initial=0.0)) if last else 0.0
        _boundary_check(vals, grid, slope, boundary_tol)
        if not last:
            raw = _backend.kernel_apply(targets, grid.nodes, grid.nodes,
                                        grid.weights, grid.weights, vals, 2.0 * h)
            fvals = (a0 * np.exp(p * targets * targets) * raw).reshape(y.shape)
        else:
            raw = _backend.kernel_apply(xs_arr, grid.nodes, grid.nodes,
                                        grid.weights, grid.weights, vals, 2.0 * h)
            out = a0 * np.exp(p * xs_arr * xs_arr) * raw
            return complex(out[0]) if np.isscalar(xs) or np.ndim(xs) == 0 else out
    raise ValueError("qs must not be empty")


def weyl_symbol_numeric(q: MixedForm, w: Weight, xs,
                        grid: QuadratureGrid | None = None,
                        boundary_tol: float = 1e-6):
    """Phase-space symbol of Top(exp(q)) by direct Gaussian smoothing.

    Evaluates the ratio of integrals of exp(-4 PhiHerm(x - y) + q(y)) and
    exp(-4 PhiHerm(x - y)) on one grid, so the q = 0 symbol is exactly 1
    and quadrature bias cancels.  Requires the domination bound, otherwise
    the integral diverges.  The denominator has a Gaussian closed form,
    which doubles as a per-point resolution check of the grid.
    """
    _, h = _scalars(w)
    b, c, d = _mixed_scalars(q)
    decay = _decay_form_weyl(q, w)
    if grid is None:
        grid = grid_for_decay(decay)
    report = decay.classify()
    if report.status is not Definiteness.POS_DEF:
        raise DecayError("smoothing integral diverges: domination bound fails")

    herm4 = (4.0 * w.herm_part()).re_part().mat
    den_closed_at_origin = gaussian_value(2.0 * herm4)
    xs_arr = np.atleast_1d(np.asarray(xs, dtype=np.complex128))
    out = np.empty(xs_arr.shape, dtype=np.complex128)
    ns, ws = grid.nodes, grid.weights
    for k, x in enumerate(xs_arr):
        num = _backend.quad_sum(ns, ns, ws, ws, b, c - 4.0 * h, d,
                                4.0 * h * np.conj(x), 4.0 * h * x)
        den = _backend.quad_sum(ns, ns, ws, ws, 0.0, -4.0 * h, 0.0,
                                4.0 * h * np.conj(x), 4.0 * h * x)
        den_closed = den_closed_at_origin * np.exp(4.0 * h * x * np.conj(x))
        if abs(den - den_closed) > boundary_tol * abs(den_closed):
            raise DecayError(
                f"grid cannot resolve the smoothing Gaussian at x = {x:.3g} "
                f"(relative defect {abs(den - den_closed) / abs(den_closed):.3e})")
        out[k] = num / den
    return complex(out[0]) if np.isscalar(xs) or np.ndim(xs) == 0 else out


def _decay_form_weyl(q: MixedForm, w: Weight) -> RealForm:
    return (4.0 * w.herm_part() - q).re_part()


@dataclass(frozen=True)
class ConstantEstimate:
    """Numerical multiplicative constant with a grid-refinement error bar."""

    value: complex
    error: float


def _restriction_value(f: HoloForm, w: Weight, x) -> complex:
    return f(w.point(np.atleast_1d(np.asarray(x, dtype=np.complex128))))


def constant_estimate(report, q: MixedForm, w: Weight, x_ref=0.7 + 0.3j,
                      m: int = 200, half_width: float | None = None) -> ConstantEstimate:
    """Constant of the symbol transform: numeric symbol over exp(engine exponent).

    Evaluated at a reference point, with the error bar from doubling the
    number of quadrature points per axis.  Rejects evaluation points where
    the numeric value is too small to divide by.
    """
    if report.weyl_exponent is None:
        raise ValueError("pipeline report carries no phase-space exponent")
    engine = np.exp(1j * _restriction_value(report.weyl_exponent, w, x_ref))
    grid = grid_for_decay(_decay_form_weyl(q, w), m=m, half_width=half_width)
    coarse = weyl_symbol_numeric(q, w, x_ref, grid=grid)
    fine = weyl_symbol_numeric(q, w, x_ref, grid=grid.refined())
    if min(abs(coarse), abs(fine)) < 1e-12:
        raise DecayError("constant estimate unstable: value below 1e-12")
    value = fine / engine
    return ConstantEstimate(value=complex(value), error=float(abs(fine - coarse) / abs(fine)))


def composition_constant(q_first: MixedForm, q_second: MixedForm, q_hat: MixedForm,
                         w: Weight, x_ref=0.4 - 0.2j, source=1.0 + 0.0j,
                         m: int = 64, half_width: float | None = None) -> ConstantEstimate:
    """Constant C in Top(exp(q2)) Top(exp(q1)) = C Top(exp(q_hat)).

    Both sides act on one reproducing Gaussian, entirely by quadrature; the
    error bar again comes from grid refinement.
    """
    w_point = np.atleast_1d(np.asarray(source, dtype=np.complex128))
    p, h = _scalars(w)

    def coherent(y):
        return np.exp(p * y * y + 2.0 * h * y * np.conj(w_point[0]))

    def estimate(points: int) -> complex:
        chained = toeplitz_chain(
            w, [q_first, q_second], coherent, x_ref,
            grid=_chain_grid(w, [q_first, q_second], points, half_width))
        direct = toeplitz_apply(
            w, q_hat, coherent, x_ref,
            grid=grid_for_decay(_decay_form(w, q_hat), m=points, half_width=half_width))
        if abs(direct) < 1e-12:
            raise DecayError("composition constant unstable: value below 1e-12")
        return chained / direct

    coarse = estimate(m)
    fine = estimate(m + m // 2)
    return ConstantEstimate(value=complex(fine), error=float(abs(fine - coarse) / abs(fine)))


def _chain_grid(w: Weight, qs, m: int, half_width: float | None = None) -> QuadratureGrid:
    decays = [_decay_form(w, q) for q in qs]
    mus = [min(d.classify().eigenvalues) for d in decays]
    worst = decays[int(np.argmin(mus))]
    return grid_for_decay(worst, m=m, half_width=half_width)

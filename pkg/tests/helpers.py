"""Shared random generators for the test suite.

Everything is driven by an explicit numpy Generator so tests stay
deterministic; the constructive generators (bounded symbols, positive
canonical maps) build their objects from the invariant they must satisfy
rather than rejection-sampling blindly.
"""

import numpy as np

import bargtop as bt
from bargtop.forms import HoloForm, MixedForm, Weight


def rand_complex(rng, shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def rand_symmetric(rng, n, scale=1.0):
    a = rand_complex(rng, (n, n), scale)
    return 0.5 * (a + a.T)


def rand_hermitian(rng, n, scale=1.0):
    a = rand_complex(rng, (n, n), scale)
    return 0.5 * (a + a.conj().T)


def rand_hermitian_pd(rng, n, floor=0.3):
    a = rand_complex(rng, (n, n))
    return a @ a.conj().T + floor * np.eye(n)


def rand_weight(rng, n, pluri_scale=0.3) -> Weight:
    return Weight(P=rand_symmetric(rng, n, pluri_scale),
                  H=rand_hermitian_pd(rng, n))


def rand_mixed(rng, n, scale=0.3) -> MixedForm:
    return MixedForm(rand_complex(rng, (n, n), scale),
                     rand_complex(rng, (n, n), scale),
                     rand_complex(rng, (n, n), scale))


def rand_hamiltonian(rng, n, scale=0.7) -> bt.FundamentalMatrix:
    m = rand_symmetric(rng, 2 * n, scale) * 2.0
    return bt.FundamentalMatrix(0.5 * bt.symplectic.symplectic_j(n) @ m)


def rand_points(rng, n, count, scale=1.0):
    return [rand_complex(rng, n, scale) for _ in range(count)]


def rand_admissible_symbol(rng, w: Weight, scale=None, margin=1e-3) -> MixedForm:
    """Random symbol strictly dominated by the weight's Hermitian part."""
    if scale is None:
        scale = 0.15 * min(1.0, min(np.linalg.eigvalsh(w.H)))
    while True:
        q = rand_mixed(rng, w.n, scale)
        report = (w.herm_part().re_part() - q.re_part()).classify()
        if report.status is bt.Definiteness.POS_DEF and report.margin > margin:
            return q


def rand_bounded_phase_form(rng, w: Weight, strict=False, im_scale=0.4,
                            re_scale=0.4) -> HoloForm:
    """Phase-space form whose imaginary part is >= 0 (or > 0) on the graph of w,
    with both spectral gates holding; built from its graph restriction."""
    n = w.n
    while True:
        a = rng.standard_normal((2 * n, 2 * n))
        s_im = im_scale * (a @ a.T) / (2 * n)
        if strict:
            s_im = s_im + 0.1 * im_scale * np.eye(2 * n)
        else:
            # half the time collapse a direction so semidefinite cases appear
            if rng.random() < 0.5:
                drop = rng.integers(0, 2 * n)
                vecs = np.linalg.eigh(s_im)
                s_im = vecs.eigenvectors @ np.diag(
                    np.where(np.arange(2 * n) == drop, 0.0, vecs.eigenvalues)
                ) @ vecs.eigenvectors.T
        s_re = re_scale * rand_symmetric(rng, 2 * n, 1.0).real
        restriction = MixedForm.from_real_matrix(s_re + 1j * s_im)
        f = restriction.polarization().subs(w.chart_inv())
        fm = bt.fundamental_matrix(f)
        gates = bt.symplectic.spectral_gates(fm)
        if gates["plus"][0] and gates["minus"][0] \
                and gates["plus"][1] > 1e-3 and gates["minus"][1] > 1e-3:
            return f


def rand_positive_map(rng, w: Weight, strict=True) -> bt.CanonicalMap:
    """Canonical map positive relative to the graph of w."""
    return bt.cayley(bt.fundamental_matrix(
        rand_bounded_phase_form(rng, w, strict=strict)))


def rand_bounded_symbol(rng, w: Weight) -> MixedForm:
    """Admissible symbol whose operator is bounded on the weighted space."""
    while True:
        f = rand_bounded_phase_form(rng, w, strict=bool(rng.integers(0, 2)))
        rep = bt.weyl_to_toeplitz(f, w)
        if rep.toeplitz_exponent is None or not rep.all_passed:
            continue
        return rep.toeplitz_exponent


def mixed_close(a: MixedForm, b: MixedForm, tol=1e-10) -> bool:
    scale = max(np.abs(a.B).max(), np.abs(a.C).max(), np.abs(a.D).max(),
                np.abs(b.B).max(), np.abs(b.C).max(), np.abs(b.D).max(), 1e-30)
    err = max(np.abs(a.B - b.B).max(), np.abs(a.C - b.C).max(),
              np.abs(a.D - b.D).max())
    return err <= tol * scale


def boundary_lambda(rng) -> complex:
    """lam with |1 - 2 lam| = 1 and Re lam < 1/4 (the edge circle)."""
    phi = rng.uniform(-np.pi / 3 + 1e-3, np.pi / 3 - 1e-3)
    return (1.0 - np.exp(1j * phi)) / 2.0


def bounded_lambda(rng, edge_fraction=0.3) -> complex:
    """Admissible lam with |1 - 2 lam| >= 1 (bounded radial symbol)."""
    if rng.random() < edge_fraction:
        return boundary_lambda(rng)
    while True:
        lam = complex(rng.uniform(-2, 0.25), rng.uniform(-2, 2))
        if lam.real < 0.25 and abs(1 - 2 * lam) >= 1.0 + 1e-9:
            return lam

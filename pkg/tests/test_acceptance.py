"""Acceptance suite: every criterion runs at its stated tolerance and
prints one pass/fail line (run pytest -s to watch them stream by)."""

import time

import numpy as np
import pytest

import bargtop as bt
from bargtop import oracle
from bargtop.forms import MixedForm, model_weight
from bargtop.model import ExtendedSymbol
from helpers import (boundary_lambda, bounded_lambda,
                     rand_admissible_symbol, rand_hamiltonian, rand_positive_map,
                     rand_weight)


def radial(lam, n=1):
    z = np.zeros((n, n))
    return MixedForm(B=z, C=complex(lam) * np.eye(n), D=z)


def announce(num, name, detail=""):
    suffix = f"  ({detail})" if detail else ""
    print(f"[acceptance {num:02d}] {name}: PASS{suffix}")


def test_01_counterexample_gate():
    w = model_weight(1)
    lam = (1 + 2j) / 5
    start = time.perf_counter()
    rep = bt.compose_toeplitz(radial(lam), radial(lam), w)
    elapsed = time.perf_counter() - start
    coeff = rep.toeplitz_exponent.C[0, 0]
    assert abs(coeff.real - 16 / 25) <= 1e-12
    failure = rep.first_failure()
    assert failure is not None and failure.name == "composed:toeplitz-domination"
    assert rep.certified_toeplitz is False
    assert elapsed < 1.0
    announce(1, "counterexample gate", f"Re coeff {coeff.real:.12f}, {elapsed:.3f}s")


def test_02_radial_golden_values():
    w = model_weight(1)
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    for _ in range(100):
        lam, lam2 = bounded_lambda(rng), bounded_lambda(rng)
        closed = bt.radial_compose(lam, lam2)
        rep = bt.compose_toeplitz(radial(lam), radial(lam2), w)
        fhat = rep.weyl_exponent.mat[0, 1]
        assert abs(fhat - closed.fhat_coeff) <= 1e-10 * max(abs(closed.fhat_coeff), 1.0)
        qhat = rep.toeplitz_exponent.C[0, 0]
        assert abs(qhat - closed.s) <= 1e-10 * max(abs(closed.s), 1.0)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    announce(2, "radial golden values", f"100 pairs in {elapsed:.2f}s")


def test_03_bch_case():
    w = model_weight(1)
    rep = bt.compose_toeplitz(radial(1j), radial(-1j), w)
    assert rep.all_passed
    q = rep.toeplitz_exponent
    assert abs(q.C[0, 0] + 2.0) <= 1e-12
    assert abs(q.B[0, 0]) <= 1e-12 and abs(q.D[0, 0]) <= 1e-12
    announce(3, "bch composition", "symbol coefficient -2, all gates pass")


def test_04_weyl_symbol_closed_form():
    w = model_weight(1)
    rng = np.random.default_rng(4)
    for _ in range(20):
        lam = complex(rng.uniform(-2, 0.24), rng.uniform(-2, 2))
        rep = bt.toeplitz_to_weyl(radial(lam), w)
        want = 2 * lam / (1 - lam)
        assert abs(rep.weyl_exponent.mat[0, 1] - want) <= 1e-12 * max(abs(want), 1.0)
    # quadrature confirmation at lam = -1
    q = radial(-1.0)
    rep = bt.toeplitz_to_weyl(q, w)
    xs = np.array([0.0, 0.8, -0.5 + 0.5j, 1.2, 0.6 - 0.9j])
    numeric = bt.weyl_symbol_numeric(q, w, xs)
    engine = np.array([np.exp(1j * rep.weyl_exponent(w.point([x]))) for x in xs])
    ratios = numeric / engine
    assert np.abs(ratios / ratios[0] - 1.0).max() <= 1e-6
    announce(4, "weyl symbol closed form", "20 coefficients + quadrature at lam=-1")


def test_05_coherent_state_oracle():
    w = model_weight(1)
    q = radial(-1.0)
    grid = oracle.grid_for_decay(oracle._decay_form(w, q), m=400)
    xs = np.array([0.0, 1.0, -0.5 + 0.5j, 2.0, 1.0 + 1.0j])
    start = time.perf_counter()
    got = bt.toeplitz_apply(w, q, lambda y: np.exp(0.5 * y), xs, grid=grid)
    elapsed = time.perf_counter() - start
    want = (1.0 / 3.0) * np.exp(xs / 6.0)
    rel = np.abs(got / want - 1.0).max()
    assert rel <= 1e-6
    assert elapsed < 10.0
    announce(5, "coherent-state oracle", f"rel err {rel:.2e}, {elapsed:.2f}s at m=400")


def test_06_round_trip():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 4))
        w = rand_weight(rng, n)
        q = rand_admissible_symbol(rng, w)
        rep = bt.toeplitz_to_weyl(q, w)
        rep2 = bt.weyl_to_toeplitz(rep.weyl_exponent, w)
        back = rep2.toeplitz_exponent
        assert back is not None
        scale = max(np.abs(q.B).max(), np.abs(q.C).max(), np.abs(q.D).max(), 1e-30)
        err = max(np.abs(back.B - q.B).max(), np.abs(back.C - q.C).max(),
                  np.abs(back.D - q.D).max()) / scale
        worst = max(worst, err)
        assert err <= 1e-10
    announce(6, "round trip", f"50 symbols, n<=3, worst rel err {worst:.2e}")


def test_07_cayley_and_composition_algebra():
    rng = np.random.default_rng(7)
    done = 0
    worst_rt, worst_comp, worst_sym = 0.0, 0.0, 0.0
    while done < 200:
        n = int(rng.integers(1, 4))
        f1 = rand_hamiltonian(rng, n)
        f2 = rand_hamiltonian(rng, n)
        try:
            k1, k2 = bt.cayley(f1), bt.cayley(f2)
            back = bt.inverse_cayley(k1)
            composed = bt.compose_fundamental(f1, f2)
            via_maps = bt.inverse_cayley(k2 @ k1)
        except bt.SpectralGateError:
            continue
        worst_rt = max(worst_rt, np.abs(back.mat - f1.mat).max()
                       / max(np.abs(f1.mat).max(), 1.0))
        scale = max(np.abs(composed.mat).max(), 1.0)
        worst_comp = max(worst_comp, np.abs(composed.mat - via_maps.mat).max() / scale)
        jf = bt.symplectic.symplectic_j(n) @ composed.mat
        worst_sym = max(worst_sym, np.abs(jf - jf.T).max() / scale)
        done += 1
    assert worst_rt <= 1e-12
    assert worst_comp <= 1e-10
    assert worst_sym <= 1e-10
    announce(7, "cayley and composition algebra",
             f"200 inputs: rt {worst_rt:.1e}, comp {worst_comp:.1e}, sym {worst_sym:.1e}")


def test_08_positivity_equivalence():
    rng = np.random.default_rng(8)
    done = 0
    seen = set()
    while done < 100:
        n = int(rng.integers(1, 3))
        w = rand_weight(rng, n)
        fm = rand_hamiltonian(rng, n)
        gates = bt.symplectic.spectral_gates(fm)
        if not (gates["plus"][0] and gates["minus"][0] and
                min(gates["plus"][1], gates["minus"][1]) > 1e-6):
            continue
        f = bt.form_from_fundamental(fm)
        cls, _ = bt.symplectic.boundedness_restriction(f, w)
        if cls.status is not bt.Definiteness.ZERO and cls.margin < 1e-7:
            continue  # undecidably close to a status change
        pos = bt.positivity(bt.cayley(fm), w, w)
        assert cls.status is pos.status, (cls.status, pos.status)
        seen.add(cls.status)
        done += 1
    assert len(seen) >= 2
    announce(8, "positivity equivalence",
             f"100 gated inputs, statuses seen: {sorted(s.value for s in seen)}")


def test_09_adjoint():
    rng = np.random.default_rng(9)
    w = model_weight(1)
    # real radial coefficient: the contraction is self-adjoint
    kappa = bt.CanonicalMap(np.diag([3.0, 1.0 / 3.0]).astype(complex))
    adj = bt.adjoint_map(kappa, w, w)
    assert np.abs(adj.mat - kappa.mat).max() <= 1e-12
    worst_double, worst_phase = 0.0, 0.0
    for _ in range(30):
        n = int(rng.integers(1, 3))
        w1 = rand_weight(rng, n)
        w2 = rand_weight(rng, n)
        k = rand_positive_map(rng, w1, strict=True)
        a = bt.adjoint_map(k, w1, w2)  # canonical by construction (validated)
        double = bt.adjoint_map(a, w2, w1)
        worst_double = max(worst_double, np.abs(double.mat - k.mat).max()
                           / max(np.abs(k.mat).max(), 1.0))
        assert bt.positivity(a, w2, w1).status is bt.positivity(k, w1, w2).status
        try:
            phase = bt.fio_kernel_phase(k, w1, w2)
            adj_phase = bt.fio_kernel_phase(a, w2, w1)
        except bt.GraphError:
            continue
        expected = phase.adjoint_phase()
        worst_phase = max(worst_phase, np.abs(adj_phase.psi.mat - expected.mat).max()
                          / max(np.abs(phase.psi.mat).max(), 1.0))
    assert worst_double <= 1e-10
    assert worst_phase <= 1e-10
    announce(9, "adjoint map and kernel symmetry",
             f"double {worst_double:.1e}, phase symmetry {worst_phase:.1e}")


def test_10_weight_pushforward():
    w = model_weight(1)
    kappa = bt.CanonicalMap(np.diag([3.0, 1.0 / 3.0]).astype(complex))
    w1 = bt.pushforward_weight(kappa, w)
    assert abs(w1.H[0, 0] - 1.0 / 36.0) <= 1e-12
    assert np.abs(w1.P).max() <= 1e-12
    drop = bt.symplectic.weight_difference(w, w1).classify()
    assert drop.nonnegative
    announce(10, "weight push-forward", f"image |x|^2/36, drop {drop.status.value}")


def test_11_extended_family():
    rng = np.random.default_rng(11)
    w = model_weight(1)
    done = 0
    while done < 200:
        lam, lam2 = bounded_lambda(rng), bounded_lambda(rng)

        def admissible_a(lamv):
            g2 = abs(1.0 / (1.0 - 2.0 * lamv)) ** 2
            cap = min((1.0 - g2) / (4.0 * g2), 0.25 - lamv.real)
            return np.array([[rng.uniform(0.0, 0.9) * max(cap, 0.0)]]) * np.exp(
                1j * rng.uniform(0, 2 * np.pi))
        try:
            s1 = ExtendedSymbol(lam, admissible_a(lam))
            s2 = ExtendedSymbol(lam2, admissible_a(lam2))
        except ValueError:
            continue
        closed = bt.extended_compose(s1, s2)
        if closed.factor_bounds_ok:
            assert closed.closure_ok
        rep = bt.compose_toeplitz(s1.as_mixed(), s2.as_mixed(), w)
        if rep.toeplitz_exponent is None:
            continue
        q = rep.toeplitz_exponent
        assert abs(q.C[0, 0] - closed.lam_hat) <= 1e-10 * max(abs(closed.lam_hat), 1.0)
        assert abs(q.D[0, 0] - closed.a_hat[0, 0]) <= 1e-10 * max(
            abs(closed.a_hat[0, 0]), 1.0)
        gamma_engine = 1.0 / (1.0 - 2.0 * q.C[0, 0])
        assert abs(gamma_engine - closed.gamma_hat) <= 1e-10 * max(
            abs(closed.gamma_hat), 1.0)
        done += 1
    # composite coherent action against the fully numerical sequential oracle
    sym = ExtendedSymbol(-1.0, np.array([[0.1]]))
    q = sym.as_mixed()
    xs = np.array([0.0, 1.0, -0.5 + 0.5j, 1.0 + 1.0j, 0.7])
    composite = bt.sequential_coherent([sym, sym], 1.0)
    want = np.array([composite.value([x]) for x in xs])
    got = bt.toeplitz_chain(w, [q, q], lambda y: np.exp(0.5 * y), xs,
                            grid=oracle._chain_grid(w, [q, q], 64))
    rel = np.abs(got / want - 1.0).max()
    assert rel <= 1e-6
    announce(11, "extended family", f"200 compositions + coherent chain {rel:.2e}")


def test_12_boundary_composition_gate():
    rng = np.random.default_rng(12)
    w = model_weight(1)
    for _ in range(50):
        lam, lam2 = boundary_lambda(rng), boundary_lambda(rng)
        assert abs(abs(1 - 2 * lam) - 1.0) <= 1e-12
        rep = bt.compose_toeplitz(radial(lam), radial(lam2), w)
        gate = rep.gate("composition-resolvent")
        assert gate.passed
    announce(12, "boundary composition gate", "50 edge pairs, resolvent always open")

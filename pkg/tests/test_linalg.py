import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bargtop import linalg
from bargtop.linalg import Definiteness, SingularMatrixError
from helpers import rand_complex, rand_hermitian


def test_solve_identity():
    res = linalg.solve_det(np.eye(2), rhs=np.array([1.0, 2.0]))
    assert res.det == pytest.approx(1.0)
    assert not res.singular
    assert np.allclose(res.x, [1.0, 2.0])


def test_det_rotation_block():
    res = linalg.solve_det(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert res.det == pytest.approx(1.0)
    assert not res.singular


def test_rank_one_flagged_singular():
    res = linalg.solve_det(np.ones((2, 2)))
    assert res.singular
    with pytest.raises(SingularMatrixError):
        linalg.solve_det(np.ones((2, 2)), rhs=np.array([1.0, 0.0]))


def test_solve_residual_on_random_matrices(rng):
    for _ in range(50):
        n = int(rng.integers(1, 7))
        m = rand_complex(rng, (n, n)) + 2.0 * np.eye(n)
        rhs = rand_complex(rng, n)
        res = linalg.solve_det(m, rhs=rhs)
        assert not res.singular
        resid = np.linalg.norm(m @ res.x - rhs)
        assert resid <= 1e-10 * np.linalg.norm(m) * max(np.linalg.norm(res.x), 1.0)


def test_herm_eigs_diagonal():
    assert np.allclose(linalg.herm_eigs(np.diag([1.0, 4.0])), [1.0, 4.0])


def test_herm_eigs_swap():
    assert np.allclose(linalg.herm_eigs(np.array([[0.0, 1.0], [1.0, 0.0]])), [-1.0, 1.0])


def test_herm_eigs_model_weight_hermitian_part():
    for n in (1, 2, 3):
        assert np.allclose(linalg.herm_eigs(0.25 * np.eye(n)), [0.25] * n)


def test_herm_eigs_rejects_non_hermitian():
    with pytest.raises(ValueError):
        linalg.herm_eigs(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eigensystem_reconstructs(rng):
    for _ in range(40):
        n = int(rng.integers(1, 9))
        h = rand_hermitian(rng, n, scale=float(rng.uniform(0.1, 5.0)))
        w, v = linalg.herm_eig_system(h)
        rebuilt = v @ np.diag(w) @ v.conj().T
        # backward error well under the advertised 1e-12 relative bound
        assert np.linalg.norm(rebuilt - h) <= 1e-12 * max(np.linalg.norm(h), 1e-10)
        assert np.linalg.norm(v.conj().T @ v - np.eye(n)) <= 1e-12 * n


def test_eigs_match_lapack(rng):
    for _ in range(30):
        n = int(rng.integers(1, 10))
        h = rand_hermitian(rng, n)
        ours = linalg.herm_eigs(h)
        lapack = np.linalg.eigvalsh(h)
        assert np.abs(ours - lapack).max() <= 1e-11 * max(np.abs(lapack).max(), 1.0)


def test_classify_examples():
    assert linalg.classify(np.diag([1.0, 2.0])).status is Definiteness.POS_DEF
    assert linalg.classify(np.diag([0.0, 3.0])).status is Definiteness.POS_SEMI_DEF
    assert linalg.classify(np.diag([-1.0, 1.0])).status is Definiteness.INDEFINITE
    assert linalg.classify(np.zeros((3, 3))).status is Definiteness.ZERO
    assert linalg.classify(np.diag([-2.0, -1.0])).status is Definiteness.NEG_DEF
    assert linalg.classify(np.diag([-2.0, 0.0])).status is Definiteness.NEG_SEMI_DEF


_MIRROR = {
    Definiteness.POS_DEF: Definiteness.NEG_DEF,
    Definiteness.POS_SEMI_DEF: Definiteness.NEG_SEMI_DEF,
    Definiteness.INDEFINITE: Definiteness.INDEFINITE,
    Definiteness.NEG_SEMI_DEF: Definiteness.POS_SEMI_DEF,
    Definiteness.NEG_DEF: Definiteness.POS_DEF,
    Definiteness.ZERO: Definiteness.ZERO,
}


@given(st.lists(st.floats(min_value=-10, max_value=10, allow_nan=False),
                min_size=1, max_size=6))
def test_classify_mirror(diag):
    m = np.diag(np.array(diag))
    report = linalg.classify(m)
    assert linalg.classify(-m).status is _MIRROR[report.status]


def test_classify_margin_and_tolerance():
    report = linalg.classify(np.diag([1.0, 1e-12]))
    assert report.status is Definiteness.POS_SEMI_DEF
    assert report.margin <= 1e-11
    strict = linalg.classify(np.diag([1.0, 0.5]))
    assert strict.margin == pytest.approx(0.5)


def test_signature():
    assert linalg.signature(np.diag([2.0, -1.0, 0.0])) == (1, 1)
    assert linalg.signature(np.diag([1.0, 1.0])) == (2, 0)


def test_backend_parity_jacobi(rng):
    from bargtop import _kernels_py
    try:
        from bargtop import _kernels_c
    except ImportError:
        pytest.skip("compiled kernels not built")
    for _ in range(10):
        n = int(rng.integers(1, 8))
        h = rand_hermitian(rng, n)
        w_py, _ = _kernels_py.jacobi_eigh(h)
        w_c, _ = _kernels_c.jacobi_eigh(h)
        assert np.abs(w_py - w_c).max() <= 1e-12 * max(np.abs(w_py).max(), 1.0)

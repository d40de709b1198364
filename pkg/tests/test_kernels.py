"""Backend parity: the compiled kernels against the NumPy reference surface,
and the Jacobi eigensolver against numpy.linalg."""

import numpy as np
import pytest

from qcorr import _kernels_py as kpy
from qcorr import backend

kcy = pytest.importorskip("qcorr._kernels_cy")

BACKENDS = (kpy, kcy)


def random_hermitian(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def random_state(rng, n):
    z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return z / np.linalg.norm(z)


def test_selected_backend_is_compiled_by_default():
    assert backend.kernels.name in ("compiled", "python")


def test_jacobi_matches_lapack(rng):
    for n in (2, 3, 4, 8, 16, 32):
        h = random_hermitian(rng, n)
        w = kcy.eigvalsh(h)
        want = np.linalg.eigvalsh(h)[::-1]
        np.testing.assert_allclose(w, want, atol=1e-12)


def test_jacobi_reconstruction_and_determinism(rng):
    h = random_hermitian(rng, 8)
    w1, v1 = kcy.eigh(h)
    w2, v2 = kcy.eigh(h)
    assert np.array_equal(w1, w2) and np.array_equal(v1, v2)
    assert np.abs(v1 @ np.diag(w1) @ v1.conj().T - h).max() <= 1e-12


def test_eigh_parity(rng):
    for n in (2, 4, 8):
        h = random_hermitian(rng, n)
        np.testing.assert_allclose(kcy.eigvalsh(h), kpy.eigvalsh(h), atol=1e-12)


def test_ptrace_parity(rng):
    for n in (2, 3, 4, 6):
        psi = random_state(rng, n)
        rho = np.outer(psi, psi.conj())
        keeps = [(0,), (n - 1,)] + ([(1, n - 1)] if n > 2 else [])
        for keep in keeps:
            np.testing.assert_allclose(
                kcy.ptrace_pure(psi, n, keep), kpy.ptrace_pure(psi, n, keep), atol=1e-14
            )
            np.testing.assert_allclose(
                kcy.ptrace_dm(rho, n, keep), kpy.ptrace_dm(rho, n, keep), atol=1e-14
            )


def test_concurrence_parity(rng):
    for _ in range(300):
        rank = int(rng.integers(1, 5))
        z = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
        rho = z @ z.conj().T
        rho /= rho.trace()
        assert kcy.concurrence(rho) == pytest.approx(kpy.concurrence(rho), abs=1e-12)


def test_linear_entropy_parity(rng):
    for n in (2, 4, 6):
        psi = random_state(rng, n)
        for k in range(n):
            assert kcy.linear_entropy_pure(psi, n, k) == pytest.approx(
                kpy.linear_entropy_pure(psi, n, k), abs=1e-14
            )


def test_tangle_parity(rng):
    for _ in range(300):
        psi = random_state(rng, 3)
        assert kcy.three_tangle_pure(psi) == pytest.approx(kpy.three_tangle_pure(psi), abs=1e-12)


def test_f1_tau4_parity_and_support_guard(rng):
    for k in BACKENDS:
        psi = np.zeros(16, complex)
        psi[[0, 3, 12, 15]] = random_state(rng, 1).repeat(2)
        psi /= np.linalg.norm(psi)
        val = k.f1_tau4_pure(psi)
        assert 0.0 <= val <= 1.0 + 1e-12
        with pytest.raises(ValueError):
            k.f1_tau4_pure(np.ones(16, complex) / 4.0)
    psi = np.zeros(16, complex)
    psi[[0, 3, 12, 15]] = random_state(rng, 2)
    assert kcy.f1_tau4_pure(psi) == pytest.approx(kpy.f1_tau4_pure(psi), abs=1e-13)


def test_isometry_and_objective_parity(rng):
    z = rng.standard_normal((8, 2)) + 1j * rng.standard_normal((8, 2))
    basis = np.linalg.qr(z)[0] * np.sqrt([0.6, 0.4])
    for m in (2, 3, 4):
        dim = 4 * m - 5
        for _ in range(50):
            x = rng.uniform(0, 2 * np.pi, dim)
            ucy = kcy.isometry_from_params(m, x)
            upy = kpy.isometry_from_params(m, x)
            np.testing.assert_allclose(ucy, upy, atol=1e-13)
            gram = ucy.conj().T @ ucy
            assert np.abs(gram - np.eye(2)).max() <= 1e-13
            assert kcy.roof_objective(basis, m, 0, x) == pytest.approx(
                kpy.roof_objective(basis, m, 0, x), abs=1e-12
            )


def test_roof_search_agrees_across_backends(rng):
    z = rng.standard_normal((8, 2)) + 1j * rng.standard_normal((8, 2))
    basis = np.linalg.qr(z)[0] * np.sqrt([0.6, 0.4])
    x0 = rng.uniform(0, 2 * np.pi, 3)
    fc, _ = kcy.roof_search(basis, 2, 0, x0, 0.5, 1e-8, 10_000)
    fp, _ = kpy.roof_search(basis, 2, 0, x0, 0.5, 1e-8, 10_000)
    assert fc == pytest.approx(fp, abs=1e-9)


def test_backend_env_override(monkeypatch):
    monkeypatch.setenv("QCORR_BACKEND", "python")
    assert backend._select().name == "python"
    monkeypatch.setenv("QCORR_BACKEND", "compiled")
    assert backend._select().name == "compiled"
    monkeypatch.setenv("QCORR_BACKEND", "bogus")
    with pytest.raises(RuntimeError):
        backend._select()

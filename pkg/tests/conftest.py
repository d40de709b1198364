"""Shared oracles and helpers.

The oracles here are deliberately independent of the package internals:
partial traces via reshape/transpose contractions, Wootters eigenvalues via
the plain non-Hermitian product, the three-tangle via the Cayley
hyperdeterminant, and eigensolves via numpy.linalg.
"""

import numpy as np
import pytest

from qcorr import PureState

SY = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SY, SY)


def ptrace_oracle(psi: np.ndarray, n: int, keep: tuple[int, ...]) -> np.ndarray:
    """Reduced density matrix by reshape/transpose, qubit 0 = most significant."""
    rest = [q for q in range(n) if q not in keep]
    block = np.transpose(psi.reshape((2,) * n), list(keep) + rest).reshape(2 ** len(keep), -1)
    return block @ block.conj().T


def wootters_oracle(rho: np.ndarray) -> float:
    """Concurrence via the eigenvalues of rho (sy x sy) rho* (sy x sy)."""
    lam = np.linalg.eigvals(rho @ YY @ rho.conj() @ YY)
    lam = np.sqrt(np.clip(np.sort(lam.real)[::-1], 0.0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def hyperdet_tangle(psi: np.ndarray) -> float:
    """Pure three-tangle as 4 |Det(psi)| (Cayley hyperdeterminant)."""
    a = psi.reshape(2, 2, 2)
    d1 = (
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[0, 1, 1] ** 2 * a[1, 0, 0] ** 2
    )
    d2 = (
        a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
        + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1]
    )
    d3 = (
        a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
        + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
    )
    return float(4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3))


def random_pure(rng: np.random.Generator, n: int) -> PureState:
    z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return PureState(n, z / np.linalg.norm(z))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)

"""NumPy implementation of the numerical kernels.

This is the fallback backend used when the compiled extension is not
available, and the reference surface the compiled kernels mirror:

    eigh / eigvalsh          Hermitian eigendecomposition, descending order
    ptrace_pure / ptrace_dm  partial trace to a kept qubit subset
    concurrence              Wootters concurrence of a 4x4 density matrix
    linear_entropy_pure      4*det of a single-qubit reduced density matrix
    three_tangle_pure        CKW residual of a 3-qubit pure state (first focus)
    f1_tau4_pure             four-tangle closed form on the 1D-family support
    roof_objective / roof_search   decomposition average + pattern search

Eigenvalues below ``CLIP_FLOOR`` raise: that is roundoff no longer, it is a
bug in the caller.
"""

from __future__ import annotations

import numpy as np

name = "python"

CLIP_FLOOR = -1e-10

# diag signs of sigma_y (x) sigma_y; the matrix itself is anti-diagonal
_SY_SIGNS = np.array([-1.0, 1.0, 1.0, -1.0])

# basis kets carrying the 1D cluster family: |0000>, |0011>, |1100>, |1111>
F1_SUPPORT = (0, 3, 12, 15)

# relative eigenvalue cut that decides rank(rho) inside the concurrence
RANK_CUT = 1e-14


def eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix."""
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def eigvalsh(a: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(a)[::-1].copy()


def _keep_offsets(n: int, keep: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Index offsets of the kept / traced-out qubit configurations.

    Qubit position 0 is the most significant bit of the basis index.
    """
    rest = tuple(q for q in range(n) if q not in keep)
    shifts_keep = np.array([n - 1 - q for q in keep], dtype=np.intp)
    shifts_rest = np.array([n - 1 - q for q in rest], dtype=np.intp)
    ka = np.arange(1 << len(keep))
    ra = np.arange(1 << len(rest))
    off_k = np.zeros(ka.size, dtype=np.intp)
    for j, s in enumerate(shifts_keep):
        off_k |= ((ka >> (len(keep) - 1 - j)) & 1) << s
    off_r = np.zeros(ra.size, dtype=np.intp)
    for j, s in enumerate(shifts_rest):
        off_r |= ((ra >> (len(rest) - 1 - j)) & 1) << s
    return off_k, off_r


def ptrace_pure(amps: np.ndarray, n: int, keep: tuple[int, ...]) -> np.ndarray:
    """Reduced density matrix of ``keep`` for a pure state's amplitude vector."""
    off_k, off_r = _keep_offsets(n, keep)
    block = amps[off_k[:, None] + off_r[None, :]]
    return block @ block.conj().T


def ptrace_dm(rho: np.ndarray, n: int, keep: tuple[int, ...]) -> np.ndarray:
    off_k, off_r = _keep_offsets(n, keep)
    idx = off_k[:, None] + off_r[None, :]
    return np.einsum("arbr->ab", rho[idx[:, :, None, None], idx[None, None, :, :]])


def _check_floor(w: np.ndarray) -> None:
    if w.min() < CLIP_FLOOR:
        raise ValueError(
            f"eigenvalue {w.min():.3e} below clip floor {CLIP_FLOOR:.0e}"
        )


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    Hermitian route via the tau matrix: writing rho = X X^H over its
    rank-revealing eigendecomposition, the Wootters numbers sqrt(lambda_i)
    are the singular values of the complex symmetric T = X^T (sy x sy) X,
    obtained from the Hermitian product T^H T. Spurious square roots of
    roundoff-level eigenvalues never arise because T has exactly rank(rho)
    rows, which keeps rank-deficient inputs (every pure-state marginal)
    accurate to machine precision.
    """
    w, v = eigh(rho)
    _check_floor(w)
    r = max(1, int((w > RANK_CUT * w[0]).sum()))
    x = v[:, :r] * np.sqrt(np.clip(w[:r], 0.0, None))
    t = x.T @ (_SY_SIGNS[:, None] * x[::-1])
    sig2 = eigvalsh(t.conj().T @ t)
    _check_floor(sig2)
    sig = np.sqrt(np.clip(sig2, 0.0, None))
    return float(max(0.0, 2.0 * sig[0] - sig.sum()))


def linear_entropy_pure(amps: np.ndarray, n: int, k: int) -> float:
    rho = ptrace_pure(amps, n, (k,))
    det = rho[0, 0].real * rho[1, 1].real - abs(rho[0, 1]) ** 2
    return float(4.0 * det)


def three_tangle_pure(amps: np.ndarray) -> float:
    """CKW residual tau_1(23) - C^2_12 - C^2_13 of a normalized 3-qubit state.

    The reduced two-qubit matrices come with a natural rank-2 decomposition
    (the traced qubit's amplitude slices), so each squared concurrence is
    ||T||_F^2 - 2|det T| for the 2x2 tau matrix of the slices: exact, no
    eigensolves at all.
    """
    tau = linear_entropy_pure(amps, 3, 0)
    x_ab = amps.reshape(4, 2)  # rows (q1, q2), columns the traced qubit 3
    t = x_ab.T @ (_SY_SIGNS[:, None] * x_ab[::-1])
    c2_ab = max(0.0, (np.abs(t) ** 2).sum() - 2.0 * abs(t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]))
    x_ac = amps.reshape(2, 2, 2).transpose(0, 2, 1).reshape(4, 2)  # traced qubit 2
    t = x_ac.T @ (_SY_SIGNS[:, None] * x_ac[::-1])
    c2_ac = max(0.0, (np.abs(t) ** 2).sum() - 2.0 * abs(t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]))
    out = tau - c2_ab - c2_ac
    if out < CLIP_FLOOR:
        raise ValueError(f"three-tangle {out:.3e} below clip floor")
    return float(max(out, 0.0))


def f1_tau4_pure(amps: np.ndarray) -> float:
    """Four-tangle 4|ad+bc|^2 of a normalized state on the 1D-family kets."""
    weight = float((np.abs(amps) ** 2).sum())
    on = sum(abs(amps[i]) ** 2 for i in F1_SUPPORT)
    if weight - on > 1e-9:
        raise ValueError("amplitude support outside the 1D-family kets")
    a, b, c = amps[0], amps[3], amps[12]
    d = -amps[15]
    return float(4.0 * abs(a * d + b * c) ** 2)


_MEASURES = {0: three_tangle_pure, 1: f1_tau4_pure}


def isometry_from_params(m: int, x: np.ndarray) -> np.ndarray:
    """Build an m x 2 matrix with exactly orthonormal columns from angles/phases.

    Column one is a hypersphere point (m-1 angles, m-1 phases, first
    component real). Column two is a unit vector in its orthogonal
    complement: m-2 angles, m-2 phases and one overall phase, mapped through
    the Householder complement basis of column one. Total 4m-5 real
    parameters; all angles are unconstrained (periodic).
    """
    x = np.asarray(x, dtype=float)
    if x.size != 4 * m - 5:
        raise ValueError(f"expected {4 * m - 5} parameters for m={m}")
    u = _hypersphere(m, x[: m - 1], x[m - 1 : 2 * m - 2])
    y = _hypersphere(m - 1, x[2 * m - 2 : 3 * m - 4], x[3 * m - 4 : 4 * m - 6])
    chi = x[4 * m - 6]
    # Householder vector w = u + sign(u0) e0 never degenerates; the trailing
    # columns of I - 2 w w^H / |w|^2 span the complement of u exactly.
    s = 1.0 if u[0].real >= 0.0 else -1.0
    w = u.copy()
    w[0] += s
    wn = 2.0 * (1.0 + abs(u[0].real))
    v = np.exp(1j * chi) * (
        np.concatenate(([0.0], y)) - w * (2.0 / wn) * (w[1:].conj() @ y)
    )
    return np.column_stack([u, v])


def _hypersphere(k: int, angles: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """Unit vector in C^k: k-1 angles, k-1 phases, first component real."""
    out = np.empty(k, dtype=complex)
    run = 1.0
    for j in range(k - 1):
        out[j] = run * np.cos(angles[j]) * (np.exp(1j * phases[j - 1]) if j else 1.0)
        run *= np.sin(angles[j])
    out[k - 1] = run * (np.exp(1j * phases[k - 2]) if k > 1 else 1.0)
    return out


def roof_objective(basis: np.ndarray, m: int, measure_id: int, x: np.ndarray) -> float:
    """Weighted measure average of the decomposition generated by params ``x``.

    ``basis`` holds sqrt(mu_j) |e_j> as columns; the decomposition vectors
    are rows of the isometry contracted against it. Weights below 1e-14
    contribute nothing.
    """
    mix = isometry_from_params(m, x)
    vecs = basis @ mix.conj().T
    measure = _MEASURES[measure_id]
    total = 0.0
    for i in range(m):
        p = float(np.vdot(vecs[:, i], vecs[:, i]).real)
        if p < 1e-14:
            continue
        try:
            total += p * measure(vecs[:, i] / np.sqrt(p))
        except ValueError:
            return float("nan")
    return total


def roof_search(
    basis: np.ndarray,
    m: int,
    measure_id: int,
    x0: np.ndarray,
    step0: float,
    tol: float,
    max_iter: int,
) -> tuple[float, np.ndarray]:
    """Compass pattern search over the isometry parameters.

    Coordinate steps are halved when no move improves; stops when the step
    drops below ``tol`` or after ``max_iter`` objective evaluations.
    """
    x = np.array(x0, dtype=float)
    f = roof_objective(basis, m, measure_id, x)
    step = step0
    evals = 1
    dim = x.size
    while step > tol and evals < max_iter:
        improved = False
        for i in range(dim):
            for sgn in (1.0, -1.0):
                xt = x.copy()
                xt[i] += sgn * step
                ft = roof_objective(basis, m, measure_id, xt)
                evals += 1
                if ft < f:
                    x, f = xt, ft
                    improved = True
                    break
        if not improved:
            step *= 0.5
    return f, x

"""Convex-roof minimization for rank-2 mixed states.

The mixed three-tangle and the cluster-class four-tangle are convex roofs:
the minimum over all pure-state decompositions of the weighted average of a
pure-state measure. Every mixed state handled here has rank 2, so each
decomposition is generated from the two eigenvectors by an m x 2 isometry
(m up to 4), and the search runs over the isometry's angle/phase
parameters with a multi-start derivative-free pattern search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .backend import kernels
from .errors import (
    ConsistencyError,
    DomainError,
    IsometryError,
    RankError,
    UnsupportedSupportError,
)
from .qstate import DensityMatrix, PureState

RANK_TOL = 1e-10
EIG_FLOOR = -1e-10

# measure name -> (kernel id, register size)
ROOF_MEASURES = {"three_tangle": (0, 3), "f1_tau4": (1, 4)}

F1_SUPPORT = (0, 3, 12, 15)


class EigenSplit(NamedTuple):
    p: float
    psi1: PureState
    psi2: PureState
    rank1: bool


def eigen_split(dm: DensityMatrix) -> EigenSplit:
    """Eigen-decomposition of a rank-<=2 density matrix.

    Returns the larger eigenvalue p and both eigenvectors; for a pure input
    the second vector is an arbitrary null-space direction and the result is
    flagged rank-1. Rank above 2 raises RankError.
    """
    w, v = kernels.eigh(dm.matrix)
    if w[-1] < EIG_FLOOR:
        raise ConsistencyError(f"density matrix has eigenvalue {w[-1]:.3e} below the floor")
    if w.size > 2 and w[2] > RANK_TOL:
        raise RankError(f"rank > 2: third eigenvalue is {w[2]:.3e}")
    psi1 = PureState(dm.n_qubits, v[:, 0], dm.qubits)
    psi2 = PureState(dm.n_qubits, v[:, 1], dm.qubits)
    return EigenSplit(float(w[0]), psi1, psi2, bool(w[1] <= RANK_TOL))


@dataclass(frozen=True)
class Rank2Decomposition:
    """A pure-state decomposition of a rank-2 mixed state.

    ``mixing`` is the m x 2 isometry applied to the square-root-weighted
    eigenvectors; weights are the squared norms of the resulting raw
    vectors. Vectors with weight below 1e-14 are stored as None.
    """

    m: int
    weights: tuple[float, ...]
    vectors: tuple[PureState | None, ...]
    mixing: np.ndarray


def _scaled_basis(dm: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    w, v = kernels.eigh(dm.matrix)
    if w[-1] < EIG_FLOOR:
        raise ConsistencyError(f"density matrix has eigenvalue {w[-1]:.3e} below the floor")
    if w.size > 2 and w[2] > RANK_TOL:
        raise RankError(f"rank > 2: third eigenvalue is {w[2]:.3e}")
    top = np.sqrt(np.clip(w[:2], 0.0, None))
    return v[:, :2] * top, w


def decomposition_from_isometry(dm: DensityMatrix, isometry: np.ndarray) -> Rank2Decomposition:
    """Decomposition generated by an explicit m x 2 isometry.

    The raw vectors are sqrt(p_x)|Z_x> = sum_j conj(U_xj) sqrt(mu_j)|e_j>;
    the weighted outer products always reconstruct the input matrix, which
    is verified to 1e-10.
    """
    mix = np.asarray(isometry, dtype=complex)
    if mix.ndim != 2 or mix.shape[1] != 2 or not 2 <= mix.shape[0] <= 4:
        raise IsometryError(f"mixing matrix must be m x 2 with m in 2..4, got {mix.shape}")
    gram = mix.conj().T @ mix
    if np.abs(gram - np.eye(2)).max() > 1e-10:
        raise IsometryError("mixing matrix columns are not orthonormal within 1e-10")
    basis, _ = _scaled_basis(dm)
    raw = basis @ mix.conj().T
    weights = (np.abs(raw) ** 2).sum(axis=0)
    vectors = tuple(
        PureState(dm.n_qubits, raw[:, x] / np.sqrt(p), dm.qubits) if p >= 1e-14 else None
        for x, p in enumerate(weights)
    )
    rebuilt = raw @ raw.conj().T
    if np.abs(rebuilt - dm.matrix).max() > 1e-10:
        raise ConsistencyError("decomposition does not reconstruct the density matrix")
    return Rank2Decomposition(mix.shape[0], tuple(float(p) for p in weights), vectors, mix)


@dataclass(frozen=True)
class RoofConfig:
    """Search configuration: decomposition sizes, restarts per size, pattern
    search step threshold and per-start evaluation cap."""

    m_values: tuple[int, ...] = (2, 3, 4)
    restarts: int = 8
    tolerance: float = 1e-8
    max_iterations: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if not self.m_values or any(m not in (2, 3, 4) for m in self.m_values):
            raise DomainError("m_values must be a nonempty subset of {2, 3, 4}")
        if self.restarts < 1:
            raise DomainError("need at least one restart")


@dataclass(frozen=True)
class RoofResult:
    value: float
    argmin: Rank2Decomposition
    restarts_used: int
    spread: float


_PROBES_PER_DIM = 8
_KICK_SCALES = (0.4, 0.1)


def roof_minimize(dm: DensityMatrix, pure_measure: str, config: RoofConfig = RoofConfig()) -> RoofResult:
    """Minimize the decomposition average of ``pure_measure`` over a rank-2 state.

    Each restart starts the pattern search from the best of a batch of
    random isometry parameters (the eigen-decomposition itself is always
    one of them, so the result can never exceed the eigen-average), then
    re-descends from two perturbed points to escape shallow basins.
    Deterministic given the config seed. The spread field reports max-min
    of the per-restart minima.
    """
    try:
        measure_id, n_qubits = ROOF_MEASURES[pure_measure]
    except KeyError:
        raise DomainError(f"unknown roof measure {pure_measure!r}; "
                          f"choices are {sorted(ROOF_MEASURES)}") from None
    if dm.n_qubits != n_qubits:
        raise DomainError(f"measure {pure_measure} needs a {n_qubits}-qubit density matrix")
    if pure_measure == "f1_tau4":
        _check_f1_support(dm)
    basis, w = _scaled_basis(dm)

    if w[1] <= RANK_TOL:
        # no decomposition freedom: every decomposition averages the single
        # pure state, so report the measure of the eigenvector itself
        argmin = decomposition_from_isometry(dm, np.eye(2, dtype=complex))
        value = _eval_measure(measure_id, basis[:, 0] / np.sqrt(w[0]))
        return RoofResult(float(value), argmin, 0, 0.0)

    best_val = np.inf
    best_params: tuple[int, np.ndarray] | None = None
    restart_values = []
    for m in config.m_values:
        dim = 4 * m - 5
        for r in range(config.restarts):
            rng = np.random.default_rng((config.seed, m, r))
            starts = rng.uniform(0.0, 2.0 * np.pi, size=(_PROBES_PER_DIM * dim, dim))
            starts[0] = 0.0  # identity isometry: the eigen-decomposition
            probe_vals = [kernels.roof_objective(basis, m, measure_id, x) for x in starts]
            try:
                x = starts[int(np.nanargmin(probe_vals))]
            except ValueError:
                raise ConsistencyError("roof objective not evaluable at any probe") from None
            f, x = kernels.roof_search(
                basis, m, measure_id, x, 0.5, config.tolerance, config.max_iterations
            )
            for scale in _KICK_SCALES:
                xk = x + rng.normal(0.0, scale, size=dim)
                fk, xk = kernels.roof_search(
                    basis, m, measure_id, xk, scale, config.tolerance, config.max_iterations
                )
                if fk < f:
                    f, x = fk, xk
            restart_values.append(f)
            if f < best_val:
                best_val, best_params = f, (m, x)
    if best_params is None or not np.isfinite(best_val):
        raise ConsistencyError("roof search failed to produce a finite value")
    spread = float(max(restart_values) - min(restart_values))
    argmin = decomposition_from_isometry(
        dm, kernels.isometry_from_params(best_params[0], best_params[1])
    )
    value = 0.0
    for p, z in zip(argmin.weights, argmin.vectors):
        if z is None:
            continue
        try:
            value += p * _eval_measure(measure_id, z.amplitudes)
        except ValueError as exc:
            kind = UnsupportedSupportError if "support" in str(exc) else ConsistencyError
            raise kind(f"measure failed on decomposition vector {z.amplitudes!r}: {exc}") from exc
    return RoofResult(float(value), argmin, len(restart_values), spread)


def _eval_measure(measure_id: int, vec: np.ndarray) -> float:
    if measure_id == 0:
        return kernels.three_tangle_pure(vec)
    return kernels.f1_tau4_pure(vec)


def _check_f1_support(dm: DensityMatrix) -> None:
    mask = np.ones(16, dtype=bool)
    mask[list(F1_SUPPORT)] = False
    off = max(np.abs(dm.matrix[mask, :]).max(), np.abs(dm.matrix[:, mask]).max())
    if off > 1e-10:
        raise UnsupportedSupportError(
            f"density matrix has weight {off:.3e} outside the 1D-family kets"
        )


def tau4_roof_restricted(dm: DensityMatrix, config: RoofConfig = RoofConfig()) -> RoofResult:
    """Convex roof of the four-tangle over cluster-class decompositions.

    The input must be a rank-2 four-qubit mixture supported on the
    1D-family kets; every decomposition vector then stays in the family and
    the four-tangle closed form applies to each.
    """
    if dm.n_qubits != 4:
        raise DomainError("tau4_roof_restricted needs a 4-qubit density matrix")
    _check_f1_support(dm)
    return roof_minimize(dm, "f1_tau4", config)

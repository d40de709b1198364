"""Scalar correlation and entanglement quantities on generic states.

Per-qubit linear entropies, Wootters concurrences, residual correlations
M_k = tau_k - sum_l C^2_kl, their average E_ms = sum_k M_k / n, the pure
three-tangle, and the least-squares solver for the linear system
t4 + sum(t3 over triples containing k) = M_k.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .backend import kernels
from .errors import ConsistencyError, DomainError, UnderdeterminedError
from .qstate import DensityMatrix, PureState, partial_trace

QCR_LABELS = ("A", "B", "C", "D")
QCR_TRIPLES = ("ABC", "ABD", "ACD", "BCD")

MONOGAMY_FLOOR = -1e-9


def linear_entropy(state: PureState, k: str) -> float:
    """Linear entropy 4*det(rho_k) of qubit ``k``: its total correlation
    with the rest of the register. Lies in [0, 1]."""
    idx = state.qubit_index(k)
    return kernels.linear_entropy_pure(state.amplitudes, state.n_qubits, idx)


def concurrence(dm: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    C = max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)) with the l_i the
    descending eigenvalues of rho rho~, computed through the Hermitian
    product sqrt(rho) rho~ sqrt(rho). Eigenvalues in [-1e-10, 0) are
    clipped to zero; anything lower raises.
    """
    if dm.n_qubits != 2:
        raise DomainError(f"concurrence needs a 2-qubit density matrix, got {dm.n_qubits} qubits")
    return kernels.concurrence(dm.matrix)


def _pair_concurrences(state: PureState) -> dict[tuple[str, str], float]:
    out = {}
    for i, j in itertools.combinations(range(state.n_qubits), 2):
        rho = kernels.ptrace_pure(state.amplitudes, state.n_qubits, (i, j))
        rho = 0.5 * (rho + rho.conj().T)
        out[(state.labels[i], state.labels[j])] = kernels.concurrence(rho)
    return out


def residual_correlation(state: PureState, k: str) -> float:
    """Multipartite share of qubit ``k``'s correlation: tau_k minus every
    squared pairwise concurrence involving k."""
    if state.n_qubits != 4:
        raise DomainError("residual_correlation is defined on 4-qubit pure states")
    return _residuals(state)[state.qubit_index(k)]


def _residuals(state: PureState) -> list[float]:
    n = state.n_qubits
    taus = [kernels.linear_entropy_pure(state.amplitudes, n, i) for i in range(n)]
    c2 = {pair: c * c for pair, c in _pair_concurrences(state).items()}
    out = []
    for i, q in enumerate(state.labels):
        pair_total = sum(v for pair, v in c2.items() if q in pair)
        out.append(taus[i] - pair_total)
    return out


def ems(state: PureState) -> float:
    """Average residual correlation (sum of M_k) / n for an n >= 3 pure state."""
    if state.n_qubits < 3:
        raise DomainError("ems needs at least 3 qubits")
    return sum(_residuals(state)) / state.n_qubits


def pure_three_tangle(state: PureState, validate: bool = True) -> float:
    """Residual tangle tau_k(rest) - C^2_kl - C^2_km of a 3-qubit pure state.

    The value does not depend on which qubit plays the focus role; with
    ``validate`` the three focus choices are computed and must agree within
    1e-9 (a failed check signals a bug, not noise). Clipped to [0, inf) at
    the -1e-10 floor.
    """
    if state.n_qubits != 3:
        raise DomainError("pure_three_tangle needs a 3-qubit pure state")
    first = kernels.three_tangle_pure(state.amplitudes)
    if validate:
        perms = ((1, 0, 2), (2, 0, 1))
        psi = state.amplitudes.reshape(2, 2, 2)
        others = [kernels.three_tangle_pure(psi.transpose(p).reshape(-1)) for p in perms]
        spread = max(abs(first - v) for v in others)
        if spread > 1e-9:
            raise ConsistencyError(f"three-tangle differs across focus qubits by {spread:.3e}")
    return first


def qcr_solve(
    m_values: Union[Mapping[str, float], Sequence[float]],
    known_t3: Mapping[str, float],
) -> tuple[float, dict[str, float], float]:
    """Solve t4 + sum_{triples containing k} t3 = M_k in least squares.

    ``m_values`` holds the four residual correlations (mapping by qubit
    label or a sequence in A..D order); ``known_t3`` pins some of the four
    triple correlations. Returns (t4, all four t3 values, residual), where
    the residual is the maximum absolute equation violation. Values are
    reported even when negative; with no knowns the system is rank
    deficient and UnderdeterminedError carries the solution manifold
    dimension.
    """
    if isinstance(m_values, Mapping):
        try:
            m_vec = np.array([float(m_values[q]) for q in QCR_LABELS])
        except KeyError as exc:
            raise DomainError(f"m_values is missing qubit {exc}") from None
    else:
        if len(m_values) != 4:
            raise DomainError("m_values needs exactly four entries")
        m_vec = np.array([float(v) for v in m_values])
    known = {}
    for triple, value in known_t3.items():
        key = "".join(sorted(triple.upper()))
        if key not in QCR_TRIPLES:
            raise DomainError(f"unknown qubit triple {triple!r}")
        known[key] = float(value)
    unknown_triples = [t for t in QCR_TRIPLES if t not in known]
    n_unknowns = 1 + len(unknown_triples)
    rows = np.zeros((4, n_unknowns))
    rhs = m_vec.copy()
    for i, k in enumerate(QCR_LABELS):
        rows[i, 0] = 1.0
        for j, t in enumerate(unknown_triples):
            if k in t:
                rows[i, 1 + j] = 1.0
        rhs[i] -= sum(v for t, v in known.items() if k in t)
    solution, _, rank, _ = np.linalg.lstsq(rows, rhs, rcond=None)
    if rank < n_unknowns:
        raise UnderdeterminedError(
            f"QCR system with {len(known)} known t3 values is underdetermined",
            dimension=n_unknowns - rank,
        )
    t4 = float(solution[0])
    t3 = dict(known)
    t3.update({t: float(v) for t, v in zip(unknown_triples, solution[1:])})
    residual = float(np.abs(rows @ solution - rhs).max())
    return t4, {t: t3[t] for t in QCR_TRIPLES}, residual


@dataclass(frozen=True)
class CorrelationReport:
    """Per-state record of every correlation quantity the package computes."""

    labels: tuple[str, ...]
    tau_k: dict[str, float]
    c2_pairs: dict[str, float]
    m_k: dict[str, float]
    e_ms: float
    t3: dict[str, float] | None = None
    t4: float | None = None
    qcr_residual: float | None = None

    def __post_init__(self):
        n = len(self.labels)
        if abs(self.e_ms - sum(self.m_k.values()) / n) > 1e-12:
            raise ConsistencyError("e_ms is not the mean of the residual correlations")
        for q in self.labels:
            pair_total = sum(v for key, v in self.c2_pairs.items() if q in key)
            if abs(self.m_k[q] - (self.tau_k[q] - pair_total)) > 1e-12:
                raise ConsistencyError(f"M_{q} does not match tau - sum C^2")
        if n == 4:
            worst = min(self.m_k.values())
            if worst < MONOGAMY_FLOOR:
                raise ConsistencyError(f"monogamy violated: min M_k = {worst:.3e}")

    def to_json(self, indent: int | None = None) -> str:
        payload = {
            "tau_k": {q: _sig12(v) for q, v in self.tau_k.items()},
            "c2_pairs": {p: _sig12(v) for p, v in self.c2_pairs.items()},
            "m_k": {q: _sig12(v) for q, v in self.m_k.items()},
            "e_ms": _sig12(self.e_ms),
            "t3": None if self.t3 is None else {t: _sig12(v) for t, v in self.t3.items()},
            "t4": None if self.t4 is None else _sig12(self.t4),
            "qcr_residual": None if self.qcr_residual is None else _sig12(self.qcr_residual),
        }
        return json.dumps(payload, indent=indent)


def _sig12(x: float) -> float:
    return x if math.isnan(x) else float(f"{x:.12g}")


def correlation_report(
    state: PureState, known_t3: Mapping[str, float] | None = None
) -> CorrelationReport:
    """Assemble the full correlation record of a pure state.

    When ``known_t3`` is given (meaningful for 4-qubit states) the QCR
    system is solved and the t3/t4 split reported alongside its residual.
    """
    if state.n_qubits < 3:
        raise DomainError("correlation reports need at least 3 qubits")
    n = state.n_qubits
    taus = {q: linear_entropy(state, q) for q in state.labels}
    c2 = {f"{a}{b}": c * c for (a, b), c in _pair_concurrences(state).items()}
    m_k = {}
    for q in state.labels:
        m_k[q] = taus[q] - sum(v for key, v in c2.items() if q in key)
    e = sum(m_k.values()) / n
    t3 = t4 = residual = None
    if known_t3 is not None:
        if n != 4 or state.labels != QCR_LABELS:
            raise DomainError("the QCR system applies to the 4-qubit register A..D")
        t4, t3, residual = qcr_solve(m_k, known_t3)
    return CorrelationReport(state.labels, taus, c2, m_k, e, t3, t4, residual)

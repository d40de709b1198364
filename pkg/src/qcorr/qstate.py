"""Dense representations of few-qubit pure states and density matrices.

Basis index convention, fixed package-wide: qubit A is the most significant
bit, so a computational basis ket |q_A q_B ... q_Z> sits at index
q_A * 2^(n-1) + ... + q_Z * 2^0. Registers hold at most 8 qubits, labelled
A..H by default. All values are immutable after construction and every
operation is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Union

import numpy as np

from .backend import kernels
from .errors import (
    DomainError,
    DuplicateBasisError,
    FormatError,
    HermiticityError,
    NormalizationError,
    SubsetError,
)

DEFAULT_LABELS = tuple("ABCDEFGH")
MAX_QUBITS = 8

ATOL_NORM = 1e-12
ATOL_HERM = 1e-12


def _frozen_array(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureState:
    """Normalized complex amplitude vector over an ordered qubit register."""

    n_qubits: int
    amplitudes: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise DomainError(f"supported register sizes are 1..{MAX_QUBITS}, got {self.n_qubits}")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 1 << self.n_qubits:
            raise FormatError(f"expected {1 << self.n_qubits} amplitudes, got {amps.size}")
        norm2 = float((np.abs(amps) ** 2).sum())
        if abs(norm2 - 1.0) > ATOL_NORM:
            raise NormalizationError(f"squared norm {norm2!r} is not 1 within 1e-12")
        labels = tuple(self.labels) or DEFAULT_LABELS[: self.n_qubits]
        if len(labels) != self.n_qubits or len(set(labels)) != self.n_qubits:
            raise FormatError(f"need {self.n_qubits} distinct qubit labels, got {labels!r}")
        object.__setattr__(self, "amplitudes", _frozen_array(amps))
        object.__setattr__(self, "labels", labels)

    def qubit_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise SubsetError(f"no qubit {label!r} in register {self.labels}") from None

    def to_density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.labels, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, trace-one complex matrix over an ordered qubit subset."""

    qubits: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        qubits = tuple(self.qubits)
        m = np.asarray(self.matrix, dtype=complex)
        dim = 1 << len(qubits)
        if m.shape != (dim, dim):
            raise FormatError(f"expected a {dim}x{dim} matrix for {len(qubits)} qubits")
        if np.abs(m - m.conj().T).max() > ATOL_HERM:
            raise HermiticityError("matrix is not Hermitian within 1e-12")
        tr = m.trace()
        if abs(tr - 1.0) > ATOL_NORM:
            raise NormalizationError(f"trace {tr!r} is not 1 within 1e-12")
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "matrix", _frozen_array(m))

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues sorted descending, plus orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None


def bitstring_to_index(bits: str, n_qubits: int) -> int:
    if len(bits) != n_qubits or any(ch not in "01" for ch in bits):
        raise FormatError(f"bitstring {bits!r} is not a length-{n_qubits} string of 0/1")
    return int(bits, 2)


def make_pure(
    n_qubits: int, entries: Iterable[tuple[str, complex]], labels: tuple[str, ...] = ()
) -> tuple[PureState, float]:
    """Build a normalized pure state from sparse (bitstring, amplitude) entries.

    Returns the state together with the norm of the raw vector (the
    normalization constant that was divided out). Zero entries are allowed;
    an all-zero vector is not.
    """
    amps = np.zeros(1 << n_qubits, dtype=complex)
    seen = set()
    for bits, value in entries:
        idx = bitstring_to_index(bits, n_qubits)
        if idx in seen:
            raise DuplicateBasisError(f"basis ket {bits!r} given twice")
        seen.add(idx)
        amps[idx] = value
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise NormalizationError("cannot normalize the zero vector")
    return PureState(n_qubits, amps / norm, labels), norm


def _resolve_keep(labels: tuple[str, ...], keep: Union[str, Iterable[str]]) -> tuple[int, ...]:
    keep_labels = tuple(keep)
    if not keep_labels:
        raise SubsetError("keep subset is empty")
    if len(set(keep_labels)) != len(keep_labels):
        raise SubsetError(f"duplicate labels in keep subset {keep_labels!r}")
    for q in keep_labels:
        if q not in labels:
            raise SubsetError(f"no qubit {q!r} in register {labels}")
    if len(keep_labels) == len(labels):
        raise SubsetError("keep subset must be a proper subset of the register")
    return tuple(i for i, q in enumerate(labels) if q in keep_labels)


def partial_trace(state: Union[PureState, DensityMatrix], keep: Union[str, Iterable[str]]) -> DensityMatrix:
    """Reduced density matrix over ``keep``, register order preserved.

    ``keep`` must be a nonempty proper subset of the state's qubits; it may
    be given in any order (a string like "AB" works).
    """
    if isinstance(state, PureState):
        labels, n = state.labels, state.n_qubits
        positions = _resolve_keep(labels, keep)
        reduced = kernels.ptrace_pure(state.amplitudes, n, positions)
    else:
        labels, n = state.qubits, state.n_qubits
        positions = _resolve_keep(labels, keep)
        reduced = kernels.ptrace_dm(state.matrix, n, positions)
    kept_labels = tuple(labels[i] for i in positions)
    # symmetrize roundoff so the Hermiticity invariant holds exactly
    reduced = 0.5 * (reduced + reduced.conj().T)
    return DensityMatrix(kept_labels, reduced)


def hermitian_spectrum(dm: DensityMatrix) -> Spectrum:
    """Full spectrum of a density matrix, eigenvalues descending.

    Deterministic for repeated calls on identical input; the eigenvectors
    reconstruct the matrix to 1e-10 in max norm.
    """
    w, v = kernels.eigh(dm.matrix)
    return Spectrum(w, v)


def apply_local_operator(state: PureState, qubit: str, op: np.ndarray) -> tuple[np.ndarray, float]:
    """Apply a 2x2 operator to one qubit without normalizing.

    Returns the raw output vector and its squared norm, which is the outcome
    probability when ``op`` is a POVM element acting on a normalized state.
    """
    idx = state.qubit_index(qubit)
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise FormatError("local operator must be a 2x2 matrix")
    psi = state.amplitudes.reshape((2,) * state.n_qubits)
    out = np.moveaxis(np.tensordot(op, psi, axes=([1], [idx])), 0, idx).reshape(-1)
    return out, float((np.abs(out) ** 2).sum())


def mixture(states: Iterable[PureState], weights: Iterable[float]) -> DensityMatrix:
    """Convex mixture of pure states over a common register."""
    states = list(states)
    weights = [float(w) for w in weights]
    if len(states) != len(weights) or not states:
        raise FormatError("need one weight per state")
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
        raise NormalizationError(f"weights {weights!r} are not a probability vector")
    labels = states[0].labels
    if any(s.labels != labels for s in states):
        raise SubsetError("all states in a mixture must share one register")
    rho = sum(w * np.outer(s.amplitudes, s.amplitudes.conj()) for w, s in zip(weights, states))
    return DensityMatrix(labels, rho)


def load_state(source: Union[str, IO[str]]) -> tuple[PureState, float]:
    """Read a state file: one ``<bitstring> <re> <im>`` entry per line.

    Blank lines and ``#`` comments are allowed; the state is normalized on
    load and the raw norm returned alongside it.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    else:
        lines = source.readlines()
    entries: list[tuple[str, complex]] = []
    n_qubits = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected '<bitstring> <re> <im>', got {raw.strip()!r}")
        bits, re_s, im_s = parts
        try:
            value = complex(float(re_s), float(im_s))
        except ValueError:
            raise FormatError(f"line {lineno}: bad amplitude in {raw.strip()!r}") from None
        if n_qubits is None:
            n_qubits = len(bits)
        entries.append((bits, value))
    if n_qubits is None:
        raise FormatError("state file has no entries")
    return make_pure(n_qubits, entries)

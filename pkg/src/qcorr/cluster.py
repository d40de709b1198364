"""Constructors and closed-form measures for the cluster state families.

Five families are supported, each a fixed set of basis kets with signed
complex coefficients (a, b, c, d) or (a, b):

    f1   a|0000> + b|0011> + c|1100> - d|1111>     (1D chain class)
    f2   a|0000> - b|0111> - c|1010> + d|1101>     (2D box class)
    f3   a|0000> + b|1111>                          (3D / GHZ class)
    f6   a|000000> + b|000111> + c|111000> - d|111111>
    ghz  a|0...0> + b|1...1> on n qubits

Coefficients are the raw (non-normalized) user-facing numbers; they are
normalized exactly once, when a state is built or a closed form evaluated.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import measures
from .errors import (
    ConsistencyError,
    DomainError,
    NormalizationError,
    UnsupportedFamilyError,
)
from .qstate import PureState, make_pure

# tag -> (register size or None for ghz, kets, signs)
_FAMILY_DEFS = {
    "f1": (4, ("0000", "0011", "1100", "1111"), (1, 1, 1, -1)),
    "f2": (4, ("0000", "0111", "1010", "1101"), (1, -1, -1, 1)),
    "f3": (4, ("0000", "1111"), (1, 1)),
    "f6": (6, ("000000", "000111", "111000", "111111"), (1, 1, 1, -1)),
    "ghz": (None, None, (1, 1)),
}

# triples with vanishing three-tangle, assumed known when solving the QCRs
FAMILY_KNOWN_T3 = {
    "f1": {t: 0.0 for t in measures.QCR_TRIPLES},
    "f2": {"ABC": 0.0, "ACD": 0.0},
    "f3": {t: 0.0 for t in measures.QCR_TRIPLES},
}

COEFF_NAMES = ("a", "b", "c", "d")


@dataclass(frozen=True)
class ClusterFamily:
    """Tagged description of one family member: tag + raw coefficients."""

    tag: str
    coefficients: tuple[complex, ...]
    n: int = 0

    def __post_init__(self):
        tag = self.tag.lower()
        if tag not in _FAMILY_DEFS:
            raise UnsupportedFamilyError(f"unknown family tag {self.tag!r}")
        size, kets, signs = _FAMILY_DEFS[tag]
        coeffs = tuple(complex(c) for c in self.coefficients)
        if len(coeffs) != len(signs):
            raise DomainError(f"family {tag} takes {len(signs)} coefficients, got {len(coeffs)}")
        if tag == "ghz":
            n = self.n or 4
            if not 2 <= n <= 8:
                raise DomainError(f"ghz register size must be 2..8, got {n}")
        else:
            n = size
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "n", n)

    @property
    def kets(self) -> tuple[str, ...]:
        if self.tag == "ghz":
            return ("0" * self.n, "1" * self.n)
        return _FAMILY_DEFS[self.tag][1]

    @property
    def signs(self) -> tuple[int, ...]:
        return _FAMILY_DEFS[self.tag][2]


def family_state(family: ClusterFamily) -> PureState:
    """Normalized pure state of a family member (signs baked in)."""
    entries = [
        (ket, sign * coeff)
        for ket, sign, coeff in zip(family.kets, family.signs, family.coefficients)
    ]
    try:
        state, _ = make_pure(family.n, entries)
    except NormalizationError:
        raise NormalizationError(f"family {family.tag} coefficients are all zero") from None
    return state


def fit_family_coefficients(state: PureState, tag: str) -> tuple[complex, ...]:
    """Read the family coefficients back off a state's amplitudes.

    The state must live exactly on the family's ket support (amplitudes off
    support below 1e-10), otherwise UnsupportedFamilyError is raised.
    """
    probe = ClusterFamily(tag, (1,) * len(_FAMILY_DEFS[tag.lower()][2]), n=state.n_qubits)
    if state.n_qubits != probe.n:
        raise UnsupportedFamilyError(f"family {tag} lives on {probe.n} qubits, state has {state.n_qubits}")
    idx = [int(k, 2) for k in probe.kets]
    off = np.delete(np.abs(state.amplitudes), idx)
    if off.size and off.max() > 1e-10:
        raise UnsupportedFamilyError(f"state has weight {off.max():.3e} outside the {tag} kets")
    return tuple(state.amplitudes[i] / s for i, s in zip(idx, probe.signs))


def _normalized(coefficients: Sequence[complex]) -> np.ndarray:
    c = np.asarray(coefficients, dtype=complex)
    norm = np.linalg.norm(c)
    if norm == 0.0:
        raise NormalizationError("coefficients are all zero")
    return c / norm


@dataclass(frozen=True)
class ClosedFormRecord:
    """All Table-style closed-form measures of one f1/f2/f3 member."""

    tau4: float
    tau3: dict[str, float]
    tau2: dict[str, float]
    e_ms: float

    def __post_init__(self):
        values = [self.tau4, self.e_ms, *self.tau3.values(), *self.tau2.values()]
        if min(values) < -1e-12 or max(values) > 1 + 1e-12:
            raise ConsistencyError("closed-form measure outside [0, 1]")


_PAIRS = ("AB", "AC", "AD", "BC", "BD", "CD")


def closed_form_measures(family: ClusterFamily) -> ClosedFormRecord:
    """Evaluate every closed-form entry on normalized coefficients.

    Only the three four-qubit families have closed forms; f6/ghz raise
    UnsupportedFamilyError.
    """
    tau3 = {t: 0.0 for t in measures.QCR_TRIPLES}
    tau2 = {p: 0.0 for p in _PAIRS}
    if family.tag == "f1":
        a, b, c, d = _normalized(family.coefficients)
        tau4 = 4.0 * abs(a * d + b * c) ** 2
        tau2["AB"] = 4.0 * abs(np.conj(a) * c - np.conj(b) * d) ** 2
        tau2["CD"] = 4.0 * abs(np.conj(a) * b - np.conj(c) * d) ** 2
        e_ms = tau4
    elif family.tag == "f2":
        a, b, c, d = _normalized(family.coefficients)
        tau4 = 16.0 * abs(a * b * c * d)
        tau3["ABD"] = 4.0 * (abs(a * d) - abs(b * c)) ** 2
        tau3["BCD"] = 4.0 * (abs(a * b) - abs(c * d)) ** 2
        tau2["AC"] = 4.0 * (abs(a * c) - abs(b * d)) ** 2
        e_ms = ems_closed_family2(family.coefficients)
    elif family.tag == "f3":
        a, b = _normalized(family.coefficients)
        tau4 = 4.0 * abs(a * b) ** 2
        e_ms = tau4
    else:
        raise UnsupportedFamilyError(f"no closed forms for family {family.tag!r}")
    return ClosedFormRecord(float(tau4), tau3, tau2, float(e_ms))


def ems_closed_family2(coefficients: Sequence[complex]) -> float:
    """Average residual correlation of an f2 member,
    3(|a|^2+|c|^2)(|b|^2+|d|^2) + 4|abcd| on normalized coefficients."""
    a, b, c, d = _normalized(coefficients)
    return float(
        3.0 * (abs(a) ** 2 + abs(c) ** 2) * (abs(b) ** 2 + abs(d) ** 2)
        + 4.0 * abs(a * b * c * d)
    )


def delta_ems_closed_family2(
    coefficients: Sequence[complex], alpha: float, beta: float, target: str
) -> float:
    """Closed-form drop of E_ms under a diagonal two-outcome POVM on f2.

    Closed forms exist for targets A and C; both are non-negative for every
    coefficient tuple, witnessing monotonicity on those qubits.
    """
    if not (0.0 < alpha < 1.0 and 0.0 < beta < 1.0):
        raise DomainError("alpha and beta must lie strictly inside (0, 1)")
    target = target.upper()
    a, b, c, d = _normalized(coefficients)
    a2, b2, c2, d2 = (abs(x) ** 2 for x in (a, b, c, d))
    if target == "A":
        # target-0 kets carry a, b; target-1 kets carry c, d
        w0, w1 = a2 + b2, c2 + d2
        bracket = 4.0 * abs(a * b * c * d) * (a2 + b2) * (c2 + d2) + 3.0 * (b2 * c2 - a2 * d2) ** 2
    elif target == "C":
        w0, w1 = a2 + d2, b2 + c2
        bracket = 4.0 * abs(a * b * c * d) * (a2 + d2) * (b2 + c2) + 3.0 * (a2 * b2 - c2 * d2) ** 2
    else:
        raise DomainError("closed-form deltas exist for targets A and C only")
    p1 = alpha**2 * w0 + beta**2 * w1
    p2 = 1.0 - p1
    return float((alpha**2 - beta**2) ** 2 * bracket / (p1 * p2))


SCAN_COLUMNS = (
    "family", "a", "b", "c", "d",
    "e_ms", "tau4", "tau3_abd", "tau3_bcd", "tau2_ab", "tau2_ac", "tau2_cd",
)


def scan_grid(
    family: ClusterFamily,
    varying: tuple[str, str],
    lo: float,
    hi: float,
    steps: int,
    numeric: bool = False,
) -> list[dict]:
    """Sweep two raw coefficients over a square grid, row-major in the first.

    Each row carries the raw coefficients plus E_ms and the closed-form
    measures (the numeric pipeline instead when ``numeric`` is set). A grid
    point where every raw coefficient vanishes produces a NaN row rather
    than an abort.
    """
    if family.tag not in ("f1", "f2"):
        raise UnsupportedFamilyError("grid scans cover families f1 and f2")
    names = tuple(v.lower() for v in varying)
    if len(names) != 2 or names[0] == names[1] or any(v not in COEFF_NAMES for v in names):
        raise DomainError(f"varying must name two distinct coefficients, got {varying!r}")
    if steps < 2:
        raise DomainError("steps must be at least 2")
    grid = np.linspace(lo, hi, steps)
    base = dict(zip(COEFF_NAMES, family.coefficients))
    rows = []
    for v1 in grid:
        for v2 in grid:
            coeffs = dict(base)
            coeffs[names[0]] = v1
            coeffs[names[1]] = v2
            tup = tuple(coeffs[n] for n in COEFF_NAMES)
            row = {"family": family.tag, **{n: coeffs[n] for n in COEFF_NAMES}}
            if max(abs(x) for x in tup) == 0.0:
                row.update({k: math.nan for k in SCAN_COLUMNS[5:]})
            else:
                member = ClusterFamily(family.tag, tup)
                row.update(_scan_measures(member, numeric))
            rows.append(row)
    return rows


def _scan_measures(member: ClusterFamily, numeric: bool) -> dict[str, float]:
    if not numeric:
        rec = closed_form_measures(member)
        return {
            "e_ms": rec.e_ms,
            "tau4": rec.tau4,
            "tau3_abd": rec.tau3["ABD"],
            "tau3_bcd": rec.tau3["BCD"],
            "tau2_ab": rec.tau2["AB"],
            "tau2_ac": rec.tau2["AC"],
            "tau2_cd": rec.tau2["CD"],
        }
    report = measures.correlation_report(family_state(member), FAMILY_KNOWN_T3[member.tag])
    return {
        "e_ms": report.e_ms,
        "tau4": report.t4,
        "tau3_abd": report.t3["ABD"],
        "tau3_bcd": report.t3["BCD"],
        "tau2_ab": report.c2_pairs["AB"],
        "tau2_ac": report.c2_pairs["AC"],
        "tau2_cd": report.c2_pairs["CD"],
    }


def _csv_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, complex):
        if value.imag == 0.0:
            return f"{value.real:.12g}"
        return f"{value.real:.12g}{value.imag:+.12g}j"
    return f"{value:.12g}"


def scan_to_csv(rows: Iterable[dict], stream: io.TextIOBase | None = None) -> str:
    """Serialize scan rows as CSV with the mandatory header, 12 significant digits."""
    out = stream or io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for row in rows:
        writer.writerow([_csv_cell(row[col]) for col in SCAN_COLUMNS])
    return out.getvalue() if stream is None else ""

"""Multipartite entanglement measures for few-qubit cluster-class states.

Dense pure-state/density-matrix kernels (`qstate`), correlation measures
built on linear entropy and Wootters concurrence (`measures`), the cluster
state families with their closed forms (`cluster`), two-outcome POVM
simulation with monotonicity fuzzing (`locc`), and convex-roof
minimization for rank-2 mixtures (`roof`). The hot kernels run in a
compiled extension when available; `qcorr.backend.kernels.name` tells you
which backend is active.
"""

from .backend import kernels
from .cluster import (
    ClosedFormRecord,
    ClusterFamily,
    closed_form_measures,
    delta_ems_closed_family2,
    ems_closed_family2,
    family_state,
    fit_family_coefficients,
    scan_grid,
    scan_to_csv,
)
from .errors import (
    ConsistencyError,
    DomainError,
    DuplicateBasisError,
    FormatError,
    HermiticityError,
    IsometryError,
    NormalizationError,
    QcorrError,
    RankError,
    ReproductionError,
    SubsetError,
    UnderdeterminedError,
    UnsupportedFamilyError,
    UnsupportedSupportError,
)
from .locc import (
    CounterexampleRecord,
    FuzzConfig,
    FuzzReport,
    MonotonicityRecord,
    PovmPair,
    apply_povm,
    fuzz_campaign,
    monotonicity_delta,
    named_measure,
    reproduce_counterexample,
)
from .measures import (
    CorrelationReport,
    concurrence,
    correlation_report,
    ems,
    linear_entropy,
    pure_three_tangle,
    qcr_solve,
    residual_correlation,
)
from .qstate import (
    DensityMatrix,
    PureState,
    Spectrum,
    apply_local_operator,
    hermitian_spectrum,
    load_state,
    make_pure,
    mixture,
    partial_trace,
)
from .roof import (
    EigenSplit,
    Rank2Decomposition,
    RoofConfig,
    RoofResult,
    decomposition_from_isometry,
    eigen_split,
    roof_minimize,
    tau4_roof_restricted,
)

__version__ = "0.1.0"

__all__ = [
    "kernels",
    "PureState", "DensityMatrix", "Spectrum",
    "make_pure", "partial_trace", "hermitian_spectrum", "apply_local_operator",
    "mixture", "load_state",
    "linear_entropy", "concurrence", "residual_correlation", "ems",
    "pure_three_tangle", "qcr_solve", "correlation_report", "CorrelationReport",
    "ClusterFamily", "ClosedFormRecord", "family_state", "fit_family_coefficients",
    "closed_form_measures", "ems_closed_family2", "delta_ems_closed_family2",
    "scan_grid", "scan_to_csv",
    "PovmPair", "MonotonicityRecord", "FuzzConfig", "FuzzReport", "CounterexampleRecord",
    "apply_povm", "monotonicity_delta", "fuzz_campaign", "reproduce_counterexample",
    "named_measure",
    "EigenSplit", "Rank2Decomposition", "RoofConfig", "RoofResult",
    "eigen_split", "decomposition_from_isometry", "roof_minimize", "tau4_roof_restricted",
    "QcorrError", "NormalizationError", "DuplicateBasisError", "FormatError",
    "SubsetError", "HermiticityError", "DomainError", "UnderdeterminedError",
    "UnsupportedFamilyError", "RankError", "IsometryError", "UnsupportedSupportError",
    "ReproductionError", "ConsistencyError",
]

"""Exception types raised across the package."""


class QcorrError(Exception):
    """Base class for all qcorr errors."""


class NormalizationError(QcorrError):
    """State vector or mixture cannot be normalized (zero norm, bad trace)."""


class DuplicateBasisError(QcorrError):
    """The same basis bitstring was given more than once."""


class FormatError(QcorrError):
    """Malformed bitstring, state file line, or coefficient literal."""


class SubsetError(QcorrError):
    """Qubit subset is empty, not proper, or contains unknown labels."""


class HermiticityError(QcorrError):
    """Matrix is not Hermitian within tolerance."""


class DomainError(QcorrError):
    """Parameter outside its allowed domain (alpha/beta, steps, qubit count)."""


class UnderdeterminedError(QcorrError):
    """Correlation system has too few knowns to pin down the unknowns.

    Carries the dimension of the solution manifold.
    """

    def __init__(self, message: str, dimension: int):
        super().__init__(message)
        self.dimension = dimension


class UnsupportedFamilyError(QcorrError):
    """Operation has no closed form for this family, or the state does not
    fit the family's ket support."""


class RankError(QcorrError):
    """Density matrix rank exceeds what the operation supports."""


class IsometryError(QcorrError):
    """Mixing matrix does not have orthonormal columns (or bad shape)."""


class UnsupportedSupportError(QcorrError):
    """State support falls outside the basis kets the operation requires."""


class ReproductionError(QcorrError):
    """A recomputed reference value disagrees with the published figure.

    Carries the name of the offending quantity.
    """

    def __init__(self, message: str, quantity: str):
        super().__init__(message)
        self.quantity = quantity


class ConsistencyError(QcorrError):
    """Internal cross-check failed beyond numerical tolerance (bug signal)."""

"""Exception hierarchy for chi2lab.

Bad arguments (wrong types, empty schedules, invalid enum values) raise
plain ValueError; everything below signals a domain or numerical failure.
"""


class Chi2LabError(Exception):
    """Base class for domain and numerical failures."""


class MatrixFormatError(Chi2LabError):
    """Malformed matrix JSON (wrong length, bad dim, non-finite entries)."""


class DimensionMismatch(Chi2LabError):
    """Operands live on Hilbert spaces of different dimension."""


class NotHermitian(Chi2LabError):
    """Input violates the Hermitian invariant beyond tolerance."""


class NotPositiveSemidefinite(Chi2LabError):
    """Eigenvalue below the PSD tolerance floor."""


class NotPositiveDefinite(Chi2LabError):
    """Smallest eigenvalue does not clear the PD threshold."""


class NotDensity(Chi2LabError):
    """Trace differs from one beyond tolerance."""


class SingularOperator(Chi2LabError):
    """Negative power requested on a singular operator without pseudo mode."""


class SolverFailure(Chi2LabError):
    """Eigensolver did not converge within its sweep cap."""


class ReconstructionError(Chi2LabError):
    """A reconstruction stage (peeling, rounding) could not complete."""


class IllConditionedProbe(Chi2LabError):
    """Probe responses do not fit the expected basis within tolerance."""


class InconsistentOracle(Chi2LabError):
    """Oracle answers are incompatible with any positive operator."""


class NotASymmetry(Chi2LabError):
    """Projection map violates transition probabilities on the probe set."""


class InconsistentSymmetry(Chi2LabError):
    """Projection map matches neither a unitary nor an antiunitary action."""

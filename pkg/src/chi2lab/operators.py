"""Typed operator hierarchy on a finite-dimensional complex Hilbert space.

``ComplexMatrix`` wraps a validated square array; ``HermitianMatrix``
symmetrizes on construction; ``PsdOperator`` clamps negligible negative
eigenvalues to zero; ``PdOperator`` additionally requires a spectral gap
above zero; ``DensityOperator`` fixes the trace to one.  All instances
are immutable and cache their clustered eigendecomposition, so repeated
spectral queries against the same operator cost one factorization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    DimensionMismatch,
    NotDensity,
    NotHermitian,
    NotPositiveDefinite,
    NotPositiveSemidefinite,
)
from .linalg import (
    SpectralDecomposition,
    hermitian_part,
    hs_norm,
    op_norm,
    spectral_decomposition,
)

__all__ = [
    "ComplexMatrix",
    "HermitianMatrix",
    "PsdOperator",
    "PdOperator",
    "DensityOperator",
    "NonsingularDensity",
    "RankOneProjection",
    "eigh",
    "frac_power",
    "support_projection",
    "support_contained",
    "norms",
    "projection_family",
]


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.complex128)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """A d x d complex matrix with finite entries."""

    mat: np.ndarray
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise ValueError("matrix entries must be finite")
        object.__setattr__(self, "mat", _freeze(m))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.mat).real)


class HermitianMatrix(ComplexMatrix):
    """Selfadjoint matrix; construction symmetrizes via (M + M*) / 2."""

    def __post_init__(self):
        super().__post_init__()
        m = self.mat
        sym = hermitian_part(m)
        asym = float(np.max(np.abs(m - sym))) if m.size else 0.0
        scale = max(1.0, hs_norm(sym))
        if asym > self.tol.hermitian * scale:
            raise NotHermitian(
                f"asymmetry {asym:.3e} exceeds {self.tol.hermitian:.1e} * scale"
            )
        object.__setattr__(self, "mat", _freeze(sym))

    def spectrum(self) -> SpectralDecomposition:
        """Clustered eigendecomposition, computed once and cached."""
        cached = self.__dict__.get("_spectrum")
        if cached is None:
            cached = spectral_decomposition(self.mat, self.tol)
            self.__dict__["_spectrum"] = cached
        return cached


class PsdOperator(HermitianMatrix):
    """Positive semidefinite operator; tiny negative eigenvalues clamp to 0."""

    def __post_init__(self):
        super().__post_init__()
        spec = spectral_decomposition(self.mat, self.tol)
        lmax = max(spec.lmax, 0.0)
        floor = -self.tol.psd * max(1.0, lmax)
        if spec.lmin < floor:
            raise NotPositiveSemidefinite(
                f"eigenvalue {spec.lmin:.3e} below PSD floor {floor:.3e}"
            )
        if spec.lmin < 0.0:
            clamped = tuple(max(lam, 0.0) for lam in spec.eigenvalues)
            spec = SpectralDecomposition(
                clamped, spec.projections, spec.multiplicities
            )
            object.__setattr__(self, "mat", _freeze(spec.reassemble()))
        self.__dict__["_spectrum"] = spec


class PdOperator(PsdOperator):
    """Positive definite (invertible positive) operator."""

    def __post_init__(self):
        super().__post_init__()
        spec = self.spectrum()
        if not spec.is_positive_definite(self.tol.pd):
            raise NotPositiveDefinite(
                f"lmin {spec.lmin:.3e} does not clear "
                f"{self.tol.pd:.1e} * lmax {spec.lmax:.3e}"
            )


class DensityOperator(PsdOperator):
    """Unit-trace positive semidefinite operator (a quantum state)."""

    def __post_init__(self):
        super().__post_init__()
        tr = self.trace()
        if abs(tr - 1.0) > self.tol.trace_one:
            raise NotDensity(f"trace {tr!r} is not 1 within {self.tol.trace_one}")


class NonsingularDensity(DensityOperator, PdOperator):
    """Invertible density operator."""


@dataclass(frozen=True, eq=False)
class RankOneProjection:
    """Rank-one projection v v* for a unit vector v."""

    vector: np.ndarray
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=np.complex128).reshape(-1)
        if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            raise ValueError("vector entries must be finite")
        n = float(np.linalg.norm(v))
        if n < 1e-12:
            raise ValueError("cannot project along a (near) zero vector")
        v = v / n
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        cached = self.__dict__.get("_matrix")
        if cached is None:
            cached = _freeze(np.outer(self.vector, self.vector.conj()))
            self.__dict__["_matrix"] = cached
        return cached

    def overlap(self, other: "RankOneProjection") -> float:
        """Transition probability tr(P Q) = |<v, w>|^2."""
        amp = np.vdot(self.vector, other.vector)
        return float(abs(amp) ** 2)


def _unchecked(cls, mat: np.ndarray, *, tol: Tolerances = DEFAULT_TOL,
               spectrum: SpectralDecomposition | None = None):
    """Wrap an array in an operator type without running invariant checks.

    Internal fast path for values that are positive (semi)definite by
    construction; callers are responsible for the invariant.
    """
    obj = object.__new__(cls)
    object.__setattr__(obj, "mat", _freeze(mat))
    object.__setattr__(obj, "tol", tol)
    if spectrum is not None:
        obj.__dict__["_spectrum"] = spectrum
    return obj


def eigh(m: HermitianMatrix) -> SpectralDecomposition:
    """Clustered eigendecomposition of a Hermitian operator."""
    return m.spectrum()


def frac_power(a: PsdOperator, p: float, *, pseudo: bool = False) -> HermitianMatrix:
    """Spectral power A^p with kernel directions mapped to zero.

    For p < 0 the operator must be positive definite unless ``pseudo``
    requests the support-restricted pseudo-power.
    """
    if not -1.0 <= p <= 1.0:
        raise ValueError(f"power {p} outside [-1, 1]")
    out = a.spectrum().power(p, pseudo=pseudo, support_rel=a.tol.support)
    return HermitianMatrix(out, a.tol)


def support_projection(a: PsdOperator) -> np.ndarray:
    """Orthogonal projection onto the range of a PSD operator."""
    return a.spectrum().support(a.tol.support)


def support_contained(a: PsdOperator, b: PsdOperator) -> bool:
    """Whether supp A lies inside supp B.

    True iff the compression of A onto the kernel of B vanishes within
    ``tol.support * max(1, ||A||_op)``.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"dim {a.dim} vs {b.dim}")
    comp = np.eye(a.dim) - support_projection(b)
    leak = op_norm(comp @ a.mat @ comp)
    return leak <= a.tol.support * max(1.0, a.spectrum().lmax)


def norms(m: ComplexMatrix | np.ndarray) -> tuple[float, float]:
    """Return (Hilbert-Schmidt norm, operator norm)."""
    arr = m.mat if isinstance(m, ComplexMatrix) else np.asarray(m, dtype=np.complex128)
    return hs_norm(arr), op_norm(arr)


def projection_family(d: int, tol: Tolerances = DEFAULT_TOL) -> tuple[RankOneProjection, ...]:
    """The standard tomographically complete family of d^2 projections.

    Order: the d basis projections P_{e_i}; then P_{(e_i + e_j)/sqrt2}
    and P_{(e_i + i e_j)/sqrt2} for each pair i < j.  Overlaps with this
    family determine any Hermitian matrix.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    eye = np.eye(d, dtype=np.complex128)
    probes = [RankOneProjection(eye[:, i], tol) for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            probes.append(RankOneProjection(eye[:, i] + eye[:, j], tol))
            probes.append(RankOneProjection(eye[:, i] + 1j * eye[:, j], tol))
    return tuple(probes)


def hermitian_from_overlaps(values: np.ndarray, d: int,
                            tol: Tolerances = DEFAULT_TOL) -> HermitianMatrix:
    """Solve tr(X P) = values over ``projection_family(d)`` for Hermitian X.

    The family makes the system triangular: diagonal entries come from
    the basis projections, real and imaginary parts of X_ij from the
    two superposition probes of the pair (i, j).
    """
    vals = np.asarray(values, dtype=float)
    if vals.shape != (d * d,):
        raise ValueError(f"expected {d * d} overlaps, got {vals.shape}")
    x = np.zeros((d, d), dtype=np.complex128)
    for i in range(d):
        x[i, i] = vals[i]
    k = d
    for i in range(d):
        for j in range(i + 1, d):
            mean = (vals[i] + vals[j]) / 2.0
            re = vals[k] - mean
            im = mean - vals[k + 1]
            k += 2
            x[i, j] = re + 1j * im
            x[j, i] = re - 1j * im
    return HermitianMatrix(x, tol)

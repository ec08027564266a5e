"""The chi-squared divergence of order alpha on positive operators.

For positive definite B the divergence of A against B is

    tr B^(-alpha) (A - B) B^(alpha - 1) (A - B),

evaluated here in its Gram form as the squared Hilbert-Schmidt norm of
B^((alpha-1)/2) (A - B) B^(-alpha/2), which keeps the result
nonnegative bit for bit.  For singular B the value is the limit of the
divergence against B + eps*I: finite (computed over the support of B
with pseudo-powers) exactly when supp A lies inside supp B, infinite
otherwise.  Infinity is a tagged value, never a floating-point inf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Tolerances
from .errors import DimensionMismatch, NotPositiveDefinite
from .linalg import SpectralDecomposition
from .operators import PdOperator, PsdOperator, RankOneProjection, support_contained

__all__ = [
    "Alpha",
    "DivergenceValue",
    "chi2",
    "quadratic_relative_entropy",
    "chi2_extended",
    "chi2_limit_probe",
    "chi2_shifted",
]

#: finite divergence payloads may round as low as -EPS_DIV before we reject
EPS_DIV = 1e-10


class Alpha(float):
    """Order parameter of the divergence family, a real in [0, 1]."""

    def __new__(cls, value):
        v = float(value)
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {v}")
        return super().__new__(cls, v)


@dataclass(frozen=True)
class DivergenceValue:
    """Extended-real divergence: a nonnegative float or the tagged infinity."""

    _amount: float | None

    @classmethod
    def finite(cls, amount: float) -> "DivergenceValue":
        amount = float(amount)
        if amount < -EPS_DIV:
            raise ValueError(f"divergence {amount} below the clamping floor")
        return cls(max(amount, 0.0))

    @classmethod
    def infinite(cls) -> "DivergenceValue":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self._amount is not None

    @property
    def is_infinite(self) -> bool:
        return self._amount is None

    @property
    def value(self) -> float:
        if self._amount is None:
            raise ValueError("infinite divergence has no finite value")
        return self._amount

    def __str__(self) -> str:
        return "inf" if self._amount is None else repr(self._amount)


def _require_same_dim(a, b):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dim {a.dim} vs {b.dim}")


def _require_pd(spec: SpectralDecomposition, tol: Tolerances):
    if not spec.is_positive_definite(tol.pd):
        raise NotPositiveDefinite(
            f"second argument is not positive definite "
            f"(lmin {spec.lmin:.3e}, lmax {spec.lmax:.3e})"
        )


def _gram_value(diff: np.ndarray, spec: SpectralDecomposition, alpha: float,
                support_rel: float, pseudo: bool) -> float:
    left = spec.power((alpha - 1.0) / 2.0, pseudo=pseudo, support_rel=support_rel)
    right = spec.power(-alpha / 2.0, pseudo=pseudo, support_rel=support_rel)
    t = left @ diff @ right
    return float(np.vdot(t, t).real)


def chi2(a: PsdOperator, b: PsdOperator, alpha: float) -> float:
    """Divergence of A against positive definite B; always >= 0."""
    alpha = Alpha(alpha)
    _require_same_dim(a, b)
    spec = b.spectrum()
    _require_pd(spec, b.tol)
    return _gram_value(a.mat - b.mat, spec, alpha, b.tol.support, pseudo=False)


def quadratic_relative_entropy(a: PsdOperator, b: PsdOperator) -> float:
    """The alpha = 0 member of the family, tr (A - B) B^(-1) (A - B)."""
    return chi2(a, b, 0.0)


def chi2_extended(a: PsdOperator, b: PsdOperator, alpha: float) -> DivergenceValue:
    """Extended divergence allowing singular B.

    Infinite exactly when supp A is not contained in supp B; otherwise
    the trace is taken over supp B via pseudo-powers.
    """
    alpha = Alpha(alpha)
    _require_same_dim(a, b)
    if not support_contained(a, b):
        return DivergenceValue.infinite()
    val = _gram_value(a.mat - b.mat, b.spectrum(), alpha, b.tol.support, pseudo=True)
    return DivergenceValue.finite(val)


def chi2_limit_probe(
    a: PsdOperator,
    b: PsdOperator,
    alpha: float,
    eps_schedule,
) -> list[float]:
    """Divergences against B + eps*I along a decreasing epsilon schedule.

    When supp A lies inside supp B the tail approaches the extended
    divergence; otherwise the values grow without bound as eps shrinks.
    """
    alpha = Alpha(alpha)
    _require_same_dim(a, b)
    eps = [float(e) for e in eps_schedule]
    if not eps:
        raise ValueError("epsilon schedule must be non-empty")
    if any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
        raise ValueError("epsilon schedule must be strictly decreasing")
    if eps[-1] < 1e-8:
        raise ValueError("epsilon schedule must stay at or above 1e-8")
    spec = b.spectrum()
    diff0 = a.mat - b.mat
    eye = np.eye(a.dim)
    out = []
    for e in eps:
        shifted = spec.shift(e)
        out.append(
            _gram_value(diff0 - e * eye, shifted, alpha, 0.0, pseudo=False)
        )
    return out


def chi2_shifted(r: RankOneProjection, d: PdOperator, alpha: float) -> float:
    """Shifted rank-one query tr(R D^-alpha) * tr(R D^(alpha-1)).

    For unit-trace D this equals chi2(R, D, alpha) + 1.  It is monotone
    in how the projection loads the eigenspaces of D, which makes it the
    extremal-query objective for spectral reconstruction.  Costs one
    (cached) eigendecomposition of D plus O(d^2) per call.
    """
    alpha = Alpha(alpha)
    if r.dim != d.dim:
        raise DimensionMismatch(f"dim {r.dim} vs {d.dim}")
    spec = d.spectrum()
    _require_pd(spec, d.tol)
    v = r.vector
    s_neg = 0.0
    s_one = 0.0
    for lam, proj in zip(spec.eigenvalues, spec.projections):
        w = float(np.vdot(v, proj @ v).real)
        w = max(w, 0.0)
        s_neg += w * lam ** (-alpha)
        s_one += w * lam ** (alpha - 1.0)
    return s_neg * s_one

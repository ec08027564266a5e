"""Recovery of a hidden positive operator from divergence queries.

The hidden operator A is only accessible through values of the
divergence against probe states

    C = t P + (1 - t)/(d - 1) (I - P),      t in (0, 1),

for rank-one projections P.  As a function of t each response is a
linear combination of the basis {1, 1/t, 1/(1-t),
t^-a (1-t)^(a-1), (1-t)^-a t^(a-1)}; the coefficient of 1/t isolates
the quadratic overlap tr(P A P A), and running P over a complete family
of d^2 projections pins A down.

At the endpoint orders a = 0, 1 the two power functions collapse onto
1/t and 1/(1-t), and the 1/t coefficient becomes tr(A^2 P) instead of
(tr A P)^2; recovery then goes through A^2 and a positive square root.
At a = 1/2 the two power functions coincide and the duplicate column is
dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .divergence import Alpha
from .errors import IllConditionedProbe, InconsistentOracle
from .linalg import SpectralDecomposition, hermitian_part
from .operators import (
    NonsingularDensity,
    PsdOperator,
    RankOneProjection,
    _unchecked,
    frac_power,
    hermitian_from_overlaps,
    projection_family,
)
from .oracle import DivergenceOracle

__all__ = ["ProbeSchedule", "probe_state", "quadratic_form_tomography"]

_ENDPOINT_EPS = 1e-9
_HALF_EPS = 1e-9


@dataclass(frozen=True)
class ProbeSchedule:
    """Interior probe weights t; all distinct, strictly inside (0, 1)."""

    t_values: tuple[float, ...] = (0.15, 0.3, 0.45, 0.6, 0.75, 0.9)

    def __post_init__(self):
        ts = tuple(float(t) for t in self.t_values)
        if not ts:
            raise ValueError("schedule must be non-empty")
        if any(not 0.0 < t < 1.0 for t in ts):
            raise ValueError("probe weights must lie strictly inside (0, 1)")
        if len(set(ts)) != len(ts):
            raise ValueError("probe weights must be pairwise distinct")
        object.__setattr__(self, "t_values", ts)

    def __len__(self) -> int:
        return len(self.t_values)


def probe_state(p: RankOneProjection, t: float, d: int,
                tol: Tolerances = DEFAULT_TOL) -> NonsingularDensity:
    """The nonsingular density t P + (1-t)/(d-1) (I - P).

    Its spectrum is known analytically, so the state is assembled with a
    primed decomposition and each divergence query against it costs no
    eigensolve.
    """
    if not 0.0 < t < 1.0:
        raise ValueError("probe weight must lie in (0, 1)")
    s = (1.0 - t) / (d - 1)
    pm = p.matrix
    qm = np.eye(d) - pm
    mat = t * pm + s * qm
    if abs(t - s) <= tol.cluster * max(1.0, t, s):
        spec = SpectralDecomposition((t,), (hermitian_part(np.eye(d, dtype=complex)),), (d,))
    elif t > s:
        spec = SpectralDecomposition((t, s), (pm, hermitian_part(qm)), (1, d - 1))
    else:
        spec = SpectralDecomposition((s, t), (hermitian_part(qm), pm), (d - 1, 1))
    return _unchecked(NonsingularDensity, mat, tol=tol, spectrum=spec)


def _basis_matrix(alpha: float, ts: np.ndarray) -> np.ndarray:
    """Columns: [1, 1/t, 1/(1-t), (power functions)] with degenerates dropped."""
    cols = [np.ones_like(ts), 1.0 / ts, 1.0 / (1.0 - ts)]
    if alpha <= _ENDPOINT_EPS or alpha >= 1.0 - _ENDPOINT_EPS:
        pass  # both power functions collapse onto 1/t and 1/(1-t)
    elif abs(alpha - 0.5) < _HALF_EPS:
        cols.append(ts ** (-alpha) * (1.0 - ts) ** (alpha - 1.0))
    else:
        cols.append(ts ** (-alpha) * (1.0 - ts) ** (alpha - 1.0))
        cols.append((1.0 - ts) ** (-alpha) * ts ** (alpha - 1.0))
    return np.vstack(cols).T


def quadratic_form_tomography(
    oracle: DivergenceOracle,
    d: int,
    alpha: float,
    schedule: ProbeSchedule | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> PsdOperator:
    """Reconstruct the hidden positive operator behind a divergence oracle.

    The oracle must answer query(C) with the divergence of the hidden
    operator against the probe state C.  Uses exactly
    ``d^2 * len(schedule)`` queries.
    """
    alpha = Alpha(alpha)
    schedule = schedule or ProbeSchedule()
    ts = np.asarray(schedule.t_values)
    basis = _basis_matrix(alpha, ts)
    if len(schedule) < basis.shape[1]:
        raise ValueError(
            f"schedule has {len(schedule)} probes but the fit needs "
            f"{basis.shape[1]} basis functions"
        )
    endpoint = alpha <= _ENDPOINT_EPS or alpha >= 1.0 - _ENDPOINT_EPS
    probes = projection_family(d, tol)
    overlaps = np.empty(d * d)
    for idx, p in enumerate(probes):
        responses = np.array(
            [oracle.query(probe_state(p, t, d, tol)) for t in schedule.t_values]
        )
        coeffs, *_ = np.linalg.lstsq(basis, responses, rcond=None)
        residual = float(np.max(np.abs(basis @ coeffs - responses)))
        scale = max(1.0, float(np.max(np.abs(responses))))
        if residual > 1e-6 * scale:
            raise IllConditionedProbe(
                f"probe {idx}: fit residual {residual:.3e} exceeds 1e-6 * {scale:.3e}"
            )
        c1 = float(coeffs[1])
        if c1 < -1e-8 * scale:
            raise InconsistentOracle(
                f"probe {idx}: negative 1/t coefficient {c1:.3e}"
            )
        c1 = max(c1, 0.0)
        overlaps[idx] = c1 if endpoint else np.sqrt(c1)
    recovered = hermitian_from_overlaps(overlaps, d, tol)
    if endpoint:
        # overlaps gave tr(A^2 P): take the positive square root of A^2
        square = PsdOperator(recovered.mat, tol)
        return PsdOperator(frac_power(square, 0.5).mat, tol)
    return PsdOperator(recovered.mat, tol)

"""End-to-end decompiler for divergence-preserving maps on the PD cone.

Given black-box access to a bijective map phi that preserves the
chi-squared divergence of some order, every stage of the structure
argument is run numerically:

  1. trace preservation on random samples;
  2. per scale lambda, restriction to states via phi(lambda A) / lambda;
  3. location of the images of rank-one projections by evaluating the
     restricted map on slightly mixed states and rounding to the top
     eigenprojection (with a half-epsilon stability recheck);
  4. orthogonality and transition-probability checks;
  5. synthesis of the implementing (anti)unitary per scale;
  6. cross-scale consistency of the synthesized operators up to phase;
  7. verification of phi(A) = U A U* (or the antiunitary variant) on
     fresh samples.

Violations do not abort the pipeline: each failed stage is recorded so
the report localizes which preserver property broke.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .divergence import Alpha
from .ensembles import random_pd
from .errors import Chi2LabError
from .linalg import jacobi_eigh, op_norm
from .matio import matrix_to_obj
from .operators import PdOperator, RankOneProjection, _unchecked
from .wigner import (
    UNITARY,
    ConjugationMap,
    ProjectionMap,
    check_orthogonality_preservation,
    check_transition_probabilities,
    wigner_synthesize,
)

__all__ = ["DecompileConfig", "DecompileReport", "preserver_decompile"]


@dataclass(frozen=True)
class DecompileConfig:
    scales: tuple[float, ...] = (0.5, 1.0, 2.0)
    #: mixing weight for rounding extremal states away from the boundary
    epsilon: float = 1e-4
    trace_samples: int = 8
    check_samples: int = 10
    verify_samples: int = 8
    seed: int = 0
    trace_tol: float = 1e-8
    rounding_tol: float = 1e-6
    orthogonality_tol: float = 1e-8
    transition_tol: float = 1e-8
    scale_tol: float = 1e-5
    verify_tol: float = 1e-6


@dataclass(frozen=True, eq=False)
class DecompileReport:
    recovered: ConjugationMap
    trace_preservation_residual: float
    orthogonality_pass: bool
    orthogonality_residual: float
    transition_residual: float
    scale_consistency_residual: float
    verification_residual: float
    query_count: int
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_obj(self) -> dict:
        return {
            "kind": self.recovered.kind,
            "u": matrix_to_obj(self.recovered.u),
            "trace_preservation_residual": self.trace_preservation_residual,
            "orthogonality_pass": self.orthogonality_pass,
            "orthogonality_residual": self.orthogonality_residual,
            "transition_residual": self.transition_residual,
            "scale_consistency_residual": self.scale_consistency_residual,
            "verification_residual": self.verification_residual,
            "query_count": self.query_count,
            "failures": list(self.failures),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_obj(), indent=indent)


class _CountingMap:
    def __init__(self, phi):
        self._phi = phi
        self.count = 0

    def __call__(self, a: PdOperator) -> PdOperator:
        self.count += 1
        return self._phi(a)


def _phase_aligned_distance(u1: np.ndarray, u2: np.ndarray) -> float:
    """min over unimodular c of ||u1 u2* - c I||_op."""
    m = u1 @ u2.conj().T
    tr = np.trace(m)
    if abs(tr) < 1e-12:
        return float(op_norm(m - np.eye(m.shape[0])))
    c = tr / abs(tr)
    return float(op_norm(m - c * np.eye(m.shape[0])))


def preserver_decompile(
    phi,
    d: int,
    alpha: float,
    cfg: DecompileConfig | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> DecompileReport:
    """Recover the conjugation implementing a divergence-preserving map.

    ``phi`` is a callable PdOperator -> PdOperator, assumed (not
    verified globally) to be a bijective preserver; violations surface
    as stage-labeled failures in the report.
    """
    Alpha(alpha)
    cfg = cfg or DecompileConfig()
    phi = _CountingMap(phi)
    rng = np.random.default_rng(cfg.seed)
    failures: list[str] = []
    eye = np.eye(d, dtype=np.complex128)

    # stage 1: trace preservation
    trace_residual = 0.0
    for _ in range(cfg.trace_samples):
        sample = random_pd(d, rng, scale=float(rng.uniform(0.5, 1.5)), tol=tol)
        diff = abs(phi(sample).trace() - sample.trace())
        trace_residual = max(trace_residual, diff)
        if diff > cfg.trace_tol * max(1.0, sample.trace()):
            if "trace" not in failures:
                failures.append("trace")

    # stages 2-3: scale restrictions and extremal-image maps
    rounding_flagged = False

    def restricted_projection_map(lam: float) -> ProjectionMap:
        def image(p: RankOneProjection) -> RankOneProjection:
            nonlocal rounding_flagged
            tops = []
            for eps in (cfg.epsilon, cfg.epsilon / 2.0):
                mixed = (1.0 - eps) * p.matrix + (eps / d) * eye
                out = phi(_unchecked(PdOperator, lam * mixed, tol=tol)).mat / lam
                w, v = jacobi_eigh((out + out.conj().T) / 2.0)
                tops.append(v[:, 0])
            stability = 1.0 - abs(np.vdot(tops[0], tops[1])) ** 2
            if stability > cfg.rounding_tol and not rounding_flagged:
                rounding_flagged = True
                failures.append("projection-rounding")
            return RankOneProjection(tops[1], tol)

        return ProjectionMap(image)

    # stage 4: orthogonality and transition checks per scale
    orth_residual = 0.0
    trans_residual = 0.0
    maps = {lam: restricted_projection_map(lam) for lam in cfg.scales}
    for lam, xi in maps.items():
        _, worst_orth = check_orthogonality_preservation(
            xi, d, samples=cfg.check_samples, seed=cfg.seed + 1
        )
        _, worst_trans = check_transition_probabilities(
            xi, d, samples=cfg.check_samples, seed=cfg.seed + 2
        )
        orth_residual = max(orth_residual, worst_orth)
        trans_residual = max(trans_residual, worst_trans)
    orthogonality_pass = orth_residual <= cfg.orthogonality_tol
    if not orthogonality_pass:
        failures.append("orthogonality")
    if trans_residual > cfg.transition_tol:
        failures.append("transition")

    # stage 5: Wigner synthesis per scale
    synthesized: dict[float, ConjugationMap] = {}
    for lam, xi in maps.items():
        try:
            synthesized[lam] = wigner_synthesize(xi, d, tol)
        except Chi2LabError:
            failures.append(f"wigner(scale={lam:g})")

    # stage 6: cross-scale consistency up to a unimodular factor
    scale_residual = 0.0
    lams = sorted(synthesized)
    for i in range(len(lams)):
        for j in range(i + 1, len(lams)):
            a, b = synthesized[lams[i]], synthesized[lams[j]]
            if a.kind != b.kind:
                failures.append("kind-mismatch")
                continue
            scale_residual = max(scale_residual, _phase_aligned_distance(a.u, b.u))
    if scale_residual > cfg.scale_tol:
        failures.append("scale-consistency")

    # stage 7: final verification on fresh samples
    if synthesized:
        preferred = 1.0 if 1.0 in synthesized else lams[0]
        recovered = synthesized[preferred].normalize_phase()
    else:
        failures.append("synthesis")
        recovered = ConjugationMap(np.eye(d), UNITARY, tol)
    verify_residual = 0.0
    for _ in range(cfg.verify_samples):
        sample = random_pd(d, rng, scale=float(rng.uniform(0.5, 1.5)), tol=tol)
        drift = op_norm(phi(sample).mat - recovered.apply(sample.mat))
        verify_residual = max(verify_residual, drift)
    if verify_residual > cfg.verify_tol:
        failures.append("verification")

    return DecompileReport(
        recovered=recovered,
        trace_preservation_residual=trace_residual,
        orthogonality_pass=orthogonality_pass,
        orthogonality_residual=orth_residual,
        transition_residual=trans_residual,
        scale_consistency_residual=scale_residual,
        verification_residual=verify_residual,
        query_count=phi.count,
        failures=tuple(failures),
    )

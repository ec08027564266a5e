"""Constrained minimization used by reconstruction and verification.

Objectives arrive as black-box oracles, so every solver here uses
central finite-difference gradients (the decompiler cannot assume an
analytic form).  Searches are multi-start with deterministic seeding;
failure to converge is reported through a flag, never an exception, and
the best value found is still returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .operators import (
    DensityOperator,
    PdOperator,
    RankOneProjection,
    _unchecked,
)
from .linalg import jacobi_eigh

__all__ = [
    "SphereOptConfig",
    "ConeOptConfig",
    "SphereOptResult",
    "ConeOptResult",
    "StateOptResult",
    "minimize_over_rank_one",
    "maximize_over_rank_one",
    "infimum_over_pd",
    "maximize_over_states",
]


@dataclass(frozen=True)
class SphereOptConfig:
    restarts: int = 32
    max_iters: int = 500
    step_tol: float = 1e-12
    value_tol: float = 1e-10
    #: optional projection matrix restricting the search to a subspace
    subspace: np.ndarray | None = None
    seed: int = 0
    fd_step: float = 1e-6

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.step_tol <= 0 or self.value_tol <= 0 or self.fd_step <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class ConeOptConfig:
    #: smallest eigenvalue allowed during the search
    boundary_floor: float = 1e-8
    max_iters: int = 400
    restarts: int = 8
    value_tol: float = 1e-10
    seed: int = 0
    fd_step: float = 1e-6

    def __post_init__(self):
        if self.boundary_floor <= 0:
            raise ValueError("boundary_floor must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass(frozen=True, eq=False)
class SphereOptResult:
    argopt: RankOneProjection
    value: float
    converged: bool


@dataclass(frozen=True, eq=False)
class ConeOptResult:
    value: float
    argmin: PdOperator
    #: True when the best point hugs the eigenvalue floor, i.e. the
    #: infimum is approached at the cone boundary rather than attained
    boundary: bool
    converged: bool


@dataclass(frozen=True, eq=False)
class StateOptResult:
    state: DensityOperator
    value: float
    converged: bool


def _fd_grad(fun, x: np.ndarray, h: float) -> np.ndarray:
    g = np.empty(x.size)
    for i in range(x.size):
        old = x[i]
        x[i] = old + h
        fp = fun(x)
        x[i] = old - h
        fm = fun(x)
        x[i] = old
        g[i] = (fp - fm) / (2.0 * h)
    return g


def _descend_on_sphere(fun, x0: np.ndarray, max_iters: int, step_tol: float,
                       value_tol: float, h: float) -> tuple[float, np.ndarray, bool]:
    """Projected gradient descent on the unit sphere of R^n.

    Steps use the two-point (Barzilai-Borwein) size with a monotone
    backtracking safeguard; without it, nearly degenerate spectra make
    plain gradient descent crawl.
    """
    x = x0 / np.linalg.norm(x0)
    f = fun(x)
    prev_x = prev_grad = None
    eta = 0.25
    converged = False
    stall = 0
    for _ in range(max_iters):
        grad = _fd_grad(fun, x, h)
        grad -= np.dot(grad, x) * x
        gnorm = float(np.linalg.norm(grad))
        if gnorm == 0.0:
            converged = True
            break
        if prev_grad is not None:
            s = x - prev_x
            y = grad - prev_grad
            sy = float(np.dot(s, y))
            yy = float(np.dot(y, y))
            if sy > 0.0 and yy > 0.0:
                eta = sy / yy
        # keep the trial displacement under one radian on the sphere
        eta = min(eta, 0.8 / gnorm)
        improved = False
        while eta * gnorm > 0.25 * step_tol:
            cand = x - eta * grad
            cand /= np.linalg.norm(cand)
            fc = fun(cand)
            if fc < f:
                improved = True
                break
            eta /= 2.0
        if not improved:
            converged = True
            break
        prev_x, prev_grad = x, grad
        moved = float(np.linalg.norm(cand - x))
        gain = f - fc
        x, f = cand, fc
        eta = min(eta * 2.0, 1e6)
        if moved <= step_tol:
            converged = True
            break
        if gain <= value_tol:
            stall += 1
            if stall >= 2:
                converged = True
                break
        else:
            stall = 0
    return f, x, converged


def _descend_free(fun, x0: np.ndarray, max_iters: int, value_tol: float,
                  h: float) -> tuple[float, np.ndarray, bool]:
    """Unconstrained gradient descent with a two-point adaptive step."""
    x = x0.copy()
    f = fun(x)
    prev_x = prev_grad = None
    converged = False
    eta = 0.25
    stall = 0
    for _ in range(max_iters):
        grad = _fd_grad(fun, x, h)
        gnorm = float(np.linalg.norm(grad))
        if gnorm == 0.0:
            converged = True
            break
        if prev_grad is not None:
            s = x - prev_x
            y = grad - prev_grad
            sy = float(np.dot(s, y))
            yy = float(np.dot(y, y))
            if sy > 0.0 and yy > 0.0:
                eta = sy / yy
        improved = False
        while eta * gnorm > 1e-14:
            cand = x - eta * grad
            fc = fun(cand)
            if fc < f:
                improved = True
                break
            eta /= 2.0
        if not improved:
            converged = True
            break
        prev_x, prev_grad = x, grad
        gain = f - fc
        x, f = cand, fc
        # quartic landscapes flatten toward the minimum; let the step grow
        eta = min(eta * 2.0, 1e9)
        if gain <= value_tol:
            stall += 1
            if stall >= 2:
                converged = True
                break
        else:
            stall = 0
    return f, x, converged


def _complex_of(x: np.ndarray) -> np.ndarray:
    k = x.size // 2
    return x[:k] + 1j * x[k:]


def _subspace_basis(d: int, subspace: np.ndarray | None) -> np.ndarray:
    if subspace is None:
        return np.eye(d, dtype=np.complex128)
    s = np.asarray(subspace, dtype=np.complex128)
    if s.shape != (d, d):
        raise ValueError(f"subspace projection must be {d}x{d}")
    w, v = jacobi_eigh((s + s.conj().T) / 2.0)
    k = int(np.sum(w > 0.5))
    if k == 0:
        raise ValueError("subspace projection has trivial range")
    return v[:, :k]


def _sphere_starts(k: int, restarts: int, rng: np.random.Generator):
    starts = []
    for i in range(min(k, restarts)):
        x = np.zeros(2 * k)
        x[i] = 1.0
        starts.append(x)
    while len(starts) < restarts:
        starts.append(rng.standard_normal(2 * k))
    return starts


def _optimize_rank_one(g, d: int, cfg: SphereOptConfig, sign: float) -> SphereOptResult:
    basis = _subspace_basis(d, cfg.subspace)
    k = basis.shape[1]
    tol = DEFAULT_TOL

    def fun(x: np.ndarray) -> float:
        v = basis @ _complex_of(x)
        return sign * float(g(RankOneProjection(v, tol)))

    rng = np.random.default_rng(cfg.seed)
    best: tuple[float, np.ndarray] | None = None
    any_converged = False
    for x0 in _sphere_starts(k, cfg.restarts, rng):
        f, x, conv = _descend_on_sphere(
            fun, x0, cfg.max_iters, cfg.step_tol, cfg.value_tol, cfg.fd_step
        )
        any_converged = any_converged or conv
        if best is None or f < best[0]:
            best = (f, x)
    f, x = best
    proj = RankOneProjection(basis @ _complex_of(x), tol)
    return SphereOptResult(proj, sign * f, any_converged)


def minimize_over_rank_one(g, d: int, cfg: SphereOptConfig | None = None) -> SphereOptResult:
    """Minimize a rank-one-projection objective over the (sub)sphere.

    Multi-start projected gradient with stratified starts (canonical
    basis directions first, then seeded random ones).  When
    ``cfg.subspace`` is a projection matrix, all iterates stay exactly
    in its range.
    """
    return _optimize_rank_one(g, d, cfg or SphereOptConfig(), 1.0)


def maximize_over_rank_one(g, d: int, cfg: SphereOptConfig | None = None) -> SphereOptResult:
    """Maximize a rank-one-projection objective (minimize its negation)."""
    return _optimize_rank_one(g, d, cfg or SphereOptConfig(), -1.0)


def infimum_over_pd(g, d: int, cfg: ConeOptConfig | None = None) -> ConeOptResult:
    """Estimate the infimum of g over positive definite operators.

    The search runs over X = G G* + floor * I, so boundary infima are
    approached within the floor; the result flags when the minimizer
    hugs the floor (the infimum is then open, not attained).
    """
    cfg = cfg or ConeOptConfig()
    tol = DEFAULT_TOL
    floor = cfg.boundary_floor
    eye = np.eye(d)

    def assemble(x: np.ndarray) -> np.ndarray:
        gm = _complex_of(x).reshape(d, d)
        return gm @ gm.conj().T + floor * eye

    def fun(x: np.ndarray) -> float:
        return float(g(_unchecked(PdOperator, assemble(x), tol=tol)))

    rng = np.random.default_rng(cfg.seed)
    starts = [np.concatenate([np.eye(d).reshape(-1), np.zeros(d * d)])]
    while len(starts) < cfg.restarts:
        starts.append(0.7 * rng.standard_normal(2 * d * d))
    best = None
    any_converged = False
    for x0 in starts:
        f, x, conv = _descend_free(fun, x0, cfg.max_iters, cfg.value_tol, cfg.fd_step)
        any_converged = any_converged or conv
        if best is None or f < best[0]:
            best = (f, x)
    f, x = best
    xmat = assemble(x)
    w, _ = jacobi_eigh(xmat)
    # an eigenvalue within 1e-5 of zero (on the unit scale) means the
    # infimum is being approached at the cone boundary, not attained
    boundary = bool(w[-1] <= max(10.0 * floor, 1e-5 * max(1.0, w[0])))
    return ConeOptResult(f, _unchecked(PdOperator, xmat, tol=tol), boundary, any_converged)


def maximize_over_states(g, d: int, cfg: ConeOptConfig | None = None) -> StateOptResult:
    """Maximize a state-space objective over densities.

    States are parametrized as G G* / tr(G G*) over nonzero matrices G;
    on the unit Hilbert-Schmidt sphere of G the normalization is exact,
    so this reduces to sphere descent in R^(2 d^2).
    """
    cfg = cfg or ConeOptConfig()
    tol = DEFAULT_TOL

    def state_of(x: np.ndarray) -> np.ndarray:
        gm = _complex_of(x).reshape(d, d)
        w = gm @ gm.conj().T
        return w / np.trace(w).real

    def fun(x: np.ndarray) -> float:
        return -float(g(_unchecked(DensityOperator, state_of(x), tol=tol)))

    rng = np.random.default_rng(cfg.seed)
    starts = _sphere_starts(d * d, cfg.restarts, rng)
    best = None
    any_converged = False
    for x0 in starts:
        f, x, conv = _descend_on_sphere(
            fun, x0, cfg.max_iters, 1e-12, cfg.value_tol, cfg.fd_step
        )
        any_converged = any_converged or conv
        if best is None or f < best[0]:
            best = (f, x)
    f, x = best
    state = _unchecked(DensityOperator, state_of(x), tol=tol)
    return StateOptResult(state, -f, any_converged)

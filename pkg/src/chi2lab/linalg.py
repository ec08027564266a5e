"""Dense complex Hermitian linear algebra on raw ndarrays.

The eigensolver is a cyclic Jacobi iteration.  At the target scale
(d <= 16) it is deterministic across platforms and keeps high relative
accuracy on graded positive matrices, which downstream divergence code
relies on when second arguments are nearly singular.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import SingularOperator, SolverFailure

__all__ = [
    "hermitian_part",
    "hs_norm",
    "op_norm",
    "jacobi_eigh",
    "SpectralDecomposition",
    "spectral_decomposition",
]


def hermitian_part(mat: np.ndarray) -> np.ndarray:
    """Return (M + M*) / 2."""
    return (mat + mat.conj().T) / 2.0


def hs_norm(mat: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius) norm sqrt(tr M M*)."""
    return float(np.linalg.norm(np.asarray(mat, dtype=np.complex128)))


def op_norm(mat: np.ndarray) -> float:
    """Operator norm, i.e. the largest singular value.

    Computed as sqrt(lmax(M* M)) through the Jacobi solver so that every
    norm in the package goes through the same deterministic code path.
    """
    m = np.asarray(mat, dtype=np.complex128)
    if m.size == 0 or not m.any():
        return 0.0
    gram = m.conj().T @ m
    w, _ = jacobi_eigh(hermitian_part(gram))
    return float(np.sqrt(max(w[0], 0.0)))


def jacobi_eigh(
    mat: np.ndarray,
    *,
    max_sweeps: int = DEFAULT_TOL.jacobi_sweeps,
    off_factor: float = DEFAULT_TOL.jacobi_off,
) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` sorted in decreasing order
    and eigenvectors in the columns of ``v``.  Convergence is declared
    when the off-diagonal Hilbert-Schmidt norm drops below
    ``off_factor * ||M||_HS``; running out of sweeps raises SolverFailure.
    """
    a = np.array(mat, dtype=np.complex128)
    d = a.shape[0]
    v = np.eye(d, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    if d == 1 or scale == 0.0:
        w = np.real(np.diag(a)).copy()
        order = np.argsort(-w, kind="stable")
        return w[order], v[:, order]
    thresh = off_factor * scale
    converged = False
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= thresh:
            converged = True
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                phase = apq / r
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # a <- J* a J with the nontrivial block
                # [[c, s*phase], [-s*conj(phase), c]] on rows/cols (p, q)
                row_p = c * a[p, :] - s * phase * a[q, :]
                row_q = s * np.conj(phase) * a[p, :] + c * a[q, :]
                a[p, :] = row_p
                a[q, :] = row_q
                col_p = c * a[:, p] - s * np.conj(phase) * a[:, q]
                col_q = s * phase * a[:, p] + c * a[:, q]
                a[:, p] = col_p
                a[:, q] = col_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vcol_p = c * v[:, p] - s * np.conj(phase) * v[:, q]
                vcol_q = s * phase * v[:, p] + c * v[:, q]
                v[:, p] = vcol_p
                v[:, q] = vcol_q
    if not converged:
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off > thresh:
            raise SolverFailure(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e}, threshold {thresh:.3e})"
            )
    w = np.real(np.diag(a)).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Clustered eigendecomposition with strictly decreasing eigenvalues.

    ``projections[j]`` is the orthogonal eigenprojection of
    ``eigenvalues[j]`` and ``multiplicities[j]`` its rank.  The clusters
    partition the identity.
    """

    eigenvalues: tuple[float, ...]
    projections: tuple[np.ndarray, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        if not (
            len(self.eigenvalues)
            == len(self.projections)
            == len(self.multiplicities)
        ):
            raise ValueError("inconsistent decomposition lengths")
        for p in self.projections:
            p.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.projections[0].shape[0]

    @property
    def lmax(self) -> float:
        return self.eigenvalues[0]

    @property
    def lmin(self) -> float:
        return self.eigenvalues[-1]

    def reassemble(self) -> np.ndarray:
        out = np.zeros_like(self.projections[0])
        for lam, proj in zip(self.eigenvalues, self.projections):
            out = out + lam * proj
        return out

    def apply(self, fn) -> np.ndarray:
        """Standard operator function sum_j f(lambda_j) P_j."""
        out = np.zeros_like(self.projections[0])
        for lam, proj in zip(self.eigenvalues, self.projections):
            out = out + fn(lam) * proj
        return out

    def shift(self, offset: float) -> "SpectralDecomposition":
        """Decomposition of M + offset * I (same projections)."""
        return SpectralDecomposition(
            tuple(lam + offset for lam in self.eigenvalues),
            self.projections,
            self.multiplicities,
        )

    def scale(self, factor: float) -> "SpectralDecomposition":
        """Decomposition of factor * M for factor > 0."""
        if factor <= 0.0:
            raise ValueError("scale factor must be positive")
        return SpectralDecomposition(
            tuple(factor * lam for lam in self.eigenvalues),
            self.projections,
            self.multiplicities,
        )

    def power(
        self,
        p: float,
        *,
        pseudo: bool = False,
        support_rel: float = DEFAULT_TOL.support,
    ) -> np.ndarray:
        """Fractional (pseudo) power sum_j lambda_j^p P_j over the support.

        Eigenvalues at or below ``support_rel * lmax`` count as kernel and
        map to zero.  Negative powers of a singular operator require
        ``pseudo=True``, otherwise SingularOperator is raised.
        """
        cutoff = support_rel * max(self.lmax, 0.0)
        out = np.zeros_like(self.projections[0])
        skipped = False
        for lam, proj in zip(self.eigenvalues, self.projections):
            if lam > cutoff:
                out = out + (lam**p) * proj
            else:
                skipped = True
        if skipped and p < 0.0 and not pseudo:
            raise SingularOperator(
                "negative power of a singular operator; pass pseudo=True "
                "for the support-restricted pseudo-power"
            )
        return out

    def support(self, support_rel: float = DEFAULT_TOL.support) -> np.ndarray:
        """Orthogonal projection onto the span of the above-cutoff eigenspaces."""
        cutoff = support_rel * max(self.lmax, 0.0)
        out = np.zeros_like(self.projections[0])
        any_above = False
        for lam, proj in zip(self.eigenvalues, self.projections):
            if lam > cutoff:
                out = out + proj
                any_above = True
        if not any_above:
            # zero operator: empty support
            return np.zeros_like(self.projections[0])
        return out

    def is_positive_definite(self, pd_rel: float = DEFAULT_TOL.pd) -> bool:
        return self.lmax > 0.0 and self.lmin > pd_rel * self.lmax

    def validate(self, source: np.ndarray | None = None, rtol: float = 1e-10):
        """Check the structural invariants; raises AssertionError on failure."""
        d = self.dim
        eye = np.eye(d)
        total = np.zeros((d, d), dtype=np.complex128)
        for j, proj in enumerate(self.projections):
            assert np.max(np.abs(proj - proj.conj().T)) < 1e-10
            assert np.max(np.abs(proj @ proj - proj)) < 1e-10
            for k in range(j + 1, len(self.projections)):
                assert np.max(np.abs(proj @ self.projections[k])) < 1e-10
            total = total + proj
        assert np.max(np.abs(total - eye)) < 1e-9
        for j in range(len(self.eigenvalues) - 1):
            assert self.eigenvalues[j] > self.eigenvalues[j + 1]
        for proj, mult in zip(self.projections, self.multiplicities):
            assert abs(np.trace(proj).real - mult) < 1e-8
        if source is not None:
            scale = max(1.0, abs(self.lmax))
            assert op_norm(self.reassemble() - source) <= rtol * scale


def cluster_eigenpairs(
    w: np.ndarray, v: np.ndarray, delta: float
) -> SpectralDecomposition:
    """Chain-merge eigenpairs whose eigenvalues sit within ``delta``.

    ``w`` must be sorted decreasing with orthonormal eigenvectors in the
    columns of ``v``; the merged eigenvalues are strictly decreasing.
    """
    d = len(w)
    values: list[float] = []
    projections: list[np.ndarray] = []
    multiplicities: list[int] = []
    start = 0
    for i in range(1, d + 1):
        if i < d and (w[i - 1] - w[i]) <= delta:
            continue
        block = v[:, start:i]
        proj = block @ block.conj().T
        values.append(float(np.mean(w[start:i])))
        projections.append(hermitian_part(proj))
        multiplicities.append(i - start)
        start = i
    return SpectralDecomposition(
        tuple(values), tuple(projections), tuple(multiplicities)
    )


def spectral_decomposition(
    mat: np.ndarray, tol: Tolerances = DEFAULT_TOL
) -> SpectralDecomposition:
    """Eigendecompose a Hermitian ndarray and cluster near-ties.

    Eigenvalues closer than ``tol.cluster * max(1, lmax)`` chain-merge
    into a single eigenprojection so the returned eigenvalues are
    strictly decreasing.
    """
    w, v = jacobi_eigh(
        mat, max_sweeps=tol.jacobi_sweeps, off_factor=tol.jacobi_off
    )
    delta = tol.cluster * max(1.0, abs(w[0]))
    return cluster_eigenpairs(w, v, delta)

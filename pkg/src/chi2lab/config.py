"""Numerical tolerances shared across the package.

All thresholds are overridable per call site by passing a modified
``Tolerances``; the defaults below are the shipped contract.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    #: relative floor for PSD membership (eigenvalues >= -psd * max(1, lmax))
    psd: float = 1e-10
    #: relative gap lmin > pd * lmax required for PD membership
    pd: float = 1e-10
    #: relative cutoff separating support from kernel
    support: float = 1e-10
    #: eigenvalues closer than cluster * max(1, lmax) merge into one projection
    cluster: float = 1e-8
    #: allowed entrywise asymmetry relative to the matrix scale
    hermitian: float = 1e-12
    #: |tr - 1| bound for density operators
    trace_one: float = 1e-10
    #: Jacobi stops once the off-diagonal norm falls below this times ||M||_HS
    jacobi_off: float = 1e-14
    #: Jacobi sweep cap; exceeding it raises SolverFailure
    jacobi_sweeps: int = 100

    def override(self, **kwargs) -> "Tolerances":
        return replace(self, **kwargs)


DEFAULT_TOL = Tolerances()

import numpy as np
import pytest

from chi2lab import (
    ComplexMatrix,
    DensityOperator,
    PdOperator,
    PsdOperator,
    RankOneProjection,
    random_ensemble,
)
from chi2lab.linalg import op_norm


@pytest.mark.parametrize(
    "kind", ["unitary", "density", "pd", "psd_rank_r", "rank_one_projection"]
)
def test_same_seed_same_output(kind):
    first = random_ensemble(kind, 3, seed=11)
    second = random_ensemble(kind, 3, seed=11)
    a = first.mat if hasattr(first, "mat") else first.matrix
    b = second.mat if hasattr(second, "mat") else second.matrix
    np.testing.assert_array_equal(a, b)


def test_unitary_is_unitary():
    u = random_ensemble("unitary", 4, seed=0)
    assert isinstance(u, ComplexMatrix)
    assert op_norm(u.mat.conj().T @ u.mat - np.eye(4)) <= 1e-10


def test_density_defining_properties():
    rho = random_ensemble("density", 3, seed=5)
    assert isinstance(rho, DensityOperator)
    assert abs(rho.trace() - 1.0) <= 1e-12
    assert rho.spectrum().lmin >= 0.0


def test_pd_satisfies_invariant():
    a = random_ensemble("pd", 3, seed=2)
    assert isinstance(a, PdOperator)
    spec = a.spectrum()
    assert spec.lmin > 1e-10 * spec.lmax


def test_psd_rank_control():
    a = random_ensemble("psd_rank_r", 4, seed=3, rank=2)
    assert isinstance(a, PsdOperator)
    spec = a.spectrum()
    rank = sum(m for lam, m in zip(spec.eigenvalues, spec.multiplicities) if lam > 1e-10)
    assert rank == 2


def test_rank_one_projection_kind():
    p = random_ensemble("rank_one_projection", 3, seed=4)
    assert isinstance(p, RankOneProjection)
    assert abs(np.linalg.norm(p.vector) - 1.0) <= 1e-12


def test_invalid_kind_and_dim():
    with pytest.raises(ValueError):
        random_ensemble("nonsense", 3, seed=0)
    with pytest.raises(ValueError):
        random_ensemble("pd", 1, seed=0)

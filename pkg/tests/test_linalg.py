import numpy as np
import pytest

from chi2lab import (
    NotHermitian,
    PdOperator,
    PsdOperator,
    HermitianMatrix,
    RankOneProjection,
    SingularOperator,
    SolverFailure,
    eigh,
    frac_power,
    norms,
    support_contained,
    support_projection,
)
from chi2lab.ensembles import random_hermitian, random_psd
from chi2lab.linalg import hs_norm, jacobi_eigh, op_norm


def test_eigh_diagonal_orders_descending():
    spec = eigh(HermitianMatrix(np.diag([0.3, 0.7])))
    np.testing.assert_allclose(spec.eigenvalues, [0.7, 0.3])
    np.testing.assert_allclose(spec.projections[0], np.diag([0.0, 1.0]), atol=1e-14)
    np.testing.assert_allclose(spec.projections[1], np.diag([1.0, 0.0]), atol=1e-14)


def test_eigh_identity_single_cluster():
    spec = eigh(HermitianMatrix(np.eye(2)))
    assert spec.eigenvalues == (1.0,)
    assert spec.multiplicities == (2,)
    np.testing.assert_allclose(spec.projections[0], np.eye(2), atol=1e-14)


def test_eigh_2x2_hand_solved():
    # [[2,1],[1,2]] has eigenpairs 3 with (1,1)/sqrt2 and 1 with (1,-1)/sqrt2
    spec = eigh(HermitianMatrix([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(spec.eigenvalues, [3.0, 1.0], atol=1e-12)
    plus = np.full((2, 2), 0.5)
    minus = np.array([[0.5, -0.5], [-0.5, 0.5]])
    np.testing.assert_allclose(spec.projections[0], plus, atol=1e-12)
    np.testing.assert_allclose(spec.projections[1], minus, atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 8, 16])
def test_jacobi_matches_numpy(d):
    rng = np.random.default_rng(d)
    m = random_hermitian(d, rng)
    w, v = jacobi_eigh(m)
    ref = np.sort(np.linalg.eigvalsh(m))[::-1]
    np.testing.assert_allclose(w, ref, atol=1e-12 * max(1.0, abs(ref[0])))
    np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-12)


def test_jacobi_sweep_cap_raises():
    rng = np.random.default_rng(0)
    m = random_hermitian(5, rng)
    with pytest.raises(SolverFailure):
        jacobi_eigh(m, max_sweeps=1)


def test_reassembly_invariant():
    rng = np.random.default_rng(1)
    for d in (2, 3, 4):
        for _ in range(20):
            m = random_hermitian(d, rng)
            spec = eigh(HermitianMatrix(m))
            bound = 1e-10 * (1.0 + op_norm(m))
            assert op_norm(spec.reassemble() - m) <= bound
            spec.validate(m)


def test_frac_power_identity():
    eye = PsdOperator(np.eye(3))
    for p in (-1.0, -0.3, 0.0, 0.5, 1.0):
        np.testing.assert_allclose(frac_power(eye, p).mat, np.eye(3), atol=1e-13)


def test_frac_power_square_root():
    a = PsdOperator(np.diag([4.0, 1.0]))
    np.testing.assert_allclose(frac_power(a, 0.5).mat, np.diag([2.0, 1.0]), atol=1e-13)


def test_frac_power_pseudo_on_singular():
    a = PsdOperator(np.diag([4.0, 0.0]))
    got = frac_power(a, -0.5, pseudo=True)
    np.testing.assert_allclose(got.mat, np.diag([0.5, 0.0]), atol=1e-13)


def test_frac_power_negative_requires_pseudo():
    a = PsdOperator(np.diag([4.0, 0.0]))
    with pytest.raises(SingularOperator):
        frac_power(a, -0.5)


def test_frac_power_out_of_range():
    with pytest.raises(ValueError):
        frac_power(PsdOperator(np.eye(2)), 1.5)


def test_frac_power_inverse_is_support():
    rng = np.random.default_rng(7)
    for d in (2, 3, 4):
        for p in (0.25, 0.5, 1.0):
            a = random_psd(d, rng)
            prod = frac_power(a, p, pseudo=True).mat @ frac_power(a, -p, pseudo=True).mat
            assert op_norm(prod - support_projection(a)) <= 1e-9


def test_support_projection_examples():
    np.testing.assert_allclose(
        support_projection(PsdOperator(np.diag([1.0, 0.0]))), np.diag([1.0, 0.0]), atol=1e-12
    )
    np.testing.assert_allclose(
        support_projection(PdOperator(np.diag([2.0, 1.0]))), np.eye(2), atol=1e-12
    )
    v = np.array([1.0, 1j]) / np.sqrt(2)
    p = RankOneProjection(v)
    np.testing.assert_allclose(
        support_projection(PsdOperator(p.matrix)), p.matrix, atol=1e-12
    )
    np.testing.assert_allclose(
        support_projection(PsdOperator(np.zeros((2, 2)))), np.zeros((2, 2)), atol=1e-15
    )


def test_support_contained_examples():
    assert support_contained(PsdOperator(np.diag([1.0, 0.0])), PsdOperator(np.diag([2.0, 0.0])))
    # full support cannot fit inside a rank-one support
    assert not support_contained(PsdOperator(np.eye(2)), PsdOperator(np.diag([1.0, 0.0])))
    assert support_contained(PsdOperator(np.zeros((2, 2))), PsdOperator(np.diag([1.0, 0.0])))


def test_support_contained_reflexive_transitive():
    rng = np.random.default_rng(3)
    for _ in range(25):
        d = 4
        c = random_psd(d, rng, rank=3)
        supp_c = support_projection(c)
        gb = rng.standard_normal((d, 2)) + 1j * rng.standard_normal((d, 2))
        b_mat = supp_c @ (gb @ gb.conj().T) @ supp_c
        b = PsdOperator(b_mat)
        supp_b = support_projection(b)
        ga = rng.standard_normal((d, 1)) + 1j * rng.standard_normal((d, 1))
        a = PsdOperator(supp_b @ (ga @ ga.conj().T) @ supp_b)
        for x in (a, b, c):
            assert support_contained(x, x)
        assert support_contained(a, b)
        assert support_contained(b, c)
        assert support_contained(a, c)


def test_norms_examples():
    hs, op = norms(np.eye(2))
    assert abs(hs - np.sqrt(2)) < 1e-14
    assert abs(op - 1.0) < 1e-12
    hs, op = norms(np.diag([3.0, 4.0]))
    assert abs(hs - 5.0) < 1e-13
    assert abs(op - 4.0) < 1e-12
    assert norms(np.zeros((2, 2))) == (0.0, 0.0)


def test_hs_majorizes_op():
    rng = np.random.default_rng(5)
    for _ in range(30):
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert hs_norm(m) >= op_norm(m) - 1e-12


def test_hermitian_rejects_asymmetric():
    with pytest.raises(NotHermitian):
        HermitianMatrix([[0.0, 1.0], [0.0, 0.0]])

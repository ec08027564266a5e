import numpy as np
import pytest

from chi2lab import (
    SQUARE,
    SQUARED_RATIO_LOSS,
    XLOGX,
    PdOperator,
    PsdOperator,
    ScalarFunction,
    bregman_divergence,
    chi2,
    f_divergence,
    jensen_divergence,
)
from chi2lab.ensembles import random_pd, random_psd


def test_f_divergence_zero_at_equal():
    a = PdOperator(np.diag([0.5, 0.5]))
    assert abs(f_divergence(a, a, SQUARED_RATIO_LOSS)) < 1e-14


def test_f_divergence_diagonal_value():
    a = PdOperator(np.diag([2.0, 1.0]))
    b = PdOperator(np.diag([1.0, 2.0]))
    got = f_divergence(a, b, SQUARED_RATIO_LOSS)
    assert abs(got - 1.5) < 1e-12
    assert abs(got - chi2(a, b, 0.0)) < 1e-12


def test_f_divergence_matches_order_zero_noncommuting():
    rng = np.random.default_rng(8)
    for _ in range(10):
        a = random_psd(2, rng, rank=2)
        b = random_pd(2, rng)
        gap = abs(f_divergence(a, b, SQUARED_RATIO_LOSS) - chi2(a, b, 0.0))
        assert gap <= 1e-10


def test_bregman_zero_at_equal():
    a = PdOperator(np.diag([1.0, 2.0]))
    assert abs(bregman_divergence(a, a, SQUARE)) < 1e-14


def test_bregman_quadratic_identity():
    # for f(t) = t^2 the Bregman divergence is tr (A-B)^2
    a = PdOperator(np.diag([2.0, 1.0]))
    b = PdOperator(np.diag([1.0, 2.0]))
    assert abs(bregman_divergence(a, b, SQUARE) - 2.0) < 1e-12


def test_bregman_umegaki_commuting():
    a = PdOperator(np.diag([2.0, 1.0]))
    b = PdOperator(np.diag([0.5, 1.5]))
    expected = sum(
        x * (np.log(x) - np.log(y)) - (x - y) for x, y in [(2.0, 0.5), (1.0, 1.5)]
    )
    assert abs(bregman_divergence(a, b, XLOGX) - expected) < 1e-12


def test_bregman_requires_derivative():
    f = ScalarFunction(lambda t: t * t)
    a = PdOperator(np.eye(2))
    with pytest.raises(ValueError):
        bregman_divergence(a, a, f)


def test_jensen_zero_at_equal():
    a = PsdOperator(np.diag([1.0, 0.0]))
    assert abs(jensen_divergence(a, a, SQUARE)) < 1e-14


def test_jensen_quadratic_identity():
    # for f(t) = t^2 the Jensen divergence is tr ((A-B)/2)^2
    a = PsdOperator(np.diag([2.0, 1.0]))
    b = PsdOperator(np.diag([1.0, 2.0]))
    assert abs(jensen_divergence(a, b, SQUARE) - 0.5) < 1e-12


def test_jensen_symmetric_exactly():
    rng = np.random.default_rng(1)
    for _ in range(10):
        a = random_psd(3, rng)
        b = random_psd(3, rng)
        assert jensen_divergence(a, b, SQUARE) == jensen_divergence(b, a, SQUARE)


def test_scalar_function_rejects_non_finite():
    f = ScalarFunction(lambda t: float("nan"), name="bad")
    with pytest.raises(ValueError):
        f(1.0)

import numpy as np
import pytest

from chi2lab import (
    DivergenceOracle,
    InconsistentOracle,
    PsdOperator,
    ProbeSchedule,
    chi2_oracle,
    quadratic_form_tomography,
)
from chi2lab.ensembles import random_psd
from chi2lab.linalg import op_norm
from chi2lab.tomography import probe_state


def numpy_chi2(a, b, alpha):
    w, v = np.linalg.eigh(b)
    b_neg = (v * w**-alpha) @ v.conj().T
    b_one = (v * w ** (alpha - 1.0)) @ v.conj().T
    diff = a - b
    return float(np.trace(b_neg @ diff @ b_one @ diff).real)


def test_probe_state_structure():
    from chi2lab import RankOneProjection

    p = RankOneProjection([1.0, 0.0, 0.0])
    c = probe_state(p, 0.3, 3)
    assert abs(c.trace() - 1.0) < 1e-12
    w = sorted(np.linalg.eigvalsh(c.mat))
    np.testing.assert_allclose(w, [0.3, 0.35, 0.35], atol=1e-12)


def test_recovers_maximally_mixed():
    hidden = PsdOperator(np.eye(3) / 3)
    oracle = chi2_oracle(hidden, 0.5)
    rec = quadratic_form_tomography(oracle, 3, 0.5)
    assert op_norm(rec.mat - hidden.mat) <= 1e-8


def test_recovers_diagonal_alpha_zero():
    hidden = PsdOperator(np.diag([2.0, 1.0]))
    oracle = chi2_oracle(hidden, 0.0)
    rec = quadratic_form_tomography(oracle, 2, 0.0)
    assert op_norm(rec.mat - hidden.mat) <= 1e-7


def test_recovers_random_alpha_half_d3():
    rng = np.random.default_rng(3)
    hidden = random_psd(3, rng)
    oracle = chi2_oracle(hidden, 0.5)
    rec = quadratic_form_tomography(oracle, 3, 0.5)
    assert op_norm(rec.mat - hidden.mat) <= 1e-6


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("d", [2, 3])
def test_round_trip_all_orders(alpha, d):
    rng = np.random.default_rng(int(alpha * 100) + d)
    for _ in range(3):
        hidden = random_psd(d, rng)
        oracle = chi2_oracle(hidden, alpha)
        rec = quadratic_form_tomography(oracle, d, alpha)
        assert op_norm(rec.mat - hidden.mat) <= 1e-6


def test_query_budget_is_deterministic():
    for d in (2, 3):
        rng = np.random.default_rng(d)
        hidden = random_psd(d, rng)
        oracle = chi2_oracle(hidden, 0.5)
        quadratic_form_tomography(oracle, d, 0.5)
        assert oracle.count == d * d * 6


def test_identification_soundness_two_oracles():
    # oracles that agree on all probes must reconstruct the same operator;
    # the second route goes through numpy instead of the library solver
    rng = np.random.default_rng(5)
    hidden = random_psd(3, rng)
    lib_oracle = chi2_oracle(hidden, 0.25)
    indep_oracle = DivergenceOracle(lambda c: numpy_chi2(hidden.mat, c.mat, 0.25))
    rec_a = quadratic_form_tomography(lib_oracle, 3, 0.25)
    rec_b = quadratic_form_tomography(indep_oracle, 3, 0.25)
    assert op_norm(rec_a.mat - rec_b.mat) <= 1e-6


def test_schedule_validation():
    with pytest.raises(ValueError):
        ProbeSchedule(())
    with pytest.raises(ValueError):
        ProbeSchedule((0.2, 0.2))
    with pytest.raises(ValueError):
        ProbeSchedule((0.0, 0.5))
    # too few probes for the five-function basis
    rng = np.random.default_rng(0)
    hidden = random_psd(2, rng)
    oracle = chi2_oracle(hidden, 0.25)
    with pytest.raises(ValueError):
        quadratic_form_tomography(oracle, 2, 0.25, ProbeSchedule((0.2, 0.4, 0.6)))


def test_inconsistent_oracle_detected():
    # a negated divergence fits the probe basis but with a negative
    # quadratic-overlap coefficient, which no positive operator admits
    hidden = PsdOperator(np.diag([2.0, 1.0]))
    oracle = DivergenceOracle(lambda c: -numpy_chi2(hidden.mat, c.mat, 0.5))
    with pytest.raises(InconsistentOracle):
        quadratic_form_tomography(oracle, 2, 0.5)

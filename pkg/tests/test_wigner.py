import numpy as np
import pytest

from chi2lab import (
    ConjugationMap,
    NotASymmetry,
    ProjectionMap,
    RankOneProjection,
    check_orthogonality_preservation,
    check_transition_probabilities,
    conjugation_projection_map,
    wigner_synthesize,
)
from chi2lab.ensembles import haar_unitary, random_hermitian
from chi2lab.linalg import op_norm


def test_conjugation_map_validates_unitarity():
    with pytest.raises(ValueError):
        ConjugationMap(np.diag([1.0, 2.0]), "unitary")
    with pytest.raises(ValueError):
        ConjugationMap(np.eye(2), "sideways")


def test_identity_map_synthesizes_to_identity():
    conj = wigner_synthesize(ProjectionMap(lambda p: p), 3)
    assert conj.kind == "unitary"
    # identity up to a global phase
    m = conj.u.conj().T @ np.eye(3)
    c = np.trace(m) / abs(np.trace(m))
    assert op_norm(conj.u - c * np.eye(3)) <= 1e-10


def test_entrywise_conjugation_is_antiunitary():
    xi = ProjectionMap(lambda p: RankOneProjection(p.vector.conj()))
    conj = wigner_synthesize(xi, 3)
    assert conj.kind == "antiunitary"
    c = np.trace(conj.u) / abs(np.trace(conj.u))
    assert op_norm(conj.u - c * np.eye(3)) <= 1e-10


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("kind", ["unitary", "antiunitary"])
def test_forward_construction_round_trip(d, kind):
    rng = np.random.default_rng(10 * d + (kind == "antiunitary"))
    truth = ConjugationMap(haar_unitary(d, rng), kind)
    recovered = wigner_synthesize(conjugation_projection_map(truth), d)
    assert recovered.kind == kind
    for _ in range(5):
        a = random_hermitian(d, rng)
        assert op_norm(recovered.apply(a) - truth.apply(a)) <= 1e-7


def test_checks_pass_on_haar_conjugation():
    rng = np.random.default_rng(2)
    truth = ConjugationMap(haar_unitary(3, rng), "unitary")
    xi = conjugation_projection_map(truth)
    ok, worst = check_orthogonality_preservation(xi, 3)
    assert ok and worst <= 1e-10
    ok, worst = check_transition_probabilities(xi, 3)
    assert ok and worst <= 1e-10


def _toy_violator(p: RankOneProjection) -> RankOneProjection:
    # fixes e1 but folds e2 onto the diagonal direction
    if abs(p.vector[1]) ** 2 > 0.999:
        return RankOneProjection(np.array([1.0, 1.0]) / np.sqrt(2))
    return p


def test_checks_fail_on_toy_violator():
    xi = ProjectionMap(_toy_violator)
    ok, worst = check_orthogonality_preservation(xi, 2, samples=1)
    assert not ok
    assert abs(worst - 0.5) <= 1e-12
    ok, worst = check_transition_probabilities(xi, 2, samples=1)
    assert not ok
    assert abs(worst - 0.5) <= 1e-12


def test_synthesize_rejects_violator():
    with pytest.raises(NotASymmetry):
        wigner_synthesize(ProjectionMap(_toy_violator), 2)


def test_identity_map_reproduces_probes():
    conj = wigner_synthesize(ProjectionMap(lambda p: p), 2)
    for v in (np.array([1.0, 0.0]), np.array([1.0, 1.0]), np.array([1.0, 1.0j])):
        p = RankOneProjection(v)
        assert op_norm(conj.apply(p.matrix) - p.matrix) <= 1e-7

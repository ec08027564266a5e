import json

import numpy as np
import pytest

from chi2lab.cli import main
from chi2lab.ensembles import haar_unitary
from chi2lab.matio import save_matrix


@pytest.fixture
def mats(tmp_path):
    paths = {}

    def save(name, m):
        p = tmp_path / f"{name}.json"
        save_matrix(p, m)
        paths[name] = str(p)

    save("eye", np.eye(2, dtype=complex))
    save("p", np.diag([1.0, 0.0]).astype(complex))
    save("b1", np.array([[2.0, 3.0], [3.0, 5.0]], dtype=complex))
    save("d73", np.diag([0.7, 0.3]).astype(complex))
    save("notpsd", np.diag([1.0, -1.0]).astype(complex))
    save("u3", haar_unitary(3, np.random.default_rng(6)))
    return paths


def test_divergence_zero(mats, capsys):
    assert main(["divergence", mats["eye"], mats["eye"], "--alpha", "0.5"]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_divergence_closed_form(mats, capsys):
    assert main(["divergence", mats["p"], mats["b1"], "--alpha", "0"]) == 0
    assert capsys.readouterr().out.strip() == "10"


def test_divergence_infinite(mats, capsys):
    assert main(["divergence", mats["eye"], mats["p"], "--alpha", "0.5"]) == 0
    assert capsys.readouterr().out.strip() == "inf"


def test_divergence_invariant_violation_exits_one(mats, capsys):
    assert main(["divergence", mats["eye"], mats["notpsd"], "--alpha", "0.5"]) == 1


def test_divergence_parse_error_exits_two(mats, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["divergence", mats["eye"], str(bad), "--alpha", "0.5"]) == 2
    assert main(["divergence", mats["eye"], "/nonexistent.json", "--alpha", "0.5"]) == 2


def test_divergence_other_kinds(mats, capsys):
    assert main(["divergence", mats["eye"], mats["eye"], "--alpha", "0", "--kind", "f"]) == 0
    assert main(["divergence", mats["eye"], mats["eye"], "--alpha", "0", "--kind", "bregman"]) == 0
    assert main(["divergence", mats["eye"], mats["eye"], "--alpha", "0", "--kind", "jensen"]) == 0


def test_usage_error_exits_two():
    assert main(["divergence"]) == 2
    assert main(["nonsense"]) == 2
    assert main(["suite", "--trials", "0"]) == 2
    assert main(["divergence", "a", "b", "--alpha", "2.0"]) == 2


def test_suite_small_run(capsys):
    rc = main(["suite", "--alpha", "0.5", "--dim", "2", "--trials", "3", "--seed", "1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "total failures: 0" in out


def test_suite_seeded_rerun_identical(capsys):
    main(["suite", "--alpha", "0.5", "--dim", "2", "--trials", "3", "--seed", "5", "--json"])
    first = capsys.readouterr().out
    main(["suite", "--alpha", "0.5", "--dim", "2", "--trials", "3", "--seed", "5", "--json"])
    second = capsys.readouterr().out
    assert first == second


def test_suite_json_output_to_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    rc = main(["suite", "--alpha", "0", "--dim", "2", "--trials", "2",
               "--seed", "0", "--json", "--output", str(out)])
    assert rc == 0
    obj = json.loads(out.read_text())
    assert obj["failures"] == 0


def test_demo_second_var(capsys):
    rc = main(["demo", "--which", "second-var", "--n-max", "10"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "103.0204" in out
    assert "Proposition 2.12" in out


def test_demo_first_var(capsys):
    rc = main(["demo", "--which", "first-var", "--n-max", "2", "--alpha", "0.5"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "inf" in out


def test_demo_validates_n_max():
    assert main(["demo", "--which", "first-var", "--n-max", "0"]) == 2


def test_distinguish_subcommands(capsys):
    assert main(["distinguish", "--which", "f", "--alpha", "0", "--seed", "2"]) == 0
    assert main(["distinguish", "--which", "f", "--alpha", "0.5", "--seed", "2"]) == 0
    assert main(["distinguish", "--which", "bregman"]) == 0
    assert main(["distinguish", "--which", "jensen"]) == 0


def test_tomography_cli(mats, capsys):
    rc = main(["tomography", "--hidden", mats["d73"], "--alpha", "0.5", "--json"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["queries"] == 24
    assert obj["recovery_error"] <= 1e-7


def test_peel_cli(mats, capsys):
    rc = main(["peel", "--hidden", mats["d73"], "--alpha", "0.5", "--json"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    np.testing.assert_allclose(obj["eigenvalues"], [0.7, 0.3], atol=1e-6)


def test_decompile_identity(capsys):
    rc = main(["decompile", "--map", "identity", "--dim", "2", "--json"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["kind"] == "unitary"
    assert obj["failures"] == []


def test_decompile_from_matrix(mats, capsys):
    rc = main(["decompile", "--map", f"unitary:{mats['u3']}", "--json"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["kind"] == "unitary"
    assert obj["verification_residual"] <= 1e-6


def test_decompile_bad_map_spec():
    assert main(["decompile", "--map", "bogus:path"]) == 2
    assert main(["decompile", "--map", "identity"]) == 2  # missing --dim


def test_tolerance_override(mats, tmp_path, capsys):
    # a mildly negative eigenvalue passes once the PSD floor is loosened
    m = np.diag([1.0, -1e-6]).astype(complex)
    path = tmp_path / "slightly_negative.json"
    save_matrix(path, m)
    assert main(["divergence", str(path), mats["eye"], "--alpha", "0.5"]) == 1
    capsys.readouterr()
    rc = main(["divergence", str(path), mats["eye"], "--alpha", "0.5",
               "--tol", "psd=1e-5"])
    assert rc == 0
    assert main(["divergence", mats["eye"], mats["eye"], "--alpha", "0.5",
                 "--tol", "nonsense=1"]) == 2


def test_env_seed_fallback(mats, capsys, monkeypatch):
    monkeypatch.setenv("CHI2LAB_SEED", "123")
    rc = main(["suite", "--alpha", "0", "--dim", "2", "--trials", "2", "--json"])
    assert rc == 0
    first = capsys.readouterr().out
    rc = main(["suite", "--alpha", "0", "--dim", "2", "--trials", "2",
               "--seed", "123", "--json"])
    assert rc == 0
    assert capsys.readouterr().out == first

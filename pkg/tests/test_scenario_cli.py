import json
import subprocess
import sys

import numpy as np
import pytest

from cqgeom.checks import CHECKS, resolve_check_names, run_checks
from cqgeom.cli import main
from cqgeom.scenario import ScenarioError, bundled_scenario, load_scenario

FIXTURES = ["flat", "scaled", "torsion", "u1", "lorentz_u1"]


# --- loading ------------------------------------------------------------


@pytest.mark.parametrize("name", FIXTURES)
def test_bundled_fixture_loads(name):
    sc = load_scenario(bundled_scenario(name))
    assert sc.points.shape[1] == 4
    assert len(sc.points) >= 1
    names = resolve_check_names(sc.check_names, sc)
    assert "basis_minus_part" in names


def test_bundled_scenario_unknown():
    with pytest.raises(ScenarioError):
        bundled_scenario("does-not-exist")


def test_missing_file():
    with pytest.raises(ScenarioError):
        load_scenario("/nonexistent/path.scn")


def test_bad_toml(tmp_path):
    bad = tmp_path / "bad.scn"
    bad.write_text("[chart\nnames = oops")
    with pytest.raises(ScenarioError):
        load_scenario(str(bad))


BASE = """
[chart]
names = ["t", "x", "y", "z"]

[basis]
s0 = ["0", "0", "0", "0"]
s1 = ["0", "1", "0", "0"]
s2 = ["0", "0", "1", "0"]
s3 = ["0", "0", "0", "1"]
"""


def write_scn(tmp_path, text, name="case.scn"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_flat_minimal_scenario(tmp_path):
    # s0 must be i*1 to be timelike; "im" as the w component.
    text = BASE.replace('s0 = ["0", "0", "0", "0"]', 's0 = ["im", "0", "0", "0"]')
    text += "\n[sampling]\ncount = 3\n"
    sc = load_scenario(write_scn(tmp_path, text))
    assert sc.lorentz is None and sc.u1 is None and sc.coord_map is None
    assert sc.fd.order == 4
    report = run_checks(sc)
    assert report.failed == 0


def test_basis_not_minus_part_named(tmp_path):
    text = BASE.replace('s0 = ["0", "0", "0", "0"]', 's0 = ["1", "0", "0", "0"]')
    with pytest.raises(ScenarioError) as err:
        load_scenario(write_scn(tmp_path, text))
    assert "s0" in str(err.value)


def test_degenerate_basis_rejected(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(write_scn(tmp_path, BASE))


def test_inadmissible_omega_rejected(tmp_path):
    text = BASE.replace('s0 = ["0", "0", "0", "0"]', 's0 = ["im", "0", "0", "0"]')
    text += '\n[omega]\nw0 = ["1", "0", "0", "0"]\n'
    with pytest.raises(ScenarioError) as err:
        load_scenario(write_scn(tmp_path, text))
    assert "omega" in str(err.value)


def test_bad_box_rejected(tmp_path):
    text = BASE.replace('s0 = ["0", "0", "0", "0"]', 's0 = ["im", "0", "0", "0"]')
    text += "\n[sampling]\nbox = [[1, -1], [-1, 1], [-1, 1], [-1, 1]]\n"
    with pytest.raises(ScenarioError):
        load_scenario(write_scn(tmp_path, text))


def test_bad_expression_located(tmp_path):
    text = BASE.replace('s1 = ["0", "1", "0", "0"]',
                        's1 = ["0", "1 +", "0", "0"]')
    with pytest.raises(ScenarioError) as err:
        load_scenario(write_scn(tmp_path, text))
    assert "basis.s1" in str(err.value)


def test_unknown_check_rejected():
    sc = load_scenario(bundled_scenario("flat"), checks=("no_such_check",))
    with pytest.raises(KeyError):
        resolve_check_names(sc.check_names, sc)


def test_unavailable_check_rejected():
    # torsion.scn has no [u1] section.
    sc = load_scenario(bundled_scenario("torsion"), checks=("u1_cov_l",))
    with pytest.raises(KeyError):
        resolve_check_names(sc.check_names, sc)


def test_overrides_take_effect():
    sc = load_scenario(bundled_scenario("flat"), seed=7, count=3,
                       fd_step=1e-3, fd_order=2, tol=0.5,
                       checks=("metric_real",))
    assert sc.seed == 7
    assert len(sc.points) == 3
    assert sc.fd.order == 2
    assert np.allclose(sc.fd.steps, 1e-3)
    assert sc.tolerances["*"] == 0.5
    assert sc.check_names == ("metric_real",)


def test_seed_determinism():
    a = load_scenario(bundled_scenario("flat"), seed=11, count=5)
    b = load_scenario(bundled_scenario("flat"), seed=11, count=5)
    c = load_scenario(bundled_scenario("flat"), seed=12, count=5)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)


def test_explicit_points(tmp_path):
    text = BASE.replace('s0 = ["0", "0", "0", "0"]', 's0 = ["im", "0", "0", "0"]')
    text += "\n[sampling]\ncount = 0\npoints = [[0.1, 0.2, 0.3, 0.4]]\n"
    sc = load_scenario(write_scn(tmp_path, text))
    assert np.array_equal(sc.points, [[0.1, 0.2, 0.3, 0.4]])


# --- check running ------------------------------------------------------


def test_all_expands_by_availability():
    flat = load_scenario(bundled_scenario("flat"))
    torsion = load_scenario(bundled_scenario("torsion"))
    flat_names = resolve_check_names(("all",), flat)
    torsion_names = resolve_check_names(("all",), torsion)
    assert "u1_cov_l" in flat_names  # flat.scn carries a [u1] section
    assert "u1_cov_l" not in torsion_names
    assert "torsion_antisymmetry" in torsion_names


def test_report_shape():
    sc = load_scenario(bundled_scenario("flat"), count=1,
                       checks=("metric_real", "dual_pairing"))
    report = run_checks(sc)
    assert report.total == 2  # 2 checks x 1 point
    assert report.passed + report.failed == report.total
    blob = report.to_json()
    assert blob["summary"]["total"] == 2
    names = [r["name"] for r in blob["checks"]]
    assert names == ["metric_real", "dual_pairing"]
    for rec in blob["checks"]:
        assert set(rec) >= {"name", "pass", "residual", "tolerance"}
    text = report.to_text()
    assert "PASS" in text


def test_tolerance_override_forces_failure():
    sc = load_scenario(bundled_scenario("flat"), count=2, tol=1e-30)
    report = run_checks(sc)
    assert report.failed > 0
    assert "FAIL" in report.to_text()


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_checks_pass(name):
    sc = load_scenario(bundled_scenario(name), count=3)
    report = run_checks(sc)
    failing = [r.name for r in report.records if not r.passed]
    assert failing == []


# --- CLI ---------------------------------------------------------------


def test_cli_run_pass(capsys):
    rc = main(["run", "--scenario", bundled_scenario("flat"), "--points", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS" in out


def test_cli_run_failure_exit_code(capsys):
    rc = main(["run", "--scenario", bundled_scenario("flat"), "--points", "2",
               "--tol", "1e-30"])
    assert rc == 1
    assert "FAIL" in capsys.readouterr().out


def test_cli_run_json_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["run", "--scenario", bundled_scenario("u1"), "--points", "3",
            "--seed", "9"]
    assert main(argv + ["--json", str(out1)]) == 0
    assert main(argv + ["--json", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    blob = json.loads(out1.read_text())
    assert blob["summary"]["failed"] == 0
    assert blob["scenario"]["seed"] == 9


def test_cli_bad_scenario_exit_2(capsys):
    rc = main(["run", "--scenario", "/nonexistent.scn"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_cli_unknown_check_exit_2(capsys):
    rc = main(["run", "--scenario", bundled_scenario("flat"),
               "--checks", "bogus"])
    assert rc == 2


def test_cli_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["run"])  # missing --scenario
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_cli_list_checks(capsys):
    assert main(["list-checks"]) == 0
    out = capsys.readouterr().out
    for name in CHECKS:
        assert name in out


def test_cli_validate(capsys):
    assert main(["validate", "--scenario", bundled_scenario("scaled")]) == 0
    assert capsys.readouterr().out.startswith("ok:")
    assert main(["validate", "--scenario", "/nonexistent.scn"]) == 2


def test_cli_entry_point_subprocess():
    out = subprocess.run(
        [sys.executable, "-m", "cqgeom", "--version"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert "cqgeom" in out.stdout

"""Tests of scenario handling and the command-line interface."""

import hashlib
import json
import math

import numpy as np
import pytest

from pulseshape.cli import EXIT_IO, EXIT_OK, EXIT_SCENARIO, main
from pulseshape.errors import ScenarioError
from pulseshape.profiles import ProfileKind
from pulseshape.scenario import (Axis, parse_scenario, scenario_hash,
                                 serialize_scenario)

BASE_SCENARIO = {
    "profiles": ["gaussian", "single_lorentzian"],
    "carrier_ratio": 1e5,
    "doppler_axis": {"start": 0.0, "stop": 4.0, "points": 3},
    "delay_axis": {"start": -1.0, "stop": 1.0, "points": 3},
    "sigma_doppler_axis": {"start": 0.1, "stop": 1.0, "points": 2, "spacing": "log"},
    "sigma_delay_axis": {"start": 1e-6, "stop": 1e-4, "points": 2, "spacing": "log"},
    "monte_carlo": {"samples": 2000, "seed": 123},
    "homodyne": {"signal_modulus": 1.5},
}


def write_scenario(tmp_path, obj, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def split_csv(path):
    """Return (comment lines, data lines) of one CSV output."""
    comments, data = [], []
    for line in path.read_text().splitlines():
        (comments if line.startswith("#") else data).append(line)
    return comments, data


def test_axis_values():
    lin = Axis(0.0, 1.0, 5)
    np.testing.assert_allclose(lin.values(), [0.0, 0.25, 0.5, 0.75, 1.0])
    log = Axis(1e-2, 1e2, 5, spacing="log")
    np.testing.assert_allclose(log.values(), [1e-2, 1e-1, 1.0, 1e1, 1e2])
    single = Axis(3.0, 9.0, 1)
    np.testing.assert_allclose(single.values(), [3.0])


def test_axis_validation():
    with pytest.raises(ScenarioError):
        Axis(0.0, 1.0, 0)
    with pytest.raises(ScenarioError):
        Axis(-1.0, 1.0, 4, spacing="log")
    with pytest.raises(ScenarioError):
        Axis(0.0, 1.0, 4, spacing="quadratic")


def test_scenario_round_trip():
    s = parse_scenario(BASE_SCENARIO)
    assert s.profiles == (ProfileKind.GAUSSIAN, ProfileKind.SINGLE_LORENTZIAN)
    assert s.monte_carlo.samples == 2000
    again = parse_scenario(json.loads(serialize_scenario(s)))
    assert again == s


def test_scenario_hash_is_key_order_invariant():
    a = parse_scenario(BASE_SCENARIO)
    reordered = dict(reversed(list(BASE_SCENARIO.items())))
    b = parse_scenario(reordered)
    assert scenario_hash(a) == scenario_hash(b)
    changed = dict(BASE_SCENARIO, carrier_ratio=2e5)
    assert scenario_hash(parse_scenario(changed)) != scenario_hash(a)


def test_unknown_keys_rejected():
    with pytest.raises(ScenarioError, match="unknown key"):
        parse_scenario(dict(BASE_SCENARIO, dopler_axis={"start": 0, "stop": 1,
                                                        "points": 2}))
    bad_axis = dict(BASE_SCENARIO)
    bad_axis["doppler_axis"] = {"start": 0, "stop": 1, "points": 2, "step": 0.1}
    with pytest.raises(ScenarioError, match="unknown key"):
        parse_scenario(bad_axis)


def test_unknown_profile_rejected():
    with pytest.raises(ScenarioError, match="profile"):
        parse_scenario(dict(BASE_SCENARIO, profiles=["gaussian", "sech"]))


def test_cli_scenario_error_exit_code(tmp_path):
    path = write_scenario(tmp_path, dict(BASE_SCENARIO, typo_key=1))
    assert main(["ambiguity", "--scenario", path]) == EXIT_SCENARIO


def test_cli_invalid_json_exit_code(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["ambiguity", "--scenario", str(path)]) == EXIT_SCENARIO


def test_cli_missing_file_exit_code(tmp_path):
    assert main(["ambiguity", "--scenario",
                 str(tmp_path / "nope.json")]) == EXIT_IO


def test_cli_ambiguity_outputs(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_scenario(tmp_path, BASE_SCENARIO)
    assert main(["ambiguity", "--scenario", path, "--out", "run"]) == EXIT_OK
    for kind in ("gaussian", "single_lorentzian"):
        comments, data = split_csv(tmp_path / f"run_ambiguity_{kind}.csv")
        assert any("scenario_hash" in c for c in comments)
        assert data[0].split(",")[:2] == ["omega_d_over_bw", "tau_times_bw"]
        assert len(data) == 1 + 3 * 3
        header = data[0].split(",")
        rows = [dict(zip(header, line.split(","))) for line in data[1:]]
        assert all(float(r["chi_abs"]) <= 1.0 + 1e-12 for r in rows)
        origin = [r for r in rows if float(r["omega_d_over_bw"]) == 0.0
                  and float(r["tau_times_bw"]) == 0.0]
        assert len(origin) == 1
        assert float(origin[0]["chi_abs"]) == pytest.approx(1.0, abs=1e-12)
    diff = tmp_path / "run_ambiguity_diff_g_sl.csv"
    assert diff.exists()
    manifest = json.loads((tmp_path / "run.manifest.json").read_text())
    assert manifest["command"] == "ambiguity"
    assert set(manifest["outputs"]) == {
        "run_ambiguity_gaussian.csv", "run_ambiguity_single_lorentzian.csv",
        "run_ambiguity_diff_g_sl.csv"}


def test_cli_manifest_checksums_match_data_sections(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_scenario(tmp_path, BASE_SCENARIO)
    assert main(["capacity-systematic", "--scenario", path, "--out", "run"]) == EXIT_OK
    manifest = json.loads((tmp_path / "run.manifest.json").read_text())
    for name, digest in manifest["outputs"].items():
        _, data = split_csv(tmp_path / name)
        recomputed = hashlib.sha256(("\n".join(data) + "\n").encode()).hexdigest()
        assert recomputed == digest


def test_cli_reruns_are_byte_identical(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_scenario(tmp_path, BASE_SCENARIO)
    assert main(["capacity-stochastic", "--scenario", path, "--out", "a"]) == EXIT_OK
    assert main(["capacity-stochastic", "--scenario", path, "--out", "b"]) == EXIT_OK
    for kind in ("gaussian", "single_lorentzian"):
        name = f"capacity_stochastic_{kind}.csv"
        _, data_a = split_csv(tmp_path / f"a_{name}")
        _, data_b = split_csv(tmp_path / f"b_{name}")
        assert data_a == data_b


def test_cli_seed_override_changes_data(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_scenario(tmp_path, BASE_SCENARIO)
    assert main(["capacity-stochastic", "--scenario", path, "--out", "a"]) == EXIT_OK
    assert main(["capacity-stochastic", "--scenario", path, "--out", "b",
                 "--seed", "124"]) == EXIT_OK
    _, data_a = split_csv(tmp_path / "a_capacity_stochastic_gaussian.csv")
    _, data_b = split_csv(tmp_path / "b_capacity_stochastic_gaussian.csv")
    assert data_a != data_b


def test_cli_homodyne_outputs(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_scenario(tmp_path, BASE_SCENARIO)
    assert main(["homodyne", "--scenario", path, "--out", "run"]) == EXIT_OK
    comments, data = split_csv(tmp_path / "run_homodyne_gaussian.csv")
    header = data[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in data[1:]]
    for row in rows:
        # means agree between the two models; variance gap is nonnegative
        assert abs(float(row["mean_gap"])) <= 1e-9 * max(
            1.0, abs(float(row["mean_mismatch"])))
        assert float(row["var_gap"]) >= 0.0


def test_cli_requires_axes(tmp_path):
    minimal = {"profiles": ["gaussian"]}
    path = write_scenario(tmp_path, minimal)
    assert main(["ambiguity", "--scenario", path]) == EXIT_SCENARIO
    assert main(["capacity-stochastic", "--scenario", path]) == EXIT_SCENARIO


def test_cli_inf_token_formatting(tmp_path, monkeypatch):
    """A zero systematic Doppler offset gives eta = 1 and an infinite
    loss capacity, serialized as a literal lowercase token."""
    monkeypatch.chdir(tmp_path)
    scen = dict(BASE_SCENARIO)
    scen["doppler_axis"] = {"start": 0.0, "stop": 1.0, "points": 2}
    path = write_scenario(tmp_path, scen)
    assert main(["capacity-systematic", "--scenario", path, "--out", "run"]) == EXIT_OK
    _, data = split_csv(tmp_path / "run_capacity_systematic.csv")
    first = dict(zip(data[0].split(","), data[1].split(",")))
    assert first["p_gauss"] == "inf"
    assert not math.isfinite(float(first["p_gauss"]))

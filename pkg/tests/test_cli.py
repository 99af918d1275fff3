from __future__ import annotations

import json
from pathlib import Path

import pytest

from armkit import cli, model


def _run(capsys: pytest.CaptureFixture, argv: list[str]) -> tuple[int, str]:
    rc = cli.run(argv)
    out = capsys.readouterr().out
    return rc, out


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------

def test_usage_errors_exit_2(capsys: pytest.CaptureFixture) -> None:
    assert cli.run(["frobnicate"]) == 2
    assert cli.run(["fk", "--q", "1,2"]) == 2
    assert cli.run(["payload", "--policy", "fixed"]) == 2
    capsys.readouterr()


def test_config_error_exits_3(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    rc, _ = _run(capsys, ["fk", "--q", "0,0,0,0,0,0",
                          "--arm", str(tmp_path / "absent.yaml")])
    assert rc == 3


def test_computation_error_exits_4(capsys: pytest.CaptureFixture) -> None:
    rc, _ = _run(capsys, ["ik", "--target", "0.9,0,0", "--rpy", "0,0,0"])
    assert rc == 4


def test_resource_limit_exits_5(capsys: pytest.CaptureFixture) -> None:
    rc, _ = _run(capsys, ["workspace",
                          "--per-joint-steps", "2000,2000,2000,5,5,5"])
    assert rc == 5


def test_bom_data_error_exits_6(capsys: pytest.CaptureFixture,
                                tmp_path: Path) -> None:
    rc, _ = _run(capsys, ["bom", "--file", str(tmp_path / "absent.csv")])
    assert rc == 6


def test_output_error_exits_7(capsys: pytest.CaptureFixture,
                              tmp_path: Path) -> None:
    blocker = tmp_path / "blocker.txt"
    blocker.write_text("x")
    rc, _ = _run(capsys, ["fk", "--q", "0,0,0,0,0,0",
                          "--out", str(blocker / "sub")])
    assert rc == 7


def test_help_exits_0_for_every_subcommand(capsys: pytest.CaptureFixture) -> None:
    assert cli.run(["--help"]) == 0
    assert cli.run(["--version"]) == 0
    for name in cli.SUBCOMMANDS:
        assert cli.run([name, "--help"]) == 0, name
    capsys.readouterr()


# ---------------------------------------------------------------------------
# subcommand behavior
# ---------------------------------------------------------------------------

def test_fk_prints_home_position(capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["fk", "--q", "0,0,0,0,0,0"])
    assert rc == 0
    assert "0.25788" in out
    assert "-0.1469168" in out


def test_ik_round_trips_the_home_pose(capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["ik", "--target", "0.25788,0,-0.14691688",
                            "--rpy", "180,0,0"])
    assert rc == 0
    assert "residual" in out or "q_deg" in out


def test_jacobian_prints_a_six_by_six(capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["jacobian", "--q", "10,-20,30,0,15,5"])
    assert rc == 0
    rows = [ln for ln in out.splitlines() if ln.count(",") == 5 or ln.count(" ") >= 5]
    assert len(rows) >= 6


def test_capstan_reports_the_shoulder_stage(capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["capstan", "--small-diameter", "19.4",
                            "--large-diameter", "155.2", "--mode", "rotating"])
    assert rc == 0
    assert "8.0" in out


def test_torque_table_shows_annotation(capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["torque-table"])
    assert rc == 0
    assert "23.625" in out
    assert "0.52281" in out
    assert "conflicts" in out


def test_resolution_lists_every_joint(capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["resolution"])
    assert rc == 0
    assert "0.012" in out


def test_reach_reports_both_metrics_and_their_gap(capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["reach", "--per-joint-steps", "9,9,9,3,3,3"])
    assert rc == 0
    assert "0.467" in out
    assert "0.43" in out
    assert "max_radial_reach_m" in out
    assert "below_base_fraction" in out
    assert "azimuth_span_deg" in out


def test_payload_fixed_policy(capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["payload", "--policy", "fixed",
                            "--q", "0,0,90,0,-90,0"])
    assert rc == 0
    assert "1.35089" in out
    assert "limiting joint 3" in out


def test_payload_worst_with_joint_filter(capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["payload", "--grid-deg", "45",
                            "--limit-joints", "2,3"])
    assert rc == 0


def test_repeat_sim_quick_run(capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["repeat-sim", "--speeds", "500,2500",
                            "--cycles", "3"])
    assert rc == 0
    assert "500" in out and "2500" in out


def test_repeat_sim_noise_flags_must_pair(capsys: pytest.CaptureFixture) -> None:
    rc = cli.run(["repeat-sim", "--speeds", "500", "--cycles", "2",
                  "--sigma0-mm", "0.2"])
    capsys.readouterr()
    assert rc == 2


def test_bom_summarizes_costs_and_flags_the_spool_count(
        capsys: pytest.CaptureFixture) -> None:
    rc, out = _run(capsys, ["bom"])
    assert rc == 0
    assert "5310.01" in out
    assert "212.40" in out
    assert "27" in out and "28" in out


def test_arm_config_env_is_honored(capsys: pytest.CaptureFixture,
                                   tmp_path: Path,
                                   monkeypatch: pytest.MonkeyPatch,
                                   arm: model.ArmDescription) -> None:
    cfg = tmp_path / "arm.yaml"
    model.dump_arm(arm, str(cfg))
    monkeypatch.setenv(model.ENV_ARM_CONFIG, str(cfg))
    rc, out = _run(capsys, ["fk", "--q", "0,0,0,0,0,0"])
    assert rc == 0
    assert "0.25788" in out


# ---------------------------------------------------------------------------
# run manifests and replay
# ---------------------------------------------------------------------------

def _manifest(out_dir: Path) -> dict:
    return json.loads((out_dir / cli.MANIFEST_NAME).read_text())


def test_outputs_carry_a_manifest_with_hashes(capsys: pytest.CaptureFixture,
                                              tmp_path: Path) -> None:
    out_dir = tmp_path / "run1"
    rc, _ = _run(capsys, ["workspace", "--per-joint-steps", "5,5,5,3,3,3",
                          "--format", "csv", "--out", str(out_dir)])
    assert rc == 0
    man = _manifest(out_dir)
    assert man["schema"] == cli.MANIFEST_SCHEMA
    assert man["subcommand"] == "workspace"
    assert man["arm_config"].startswith("builtin:")
    assert any(f["path"].endswith(".csv") for f in man["outputs"])
    for f in man["outputs"]:
        assert len(f["sha256"]) == 64
        assert (out_dir / f["path"]).exists()


def test_replay_reproduces_identical_outputs(capsys: pytest.CaptureFixture,
                                             tmp_path: Path) -> None:
    first = tmp_path / "first"
    rc, _ = _run(capsys, ["workspace", "--per-joint-steps", "5,5,5,3,3,3",
                          "--format", "csv", "--seed", "11",
                          "--out", str(first)])
    assert rc == 0
    second = tmp_path / "second"
    rc2 = cli.replay(str(first / cli.MANIFEST_NAME), out_dir=str(second))
    capsys.readouterr()
    assert rc2 == 0
    a, b = _manifest(first), _manifest(second)
    assert a["outputs"]  # something was actually written and hashed
    assert {f["path"]: f["sha256"] for f in a["outputs"]} == \
           {f["path"]: f["sha256"] for f in b["outputs"]}


def test_svg_format_is_limited_to_plots(capsys: pytest.CaptureFixture,
                                        tmp_path: Path) -> None:
    rc = cli.run(["fk", "--q", "0,0,0,0,0,0", "--format", "svg",
                  "--out", str(tmp_path / "x")])
    capsys.readouterr()
    assert rc == 2


def test_workspace_svg_output(capsys: pytest.CaptureFixture,
                              tmp_path: Path) -> None:
    out_dir = tmp_path / "svg"
    rc, _ = _run(capsys, ["workspace", "--per-joint-steps", "5,5,5,3,3,3",
                          "--format", "svg", "--out", str(out_dir)])
    assert rc == 0
    svgs = list(out_dir.glob("*.svg"))
    assert svgs
    text = svgs[0].read_text()
    assert text.startswith("<svg")

"""CLI behavior: records, files, exit codes and reproducibility."""

import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

QUARTER = 44.563384065730695


def run_cli(*args, env_extra=None, cwd=None):
    env = dict(os.environ)
    env.pop("COILKIN_OUT", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "coilkin", *map(str, args)],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd,
    )


def write_plateau_scene(path, height=40.0):
    grid = [[0.0] * 21 for _ in range(21)]
    for i in range(5, 10):
        for j in range(5, 10):
            grid[i][j] = height
    path.write_text(
        json.dumps({"type": "height_field", "origin": [0, 0], "cell_mm": 10, "heights": grid})
    )


class TestKinematicsCommands:
    def test_ik_pure_compression(self):
        proc = run_cli("ik", 0, 0, 50)
        assert proc.returncode == 0
        record = json.loads(proc.stdout)
        assert record["theta_deg"] == 0.0
        assert record["s_mm"] == 50.0
        assert record["r_mm"] is None

    def test_fk_quarter_bend(self):
        proc = run_cli("fk", "--alpha", 0, "--theta", 90, "--s", 70)
        assert proc.returncode == 0
        record = json.loads(proc.stdout)
        assert record["xU"] == pytest.approx(QUARTER)
        assert record["zU"] == pytest.approx(QUARTER)
        assert record["xE"] == pytest.approx(QUARTER + 53.0)

    def test_tendons_quarter_bend(self):
        proc = run_cli("tendons", "--alpha", 0, "--theta", 90, "--s", 70, "--d", 12)
        assert proc.returncode == 0
        record = json.loads(proc.stdout)
        assert record["q1"] == pytest.approx(51.15, abs=0.01)
        assert record["q3"] == pytest.approx(79.99, abs=0.01)

    def test_unreachable_exits_3(self):
        proc = run_cli("ik", 70, 0, 70)
        assert proc.returncode == 3
        assert "error" in proc.stderr

    def test_parse_error_exits_2(self):
        proc = run_cli("fk", "--alpha", "wide", "--theta", 0, "--s", 50)
        assert proc.returncode == 2

    def test_bad_geometry_exits_2(self, tmp_path):
        geom = tmp_path / "geom.json"
        geom.write_text(json.dumps({"spring_color": "red"}))
        proc = run_cli("ik", 0, 0, 50, "--geometry", geom)
        assert proc.returncode == 2

    def test_geometry_file_used(self, tmp_path):
        geom = tmp_path / "geom.json"
        geom.write_text(json.dumps({"s_max": 40}))
        proc = run_cli("ik", 0, 0, 50, "--geometry", geom)
        assert proc.returncode == 3  # 50 mm exceeds the shortened s_max


class TestWorkspaceCommand:
    def test_defaults_summary_and_files(self, tmp_path):
        out = tmp_path / "ws"
        proc = run_cli("workspace", "--n-alpha", 8, "--n-theta", 5, "--n-s", 5, "--out", out)
        assert proc.returncode == 0
        assert "z_max=70.000" in proc.stdout
        assert (out / "workspace.csv").exists()
        assert (out / "workspace.ply").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "workspace"
        assert "workspace.csv" in manifest["outputs"]

    def test_coarse_grid_row_count(self, tmp_path):
        out = tmp_path / "ws"
        proc = run_cli("workspace", "--n-alpha", 1, "--n-theta", 2, "--n-s", 2, "--out", out)
        assert proc.returncode == 0
        rows = (out / "workspace.csv").read_text().splitlines()
        assert len(rows) == 1 + 4

    def test_zero_servo_range_limits_to_full_extension(self, tmp_path):
        out = tmp_path / "ws"
        proc = run_cli(
            "workspace", "--n-alpha", 6, "--n-theta", 4, "--n-s", 4, "--servo-range", 0, "--out", out
        )
        assert proc.returncode == 0
        assert "feasible=6 " in proc.stdout  # one per alpha: theta=0 at s=s_max


class TestScanCommand:
    def test_plateau_scan_outputs(self, tmp_path):
        scene = tmp_path / "scene.json"
        write_plateau_scene(scene)
        out = tmp_path / "run"
        proc = run_cli("scan", "--scene", scene, "--out", out)
        assert proc.returncode == 0
        assert "contacts=441" in proc.stdout
        heights = []
        for line in (out / "heightmap.csv").read_text().splitlines():
            if line.startswith("#"):
                continue
            heights.extend(float(v) for v in line.split(",") if v != "nan")
        assert max(heights) == pytest.approx(40.0, abs=0.5)
        feature_row = (out / "features.csv").read_text().strip().split(",")
        assert len(feature_row) == 301
        manifest = json.loads((out / "manifest.json").read_text())
        assert sorted(manifest["outputs"]) == [
            "events.csv",
            "features.csv",
            "heightmap.csv",
            "heightmap.ply",
        ]

    def test_no_contact_scan_still_succeeds(self, tmp_path):
        scene = tmp_path / "scene.json"
        write_plateau_scene(scene, height=0.0)
        out = tmp_path / "run"
        proc = run_cli("scan", "--scene", scene, "--arm-z", 200, "--out", out)
        assert proc.returncode == 0
        assert "contacts=0" in proc.stdout
        assert not (out / "heightmap.csv").exists()

    def test_pressure_synth_output(self, tmp_path):
        scene = tmp_path / "scene.json"
        write_plateau_scene(scene)
        out = tmp_path / "run"
        proc = run_cli(
            "scan", "--scene", scene, "--out", out, "--seed", 9, "--pressure-synth",
            "--width", 40, "--height", 40,
        )
        assert proc.returncode == 0
        lines = (out / "pressure.csv").read_text().splitlines()
        assert lines[0] == "event_index,contact,detected_sample"
        assert len(lines) == 1 + 25

    def test_scene_parse_error_exits_2(self, tmp_path):
        scene = tmp_path / "scene.json"
        scene.write_text("{broken")
        proc = run_cli("scan", "--scene", scene, "--out", tmp_path / "run")
        assert proc.returncode == 2


class TestExploreCommand:
    def test_offset_55_stops_at_60(self, tmp_path):
        out = tmp_path / "run"
        proc = run_cli("explore", "--obstacle-offset", 55, "--out", out)
        assert proc.returncode == 0
        assert "stop_depth=60" in proc.stdout
        report = json.loads((out / "report.json").read_text())
        assert report["stop_depth_mm"] == 60.0
        assert report["any_contact"] is True

    def test_no_obstacle_control(self, tmp_path):
        out = tmp_path / "run"
        proc = run_cli("explore", "--no-obstacle", "--out", out)
        assert proc.returncode == 0
        assert "stop_depth=100 contacts=0" in proc.stdout

    def test_scene_file(self, tmp_path):
        scene = tmp_path / "tube.json"
        scene.write_text(json.dumps({"type": "tube", "inner_radius_mm": 174}))
        proc = run_cli("explore", "--scene", scene, "--out", tmp_path / "run")
        assert proc.returncode == 0
        assert "stop_depth=100" in proc.stdout

    def test_missing_scene_spec_exits_2(self, tmp_path):
        proc = run_cli("explore", "--out", tmp_path / "run")
        assert proc.returncode == 2

    def test_unwritable_out_exits_4(self, tmp_path):
        blocker = tmp_path / "blocked"
        blocker.write_text("a file, not a directory")
        proc = run_cli("explore", "--no-obstacle", "--out", blocker)
        assert proc.returncode == 4


class TestReproducibility:
    def test_env_var_overrides_out(self, tmp_path):
        flag_dir = tmp_path / "flagged"
        env_dir = tmp_path / "enved"
        proc = run_cli(
            "explore", "--no-obstacle", "--out", flag_dir,
            env_extra={"COILKIN_OUT": str(env_dir)},
        )
        assert proc.returncode == 0
        assert env_dir.exists()
        assert not flag_dir.exists()

    def test_two_runs_byte_identical(self, tmp_path):
        scene = tmp_path / "scene.json"
        write_plateau_scene(scene)
        outputs = []
        for name in ("a", "b"):
            out = tmp_path / name
            proc = run_cli("scan", "--scene", scene, "--seed", 5, "--out", out)
            assert proc.returncode == 0
            outputs.append(
                {
                    f: (out / f).read_bytes()
                    for f in ("events.csv", "heightmap.csv", "features.csv")
                }
            )
        assert outputs[0] == outputs[1]

    def test_explore_runs_byte_identical(self, tmp_path):
        blobs = []
        for name in ("a", "b"):
            out = tmp_path / name
            proc = run_cli("explore", "--obstacle-offset", 35, "--out", out)
            assert proc.returncode == 0
            blobs.append((out / "events.csv").read_bytes())
        assert blobs[0] == blobs[1]

"""Workspace sampling, feasibility classification and exports."""

import math
from dataclasses import replace

import numpy as np
import pytest

from coilkin import EmptyWorkspaceError, RobotGeometry, ik, sample_workspace, workspace_extents
from coilkin.workspace import REASON_OK, REASON_SERVO, write_csv, write_ply

GEOM = RobotGeometry()


@pytest.fixture(scope="module")
def default_samples():
    return sample_workspace(GEOM)


def test_single_cell_grid():
    samples = sample_workspace(GEOM, (1, 1, 1))
    assert len(samples) == 1
    smp = samples[0]
    assert smp.state.alpha == 0.0
    assert smp.state.theta == 0.0
    assert smp.state.s == GEOM.s_min
    assert smp.u == pytest.approx([0.0, 0.0, 20.0])
    assert smp.feasible


def test_default_grid_size_and_order(default_samples):
    assert len(default_samples) == 72 * 19 * 11
    # alpha outer, theta middle, s inner
    assert default_samples[0].state.s == GEOM.s_min
    assert default_samples[1].state.s > default_samples[0].state.s
    assert default_samples[11].state.theta > default_samples[0].state.theta
    assert default_samples[19 * 11].state.alpha > default_samples[0].state.alpha


def test_geometric_bounds(default_samples):
    # An arc of length <= s_max bending at most 90 degrees stays within
    # a ball of radius s_max above the base plane.
    for smp in default_samples:
        assert np.linalg.norm(smp.u) <= GEOM.s_max + 1e-9
        assert smp.u[2] >= -1e-12


def test_tight_servo_kills_bent_samples():
    # Payout drops to ~6.1 mm, so almost any shortening is infeasible.
    samples = sample_workspace(replace(GEOM, servo_range=10.0), (8, 5, 5))
    feasible = [s for s in samples if s.feasible]
    infeasible = [s for s in samples if not s.feasible]
    assert len(feasible) < len(samples) / 3
    assert all(s.reason == REASON_SERVO for s in infeasible)
    # straight full extension stays feasible for every alpha
    assert sum(1 for s in feasible if s.state.theta == 0.0 and s.state.s == GEOM.s_max) == 8


def test_extents(default_samples):
    extents = workspace_extents(default_samples)
    assert extents["z_max"] == pytest.approx(70.0)
    # deepest point: quarter bend at minimum length, z = 40/pi
    assert extents["z_min"] == pytest.approx(40.0 / math.pi)
    # widest point: quarter bend at full length, planar reach 140/pi
    assert extents["radial_max"] == pytest.approx(140.0 / math.pi)


def test_extents_empty():
    with pytest.raises(EmptyWorkspaceError):
        workspace_extents([])


def test_rotational_symmetry(default_samples):
    # Group by (theta, s): feasibility and the (planar, z) profile must not
    # depend on alpha.
    groups = {}
    for smp in default_samples:
        key = (round(smp.state.theta, 12), round(smp.state.s, 12))
        groups.setdefault(key, []).append(smp)
    for members in groups.values():
        flags = {m.feasible for m in members}
        assert len(flags) == 1
        planars = [math.hypot(m.u[0], m.u[1]) for m in members]
        zs = [m.u[2] for m in members]
        assert max(planars) - min(planars) < 1e-9
        assert max(zs) - min(zs) < 1e-9


def test_loosening_servo_never_removes_samples():
    tight = sample_workspace(replace(GEOM, servo_range=40.0), (8, 5, 5))
    loose = sample_workspace(replace(GEOM, servo_range=120.0), (8, 5, 5))
    for a, b in zip(tight, loose):
        if a.feasible:
            assert b.feasible


def test_feasible_samples_round_trip(default_samples):
    for smp in default_samples[:: 37]:
        if not smp.feasible or smp.state.theta < 1e-3:
            continue
        back = ik(smp.u, GEOM)
        assert back.theta == pytest.approx(smp.state.theta, rel=1e-9, abs=1e-9)
        assert back.r == pytest.approx(smp.state.r, rel=1e-9)


def test_csv_and_ply_exports(tmp_path, default_samples):
    samples = sample_workspace(GEOM, (2, 2, 2))
    csv_path = tmp_path / "ws.csv"
    ply_path = tmp_path / "ws.ply"
    write_csv(samples, csv_path)
    write_ply(samples, ply_path)

    lines = csv_path.read_text().splitlines()
    assert lines[0] == "alpha,theta,s,xU,yU,zU,xE,yE,zE,feasible,reason"
    assert len(lines) == 1 + 8
    first = lines[1].split(",")
    assert len(first) == 11
    assert first[10] in (REASON_OK, REASON_SERVO)

    ply = ply_path.read_text().splitlines()
    n_feasible = sum(1 for s in samples if s.feasible)
    assert ply[0] == "ply"
    assert f"element vertex {n_feasible}" in ply
    assert len(ply) == ply.index("end_header") + 1 + n_feasible


def test_bad_grid():
    with pytest.raises(ValueError):
        sample_workspace(GEOM, (0, 1, 1))

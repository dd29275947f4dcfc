"""Tendon-space actuation: servo pulley mapping and smooth trajectories."""

import math
from dataclasses import dataclass

from .errors import ServoRangeError
from .geometry import RobotGeometry
from .kinematics import TendonSet


@dataclass(frozen=True)
class ServoCommand:
    """Pulley angles in degrees, one per tendon, with slack payout flags.

    A slack flag marks a tendon that must run longer than its home length;
    the pulley stays at 0 degrees and the line pays out freely.
    """

    angle1: float
    angle2: float
    angle3: float
    angle4: float
    slack1: bool = False
    slack2: bool = False
    slack3: bool = False
    slack4: bool = False

    @property
    def angles(self) -> tuple:
        return (self.angle1, self.angle2, self.angle3, self.angle4)

    @property
    def slack(self) -> tuple:
        return (self.slack1, self.slack2, self.slack3, self.slack4)

    def to_csv_line(self) -> str:
        """One-line record: angle1..angle4, then slack flags as 0/1."""
        parts = [repr(a) for a in self.angles] + ["1" if f else "0" for f in self.slack]
        return ",".join(parts)


@dataclass(frozen=True)
class TendonTrajectory:
    """Ordered tendon waypoints; each step moves a tendon at most max_step."""

    waypoints: tuple

    @property
    def step_count(self) -> int:
        return max(1, len(self.waypoints) - 1)


def max_payout(geom: RobotGeometry) -> float:
    """Largest tendon shortening the servo travel allows, in mm."""
    return geom.servo_range / 360.0 * math.pi * geom.pulley_diameter


def tendon_to_servo(target: TendonSet, home: TendonSet, geom: RobotGeometry) -> ServoCommand:
    """Map tendon lengths to pulley angles relative to the home lengths.

    Shortening winds the pulley by angle = delta / (pi * diameter) * 360;
    tendons longer than home clamp to 0 degrees with a slack flag. Raises
    ServoRangeError when a required angle exceeds the servo range.
    """
    deg_per_mm = 360.0 / (math.pi * geom.pulley_diameter)
    angles = []
    slack = []
    for q_home, q_target in zip(home.as_tuple(), target.as_tuple()):
        delta = q_home - q_target
        if delta <= 0.0:
            angles.append(0.0)
            slack.append(delta < 0.0)
            continue
        angle = delta * deg_per_mm
        if angle > geom.servo_range + 1e-9:
            raise ServoRangeError(
                f"tendon needs {delta:.3f} mm of shortening ({angle:.2f} deg), "
                f"servo range is {geom.servo_range} deg"
            )
        angles.append(angle)
        slack.append(False)
    return ServoCommand(*angles, *slack)


def servo_to_tendon(command: ServoCommand, home: TendonSet, geom: RobotGeometry) -> TendonSet:
    """Tendon lengths produced by a servo command (slack tendons stay at home)."""
    mm_per_deg = math.pi * geom.pulley_diameter / 360.0
    qs = [q - a * mm_per_deg for q, a in zip(home.as_tuple(), command.angles)]
    return TendonSet(*qs)


def interpolate(start: TendonSet, stop: TendonSet, max_step_mm: float = 2.0) -> TendonTrajectory:
    """March every tendon toward its target at up to max_step_mm per step.

    Steps run at full size with the remainder in the final step; the step
    count is set by the tendon with the largest change and the last
    waypoint is exactly `stop`. Equal endpoints give a single waypoint.
    """
    if max_step_mm <= 0.0:
        raise ValueError(f"max_step_mm must be > 0, got {max_step_mm}")
    a = start.as_tuple()
    deltas = [b - v for v, b in zip(a, stop.as_tuple())]
    biggest = max(abs(d) for d in deltas)
    if biggest == 0.0:
        return TendonTrajectory((start,))
    n = math.ceil(biggest / max_step_mm)
    points = [start]
    for k in range(1, n):
        vals = [
            v + math.copysign(min(k * max_step_mm, abs(d)), d) for v, d in zip(a, deltas)
        ]
        points.append(TendonSet(*vals))
    points.append(stop)
    return TendonTrajectory(tuple(points))

"""Closed-form planning: inverse kinematics, configuration enumeration, and
the rate-coordination laws for simultaneous tape, node and cable motion.

All functions are pure and deterministic for identical inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    ControlState,
    JointState,
    ManipulatorParams,
    Pose,
    cable_lengths,
    forward_kinematics,
    link_lengths,
)
from .workspace import STRAIGHT_X_TOL, feasible_theta_interval, ik_at_theta


class PlanningError(ValueError):
    """A trajectory request cannot be satisfied (e.g. unreachable waypoint)."""


@dataclass(frozen=True)
class SpeedLimits:
    """Actuator rate caps, m/s."""

    q1: float = 0.1
    q2: float = 0.1
    cable: float = 0.1

    def __post_init__(self):
        if not (self.q1 > 0 and self.q2 > 0 and self.cable > 0):
            raise ValueError("speed limits must be positive")


@dataclass(frozen=True)
class RateCommand:
    """Constant actuator rates, m/s."""

    q1_rate: float = 0.0
    q2_rate: float = 0.0
    cL_rate: float = 0.0
    cR_rate: float = 0.0

    def __post_init__(self):
        for name in ("q1_rate", "q2_rate", "cL_rate", "cR_rate"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"RateCommand.{name} must be finite")

    def check_limits(self, limits: SpeedLimits) -> None:
        """Raise ValueError if any rate magnitude exceeds its actuator cap.

        A 1e-9 relative slack keeps rates computed as distance/duration from
        tripping the cap through rounding alone.
        """
        slack = 1.0 + 1e-9
        over = []
        if abs(self.q1_rate) > limits.q1 * slack:
            over.append(f"|q1_rate|={abs(self.q1_rate):.9g} > {limits.q1:.9g}")
        if abs(self.q2_rate) > limits.q2 * slack:
            over.append(f"|q2_rate|={abs(self.q2_rate):.9g} > {limits.q2:.9g}")
        for name, rate in (("cL_rate", self.cL_rate), ("cR_rate", self.cR_rate)):
            if abs(rate) > limits.cable * slack:
                over.append(f"|{name}|={abs(rate):.9g} > {limits.cable:.9g}")
        if over:
            raise ValueError("rate limits exceeded: " + "; ".join(over))


@dataclass(frozen=True)
class ControlProfile:
    """Ordered piecewise-constant rate segments: (duration_s, RateCommand)."""

    segments: tuple

    def __post_init__(self):
        segments = tuple((float(duration), command) for duration, command in self.segments)
        object.__setattr__(self, "segments", segments)
        for duration, _ in segments:
            if not duration > 0:
                raise ValueError("segment durations must be positive")

    @property
    def total_duration(self) -> float:
        return sum(duration for duration, _ in self.segments)


def ik_solve(target: Pose, params: ManipulatorParams) -> JointState | None:
    """Joint state reaching the target pose, or None when infeasible.

    The pose orientation pins the bend angle, so this is the angle-constrained
    inverse at phi.
    """
    return ik_at_theta((target.x, target.y), target.phi, params)


def ik_enumerate(point, params: ManipulatorParams, count: int) -> list[JointState]:
    """Up to ``count`` distinct configurations reaching ``point``.

    Angles are sampled uniformly across the feasible interval starting at the
    minimum-angle endpoint. Straight-line points collapse to the single
    straight configuration; unreachable points give an empty list. Every
    returned state is verified to hit the point under forward kinematics.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    intervals = feasible_theta_interval(point, params)
    if not intervals:
        return []
    x = point[0]
    if abs(x) <= STRAIGHT_X_TOL:
        thetas = [0.0]
    else:
        interval = intervals[0]
        start, stop = (interval.lo, interval.hi) if x > 0 else (interval.hi, interval.lo)
        if count == 1 or interval.width == 0.0:
            thetas = [start]
        else:
            thetas = [start + (stop - start) * k / (count - 1) for k in range(count)]
    states = []
    for theta in thetas:
        state = ik_at_theta(point, theta, params)
        if state is None:
            raise RuntimeError(f"interval angle {theta} unexpectedly infeasible at {point}")
        pose = forward_kinematics(state)
        if math.hypot(pose.x - point[0], pose.y - point[1]) > 1e-9:
            raise RuntimeError(f"enumerated state misses {point} at theta={theta}")
        states.append(state)
    return states


def controls_between(from_state: JointState, to_state: JointState,
                     control0: ControlState | None = None) -> tuple[float, float]:
    """Actuator increments (dq1, dq2) moving between two joint states.

    Node motion is pinned by the link-2 change and extension makes up the
    rest: dq2 = l2_from - l2_to, dq1 = (l1_to - l1_from) - dq2. When given,
    ``control0`` is checked for consistency with ``from_state``.
    """
    if control0 is not None:
        l1, l2 = link_lengths(control0)
        if abs(l1 - from_state.l1) > 1e-9 or abs(l2 - from_state.l2) > 1e-9:
            raise ValueError("control0 does not produce from_state's link lengths")
    dq2 = from_state.l2 - to_state.l2
    dq1 = (to_state.l1 - from_state.l1) - dq2
    return dq1, dq2


def stationary_bend_rates(q1_rate: float) -> RateCommand:
    """Coordinated command that pins l1, keeping the bend point world-fixed.

    Matching the node rate against extension (q2_rate = -q1_rate) cancels the
    l1 change; the total length then changes at q1_rate, which both cables
    must follow to hold the bend angle.
    """
    return RateCommand(q1_rate=q1_rate, q2_rate=-q1_rate,
                       cL_rate=q1_rate, cR_rate=q1_rate)


def constant_theta_cable_rates(q1_rate: float, q2_rate: float,
                               theta: float) -> tuple[float, float]:
    """Cable rates that hold the bend angle while the lengths change.

    With theta fixed the cable bend terms are constant, so both cables track
    the total-length rate l1' + l2' = q1', independent of the node rate and
    of the angle itself (the signature keeps both to document the premise).
    """
    return q1_rate, q1_rate


def leg_command(from_state: JointState, to_state: JointState, duration: float,
                d: float) -> RateCommand:
    """Constant rates that move between two joint states in ``duration`` s.

    Cable rates come from the endpoint cable lengths, so the bend angle
    arrives exactly even though it evolves nonlinearly along the segment.
    """
    if not duration > 0:
        raise ValueError("duration must be positive")
    dq1, dq2 = controls_between(from_state, to_state)
    cables_from = cable_lengths(from_state, d)
    cables_to = cable_lengths(to_state, d)
    return RateCommand(
        q1_rate=dq1 / duration,
        q2_rate=dq2 / duration,
        cL_rate=(cables_to.c_L - cables_from.c_L) / duration,
        cR_rate=(cables_to.c_R - cables_from.c_R) / duration,
    )


def control_from_state(state: JointState) -> ControlState:
    """Zeroed actuator coordinates with the state's lengths as the datum."""
    return ControlState(q1=0.0, q2=0.0, l1_0=state.l1, l2_0=state.l2)


def plan_trajectory(waypoints, params: ManipulatorParams,
                    limits: SpeedLimits = SpeedLimits(), dt: float = 0.01) -> ControlProfile:
    """Piecewise-constant-rate profile visiting the waypoints in order.

    Waypoints are poses (solved through ik_solve) or explicit joint states;
    the first waypoint is the start. Each leg runs all four actuators
    together, stretched to the slowest-admissible duration and rounded up to
    a whole number of ``dt`` steps so a simulator can replay the profile
    exactly. Legs between waypoints with equal orientation reduce to the
    constant-angle cable law. Coincident waypoints produce no segment.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    states = []
    for index, waypoint in enumerate(waypoints):
        if isinstance(waypoint, JointState):
            states.append(waypoint)
            continue
        state = ik_solve(waypoint, params)
        if state is None:
            raise PlanningError(
                f"waypoint {index} at (x={waypoint.x:.6g} m, y={waypoint.y:.6g} m, "
                f"phi={waypoint.phi:.6g} rad) is unreachable")
        states.append(state)
    if not states:
        raise PlanningError("need at least one waypoint")

    d = params.cable_offset
    segments = []
    for a, b in zip(states, states[1:]):
        dq1, dq2 = controls_between(a, b)
        cables_a = cable_lengths(a, d)
        cables_b = cable_lengths(b, d)
        slowest = max(abs(dq1) / limits.q1,
                      abs(dq2) / limits.q2,
                      abs(cables_b.c_L - cables_a.c_L) / limits.cable,
                      abs(cables_b.c_R - cables_a.c_R) / limits.cable)
        if slowest == 0.0:
            continue
        duration = math.ceil(slowest / dt - 1e-12) * dt
        command = leg_command(a, b, duration, d)
        command.check_limits(limits)
        segments.append((duration, command))
    return ControlProfile(tuple(segments))

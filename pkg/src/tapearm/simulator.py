"""Quasi-static scenario execution.

Rate commands integrate exactly within a segment (the state at any step is
computed in closed form from the segment start), so identical scenarios
produce bit-identical logs and segment-boundary states do not depend on the
step size. Constraint violations are recorded on the log rows, never
clamped; only a cable differential outside the reachable range aborts a run,
since no kinematic state exists for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    DEFAULT_PARAMS,
    CablePair,
    ControlState,
    JointState,
    ManipulatorParams,
    Pose,
    cable_lengths,
    forward_kinematics,
    link_lengths,
    theta_from_cables,
    validate_state,
)
from .planner import (
    ControlProfile,
    RateCommand,
    constant_theta_cable_rates,
    control_from_state,
    plan_trajectory,
    stationary_bend_rates,
)
from .units import parse_angle
from .workspace import feasible_theta_interval, ik_at_theta

INITIAL_CONSISTENCY_TOL = 1e-9

LOG_CSV_HEADER = ("t_s,q1_m,q2_m,cL_m,cR_m,l1_m,l2_m,theta_rad,x_m,y_m,"
                  "eq3_residual_m,violations")


class ScenarioError(ValueError):
    """Scenario definition is malformed or kinematically inconsistent."""


@dataclass(frozen=True)
class SimState:
    """Snapshot of actuator and derived kinematic state at one instant."""

    time: float
    control: ControlState
    cables: CablePair
    joint: JointState
    pose: Pose


def make_state(control: ControlState, cables: CablePair, params: ManipulatorParams,
               time: float = 0.0) -> SimState:
    """Derive the joint state and pose from actuator coordinates and cables.

    Raises CableRangeError when the cable differential exceeds what any bend
    angle can produce.
    """
    l1, l2 = link_lengths(control)
    joint = JointState(l1, l2, theta_from_cables(cables, params.cable_offset))
    return SimState(time=time, control=control, cables=cables, joint=joint,
                    pose=forward_kinematics(joint))


def initial_state(control: ControlState, theta: float, params: ManipulatorParams,
                  time: float = 0.0) -> SimState:
    """Consistent starting state with cable lengths derived from the angle."""
    l1, l2 = link_lengths(control)
    cables = cable_lengths(JointState(l1, l2, theta), params.cable_offset)
    return make_state(control, cables, params, time)


def eq3_residual(state: SimState, params: ManipulatorParams) -> float:
    """Distance between the left cable and the value the joint state implies.

    Since the angle is derived from the cable differential, the residual
    measures drift between the cable sum and the total link length.
    """
    expected = cable_lengths(state.joint, params.cable_offset)
    return abs(state.cables.c_L - expected.c_L)


def step(state: SimState, command: RateCommand, dt: float,
         params: ManipulatorParams) -> SimState:
    """Advance one step at constant rates and rederive the kinematics.

    Joint-limit violations do not raise here; they surface through
    ``validate_state`` on log rows and through ``check_consistency``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    control = ControlState(
        q1=state.control.q1 + command.q1_rate * dt,
        q2=state.control.q2 + command.q2_rate * dt,
        l1_0=state.control.l1_0,
        l2_0=state.control.l2_0,
    )
    cables = CablePair(
        c_L=state.cables.c_L + command.cL_rate * dt,
        c_R=state.cables.c_R + command.cR_rate * dt,
    )
    return make_state(control, cables, params, time=state.time + dt)


@dataclass(frozen=True)
class ConsistencyReport:
    """Constraint residuals and bound margins of one state."""

    eq3_residual: float          # m
    theta_margin: float          # rad, theta_limit - |theta|
    l1_margin: float             # m, l1 - l1_min
    l2_margin: float             # m, l2 - l2_min
    total_length_margin: float   # m, max_total_length - (l1 + l2)
    tape_budget_margin: float    # m, total_tape_length - (l1 + l2)


def check_consistency(state: SimState, params: ManipulatorParams) -> ConsistencyReport:
    """Audit one state: cable-sum residual plus every bound margin."""
    joint = state.joint
    total = joint.l1 + joint.l2
    return ConsistencyReport(
        eq3_residual=eq3_residual(state, params),
        theta_margin=params.theta_limit - abs(joint.theta),
        l1_margin=joint.l1 - params.l1_min,
        l2_margin=joint.l2 - params.l2_min,
        total_length_margin=params.max_total_length - total,
        tape_budget_margin=params.tape.total_tape_length - total,
    )


# --- scenarios -------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    """A runnable experiment: parameters, start state, profile and checks."""

    name: str
    params: ManipulatorParams
    initial: SimState
    profile: ControlProfile
    dt: float = 0.01
    checks: tuple = ()

    def __post_init__(self):
        if not self.dt > 0:
            raise ScenarioError("dt must be positive")
        object.__setattr__(self, "checks", tuple(self.checks))
        for duration, _ in self.profile.segments:
            steps = duration / self.dt
            if abs(steps - round(steps)) > 1e-9 * max(1.0, abs(steps)):
                raise ScenarioError(f"segment duration {duration} s is not a whole "
                                    f"number of dt={self.dt} s steps")
        for check in self.checks:
            parse_check(check)  # fail fast on malformed checks


@dataclass(frozen=True)
class LogRow:
    """One sampled instant plus its consistency audit."""

    t: float
    q1: float
    q2: float
    cL: float
    cR: float
    l1: float
    l2: float
    theta: float
    x: float
    y: float
    eq3_residual: float
    violations: tuple


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check over a trajectory."""

    check: str
    passed: bool
    observed: float
    threshold: float
    detail: str


@dataclass
class TrajectoryLog:
    """Time series of a scenario run plus per-check outcomes."""

    scenario: str
    rows: list
    checks: list
    boundary_indices: list

    @property
    def all_passed(self) -> bool:
        return all(result.passed for result in self.checks)

    @property
    def final(self) -> LogRow:
        return self.rows[-1]


def _log_row(state: SimState, params: ManipulatorParams) -> LogRow:
    return LogRow(
        t=state.time,
        q1=state.control.q1, q2=state.control.q2,
        cL=state.cables.c_L, cR=state.cables.c_R,
        l1=state.joint.l1, l2=state.joint.l2, theta=state.joint.theta,
        x=state.pose.x, y=state.pose.y,
        eq3_residual=eq3_residual(state, params),
        violations=tuple(validate_state(state.joint, params)),
    )


def run_scenario(scenario: Scenario) -> TrajectoryLog:
    """Execute the profile and grade every named check.

    The log has one row per step plus the initial row. Rows carry the cable
    consistency residual and any bound violations; checks are evaluated over
    the whole series after stepping.
    """
    params = scenario.params
    if eq3_residual(scenario.initial, params) > INITIAL_CONSISTENCY_TOL:
        raise ScenarioError("initial state is inconsistent: cable sum does not "
                            "match the link lengths")
    rows = [_log_row(scenario.initial, params)]
    boundary_indices = []
    segment_start = scenario.initial
    for duration, command in scenario.profile.segments:
        n = round(duration / scenario.dt)
        state = segment_start
        for k in range(1, n + 1):
            # Constant rates integrate exactly; evaluating from the segment
            # start keeps boundary states independent of dt.
            t_rel = duration if k == n else k * scenario.dt
            control = ControlState(
                q1=segment_start.control.q1 + command.q1_rate * t_rel,
                q2=segment_start.control.q2 + command.q2_rate * t_rel,
                l1_0=segment_start.control.l1_0,
                l2_0=segment_start.control.l2_0,
            )
            cables = CablePair(
                c_L=segment_start.cables.c_L + command.cL_rate * t_rel,
                c_R=segment_start.cables.c_R + command.cR_rate * t_rel,
            )
            state = make_state(control, cables, params,
                               time=segment_start.time + t_rel)
            rows.append(_log_row(state, params))
        segment_start = state
        boundary_indices.append(len(rows) - 1)
    checks = [evaluate_check(check, rows) for check in scenario.checks]
    return TrajectoryLog(scenario=scenario.name, rows=rows, checks=checks,
                         boundary_indices=boundary_indices)


def log_to_csv(log: TrajectoryLog, path) -> None:
    """Write the run log with the standard column header."""
    with open(path, "w", newline="") as fh:
        fh.write(LOG_CSV_HEADER + "\n")
        for row in log.rows:
            violations = ";".join(str(v) for v in row.violations)
            fields = [repr(value) for value in
                      (row.t, row.q1, row.q2, row.cL, row.cR, row.l1, row.l2,
                       row.theta, row.x, row.y, row.eq3_residual)]
            fh.write(",".join(fields + [violations]) + "\n")


# --- named checks ----------------------------------------------------------

def _parse_point(arg: str) -> tuple[float, float]:
    text = arg.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ScenarioError(f"expected '(x,y)', got {arg!r}")
    x_text, y_text = text[1:-1].split(",")
    return float(x_text), float(y_text)


def _check_l1_constant(rows, arg):
    drift = max(abs(row.l1 - rows[0].l1) for row in rows)
    return drift, f"max |l1 - l1(0)| = {drift:.3g} m"


def _check_bend_point_constant(rows, arg):
    # The bend point sits at (0, l1) in the world frame, so its position is
    # constant exactly when l1 is.
    drift = max(abs(row.l1 - rows[0].l1) for row in rows)
    return drift, f"max bend-point displacement = {drift:.3g} m"


def _check_theta_constant(rows, arg):
    target = parse_angle(arg, default_unit="rad")
    deviation = max(abs(row.theta - target) for row in rows)
    return deviation, f"max |theta - {target:.6g} rad| = {deviation:.3g} rad"


def _check_final_theta(rows, arg):
    target = parse_angle(arg, default_unit="rad")
    deviation = abs(rows[-1].theta - target)
    return deviation, f"|final theta - {target:.6g} rad| = {deviation:.3g} rad"


def _check_theta_visits(rows, arg):
    target = parse_angle(arg, default_unit="rad")
    closest = min(abs(row.theta - target) for row in rows)
    return closest, f"closest approach to theta={target:.6g} rad is {closest:.3g} rad"


def _check_target(rows, arg):
    x, y = _parse_point(arg)
    miss = math.hypot(rows[-1].x - x, rows[-1].y - y)
    return miss, f"final pose misses ({x:.6g}, {y:.6g}) m by {miss:.3g} m"


def _check_visits_target(rows, arg):
    x, y = _parse_point(arg)
    miss = min(math.hypot(row.x - x, row.y - y) for row in rows)
    return miss, f"closest approach to ({x:.6g}, {y:.6g}) m is {miss:.3g} m"


def _check_target_held(rows, arg):
    x, y = _parse_point(arg)
    miss = max(math.hypot(row.x - x, row.y - y) for row in rows)
    return miss, f"max distance from ({x:.6g}, {y:.6g}) m is {miss:.3g} m"


def _check_eq3_residual(rows, arg):
    residual = max(row.eq3_residual for row in rows)
    return residual, f"max cable consistency residual = {residual:.3g} m"


def _check_l1_growth_equals_node_drive(rows, arg):
    growth = rows[-1].l1 - rows[0].l1
    node_drive = rows[-1].q2 - rows[0].q2
    mismatch = abs(growth - node_drive)
    if growth <= 0.0:
        return math.inf, f"l1 did not grow (change {growth:.3g} m)"
    return mismatch, (f"l1 grew {growth:.6g} m vs node drive {node_drive:.6g} m "
                      f"(mismatch {mismatch:.3g} m)")


_CHECKS = {
    # name: (takes_argument, default_tolerance, evaluator)
    "l1_constant": (False, 1e-6, _check_l1_constant),
    "bend_point_constant": (False, 1e-6, _check_bend_point_constant),
    "theta_constant": (True, 1e-6, _check_theta_constant),
    "final_theta": (True, 1e-6, _check_final_theta),
    "theta_visits": (True, 1e-6, _check_theta_visits),
    "target": (True, 1e-3, _check_target),
    "visits_target": (True, 1e-3, _check_visits_target),
    "target_held": (True, 1e-3, _check_target_held),
    "eq3_residual": (False, 1e-9, _check_eq3_residual),
    "l1_growth_equals_node_drive": (False, 1e-6, _check_l1_growth_equals_node_drive),
}


def parse_check(text: str):
    """Parse 'name[:arg][:tol]' with an optional leading 'expect_fail:'.

    Angle arguments take deg/rad suffixes (bare numbers are radians); point
    arguments are '(x,y)' in meters; tolerances are plain numbers in the
    check's native unit.
    """
    expect_fail = text.startswith("expect_fail:")
    body = text[len("expect_fail:"):] if expect_fail else text
    parts = body.split(":")
    name = parts[0]
    if name not in _CHECKS:
        raise ScenarioError(f"unknown check {name!r}; known checks: {sorted(_CHECKS)}")
    takes_argument, default_tol, evaluator = _CHECKS[name]
    rest = parts[1:]
    arg = None
    if takes_argument:
        if not rest:
            raise ScenarioError(f"check {name!r} requires an argument")
        arg, rest = rest[0], rest[1:]
    if len(rest) > 1:
        raise ScenarioError(f"malformed check {text!r}")
    tol = float(rest[0]) if rest else default_tol
    return expect_fail, name, arg, tol, evaluator


def evaluate_check(text: str, rows) -> CheckResult:
    """Grade one named check over the logged rows."""
    expect_fail, name, arg, tol, evaluator = parse_check(text)
    observed, detail = evaluator(rows, arg)
    passed = observed <= tol
    if expect_fail:
        outcome = "failed as expected" if not passed else "unexpectedly passed"
        return CheckResult(check=text, passed=not passed, observed=observed,
                           threshold=tol, detail=f"inner check {outcome}: {detail}")
    return CheckResult(check=text, passed=passed, observed=observed,
                       threshold=tol, detail=detail)


# --- built-in demonstration scenarios --------------------------------------

def _deploy_and_bend(params: ManipulatorParams) -> Scenario:
    # Stowed -> extend the tapes -> reposition the node -> bend to 30 deg.
    stowed = JointState(params.l1_min, 0.004, 0.0)
    extended = JointState(params.l1_min + 0.6, 0.004, 0.0)
    node_set = JointState(params.l1_min + 0.3, 0.304, 0.0)
    bent = JointState(node_set.l1, node_set.l2, math.radians(30.0))
    profile = plan_trajectory([stowed, extended, node_set, bent], params)
    target = forward_kinematics(bent)
    checks = (
        f"target:({target.x:.9g},{target.y:.9g}):1e-3",
        f"final_theta:{bent.theta!r}rad:1e-6",
        "eq3_residual:1e-9",
    )
    return Scenario("deploy-and-bend", params,
                    initial_state(control_from_state(stowed), 0.0, params),
                    profile, 0.01, checks)


def _reach_two_targets(params: ManipulatorParams) -> Scenario:
    # Reach (0.229, 0.838) m then (0.076, 0.838) m from a straight 0.6 m arm,
    # each at the middle of its feasible angle interval.
    start = ik_at_theta((0.0, 0.6), 0.0, params)
    targets = ((0.229, 0.838), (0.076, 0.838))
    waypoints = [start]
    checks = ["eq3_residual:1e-9"]
    for index, (x, y) in enumerate(targets):
        interval = feasible_theta_interval((x, y), params)[0]
        theta = 0.5 * (interval.lo + interval.hi)
        waypoints.append(ik_at_theta((x, y), theta, params))
        kind = "target" if index == len(targets) - 1 else "visits_target"
        checks.append(f"{kind}:({x},{y}):1e-3")
    profile = plan_trajectory(waypoints, params)
    return Scenario("reach-two-targets", params,
                    initial_state(control_from_state(start), 0.0, params),
                    profile, 0.01, tuple(checks))


def _multi_config_same_target(params: ManipulatorParams) -> Scenario:
    # Hold the end effector at (0.076, 0.686) m while sweeping the bend angle
    # from the minimum-l1 configuration through 10 deg to 16.7 deg. Legs are
    # subdivided so the piecewise-constant rates track the curved constraint
    # manifold closely.
    point = (0.076, 0.686)
    theta_start = math.atan2(point[0], point[1] - params.l1_min)
    via = [theta_start, math.radians(10.0), math.radians(16.7)]
    substep = math.radians(0.25)
    path = []
    for a, b in zip(via, via[1:]):
        n = max(1, math.ceil(abs(b - a) / substep))
        path.extend(a + (b - a) * k / n for k in range(n))
    path.append(via[-1])
    states = [ik_at_theta(point, theta, params) for theta in path]
    profile = plan_trajectory(states, params)
    visit_tol = math.radians(0.05)
    checks = (
        f"target_held:({point[0]},{point[1]}):1e-3",
        f"theta_visits:7.1deg:{visit_tol!r}",
        f"theta_visits:10deg:{visit_tol!r}",
        f"theta_visits:16.7deg:{visit_tol!r}",
        "eq3_residual:1e-9",
    )
    return Scenario("multi-config-same-target", params,
                    initial_state(control_from_state(states[0]), states[0].theta, params),
                    profile, 0.01, checks)


def _constant_angle_retraction(params: ManipulatorParams) -> Scenario:
    # Retract the tape while the cables hold a 22 deg bend.
    theta = math.radians(22.0)
    start = JointState(0.3, 0.4, theta)
    q1_rate = -0.02
    cL_rate, cR_rate = constant_theta_cable_rates(q1_rate, 0.0, theta)
    command = RateCommand(q1_rate=q1_rate, q2_rate=0.0,
                          cL_rate=cL_rate, cR_rate=cR_rate)
    profile = ControlProfile(((11.0, command),))
    checks = (
        f"theta_constant:{theta!r}rad:1e-6",
        "eq3_residual:1e-9",
    )
    return Scenario("constant-angle-retraction", params,
                    initial_state(control_from_state(start), theta, params),
                    profile, 0.01, checks)


def _stationary_bend(params: ManipulatorParams, coordinated: bool) -> Scenario:
    # Shorten link 2 by retracting while driving the node outward at the same
    # rate, which pins l1; the uncoordinated variant drives the node alone
    # and l1 grows by the integrated node drive instead.
    start = JointState(0.3, 0.6, 0.0)
    rate = 0.05
    if coordinated:
        name = "stationary-bend"
        command = stationary_bend_rates(-rate)
        checks = ("l1_constant:1e-6", "bend_point_constant:1e-6", "eq3_residual:1e-9")
    else:
        name = "stationary-bend-uncoordinated"
        command = RateCommand(q2_rate=rate)
        checks = ("expect_fail:l1_constant:1e-6",
                  "l1_growth_equals_node_drive:1e-6",
                  "eq3_residual:1e-9")
    profile = ControlProfile(((10.0, command),))
    return Scenario(name, params,
                    initial_state(control_from_state(start), 0.0, params),
                    profile, 0.01, checks)


def builtin_scenarios(params: ManipulatorParams = DEFAULT_PARAMS) -> dict[str, Scenario]:
    """The bundled demonstration scenarios, keyed by CLI name."""
    return {
        "deploy-and-bend": _deploy_and_bend(params),
        "reach-two-targets": _reach_two_targets(params),
        "multi-config-same-target": _multi_config_same_target(params),
        "constant-angle-retraction": _constant_angle_retraction(params),
        "stationary-bend": _stationary_bend(params, coordinated=True),
        "stationary-bend-uncoordinated": _stationary_bend(params, coordinated=False),
    }

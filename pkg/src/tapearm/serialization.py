"""JSON schemas for parameters, states, profiles and scenarios.

Keys carry unit suffixes (_m, _rad, _s, _pa, _kg, ...) so files are
unambiguous; rates inside profile segments use the bare actuator names
q1/q2/cL/cR, all in m/s. Unknown keys are rejected so typos fail loudly.

Scenario files look like::

    {
      "name": "retract",
      "params": { ... optional overrides of the defaults ... },
      "initial": {"control": {"q1_m": 0, "q2_m": 0, "l1_0_m": 0.3, "l2_0_m": 0.4},
                  "theta_rad": 0.38397},
      "dt_s": 0.01,
      "segments": [{"duration_s": 11.0,
                    "rates": {"q1": -0.02, "cL": -0.02, "cR": -0.02}}],
      "checks": ["theta_constant:22deg:1e-6", "eq3_residual:1e-9"]
    }

``initial`` takes either ``theta_rad`` (cables derived, always consistent) or
an explicit ``cables`` object {"cL_m": ..., "cR_m": ...}.
"""

from __future__ import annotations

import json

from .model import (
    DEFAULT_TAPE,
    CablePair,
    ControlState,
    JointState,
    ManipulatorParams,
    Pose,
    TapeProperties,
)
from .planner import ControlProfile, RateCommand
from .simulator import Scenario, ScenarioError, initial_state, make_state


def _check_keys(data: dict, allowed: set, context: str) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ScenarioError(f"unknown key(s) {sorted(unknown)} in {context}; "
                            f"allowed: {sorted(allowed)}")


def tape_to_dict(tape: TapeProperties) -> dict:
    return {
        "elastic_modulus_pa": tape.elastic_modulus,
        "thickness_m": tape.thickness,
        "transverse_radius_m": tape.transverse_radius,
        "subtended_angle_rad": tape.subtended_angle,
        "linear_density_kg_per_m": tape.linear_density,
        "total_tape_length_m": tape.total_tape_length,
    }


def tape_from_dict(data: dict) -> TapeProperties:
    """Build tape properties from a (possibly partial) dict; defaults fill gaps."""
    defaults = tape_to_dict(DEFAULT_TAPE)
    _check_keys(data, set(defaults), "tape")
    merged = {**defaults, **data}
    return TapeProperties(
        elastic_modulus=float(merged["elastic_modulus_pa"]),
        thickness=float(merged["thickness_m"]),
        transverse_radius=float(merged["transverse_radius_m"]),
        subtended_angle=float(merged["subtended_angle_rad"]),
        linear_density=float(merged["linear_density_kg_per_m"]),
        total_tape_length=float(merged["total_tape_length_m"]),
    )


def params_to_dict(params: ManipulatorParams) -> dict:
    return {
        "tape": tape_to_dict(params.tape),
        "cable_offset_m": params.cable_offset,
        "theta_limit_rad": params.theta_limit,
        "l1_min_m": params.l1_min,
        "l2_min_m": params.l2_min,
        "max_total_length_m": params.max_total_length,
        "base_mass_kg": params.base_mass,
        "node_mass_kg": params.node_mass,
    }


def params_from_dict(data: dict) -> ManipulatorParams:
    """Build parameters from a (possibly partial) dict; defaults fill gaps."""
    allowed = {"tape", "cable_offset_m", "theta_limit_rad", "l1_min_m", "l2_min_m",
               "max_total_length_m", "base_mass_kg", "node_mass_kg"}
    _check_keys(data, allowed, "params")
    defaults = ManipulatorParams()
    return ManipulatorParams(
        tape=tape_from_dict(data.get("tape", {})),
        cable_offset=float(data.get("cable_offset_m", defaults.cable_offset)),
        theta_limit=float(data.get("theta_limit_rad", defaults.theta_limit)),
        l1_min=float(data.get("l1_min_m", defaults.l1_min)),
        l2_min=float(data.get("l2_min_m", defaults.l2_min)),
        max_total_length=float(data.get("max_total_length_m", defaults.max_total_length)),
        base_mass=float(data.get("base_mass_kg", defaults.base_mass)),
        node_mass=float(data.get("node_mass_kg", defaults.node_mass)),
    )


def joint_to_dict(state: JointState) -> dict:
    return {"l1_m": state.l1, "l2_m": state.l2, "theta_rad": state.theta}


def joint_from_dict(data: dict) -> JointState:
    _check_keys(data, {"l1_m", "l2_m", "theta_rad"}, "joint state")
    return JointState(float(data["l1_m"]), float(data["l2_m"]), float(data["theta_rad"]))


def pose_to_dict(pose: Pose) -> dict:
    return {"x_m": pose.x, "y_m": pose.y, "phi_rad": pose.phi}


def pose_from_dict(data: dict) -> Pose:
    _check_keys(data, {"x_m", "y_m", "phi_rad"}, "pose")
    return Pose(float(data["x_m"]), float(data["y_m"]), float(data["phi_rad"]))


def control_to_dict(control: ControlState) -> dict:
    return {"q1_m": control.q1, "q2_m": control.q2,
            "l1_0_m": control.l1_0, "l2_0_m": control.l2_0}


def control_from_dict(data: dict) -> ControlState:
    _check_keys(data, {"q1_m", "q2_m", "l1_0_m", "l2_0_m"}, "control state")
    return ControlState(q1=float(data.get("q1_m", 0.0)), q2=float(data.get("q2_m", 0.0)),
                        l1_0=float(data["l1_0_m"]), l2_0=float(data["l2_0_m"]))


def cables_to_dict(cables: CablePair) -> dict:
    return {"cL_m": cables.c_L, "cR_m": cables.c_R}


def cables_from_dict(data: dict) -> CablePair:
    _check_keys(data, {"cL_m", "cR_m"}, "cables")
    return CablePair(c_L=float(data["cL_m"]), c_R=float(data["cR_m"]))


def rate_to_dict(command: RateCommand) -> dict:
    return {"q1": command.q1_rate, "q2": command.q2_rate,
            "cL": command.cL_rate, "cR": command.cR_rate}


def rate_from_dict(data: dict) -> RateCommand:
    _check_keys(data, {"q1", "q2", "cL", "cR"}, "rates")
    return RateCommand(q1_rate=float(data.get("q1", 0.0)),
                       q2_rate=float(data.get("q2", 0.0)),
                       cL_rate=float(data.get("cL", 0.0)),
                       cR_rate=float(data.get("cR", 0.0)))


def profile_to_segments(profile: ControlProfile) -> list:
    return [{"duration_s": duration, "rates": rate_to_dict(command)}
            for duration, command in profile.segments]


def profile_from_segments(data) -> ControlProfile:
    segments = []
    for entry in data:
        _check_keys(entry, {"duration_s", "rates"}, "segment")
        segments.append((float(entry["duration_s"]),
                         rate_from_dict(entry.get("rates", {}))))
    return ControlProfile(tuple(segments))


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "name": scenario.name,
        "params": params_to_dict(scenario.params),
        "initial": {
            "control": control_to_dict(scenario.initial.control),
            "cables": cables_to_dict(scenario.initial.cables),
        },
        "dt_s": scenario.dt,
        "segments": profile_to_segments(scenario.profile),
        "checks": list(scenario.checks),
    }


def scenario_from_dict(data: dict) -> Scenario:
    _check_keys(data, {"name", "params", "initial", "dt_s", "segments", "checks"},
                "scenario")
    params = params_from_dict(data.get("params", {}))
    try:
        initial_data = dict(data["initial"])
    except KeyError:
        raise ScenarioError("scenario is missing 'initial'") from None
    _check_keys(initial_data, {"control", "theta_rad", "cables"}, "initial")
    if "control" not in initial_data:
        raise ScenarioError("initial state needs a 'control' object")
    control = control_from_dict(initial_data["control"])
    if "cables" in initial_data:
        state = make_state(control, cables_from_dict(initial_data["cables"]), params)
    else:
        state = initial_state(control, float(initial_data.get("theta_rad", 0.0)), params)
    profile = profile_from_segments(data.get("segments", []))
    return Scenario(
        name=str(data.get("name", "scenario")),
        params=params,
        initial=state,
        profile=profile,
        dt=float(data.get("dt_s", 0.01)),
        checks=tuple(data.get("checks", ())),
    )


def save_scenario(scenario: Scenario, path) -> None:
    with open(path, "w") as fh:
        json.dump(scenario_to_dict(scenario), fh, indent=2)
        fh.write("\n")


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return scenario_from_dict(json.load(fh))


def save_params(params: ManipulatorParams, path) -> None:
    with open(path, "w") as fh:
        json.dump(params_to_dict(params), fh, indent=2)
        fh.write("\n")


def load_params(path) -> ManipulatorParams:
    with open(path) as fh:
        return params_from_dict(json.load(fh))

import json
import math

import pytest

from tapearm.model import DEFAULT_PARAMS, JointState, ManipulatorParams
from tapearm.serialization import (
    load_params,
    load_scenario,
    params_from_dict,
    params_to_dict,
    save_params,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from tapearm.simulator import ScenarioError, builtin_scenarios, run_scenario


def test_params_dict_roundtrip():
    params = ManipulatorParams(cable_offset=0.02, theta_limit=math.radians(45.0))
    assert params_from_dict(params_to_dict(params)) == params


def test_params_partial_dict_uses_defaults():
    params = params_from_dict({"cable_offset_m": 0.02})
    assert params.cable_offset == 0.02
    assert params.theta_limit == DEFAULT_PARAMS.theta_limit
    assert params.tape == DEFAULT_PARAMS.tape


def test_params_rejects_unknown_keys():
    with pytest.raises(ScenarioError, match="unknown key"):
        params_from_dict({"cable_offset": 0.02})
    with pytest.raises(ScenarioError, match="unknown key"):
        params_from_dict({"tape": {"thickness": 1e-4}})


def test_params_file_roundtrip(tmp_path):
    path = tmp_path / "params.json"
    params = ManipulatorParams(l2_min=0.01)
    save_params(params, path)
    assert load_params(path) == params


def test_scenario_dict_roundtrip_runs_identically():
    scenario = builtin_scenarios()["constant-angle-retraction"]
    restored = scenario_from_dict(scenario_to_dict(scenario))
    assert run_scenario(restored).rows == run_scenario(scenario).rows


def test_scenario_file_roundtrip(tmp_path):
    scenario = builtin_scenarios()["stationary-bend"]
    path = tmp_path / "scenario.json"
    save_scenario(scenario, path)
    loaded = load_scenario(path)
    assert loaded.name == scenario.name
    assert loaded.checks == scenario.checks
    assert run_scenario(loaded).all_passed


def test_scenario_from_minimal_dict():
    scenario = scenario_from_dict({
        "initial": {"control": {"l1_0_m": 0.3, "l2_0_m": 0.4}, "theta_rad": 0.1},
        "segments": [{"duration_s": 1.0, "rates": {"q1": 0.05, "cL": 0.05, "cR": 0.05}}],
        "checks": ["eq3_residual"],
    })
    assert scenario.dt == 0.01
    assert scenario.params == DEFAULT_PARAMS
    log = run_scenario(scenario)
    assert log.all_passed
    assert log.rows[-1].l1 == pytest.approx(0.35, abs=1e-9)


def test_scenario_initial_from_explicit_cables():
    state = JointState(0.3, 0.4, math.radians(5.0))
    from tapearm.model import cable_lengths
    cables = cable_lengths(state, DEFAULT_PARAMS.cable_offset)
    scenario = scenario_from_dict({
        "initial": {"control": {"l1_0_m": 0.3, "l2_0_m": 0.4},
                    "cables": {"cL_m": cables.c_L, "cR_m": cables.c_R}},
        "segments": [],
    })
    assert scenario.initial.joint.theta == pytest.approx(state.theta, abs=1e-12)


def test_scenario_rejects_malformed_input():
    with pytest.raises(ScenarioError):
        scenario_from_dict({"segments": []})  # no initial
    with pytest.raises(ScenarioError, match="unknown key"):
        scenario_from_dict({
            "initial": {"control": {"l1_0_m": 0.3, "l2_0_m": 0.4}},
            "segmentz": [],
        })
    with pytest.raises(ScenarioError, match="unknown key"):
        scenario_from_dict({
            "initial": {"control": {"l1_0_m": 0.3, "l2_0_m": 0.4}},
            "segments": [{"duration_s": 1.0, "rates": {"q5": 0.1}}],
        })


def test_state_dicts_roundtrip():
    from tapearm.model import CablePair, Pose
    from tapearm.serialization import (
        cables_from_dict,
        cables_to_dict,
        joint_from_dict,
        joint_to_dict,
        pose_from_dict,
        pose_to_dict,
    )
    joint = JointState(0.3, 0.4, 0.12)
    assert joint_from_dict(joint_to_dict(joint)) == joint
    pose = Pose(0.1, 0.7, -0.2)
    assert pose_from_dict(pose_to_dict(pose)) == pose
    cables = CablePair(0.71, 0.69)
    assert cables_from_dict(cables_to_dict(cables)) == cables


def test_scenario_json_is_plain_data(tmp_path):
    scenario = builtin_scenarios()["deploy-and-bend"]
    path = tmp_path / "scenario.json"
    save_scenario(scenario, path)
    data = json.loads(path.read_text())
    assert set(data) == {"name", "params", "initial", "dt_s", "segments", "checks"}
    assert data["segments"][0].keys() == {"duration_s", "rates"}
    assert set(data["segments"][0]["rates"]) == {"q1", "q2", "cL", "cR"}

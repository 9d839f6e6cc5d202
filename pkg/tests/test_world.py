"""World loading, movement, budgets, interactions, device effects, render
geometry, and goal checking, all against the compact test kitchen."""
from __future__ import annotations

import numpy as np
import pytest

from butler.session import oracle_feedback
from butler.world import (
    Action,
    TaskFormatError,
    TaskSpec,
    WorldFormatError,
    check_goals,
    inject_failure,
    load_task,
    load_world,
    masks_from_frame,
    render_frame,
    resolve_pixel,
    step_action,
)

from conftest import WORLDS_DIR, click, kitchen_dict, stand_facing, write_world


def _load(tmp_path, data, name="world.json"):
    return load_world(write_world(tmp_path, data, name))


# ------------------------------------------------------------------ loader

@pytest.mark.parametrize("name", ["kitchen_main", "kitchen_side",
                                  "adv_kitchen"])
def test_bundled_worlds_load(name):
    world = load_world(WORLDS_DIR / f"{name}.json")
    assert world.objects
    assert world.name == name
    i, j = world.cell_of(world.agent.x, world.agent.z)
    assert not world.blocked_cell(i, j)


def test_loader_builds_contents_in_file_order(kitchen_path):
    world = load_world(kitchen_path)
    assert world.objects["counter"].contents[:3] == [
        "knife", "coffee_machine", "bread"]
    assert world.objects["table"].capacity == 16
    assert world.objects["faucet"].controls == "sink_basin"


def test_loader_config_overrides(tmp_path):
    data = kitchen_dict()
    data.update(cell_m=0.5, camera_res=32, ceiling_height=3.0, slice_fanout=2)
    world = _load(tmp_path, data)
    assert world.config.cell_m == 0.5
    assert world.config.step_m == 0.5
    assert world.config.camera_res == 32
    assert world.config.ceiling_height == 3.0
    assert world.config.slice_fanout == 2


@pytest.mark.parametrize("mutate, match", [
    (lambda d: d.pop("schema_version"), "schema_version"),
    (lambda d: d["objects"].append(
        {"id": "x", "category": "Blob", "position": [1, 0, 1],
         "size": [0.1, 0.1, 0.1]}), "unknown category"),
    (lambda d: d["objects"].append(dict(d["objects"][3], id="knife")),
     "duplicate object id"),
    (lambda d: d["objects"][3].update(parent="ghost"), "unknown parent"),
    (lambda d: d["objects"][3].update(controls="ghost"), "controls unknown"),
    (lambda d: d["walls"].append([12, 0]), "out of bounds"),
    (lambda d: d["agent"].update(x=1.5, z=2.875), "spawn cell is blocked"),
    (lambda d: d["objects"][3].update(size=[1, 2]), "3-vectors"),
    (lambda d: d["objects"][3].pop("position"), "missing field"),
])
def test_loader_rejects_bad_worlds(tmp_path, mutate, match):
    data = kitchen_dict()
    mutate(data)
    with pytest.raises(WorldFormatError, match=match):
        _load(tmp_path, data)


# ---------------------------------------------------------------- movement

def test_forward_turn_and_wrap(kitchen_path):
    world = load_world(kitchen_path)
    assert step_action(world, Action("forward")).action_success
    assert (world.agent.x, world.agent.z) == (1.375, 1.625)
    step_action(world, Action("turn_left"))
    assert world.agent.yaw == 90
    assert step_action(world, Action("forward")).action_success
    assert (world.agent.x, world.agent.z) == (1.625, 1.625)
    for _ in range(3):
        step_action(world, Action("turn_right"))
    assert world.agent.yaw == 180
    assert step_action(world, Action("backward")).action_success
    assert world.agent.z == pytest.approx(1.875)


def test_blocked_move_costs_no_api_failure(kitchen_path):
    world = load_world(kitchen_path)
    world.agent.yaw = 270
    moved = 0
    while True:
        obs = step_action(world, Action("forward"))
        if not obs.action_success:
            break
        moved += 1
    assert obs.error_code == "blocked"
    assert obs.error_detail == "the path in that direction is blocked"
    assert world.api_failures == 0
    assert moved == 5
    assert world.agent.x == pytest.approx(0.125)


def test_pitch_clamps_as_successful_noop(kitchen_path):
    world = load_world(kitchen_path)
    for _ in range(3):
        obs = step_action(world, Action("look_up"))
    assert obs.action_success
    assert world.agent.pitch == -60
    steps = world.steps_taken
    obs = step_action(world, Action("look_up"))
    assert obs.action_success and world.agent.pitch == -60
    assert world.steps_taken == steps + 1


# ----------------------------------------------------------------- budgets

def test_step_budget_gates_everything(kitchen_path):
    world = load_world(kitchen_path)
    world.config.max_steps = 2
    assert step_action(world, Action("turn_left")).action_success
    assert step_action(world, Action("turn_left")).action_success
    obs = step_action(world, Action("turn_left"))
    assert obs.error_code == "budget_exhausted"
    assert obs.depth is None
    assert world.steps_taken == 2
    assert world.agent.yaw == 180
    obs = step_action(world, Action("pickup", u=1, v=1))
    assert obs.error_code == "budget_exhausted"


def test_api_failure_budget(kitchen_path):
    world = load_world(kitchen_path)
    world.config.max_api_failures = 1
    world.agent.pitch = -60
    obs = step_action(world, Action("pickup", u=0, v=0))
    assert obs.error_code == "not_visible"
    assert obs.error_detail == "no object at the selected pixel"
    assert world.api_failures == 1
    obs = step_action(world, Action("turn_left"))
    assert obs.error_code == "budget_exhausted"


# ------------------------------------------------------------ interactions

def test_pickup_and_place(kitchen_path):
    world = load_world(kitchen_path)
    stand_facing(world, "tomato")
    assert click(world, "tomato", "pickup").action_success
    assert world.agent.holding == "tomato"
    tomato = world.objects["tomato"]
    assert tomato.parent is None
    assert "tomato" not in world.objects["counter"].contents
    assert "tomato" not in render_frame(world).object_ids

    stand_facing(world, "plate")
    assert click(world, "plate", "place").action_success
    assert world.agent.holding is None
    assert tomato.parent == "plate"
    assert world.objects["plate"].contents == ["tomato"]
    plate = world.objects["plate"]
    top = plate.position[1] + plate.size[1] / 2
    np.testing.assert_allclose(
        tomato.position,
        [plate.position[0], top + tomato.size[1] / 2, plate.position[2]])


def test_pickup_failures(kitchen_path):
    world = load_world(kitchen_path)
    stand_facing(world, "tomato", dist=2.2)
    obs = click(world, "tomato", "pickup")
    assert obs.error_code == "too_far"
    assert obs.error_detail.startswith("Tomato is ")
    assert obs.error_detail.endswith("m away")

    stand_facing(world, "counter")
    obs = click(world, "counter", "pickup")
    assert obs.error_code == "affordance"
    assert obs.error_detail == "CounterTop cannot be picked up"

    stand_facing(world, "tomato")
    click(world, "tomato", "pickup")
    stand_facing(world, "apple")
    obs = click(world, "apple", "pickup")
    assert obs.error_code == "hand_occupied"


def test_place_failures(tmp_path):
    data = kitchen_dict()
    for obj in data["objects"]:
        if obj["id"] == "sink_basin":
            obj["capacity"] = 1
    data["objects"].append(
        {"id": "apple2", "category": "Apple", "parent": "sink_basin",
         "position": [2.875, 0.99, 1.875], "size": [0.08, 0.08, 0.08]})
    world = _load(tmp_path, data)

    stand_facing(world, "plate")
    obs = click(world, "plate", "place")
    assert obs.error_code == "hand_empty"

    stand_facing(world, "tomato")
    click(world, "tomato", "pickup")
    stand_facing(world, "knife")
    obs = click(world, "knife", "place")
    assert obs.error_code == "affordance"
    assert obs.error_detail == "Knife is not a receptacle"

    stand_facing(world, "microwave")
    obs = click(world, "microwave", "place")
    assert obs.error_code == "affordance"
    assert obs.error_detail == "Microwave is closed"

    stand_facing(world, "sink_basin")
    obs = click(world, "sink_basin", "place")
    assert obs.error_code == "receptacle_full"
    assert obs.error_detail == "SinkBasin is full"


def test_open_close_and_hidden_contents(kitchen_path):
    world = load_world(kitchen_path)
    stand_facing(world, "fridge")
    assert "egg" not in render_frame(world).object_ids
    assert world.is_hidden(world.objects["egg"])

    assert click(world, "fridge", "open").action_success
    assert world.objects["fridge"].open
    assert "egg" in render_frame(world).object_ids

    obs = click(world, "fridge", "open")
    assert obs.error_code == "affordance"
    assert obs.error_detail == "Fridge is already open"

    assert click(world, "fridge", "close").action_success
    obs = click(world, "fridge", "close")
    assert obs.error_detail == "Fridge is already closed"

    stand_facing(world, "table")
    obs = click(world, "table", "open")
    assert obs.error_code == "affordance"
    assert obs.error_detail == "DiningTable cannot be opened"


def _devices_world(tmp_path):
    data = kitchen_dict()
    data["objects"] += [
        {"id": "bslice", "category": "BreadSliced", "parent": "toaster",
         "position": [1.65, 1.105, 2.875], "size": [0.1, 0.05, 0.1]},
        {"id": "mug_cm", "category": "Mug", "parent": "coffee_machine",
         "position": [0.7, 1.2, 2.875], "size": [0.1, 0.1, 0.1]},
        {"id": "spud_pot", "category": "Potato", "parent": "pot",
         "position": [0.125, 0.985, 2.375], "size": [0.07, 0.07, 0.07]},
        {"id": "bowl", "category": "Bowl", "parent": "microwave",
         "position": [2.3, 1.29, 2.875], "size": [0.15, 0.08, 0.15]},
        {"id": "spud_bowl", "category": "Potato", "parent": "bowl",
         "position": [2.3, 1.36, 2.875], "size": [0.07, 0.07, 0.07]},
        {"id": "mpotato", "category": "Potato", "parent": "microwave",
         "position": [2.5, 1.285, 2.875], "size": [0.07, 0.07, 0.07]},
    ]
    return _load(tmp_path, data, "devices.json")


def test_toaster_and_coffee_machine(tmp_path):
    world = _devices_world(tmp_path)
    stand_facing(world, "toaster")
    assert click(world, "toaster", "toggle_on").action_success
    assert world.objects["bslice"].toasted
    obs = click(world, "toaster", "toggle_on")
    assert obs.error_detail == "Toaster is already on"
    assert click(world, "toaster", "toggle_off").action_success
    obs = click(world, "toaster", "toggle_off")
    assert obs.error_detail == "Toaster is already off"

    stand_facing(world, "coffee_machine")
    assert click(world, "coffee_machine", "toggle_on").action_success
    assert world.objects["mug_cm"].filled_with == "coffee"


def test_stove_knob_links_to_nearest_burner(tmp_path):
    world = _devices_world(tmp_path)
    assert world.objects["knob"].controls is None
    stand_facing(world, "knob")
    assert click(world, "knob", "toggle_on").action_success
    assert world.objects["stove"].powered
    assert world.objects["spud_pot"].cooked
    assert click(world, "knob", "toggle_off").action_success
    assert not world.objects["stove"].powered


def test_microwave_cooks_one_nesting_level(tmp_path):
    world = _devices_world(tmp_path)
    stand_facing(world, "microwave")
    assert click(world, "microwave", "toggle_on").action_success
    assert world.objects["mpotato"].cooked
    assert world.objects["spud_bowl"].cooked
    click(world, "microwave", "toggle_off")
    assert click(world, "microwave", "open").action_success
    obs = click(world, "microwave", "toggle_on")
    assert obs.error_code == "affordance"
    assert obs.error_detail == "the microwave door is open"


def test_faucet_cleans_and_fills_basin_contents(kitchen_path):
    world = load_world(kitchen_path)
    assert not world.objects["mug"].clean
    stand_facing(world, "mug")
    assert click(world, "mug", "pickup").action_success
    stand_facing(world, "sink_basin")
    assert click(world, "sink_basin", "place").action_success
    assert world.objects["mug"].parent == "sink_basin"
    assert click(world, "faucet", "toggle_on").action_success
    mug = world.objects["mug"]
    assert mug.clean
    assert mug.filled_with == "water"


def test_slice_fans_out_products(kitchen_path):
    world = load_world(kitchen_path)
    stand_facing(world, "knife")
    click(world, "knife", "pickup")
    stand_facing(world, "bread")
    assert click(world, "bread", "slice").action_success

    assert "bread" not in world.objects
    children = [o for o in world.objects.values()
                if o.category == "BreadSliced"]
    assert len(children) == 4
    assert {c.id for c in children} == {f"BreadSliced_auto{k}"
                                       for k in range(1, 5)}
    spacing = max(0.05, 0.22 * 0.3)
    xs = sorted(float(c.position[0]) for c in children)
    np.testing.assert_allclose(
        xs, [1.0 + (k - 1.5) * spacing for k in range(4)], atol=1e-12)
    for child in children:
        assert child.parent == "counter"
        assert child.id in world.objects["counter"].contents
        assert child.sliced and child.clean and not child.cooked
        np.testing.assert_allclose(child.size, [0.11, 0.08, 0.07])
    assert "bread" not in world.objects["counter"].contents


def test_slice_failures(kitchen_path):
    world = load_world(kitchen_path)
    stand_facing(world, "bread")
    obs = click(world, "bread", "slice")
    assert obs.error_code == "hand_empty"
    assert obs.error_detail == "slicing requires holding a knife"

    stand_facing(world, "tomato")
    click(world, "tomato", "pickup")
    stand_facing(world, "bread")
    obs = click(world, "bread", "slice")
    assert obs.error_code == "affordance"
    assert obs.error_detail == "cannot slice with Tomato"

    stand_facing(world, "plate")
    obs = click(world, "plate", "slice")
    assert obs.error_detail == "Plate cannot be sliced"


def test_pour_transfer_and_discard(kitchen_path):
    world = load_world(kitchen_path)
    stand_facing(world, "mug")
    obs = click(world, "mug", "pour")
    assert obs.error_code == "hand_empty"

    click(world, "mug", "pickup")
    obs = click(world, "cup", "pour")
    assert obs.error_code == "affordance"
    assert obs.error_detail == "the held Mug is empty"

    stand_facing(world, "sink_basin")
    click(world, "sink_basin", "place")
    click(world, "faucet", "toggle_on")
    click(world, "mug", "pickup")
    stand_facing(world, "cup")
    assert click(world, "cup", "pour").action_success
    assert world.objects["cup"].filled_with == "water"
    assert world.objects["mug"].filled_with is None

    stand_facing(world, "plate")
    click(world, "plate", "place")
    stand_facing(world, "cup")
    click(world, "cup", "pickup")
    stand_facing(world, "garbage")
    assert click(world, "garbage", "pour").action_success
    assert world.objects["cup"].filled_with is None


def test_injected_failure_is_one_shot(kitchen_path):
    world = load_world(kitchen_path)
    inject_failure(world, "tomato", "blocked")
    stand_facing(world, "tomato")
    obs = click(world, "tomato", "pickup")
    assert obs.error_code == "blocked"
    assert obs.error_detail == "injected failure"
    assert world.api_failures == 1
    assert click(world, "tomato", "pickup").action_success


# ------------------------------------------------------------------ render

def test_depth_at_center_matches_box_face(kitchen_path):
    world = load_world(kitchen_path)
    world.agent.x, world.agent.z = 1.125, 1.875
    world.agent.yaw, world.agent.pitch = 270, 0
    frame = render_frame(world)
    fridge = world.objects["fridge"]
    face_x = fridge.position[0] + fridge.size[0] / 2
    expected = world.agent.x - face_x
    res = world.config.camera_res
    assert abs(frame.depth[res // 2, res // 2] - expected) < 1e-9


def test_masks_and_resolve_pixel_agree(kitchen_path):
    world = load_world(kitchen_path)
    stand_facing(world, "tomato")
    frame = render_frame(world)
    masks = masks_from_frame(world, frame)
    assert masks
    for det in masks:
        v, u = np.argwhere(det.mask)[0]
        assert resolve_pixel(world, frame, int(u), int(v)).id == det.object_id
    assert resolve_pixel(world, frame, -1, 0) is None


def test_render_cache_keyed_on_state_and_pose(kitchen_path):
    world = load_world(kitchen_path)
    first = render_frame(world)
    assert render_frame(world) is first
    step_action(world, Action("turn_left"))
    second = render_frame(world)
    assert second is not first
    world.agent.yaw = (world.agent.yaw + 270) % 360
    assert render_frame(world) is not second


# ------------------------------------------------------------------- goals

def _task(goals: list[dict]) -> TaskSpec:
    return load_task({"task_id": "t", "goals": goals})


def test_check_goals_counts_and_caps(kitchen_path):
    world = load_world(kitchen_path)
    report = check_goals(world, _task([{"category": "Mug", "count": 2}]))
    assert not report.success
    assert report.gc_met == 1 and report.gc_total == 2

    report = check_goals(world, _task([{"category": "Potato", "count": 1},
                                       {"category": "Apple", "count": 1}]))
    assert report.success
    assert report.gc_met == 2


def test_check_goals_state_and_container(tmp_path):
    world = _devices_world(tmp_path)
    spec = _task([{"category": "BreadSliced", "state": {"toasted": True},
                   "container_category": "Toaster"}])
    assert not check_goals(world, spec).success
    stand_facing(world, "toaster")
    click(world, "toaster", "toggle_on")
    assert check_goals(world, spec).success

    wrong_container = _task([{"category": "BreadSliced",
                              "container_category": "Fridge"}])
    assert not check_goals(world, wrong_container).success


def test_load_task_rejects_bad_specs():
    with pytest.raises(TaskFormatError, match="unknown state keys"):
        load_task({"task_id": "t",
                   "goals": [{"category": "Mug", "state": {"shiny": True}}]})
    with pytest.raises(TaskFormatError, match="no goals"):
        load_task({"task_id": "t", "goals": []})
    with pytest.raises(TaskFormatError, match="schema_version"):
        load_task({"task_id": "t", "schema_version": 99,
                   "goals": [{"category": "Mug"}]})


def test_oracle_feedback_sentences(kitchen_path):
    world = load_world(kitchen_path)
    spec = _task([
        {"category": "Mug", "state": {"filled_with": "coffee"},
         "subtask": "fill the mug",
         "desired": "it should be filled with coffee"},
        {"category": "Plate", "count": 1},
    ])
    report = check_goals(world, spec)
    assert oracle_feedback(report) == (
        "You failed to complete the subtask: fill the mug. "
        "For the object Mug: it should be filled with coffee."
    )
    done = check_goals(world, _task([{"category": "Plate"}]))
    assert oracle_feedback(done) == ""

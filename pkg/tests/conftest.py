"""Shared fixtures: a compact kitchen world and helpers for driving it.

The kitchen is deliberately small (12x12 cells, 3 m square, 96 px camera)
so full perceive-act loops stay fast. Furniture hugs the walls; footprints
are sized to cover exactly the intended grid cells.
"""
from __future__ import annotations

import copy
import json
from pathlib import Path

import numpy as np
import pytest

from butler.executor.navigation import pitch_facing, yaw_facing
from butler.planner.backends import ScriptedBackend
from butler.resources import data_path
from butler.world.render import render_frame
from butler.world.sim import step_action
from butler.world.state import Action, WorldState

WORLDS_DIR = data_path("worlds")
EPISODES_DIR = data_path("episodes")
ADVERSARIAL_DIR = data_path("episodes_adversarial")
FEEDBACK_DIR = data_path("episodes_feedback")
BACKENDS_DIR = data_path("backends")
EXEMPLARS_DIR = data_path("exemplars")


_KITCHEN = {
    "schema_version": 1,
    "name": "test_kitchen",
    "width": 12,
    "height": 12,
    "camera_res": 96,
    "agent": {"x": 1.375, "z": 1.375, "yaw": 0, "pitch": 0},
    "walls": [],
    "objects": [
        {"id": "counter", "category": "CounterTop", "capacity": 20,
         "position": [1.5, 0.45, 2.875], "size": [2.9, 0.9, 0.2]},
        {"id": "knife", "category": "Knife", "parent": "counter",
         "position": [0.4, 0.915, 2.875], "size": [0.28, 0.03, 0.04]},
        {"id": "coffee_machine", "category": "CoffeeMachine", "parent": "counter",
         "position": [0.7, 1.025, 2.875], "size": [0.2, 0.25, 0.2]},
        {"id": "bread", "category": "Bread", "parent": "counter",
         "position": [1.0, 0.95, 2.875], "size": [0.22, 0.1, 0.14]},
        {"id": "tomato", "category": "Tomato", "parent": "counter",
         "position": [1.3, 0.94, 2.875], "size": [0.08, 0.08, 0.08]},
        {"id": "toaster", "category": "Toaster", "parent": "counter",
         "position": [1.65, 0.99, 2.875], "size": [0.18, 0.18, 0.18]},
        {"id": "apple", "category": "Apple", "parent": "counter",
         "position": [1.95, 0.94, 2.875], "size": [0.08, 0.08, 0.08]},
        {"id": "microwave", "category": "Microwave", "parent": "counter",
         "position": [2.4, 1.075, 2.875], "size": [0.4, 0.35, 0.35]},
        {"id": "stove", "category": "StoveBurner",
         "position": [0.125, 0.4, 2.375], "size": [0.22, 0.8, 0.22]},
        {"id": "pot", "category": "Pot", "parent": "stove",
         "position": [0.125, 0.875, 2.375], "size": [0.18, 0.15, 0.18]},
        {"id": "knob", "category": "StoveKnob", "parent": "stove",
         "position": [0.26, 0.85, 2.375], "size": [0.04, 0.06, 0.04]},
        {"id": "fridge", "category": "Fridge",
         "position": [0.125, 0.7, 1.875], "size": [0.22, 1.4, 0.44]},
        {"id": "egg", "category": "Egg", "parent": "fridge",
         "position": [0.125, 1.46, 1.875], "size": [0.1, 0.12, 0.1]},
        {"id": "sink", "category": "Sink",
         "position": [2.875, 0.45, 1.875], "size": [0.2, 0.9, 0.4]},
        {"id": "sink_basin", "category": "SinkBasin", "parent": "sink",
         "capacity": 6,
         "position": [2.875, 0.925, 1.875], "size": [0.18, 0.05, 0.3]},
        {"id": "faucet", "category": "Faucet", "parent": "sink",
         "controls": "sink_basin",
         "position": [2.94, 1.0, 1.875], "size": [0.04, 0.2, 0.04]},
        {"id": "garbage", "category": "GarbageCan",
         "position": [2.875, 0.25, 0.625], "size": [0.3, 0.5, 0.3]},
        {"id": "table", "category": "DiningTable", "capacity": 16,
         "position": [1.5, 0.35, 0.125], "size": [1.9, 0.7, 0.2]},
        {"id": "plate", "category": "Plate", "parent": "table",
         "position": [0.9, 0.715, 0.125], "size": [0.2, 0.03, 0.2]},
        {"id": "mug", "category": "Mug", "parent": "table", "clean": False,
         "position": [1.3, 0.75, 0.125], "size": [0.1, 0.1, 0.1]},
        {"id": "cup", "category": "Cup", "parent": "table",
         "position": [1.7, 0.75, 0.125], "size": [0.08, 0.1, 0.08]},
        {"id": "potato", "category": "Potato", "parent": "table",
         "position": [2.1, 0.735, 0.125], "size": [0.07, 0.07, 0.07]},
    ],
}


def kitchen_dict() -> dict:
    """A fresh copy of the test kitchen, safe to mutate per test."""
    return copy.deepcopy(_KITCHEN)


def write_world(tmp_path: Path, data: dict, name: str = "world.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


@pytest.fixture
def kitchen_path(tmp_path) -> Path:
    return write_world(tmp_path, kitchen_dict())


def stand_facing(world: WorldState, object_id: str, dist: float = 0.8) -> None:
    """Teleport the agent to the free cell closest to `dist` meters from the
    object and aim the camera at it. Only for direct-sim tests; sessions
    must move through their own actions to keep dead reckoning honest."""
    obj = world.objects[object_id]
    best = None
    for i in range(world.width):
        for j in range(world.height):
            if world.blocked_cell(i, j):
                continue
            x, z = world.cell_center(i, j)
            d = obj.horizontal_distance_to(x, z)
            key = (abs(d - dist), i, j)
            if best is None or key < best[0]:
                best = (key, x, z)
    assert best is not None, f"no free cell near {object_id}"
    _, x, z = best
    world.agent.x = x
    world.agent.z = z
    world.agent.yaw = yaw_facing(x, z, float(obj.position[0]),
                                 float(obj.position[2]))
    horiz = obj.horizontal_distance_to(x, z)
    world.agent.pitch = pitch_facing(world.config.camera_height,
                                     float(obj.position[1]), max(horiz, 0.2))


def click(world: WorldState, object_id: str, kind: str):
    """Issue an interaction aimed at a visible pixel of the object, trying a
    few pitches if it is outside the current view."""
    start_pitch = world.agent.pitch
    for pitch in dict.fromkeys((start_pitch, 0, 30, 60, -30)):
        world.agent.pitch = pitch
        frame = render_frame(world)
        if object_id not in frame.object_ids:
            continue
        idx = frame.object_ids.index(object_id)
        pixels = np.argwhere(frame.idbuf == idx)
        if len(pixels) == 0:
            continue
        center = pixels.mean(axis=0)
        v, u = pixels[np.argmin(np.abs(pixels - center).sum(axis=1))]
        return step_action(world, Action(kind, u=int(u), v=int(v)))
    raise AssertionError(f"{object_id} not visible from the current pose")


def scripted(tmp_path: Path, records: list[dict],
             name: str = "fixture.json") -> ScriptedBackend:
    path = tmp_path / name
    path.write_text(json.dumps({"schema_version": 1, "records": records}))
    return ScriptedBackend(path)

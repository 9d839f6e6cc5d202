"""Rebuild the bundled worlds, episode suites, backend fixtures, and seed
memory, then verify every suite end to end.

Run from the repository root:

    python3 scripts/gen_fixtures.py

Each episode is executed once and its measured step count is written back as
reference_path_length, so a clean rerun scores a path-length weight of
exactly 1. The script fails loudly when a suite misbehaves (an oracle episode
missing its goals, an ablation gap collapsing, a personalization request
retrieving the wrong routine), so it doubles as a fixture regression check.
"""
from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from butler.dsl import parse_program, validate_program
from butler.dsl.program import render_program
from butler.memory.embedding import HashEmbedder
from butler.memory.store import KIND_CORRECTION, KIND_PLAN, MemoryStore
from butler.planner.backends import ScriptedBackend
from butler.planner.dialogue import Dialogue
from butler.planner.planner import Planner
from butler.resources import data_path
from butler.session.episodes import (
    EpisodeRunConfig,
    load_episode,
    run_episode,
    store_personal_plan,
)
from butler.world.loader import load_world
from butler.world.sim import Action, step_action

DATA = ROOT / "src" / "butler" / "data"
CREATED_AT = 1_700_000_000.0

# --------------------------------------------------------------- program text


def inst(handle: str, category: str, landmark: str | None = None,
         attributes: tuple[str, ...] = ()) -> str:
    parts = [f'"{category}"']
    if landmark:
        parts.append(f'landmark = "{landmark}"')
    if attributes:
        attrs = ", ".join(f'"{a}"' for a in attributes)
        parts.append(f"attributes = [{attrs}]")
    return f"{handle} = InteractionObject({', '.join(parts)})"


def call(handle: str, method: str, arg: str | None = None) -> str:
    return f"{handle}.{method}({arg or ''})"


def prog(*lines) -> str:
    flat: list[str] = []
    for entry in lines:
        if isinstance(entry, str):
            flat.append(entry)
        else:
            flat.extend(entry)
    text = "\n".join(flat)
    program = parse_program(text, strict=True)
    bad = validate_program(program)
    if bad:
        raise SystemExit(f"generated program has violations: {bad}\n{text}")
    return text


def fetch_knife() -> list[str]:
    return [inst("target_knife", "Knife"),
            call("target_knife", "go_to"),
            call("target_knife", "pickup")]


def slice_target(name: str, category: str,
                 landmark: str | None = None) -> list[str]:
    h = f"target_{name}"
    return [inst(h, category, landmark),
            call(h, "go_to"),
            call(h, "slice")]


def place_n(category: str, n: int, dest: str, prefix: str,
            attributes: tuple[str, ...] = ()) -> list[str]:
    lines = []
    for i in range(1, n + 1):
        h = f"target_{prefix}{i}"
        lines.append(inst(h, category, None, attributes))
        lines.append(call(h, "pickup_and_place", dest))
    return lines


def toast_n(n: int, dest: str) -> list[str]:
    lines = []
    for i in range(1, n + 1):
        h = f"target_toast{i}"
        lines.append(inst(h, "BreadSliced", None, ("toasted",)))
        lines.append(call(h, "toast"))
        lines.append(call(h, "pickup_and_place", dest))
    return lines


def clean_and_stow(handle: str, category: str, idx: str = "") -> list[str]:
    h = f"target_{handle}{idx}"
    return [inst(h, category, None, ("clean",)),
            call(h, "clean"),
            call(h, "put_down")]


# -------------------------------------------------------------------- worlds


def wobj(oid: str, category: str, x: float, y: float, z: float,
         w: float, h: float, d: float, **attrs) -> dict:
    row = {"id": oid, "category": category,
           "position": [round(x, 4), round(y, 4), round(z, 4)],
           "size": [w, h, d]}
    row.update(attrs)
    return row


def on_top(base: dict, oid: str, category: str, x: float, z: float,
           w: float, h: float, d: float, **attrs) -> dict:
    top = base["position"][1] + base["size"][1] / 2.0
    return wobj(oid, category, x, top + h / 2.0, z, w, h, d,
                parent=base["id"], **attrs)


def spawn(i: int, j: int, yaw: int = 0) -> dict:
    return {"x": (i + 0.5) * 0.25, "z": (j + 0.5) * 0.25,
            "yaw": yaw, "pitch": 0}


def kitchen_main() -> dict:
    # Slicing multiplies counter contents, so work surfaces need headroom
    # over the default capacity of 8.
    counter = wobj("counter", "CounterTop", 1.9, 0.45, 3.75, 3.0, 0.9, 0.5,
                   capacity=24)
    counter_e = wobj("counter_e", "CounterTop", 3.75, 0.45, 2.0, 0.5, 0.9, 2.4,
                     capacity=16)
    sink = wobj("sink", "Sink", 0.25, 0.45, 2.4, 0.5, 0.9, 0.9)
    basin = on_top(sink, "sink_basin", "SinkBasin", 0.27, 2.4, 0.4, 0.12, 0.6)
    table = wobj("dining_table", "DiningTable", 2.0, 0.35, 0.6, 1.4, 0.7, 0.7,
                 capacity=16)
    burner = on_top(counter_e, "stove_burner", "StoveBurner",
                    3.76, 1.5, 0.4, 0.06, 0.4)
    objects = [
        counter, counter_e, sink, basin,
        on_top(sink, "faucet", "Faucet", 0.08, 2.4, 0.06, 0.25, 0.06,
               controls="sink_basin"),
        wobj("fridge", "Fridge", 0.4, 0.9, 0.5, 0.7, 1.8, 0.7),
        table,
        wobj("garbage", "GarbageCan", 3.35, 0.25, 0.3, 0.35, 0.5, 0.35),
        on_top(counter, "apple", "Apple", 0.7, 3.7, 0.12, 0.12, 0.12),
        on_top(counter, "bread", "Bread", 1.1, 3.7, 0.25, 0.15, 0.15),
        on_top(counter, "knife", "Knife", 1.6, 3.73, 0.3, 0.08, 0.08),
        on_top(counter, "tomato", "Tomato", 2.0, 3.7, 0.12, 0.12, 0.12),
        on_top(counter, "lettuce", "Lettuce", 2.35, 3.7, 0.18, 0.15, 0.18),
        on_top(counter, "salt", "SaltShaker", 2.7, 3.7, 0.08, 0.15, 0.08),
        on_top(counter, "toaster", "Toaster", 3.15, 3.7, 0.3, 0.25, 0.28),
        on_top(counter_e, "coffee_machine", "CoffeeMachine",
               3.75, 2.9, 0.35, 0.35, 0.35),
        on_top(counter_e, "microwave", "Microwave",
               3.75, 2.2, 0.45, 0.35, 0.45),
        burner,
        on_top(burner, "pan", "Pan", 3.76, 1.5, 0.34, 0.1, 0.34),
        on_top(counter_e, "stove_knob", "StoveKnob", 3.62, 1.12,
               0.07, 0.07, 0.07, controls="stove_burner"),
        on_top(table, "plate_clean", "Plate", 1.6, 0.55, 0.28, 0.05, 0.28),
        on_top(table, "plate_dirty", "Plate", 2.5, 0.55, 0.28, 0.05, 0.28,
               clean=False),
        on_top(table, "mug", "Mug", 2.0, 0.42, 0.12, 0.15, 0.12, clean=False),
        on_top(table, "bowl", "Bowl", 2.0, 0.78, 0.22, 0.1, 0.22, clean=False),
    ]
    return {"schema_version": 1, "name": "kitchen_main", "width": 16,
            "height": 16, "camera_res": 120, "agent": spawn(7, 7),
            "objects": objects}


def kitchen_side() -> dict:
    counter = wobj("counter", "CounterTop", 1.75, 0.45, 3.25, 2.7, 0.9, 0.5,
                   capacity=24)
    sink = wobj("sink", "Sink", 3.2, 0.45, 1.6, 0.5, 0.9, 0.8)
    basin = on_top(sink, "sink_basin", "SinkBasin", 3.18, 1.6, 0.4, 0.12, 0.55)
    side = wobj("side_table", "SideTable", 0.35, 0.3, 2.3, 0.65, 0.6, 0.6,
                capacity=12)
    table = wobj("dining_table", "DiningTable", 2.5, 0.35, 0.5, 1.1, 0.7, 0.65,
                 capacity=16)
    objects = [
        counter, sink, basin,
        on_top(sink, "faucet", "Faucet", 3.42, 1.6, 0.06, 0.25, 0.06,
               controls="sink_basin"),
        side, table,
        on_top(counter, "knife", "Knife", 0.7, 3.22, 0.3, 0.08, 0.08),
        on_top(counter, "apple", "Apple", 1.1, 3.2, 0.12, 0.12, 0.12),
        on_top(counter, "tomato", "Tomato", 1.5, 3.2, 0.12, 0.12, 0.12),
        on_top(counter, "lettuce", "Lettuce", 1.9, 3.2, 0.18, 0.15, 0.18),
        on_top(counter, "bread", "Bread", 2.4, 3.2, 0.25, 0.15, 0.15),
        on_top(side, "microwave", "Microwave", 0.33, 2.18, 0.42, 0.35, 0.42),
        on_top(side, "potato", "Potato", 0.42, 2.52, 0.12, 0.1, 0.12),
        on_top(table, "plate", "Plate", 2.2, 0.45, 0.28, 0.05, 0.28),
        on_top(table, "bowl", "Bowl", 2.75, 0.45, 0.22, 0.1, 0.22),
        on_top(table, "cup", "Cup", 2.5, 0.7, 0.1, 0.14, 0.1),
    ]
    walls = [[6, j] for j in range(4, 10)]
    return {"schema_version": 1, "name": "kitchen_side", "width": 14,
            "height": 14, "camera_res": 120, "agent": spawn(2, 2),
            "walls": walls, "objects": objects}


def adv_kitchen() -> dict:
    counter = wobj("counter", "CounterTop", 1.5, 0.45, 2.75, 2.6, 0.9, 0.5,
                   capacity=24)
    # Compact fridge: contents sit on the top face, and 1.4m keeps them
    # near camera height instead of above it.
    fridge = wobj("fridge", "Fridge", 2.65, 0.7, 1.5, 0.6, 1.4, 0.6)
    cabinet = wobj("cabinet", "Cabinet", 0.35, 0.45, 1.55, 0.6, 0.9, 0.5)
    sink = wobj("sink", "Sink", 0.3, 0.45, 0.45, 0.6, 0.9, 0.7)
    basin = on_top(sink, "sink_basin", "SinkBasin", 0.3, 0.45, 0.45, 0.12, 0.5)
    side = wobj("side_table", "SideTable", 0.35, 0.3, 2.2, 0.6, 0.6, 0.5,
                capacity=12)
    table = wobj("dining_table", "DiningTable", 2.15, 0.35, 0.5, 1.0, 0.7, 0.6,
                 capacity=16)
    objects = [
        counter, fridge, cabinet, sink, basin, side, table,
        on_top(sink, "faucet", "Faucet", 0.08, 0.45, 0.06, 0.25, 0.06,
               controls="sink_basin"),
        on_top(counter, "knife", "Knife", 0.45, 2.72, 0.3, 0.08, 0.08),
        on_top(counter, "salt", "SaltShaker", 0.75, 2.7, 0.08, 0.15, 0.08),
        on_top(counter, "apple", "Apple", 1.05, 2.7, 0.12, 0.12, 0.12),
        on_top(counter, "tomato", "Tomato", 1.35, 2.7, 0.12, 0.12, 0.12),
        on_top(counter, "lettuce", "Lettuce", 1.7, 2.7, 0.18, 0.15, 0.18),
        on_top(counter, "bread", "Bread", 2.1, 2.7, 0.25, 0.15, 0.15),
        on_top(counter, "toaster", "Toaster", 2.55, 2.7, 0.3, 0.25, 0.28),
        on_top(fridge, "egg", "Egg", 2.6, 1.5, 0.1, 0.12, 0.1),
        on_top(cabinet, "cup", "Cup", 0.35, 1.5, 0.1, 0.14, 0.1),
        on_top(basin, "mug", "Mug", 0.3, 0.42, 0.12, 0.15, 0.12, clean=False),
        on_top(side, "microwave", "Microwave", 0.33, 2.1, 0.4, 0.35, 0.4),
        on_top(side, "potato", "Potato", 0.42, 2.38, 0.12, 0.1, 0.12),
    ]
    return {"schema_version": 1, "name": "adv_kitchen", "width": 12,
            "height": 12, "camera_res": 96, "agent": spawn(5, 4),
            "objects": objects}


# ------------------------------------------------------------------ episodes


@dataclass
class EpDef:
    eid: str
    world: str
    dialogue: list[list[str]]
    anchor: str                 # distinctive phrase from the dialogue
    plan: str
    goals: list[dict]
    description: str
    history: list[dict] = field(default_factory=list)
    inject: list[dict] = field(default_factory=list)
    # (failed-subgoal text, corrective response) pairs
    corrections: list[tuple[str, str]] = field(default_factory=list)
    feedback_plan: str | None = None
    locator: str | None = None

    def episode_json(self, ref: int = 1) -> dict:
        data = {
            "id": self.eid,
            "dialogue": self.dialogue,
            "world": f"../worlds/{self.world}.json",
            "task": {
                "task_id": self.eid,
                "description": self.description,
                "goals": self.goals,
            },
            "reference_path_length": ref,
        }
        if self.history:
            data["history_actions"] = self.history
        if self.inject:
            data["inject_failures"] = self.inject
        return data


def corrective(reason: str, method: str) -> str:
    return (f"Explain: {reason}\n"
            f"Plan (Python script):\n"
            f"{method}()")


def oracle_episodes() -> list[EpDef]:
    eps = []
    eps.append(EpDef(
        eid="ep_coffee", world="kitchen_main",
        dialogue=[["Driver", "hi, what should i do today?"],
                  ["Commander", "prepare a mug of coffee"],
                  ["Commander",
                   "the mug is on the dining table, give it a rinse first"]],
        anchor="prepare a mug of coffee",
        plan=prog(
            inst("target_mug", "Mug", "DiningTable", ("clean",)),
            call("target_mug", "clean"),
            inst("target_sink", "SinkBasin"),
            call("target_mug", "pour", "target_sink"),
            inst("target_coffeemachine", "CoffeeMachine"),
            call("target_mug", "pickup_and_place", "target_coffeemachine"),
            call("target_coffeemachine", "toggle_on"),
            call("target_coffeemachine", "toggle_off"),
        ),
        goals=[{"category": "Mug",
                "state": {"clean": True, "filled_with": "coffee"},
                "subtask": "prepare coffee in a clean mug",
                "desired": "it should be clean and filled with coffee"}],
        description="Prepare coffee in a clean mug.",
    ))
    eps.append(EpDef(
        eid="ep_toast", world="kitchen_main",
        dialogue=[["Driver", "how can i help?"],
                  ["Commander", "make two slices of toast"],
                  ["Commander",
                   "put the toast on the clean plate on the dining table"]],
        anchor="make two slices of toast",
        plan=prog(
            inst("target_knife", "Knife", "CounterTop"),
            call("target_knife", "go_to"),
            call("target_knife", "pickup"),
            inst("target_bread", "Bread", "CounterTop"),
            call("target_bread", "go_to"),
            call("target_bread", "slice"),
            call("target_knife", "put_down"),
            inst("target_plate", "Plate", "DiningTable", ("clean",)),
            toast_n(2, "target_plate"),
        ),
        goals=[{"category": "BreadSliced", "count": 2,
                "state": {"toasted": True},
                "container_category": "Plate",
                "container_state": {"clean": True},
                "subtask": "serve two slices of toast on a clean plate",
                "desired": "it should be toasted and on a clean plate"}],
        description="Make two slices of toast on a clean plate.",
    ))
    eps.append(EpDef(
        eid="ep_sandwich", world="kitchen_main",
        dialogue=[["Driver", "what is my task?"],
                  ["Commander",
                   "make a sandwich: two slices of toast, a slice of tomato "
                   "and a slice of lettuce, all on the clean plate"]],
        anchor="make a sandwich",
        plan=prog(
            inst("target_knife", "Knife", "CounterTop"),
            call("target_knife", "go_to"),
            call("target_knife", "pickup"),
            slice_target("bread", "Bread", "CounterTop"),
            slice_target("tomato", "Tomato", "CounterTop"),
            slice_target("lettuce", "Lettuce", "CounterTop"),
            call("target_knife", "put_down"),
            inst("target_plate", "Plate", "DiningTable", ("clean",)),
            toast_n(2, "target_plate"),
            place_n("TomatoSliced", 1, "target_plate", "tomatosliced"),
            place_n("LettuceSliced", 1, "target_plate", "lettucesliced"),
        ),
        goals=[{"category": "BreadSliced", "count": 2,
                "state": {"toasted": True},
                "container_category": "Plate",
                "subtask": "put two slices of toast on the plate",
                "desired": "it should be toasted and on the plate"},
               {"category": "TomatoSliced",
                "container_category": "Plate",
                "subtask": "put a tomato slice on the plate",
                "desired": "it should be on the plate"},
               {"category": "LettuceSliced",
                "container_category": "Plate",
                "subtask": "put a lettuce slice on the plate",
                "desired": "it should be on the plate"}],
        description="Assemble a toast sandwich on the clean plate.",
    ))
    eps.append(EpDef(
        eid="ep_salad", world="kitchen_side",
        dialogue=[["Driver", "hi how can i help"],
                  ["Commander",
                   "make a salad with a slice of lettuce, a slice of tomato "
                   "and two slices of cooked potato"],
                  ["Commander", "put everything on the plate on the table"]],
        anchor="make a salad",
        plan=prog(
            inst("target_knife", "Knife", "CounterTop"),
            call("target_knife", "go_to"),
            call("target_knife", "pickup"),
            slice_target("lettuce", "Lettuce", "CounterTop"),
            slice_target("tomato", "Tomato", "CounterTop"),
            slice_target("potato", "Potato", "SideTable"),
            call("target_knife", "put_down"),
            inst("target_plate", "Plate", "DiningTable"),
            inst("target_potato1", "PotatoSliced", None, ("cooked",)),
            call("target_potato1", "cook"),
            call("target_potato1", "pickup_and_place", "target_plate"),
            inst("target_potato2", "PotatoSliced", None, ("cooked",)),
            call("target_potato2", "cook"),
            call("target_potato2", "pickup_and_place", "target_plate"),
            place_n("LettuceSliced", 1, "target_plate", "lettucesliced"),
            place_n("TomatoSliced", 1, "target_plate", "tomatosliced"),
        ),
        goals=[{"category": "PotatoSliced", "count": 2,
                "state": {"cooked": True},
                "container_category": "Plate",
                "subtask": "put two cooked potato slices on the plate",
                "desired": "it should be cooked and on the plate"},
               {"category": "LettuceSliced",
                "container_category": "Plate",
                "subtask": "put a lettuce slice on the plate",
                "desired": "it should be on the plate"},
               {"category": "TomatoSliced",
                "container_category": "Plate",
                "subtask": "put a tomato slice on the plate",
                "desired": "it should be on the plate"}],
        description="Salad with cooked potato on a plate.",
    ))
    eps.append(EpDef(
        eid="ep_place_salt", world="kitchen_main",
        dialogue=[["Commander", "put the salt shaker on the dining table"]],
        anchor="salt shaker",
        plan=prog(
            inst("target_saltshaker", "SaltShaker", "CounterTop"),
            inst("target_diningtable", "DiningTable"),
            call("target_saltshaker", "pickup_and_place",
                 "target_diningtable"),
        ),
        goals=[{"category": "SaltShaker",
                "container_category": "DiningTable",
                "subtask": "put the salt shaker on the dining table",
                "desired": "it should be on the dining table"}],
        description="Move the salt shaker to the dining table.",
    ))
    eps.append(EpDef(
        eid="ep_clean_bowl", world="kitchen_main",
        dialogue=[["Commander",
                   "wash the bowl from the dining table and put it back"]],
        anchor="wash the bowl",
        plan=prog(
            inst("target_bowl", "Bowl", "DiningTable"),
            call("target_bowl", "clean"),
            inst("target_diningtable", "DiningTable"),
            call("target_bowl", "pickup_and_place", "target_diningtable"),
        ),
        goals=[{"category": "Bowl", "state": {"clean": True},
                "container_category": "DiningTable",
                "subtask": "clean the bowl and return it to the dining table",
                "desired": "it should be clean and on the dining table"}],
        description="Wash the bowl and put it back on the table.",
    ))
    eps.append(EpDef(
        eid="ep_fridge_apple", world="kitchen_main",
        dialogue=[["Commander", "put an apple in the fridge"]],
        anchor="apple in the fridge",
        plan=prog(
            inst("target_fridge", "Fridge"),
            call("target_fridge", "go_to"),
            call("target_fridge", "open"),
            inst("target_apple", "Apple", "CounterTop"),
            call("target_apple", "pickup_and_place", "target_fridge"),
            call("target_fridge", "close"),
        ),
        goals=[{"category": "Apple",
                "container_category": "Fridge",
                "subtask": "put an apple in the fridge",
                "desired": "it should be in the fridge"},
               {"category": "Fridge", "state": {"open": False},
                "subtask": "close the fridge",
                "desired": "it should be closed"}],
        description="Store an apple in the fridge.",
    ))
    eps.append(EpDef(
        eid="ep_cook_potato", world="kitchen_side",
        dialogue=[["Commander",
                   "cook the potato in the microwave and plate it"]],
        anchor="cook the potato",
        plan=prog(
            inst("target_potato", "Potato", None, ("cooked",)),
            call("target_potato", "cook"),
            inst("target_plate", "Plate", "DiningTable"),
            call("target_potato", "pickup_and_place", "target_plate"),
        ),
        goals=[{"category": "Potato", "state": {"cooked": True},
                "container_category": "Plate",
                "subtask": "cook the potato and put it on the plate",
                "desired": "it should be cooked and on the plate"}],
        description="Microwave the potato and plate it.",
        locator="answer: SideTable, CounterTop, DiningTable",
    ))
    eps.append(EpDef(
        eid="ep_fill_cup", world="kitchen_side",
        dialogue=[["Commander",
                   "fill the cup with water and put it on the table"]],
        anchor="fill the cup",
        plan=prog(
            inst("target_cup", "Cup", "DiningTable"),
            call("target_cup", "go_to"),
            call("target_cup", "pickup"),
            call("target_cup", "fill_up"),
            inst("target_diningtable", "DiningTable"),
            call("target_cup", "pickup_and_place", "target_diningtable"),
        ),
        goals=[{"category": "Cup", "state": {"filled_with": "water"},
                "container_category": "DiningTable",
                "subtask": "fill the cup with water and put it on the table",
                "desired": "it should be filled with water and on the table"}],
        description="Fill the cup with water.",
    ))
    eps.append(EpDef(
        eid="ep_slice_apple", world="kitchen_side",
        dialogue=[["Commander",
                   "slice the apple and put two pieces in the bowl"]],
        anchor="slice the apple",
        plan=prog(
            inst("target_knife", "Knife", "CounterTop"),
            call("target_knife", "go_to"),
            call("target_knife", "pickup"),
            slice_target("apple", "Apple", "CounterTop"),
            call("target_knife", "put_down"),
            inst("target_bowl", "Bowl", "DiningTable"),
            place_n("AppleSliced", 2, "target_bowl", "slice"),
        ),
        goals=[{"category": "AppleSliced", "count": 2,
                "container_category": "Bowl",
                "subtask": "put two apple slices in the bowl",
                "desired": "it should be in the bowl"}],
        description="Slice the apple into the bowl.",
    ))
    eps.append(EpDef(
        eid="ep_toast_edh", world="kitchen_main",
        dialogue=[["Driver", "what should i do?"],
                  ["Commander", "sliceic the bread and toast one slice"],
                  ["Commander", "the knife is already in your hand"],
                  ["Commander", "leave the toast on the counter"]],
        anchor="toast one slice",
        plan=prog(
            inst("target_bread", "Bread", "CounterTop"),
            call("target_bread", "go_to"),
            call("target_bread", "slice"),
            inst("target_knife", "Knife"),
            call("target_knife", "put_down"),
            inst("target_toast", "BreadSliced", None, ("toasted",)),
            call("target_toast", "toast"),
            inst("target_countertop", "CounterTop"),
            call("target_toast", "pickup_and_place", "target_countertop"),
        ),
        goals=[{"category": "BreadSliced", "state": {"toasted": True},
                "container_category": "CounterTop",
                "subtask": "toast a slice of bread",
                "desired": "it should be toasted and on the counter"}],
        description="Continue a session that already picked up the knife.",
        history=[],   # filled in by compute_edh_history
    ))
    return eps


def compute_edh_history() -> list[dict]:
    """Drive the spawn pose toward the counter and click the knife."""
    world = load_world(DATA / "worlds" / "kitchen_main.json")
    actions: list[dict] = []
    for _ in range(4):
        obs = step_action(world, Action("forward"))
        assert obs.action_success
        actions.append({"kind": "forward"})
    obs = step_action(world, Action("look_down"))
    assert obs.action_success
    actions.append({"kind": "look_down"})
    knife = next(d for d in obs.masks if d.object_id == "knife")
    vs, us = knife.mask.nonzero()
    u, v = int(us.mean()), int(vs.mean())
    if not knife.mask[v, u]:
        idx = len(us) // 2
        u, v = int(us[idx]), int(vs[idx])
    obs = step_action(world, Action("pickup", u=u, v=v))
    assert obs.action_success, obs.error_detail
    actions.append({"kind": "pickup", "u": u, "v": v})
    return actions


def adversarial_episodes() -> list[EpDef]:
    eps = []
    naked_slice = [
        ("apple", "Apple", "AppleSliced"),
        ("tomato", "Tomato", "TomatoSliced"),
        ("lettuce", "Lettuce", "LettuceSliced"),
        ("bread", "Bread", "BreadSliced"),
    ]
    for name, category, product in naked_slice:
        h = f"target_{name}"
        eps.append(EpDef(
            eid=f"adv_slice_{name}", world="adv_kitchen",
            dialogue=[["Commander", f"cut the {name} into pieces"]],
            anchor=f"cut the {name}",
            plan=prog(
                inst(h, category, "CounterTop"),
                call(h, "go_to"),
                call(h, "slice"),
            ),
            goals=[{"category": product, "count": 2,
                    "subtask": f"slice the {name}",
                    "desired": "it should be sliced"}],
            description=f"Slice the {name}; the plan forgets the knife.",
            corrections=[(f"{h}.slice()", corrective(
                "The slice action failed, so I will move closer to the "
                "target and try again.", "move_closer"))],
        ))
    eps.append(EpDef(
        eid="adv_fridge_egg", world="adv_kitchen",
        dialogue=[["Commander",
                   "get the egg from the fridge and put it on the dining "
                   "table"]],
        anchor="get the egg",
        plan=prog(
            inst("target_fridge", "Fridge"),
            call("target_fridge", "go_to"),
            call("target_fridge", "open"),
            inst("target_egg", "Egg", "Fridge"),
            inst("target_diningtable", "DiningTable"),
            call("target_egg", "pickup_and_place", "target_diningtable"),
            call("target_fridge", "close"),
        ),
        goals=[{"category": "Egg", "container_category": "DiningTable",
                "subtask": "put the egg on the dining table",
                "desired": "it should be on the dining table"}],
        description="Fetch the egg; the fridge jams once.",
        locator="answer: Fridge, DiningTable, CounterTop",
        inject=[{"object_id": "fridge", "error_code": "blocked"}],
        corrections=[("target_fridge.open()", corrective(
            "Something is blocking the fridge door, so I will approach "
            "from a different viewpoint and retry.",
            "move_alternate_viewpoint"))],
    ))
    eps.append(EpDef(
        eid="adv_cabinet_cup", world="adv_kitchen",
        dialogue=[["Commander",
                   "get the cup from the cabinet and put it on the dining "
                   "table"]],
        anchor="get the cup",
        plan=prog(
            inst("target_cabinet", "Cabinet"),
            call("target_cabinet", "go_to"),
            call("target_cabinet", "open"),
            inst("target_cup", "Cup", "Cabinet"),
            inst("target_diningtable", "DiningTable"),
            call("target_cup", "pickup_and_place", "target_diningtable"),
            call("target_cabinet", "close"),
        ),
        goals=[{"category": "Cup", "container_category": "DiningTable",
                "subtask": "put the cup on the dining table",
                "desired": "it should be on the dining table"}],
        description="Fetch the cup; the cabinet is occluded once.",
        locator="answer: Cabinet, DiningTable, CounterTop",
        inject=[{"object_id": "cabinet", "error_code": "not_visible"}],
        corrections=[("target_cabinet.open()", corrective(
            "The cabinet is occluded from here, so I will move to an "
            "alternate viewpoint and retry.", "move_alternate_viewpoint"))],
    ))
    eps.append(EpDef(
        eid="adv_toaster_jam", world="adv_kitchen",
        dialogue=[["Commander", "toast a slice of bread for me"]],
        anchor="toast a slice",
        plan=prog(
            inst("target_knife", "Knife", "CounterTop"),
            call("target_knife", "go_to"),
            call("target_knife", "pickup"),
            inst("target_bread", "Bread", "CounterTop"),
            call("target_bread", "go_to"),
            call("target_bread", "slice"),
            call("target_knife", "put_down"),
            inst("target_toast", "BreadSliced", None, ("toasted",)),
            call("target_toast", "toast"),
        ),
        goals=[{"category": "BreadSliced", "state": {"toasted": True},
                "subtask": "toast a slice of bread",
                "desired": "it should be toasted"}],
        description="Toast bread; the toaster jams once.",
        inject=[{"object_id": "toaster", "error_code": "blocked"}],
        corrections=[("target_toast.toast()", corrective(
            "Something is in the way of the toaster, so I will step back "
            "and try again.", "move_back"))],
    ))
    eps.append(EpDef(
        eid="adv_micro_potato", world="adv_kitchen",
        dialogue=[["Commander", "cook the potato in the microwave"]],
        anchor="cook the potato",
        plan=prog(
            inst("target_potato", "Potato", None, ("cooked",)),
            call("target_potato", "cook"),
        ),
        goals=[{"category": "Potato", "state": {"cooked": True},
                "subtask": "cook the potato",
                "desired": "it should be cooked"}],
        description="Microwave the potato; the door sticks once.",
        locator="answer: SideTable, CounterTop, DiningTable",
        inject=[{"object_id": "microwave", "error_code": "blocked"}],
        corrections=[("target_potato.cook()", corrective(
            "The microwave did not respond, so I will move closer and "
            "try again.", "move_closer"))],
    ))
    eps.append(EpDef(
        eid="adv_place_salt", world="adv_kitchen",
        dialogue=[["Commander", "put the salt shaker on the dining table"]],
        anchor="salt shaker",
        plan=prog(
            inst("target_saltshaker", "SaltShaker", "CounterTop"),
            inst("target_diningtable", "DiningTable"),
            call("target_saltshaker", "pickup_and_place",
                 "target_diningtable"),
        ),
        goals=[{"category": "SaltShaker",
                "container_category": "DiningTable",
                "subtask": "put the salt shaker on the dining table",
                "desired": "it should be on the dining table"}],
        description="Move the salt shaker (control episode).",
    ))
    eps.append(EpDef(
        eid="adv_clean_mug", world="adv_kitchen",
        dialogue=[["Commander", "wash the mug in the sink"]],
        anchor="wash the mug",
        plan=prog(
            inst("target_mug", "Mug", "SinkBasin", ("clean",)),
            call("target_mug", "clean"),
            call("target_mug", "put_down"),
        ),
        goals=[{"category": "Mug", "state": {"clean": True},
                "subtask": "wash the mug",
                "desired": "it should be clean"}],
        description="Wash the mug (control episode).",
    ))
    return eps


def feedback_episodes() -> list[EpDef]:
    eps = []
    eps.append(EpDef(
        eid="fb_toast_plate", world="kitchen_main",
        dialogue=[["Commander",
                   "make a slice of toast and serve it on the clean plate"]],
        anchor="make a slice of toast",
        plan=prog(
            inst("target_knife", "Knife", "CounterTop"),
            call("target_knife", "go_to"),
            call("target_knife", "pickup"),
            inst("target_bread", "Bread", "CounterTop"),
            call("target_bread", "go_to"),
            call("target_bread", "slice"),
            call("target_knife", "put_down"),
            inst("target_toast", "BreadSliced", None, ("toasted",)),
            call("target_toast", "toast"),
            call("target_toast", "put_down"),
        ),
        goals=[{"category": "BreadSliced", "state": {"toasted": True},
                "container_category": "Plate",
                "container_state": {"clean": True},
                "subtask": "serve the toast on a clean plate",
                "desired": "it should be toasted and on a clean plate"}],
        description="Toast that the first plan forgets to plate.",
        feedback_plan=prog(
            inst("target_toast", "BreadSliced", None, ("toasted",)),
            inst("target_plate", "Plate", "DiningTable", ("clean",)),
            call("target_toast", "pickup_and_place", "target_plate"),
        ),
    ))
    eps.append(EpDef(
        eid="fb_mug_table", world="kitchen_main",
        dialogue=[["Commander",
                   "rinse the mug and leave it on the dining table"]],
        anchor="rinse the mug",
        plan=prog(
            inst("target_mug", "Mug", "DiningTable", ("clean",)),
            call("target_mug", "clean"),
        ),
        goals=[{"category": "Mug", "state": {"clean": True},
                "container_category": "DiningTable",
                "subtask": "put the mug back on the dining table",
                "desired": "it should be clean and on the dining table"}],
        description="Rinse that the first plan forgets to put back.",
        feedback_plan=prog(
            inst("target_mug", "Mug"),
            inst("target_diningtable", "DiningTable"),
            call("target_mug", "pickup_and_place", "target_diningtable"),
        ),
    ))
    return eps


# ------------------------------------------------------------------ fixtures

LOCATOR_ANCHOR = "What are the top 3 most likely object categories"
CORRECTION_ANCHOR = "Fix the subgoal exectuion error"
FEEDBACK_ANCHOR = "You failed to complete the subtask"
LOCATOR_DEFAULT = "answer: DiningTable, CounterTop, SinkBasin"


def suite_fixture(eps: list[EpDef], locator: str = LOCATOR_DEFAULT) -> dict:
    """Fixture records for a suite.

    Order matters: locator and correction prompts both embed the episode
    dialogue, and a feedback replan prompt embeds the original turns, so the
    more specific anchors must come before the plain plan records.
    """
    records = []
    for ep in eps:
        if ep.locator:
            records.append({"match": {"episode_id": ep.eid,
                                      "substring": LOCATOR_ANCHOR},
                            "response": ep.locator})
    records.append({"match": {"substring": LOCATOR_ANCHOR},
                    "response": locator})
    for ep in eps:
        for subgoal, response in ep.corrections:
            records.append({
                "match": {"episode_id": ep.eid,
                          "substrings": [CORRECTION_ANCHOR,
                                         f"Failed subgoal: {subgoal}"]},
                "response": response,
            })
    # Without this net a correction prompt would fall through to the plan
    # record (the prompt embeds the dialogue) and replay the whole plan as
    # a corrective program.
    records.append({
        "match": {"substring": CORRECTION_ANCHOR},
        "response": corrective(
            "The action failed, so I will retry it as is.", "do_nothing"),
    })
    for ep in eps:
        if ep.feedback_plan:
            records.append({
                "match": {"episode_id": ep.eid,
                          "substring": FEEDBACK_ANCHOR},
                "response": ep.feedback_plan,
            })
    for ep in eps:
        records.append({
            "match": {"episode_id": ep.eid, "substring": ep.anchor},
            "response": ep.plan,
        })
    return {"schema_version": 1, "records": records}


def console_fixture() -> dict:
    plan = prog(
        inst("target_saltshaker", "SaltShaker", "CounterTop"),
        inst("target_diningtable", "DiningTable"),
        call("target_saltshaker", "pickup_and_place", "target_diningtable"),
    )
    return {"schema_version": 1, "records": [
        {"match": {"substring": LOCATOR_ANCHOR}, "response": LOCATOR_DEFAULT},
        {"match": {"substring": CORRECTION_ANCHOR},
         "response": corrective(
             "The action failed, so I will retry it as is.", "do_nothing")},
        {"match": {}, "response": plan},
    ]}


# --------------------------------------------------------------- seed memory

CORRECTION_SEEDS = [
    ("corrective_usage", "target_fridge.open()",
     "an object is blocking you from interacting with the selected object",
     [["Commander", "Get the lettuce in the fridge."]]),
    ("do_nothing", "target_faucet.toggle_on()",
     "the action failed for an unknown reason",
     [["Commander", "Fill the mug with water."]]),
    ("precondition_knife", "target_tomato.slice()",
     "the action failed for an unknown reason",
     [["Commander", "Cut the tomato into slices."]]),
]


def build_seed_memory(out_path: Path) -> None:
    manifest = json.loads((DATA / "exemplars" / "manifest.json").read_text())
    store = MemoryStore(HashEmbedder())
    for fname, meta in manifest.items():
        if meta.get("whitelist_violations"):
            continue
        if meta.get("dialogue") is None:
            continue
        stem = fname.rsplit(".", 1)[0]
        if stem.endswith("_landmarked") or stem.endswith("_landmark"):
            continue   # same dialogue as the base exemplar; keep one key each
        text = (DATA / "exemplars" / fname).read_text()
        program = parse_program(text, strict=False)
        key = Dialogue.from_inline(meta["dialogue"]).to_prompt()
        store.add(key, program, KIND_PLAN, name=stem, created_at=CREATED_AT)
    for stem, subgoal, failure, pairs in CORRECTION_SEEDS:
        text = (DATA / "exemplars" / f"{stem}.txt").read_text()
        program = parse_program(text, strict=False)
        key = Dialogue.from_pairs(pairs).to_prompt()
        store.add(key, program, KIND_CORRECTION, name=subgoal,
                  failure_text=failure, created_at=CREATED_AT)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    store.save(out_path)
    print(f"seed memory: {len(store)} entries -> {out_path}")


# ----------------------------------------------------------- personalization


def personal_routines() -> list[dict]:
    """The ten named user routines and their stored programs."""
    plate_clean = [inst("target_plate", "Plate", None, ("clean",)),
                   call("target_plate", "clean")]

    def coffee(idx: str = "") -> list[str]:
        mug = f"target_mug{idx}"
        return [inst(mug, "Mug", None, ("clean",)),
                call(mug, "clean"),
                inst(f"target_sink{idx}", "SinkBasin"),
                call(mug, "pour", f"target_sink{idx}"),
                inst(f"target_coffeemachine{idx}", "CoffeeMachine"),
                call(mug, "pickup_and_place", f"target_coffeemachine{idx}"),
                call(f"target_coffeemachine{idx}", "toggle_on"),
                call(f"target_coffeemachine{idx}", "toggle_off")]

    routines = []
    routines.append({
        "name": "Larry sandwich",
        "instruction": [["Driver", "What is my task?"],
                        ["Commander",
                         "Make me a sandwich. The name of this sandwich is "
                         "called the Larry sandwich. The sandwich has two "
                         "slices of toast, 3 slices of tomato, and 3 slice "
                         "of lettuce on a clean plate."]],
        "program": prog(
            fetch_knife(),
            slice_target("bread", "Bread"),
            slice_target("tomato", "Tomato"),
            slice_target("lettuce", "Lettuce"),
            call("target_knife", "put_down"),
            plate_clean,
            toast_n(2, "target_plate"),
            place_n("TomatoSliced", 3, "target_plate", "tomatosliced"),
            place_n("LettuceSliced", 3, "target_plate", "lettucesliced"),
        ),
    })
    routines.append({
        "name": "David salad",
        "instruction": [["Driver", "What is my task?"],
                        ["Commander",
                         "Make me a salad. The name of this salad is called "
                         "the David salad. The salad has two slices of "
                         "tomato and three slices of lettuce on a clean "
                         "plate."]],
        "program": prog(
            fetch_knife(),
            slice_target("tomato", "Tomato"),
            slice_target("lettuce", "Lettuce"),
            call("target_knife", "put_down"),
            plate_clean,
            place_n("TomatoSliced", 2, "target_plate", "tomatosliced"),
            place_n("LettuceSliced", 3, "target_plate", "lettucesliced"),
        ),
    })
    routines.append({
        "name": "Dax salad",
        "instruction": [["Driver", "What is my task?"],
                        ["Commander",
                         "Make me a salad. The name of this salad is called "
                         "the Dax salad. The salad has two slices of cooked "
                         "potato. You'll need to cook the potato on the "
                         "stove. The salad also has a slice of lettuce and "
                         "a slice of tomato. Put all components on a clean "
                         "plate."]],
        "program": prog(
            fetch_knife(),
            slice_target("potato", "Potato"),
            slice_target("lettuce", "Lettuce"),
            slice_target("tomato", "Tomato"),
            call("target_knife", "put_down"),
            plate_clean,
            inst("target_potatosliced1", "PotatoSliced", None, ("cooked",)),
            call("target_potatosliced1", "cook"),
            call("target_potatosliced1", "pickup_and_place", "target_plate"),
            inst("target_potatosliced2", "PotatoSliced", None, ("cooked",)),
            call("target_potatosliced2", "cook"),
            call("target_potatosliced2", "pickup_and_place", "target_plate"),
            place_n("LettuceSliced", 1, "target_plate", "lettucesliced"),
            place_n("TomatoSliced", 1, "target_plate", "tomatosliced"),
        ),
    })
    routines.append({
        "name": "Mary breakfast",
        "instruction": [["Driver", "What is my task?"],
                        ["Commander",
                         "Make me breakfast. The name of this breakfast is "
                         "called the Mary breakfast. The breakfast has a "
                         "mug of coffee, and two slices of toast on a clean "
                         "plate."]],
        "program": prog(
            coffee(),
            fetch_knife(),
            slice_target("bread", "Bread"),
            call("target_knife", "put_down"),
            plate_clean,
            toast_n(2, "target_plate"),
        ),
    })
    routines.append({
        "name": "Lion breakfast",
        "instruction": [["Driver", "What is my task?"],
                        ["Commander",
                         "Make me breakfast. The name of this breakfast is "
                         "called the Lion breakfast. The breakfast has a "
                         "mug of coffee, and four slices of tomato on a "
                         "clean plate."]],
        "program": prog(
            coffee(),
            fetch_knife(),
            slice_target("tomato", "Tomato"),
            call("target_knife", "put_down"),
            plate_clean,
            place_n("TomatoSliced", 4, "target_plate", "tomatosliced"),
        ),
    })
    routines.append({
        "name": "Lax rearrangement",
        "instruction": [["Driver", "What is my task?"],
                        ["Commander",
                         "Rearrange some objects. The name of this "
                         "rearrangement is called the Lax rearrangement. "
                         "Place three pillows on the sofa."]],
        "program": prog(
            inst("target_sofa", "Sofa"),
            place_n("Pillow", 3, "target_sofa", "pillow"),
        ),
    })
    routines.append({
        "name": "Pax rearrangement",
        "instruction": [["Driver", "What is my task?"],
                        ["Commander",
                         "Rearrange some objects. The name of this "
                         "rearrangement is called the Pax rearrangement. "
                         "Place two pencils and two pens on the desk."]],
        "program": prog(
            inst("target_desk", "Desk"),
            place_n("Pencil", 2, "target_desk", "pencil"),
            place_n("Pen", 2, "target_desk", "pen"),
        ),
    })
    routines.append({
        "name": "Gax cleaning",
        "instruction": [["Driver", "What is my task?"],
                        ["Commander",
                         "Clean some objects. The name of this cleaning is "
                         "called the Gax cleaning. Clean two plates and two "
                         "cups."]],
        "program": prog(
            clean_and_stow("plate", "Plate", "1"),
            clean_and_stow("plate", "Plate", "2"),
            clean_and_stow("cup", "Cup", "1"),
            clean_and_stow("cup", "Cup", "2"),
        ),
    })
    routines.append({
        "name": "Gabe sandwich",
        "instruction": [["Driver", "What is my task?"],
                        ["Commander",
                         "Make me a sandwich. The name of this sandwich is "
                         "called the Gabe sandwich. The sandwich has two "
                         "slices of toast, 2 slices of tomato, and 1 slice "
                         "of lettuce on a clean plate."]],
        "program": prog(
            fetch_knife(),
            slice_target("bread", "Bread"),
            slice_target("tomato", "Tomato"),
            slice_target("lettuce", "Lettuce"),
            call("target_knife", "put_down"),
            plate_clean,
            toast_n(2, "target_plate"),
            place_n("TomatoSliced", 2, "target_plate", "tomatosliced"),
            place_n("LettuceSliced", 1, "target_plate", "lettucesliced"),
        ),
    })
    routines.append({
        "name": "Kax cleaning",
        "instruction": [["Driver", "What is my task?"],
                        ["Commander",
                         "Clean some objects. The name of this cleaning is "
                         "called the Kax cleaning. Clean a mug and a pan."]],
        "program": prog(
            clean_and_stow("mug", "Mug"),
            clean_and_stow("pan", "Pan"),
        ),
    })
    return routines


def personal_requests() -> tuple[list[dict], list[dict]]:
    """(unmodified, one-change) request lists aligned with the routines."""
    unmodified = [
        {"routine": "Larry sandwich", "text": "Make me the Larry sandwich"},
        {"routine": "David salad", "text": "Make me the David salad"},
        {"routine": "Dax salad", "text": "Make me the Dax salad"},
        {"routine": "Mary breakfast", "text": "Make me the Mary breakfast"},
        {"routine": "Lion breakfast", "text": "Make me the Lion breakfast"},
        {"routine": "Lax rearrangement",
         "text": "Complete the Lax rearrangement"},
        {"routine": "Pax rearrangement",
         "text": "Complete the Pax rearrangement"},
        {"routine": "Gax cleaning", "text": "Perform the Gax cleaning"},
        {"routine": "Gabe sandwich", "text": "Make me the Gabe sandwich"},
        {"routine": "Kax cleaning", "text": "Perform the Kax cleaning"},
    ]
    routines = {r["name"]: r for r in personal_routines()}
    plate_clean = [inst("target_plate", "Plate", None, ("clean",)),
                   call("target_plate", "clean")]
    modified = [
        {"routine": "Larry sandwich",
         "text": "Make me the Larry sandwich with four slices of lettuce",
         "response": prog(
             fetch_knife(),
             slice_target("bread", "Bread"),
             slice_target("tomato", "Tomato"),
             slice_target("lettuce", "Lettuce"),
             call("target_knife", "put_down"),
             plate_clean,
             toast_n(2, "target_plate"),
             place_n("TomatoSliced", 3, "target_plate", "tomatosliced"),
             place_n("LettuceSliced", 4, "target_plate", "lettucesliced"),
         )},
        {"routine": "David salad",
         "text": "Make me the David salad with a slice of potato",
         "response": prog(
             fetch_knife(),
             slice_target("tomato", "Tomato"),
             slice_target("lettuce", "Lettuce"),
             slice_target("potato", "Potato"),
             call("target_knife", "put_down"),
             plate_clean,
             place_n("TomatoSliced", 2, "target_plate", "tomatosliced"),
             place_n("LettuceSliced", 3, "target_plate", "lettucesliced"),
             place_n("PotatoSliced", 1, "target_plate", "potatosliced"),
         )},
        {"routine": "Dax salad",
         "text": "Make me the Dax salad without lettuce",
         "response": prog(
             fetch_knife(),
             slice_target("potato", "Potato"),
             slice_target("tomato", "Tomato"),
             call("target_knife", "put_down"),
             plate_clean,
             inst("target_potatosliced1", "PotatoSliced", None, ("cooked",)),
             call("target_potatosliced1", "cook"),
             call("target_potatosliced1", "pickup_and_place", "target_plate"),
             inst("target_potatosliced2", "PotatoSliced", None, ("cooked",)),
             call("target_potatosliced2", "cook"),
             call("target_potatosliced2", "pickup_and_place", "target_plate"),
             place_n("TomatoSliced", 1, "target_plate", "tomatosliced"),
         )},
        {"routine": "Mary breakfast",
         "text": "Make me the Mary breakfast with no coffee",
         "response": prog(
             fetch_knife(),
             slice_target("bread", "Bread"),
             call("target_knife", "put_down"),
             plate_clean,
             toast_n(2, "target_plate"),
         )},
        {"routine": "Lion breakfast",
         "text": "Make me the Lion breakfast with three slice of tomato",
         "response": prog(
             [ln for r in [routines["Lion breakfast"]["program"]]
              for ln in r.splitlines()
              if "tomatosliced4" not in ln],
         )},
        {"routine": "Lax rearrangement",
         "text": "Complete the Lax rearrangement with two pillows",
         "response": prog(
             inst("target_sofa", "Sofa"),
             place_n("Pillow", 2, "target_sofa", "pillow"),
         )},
        {"routine": "Pax rearrangement",
         "text": "Complete the Pax rearrangement but use one pencil instead "
                 "of the the two pencils",
         "response": prog(
             inst("target_desk", "Desk"),
             place_n("Pencil", 1, "target_desk", "pencil"),
             place_n("Pen", 2, "target_desk", "pen"),
         )},
        {"routine": "Gax cleaning",
         "text": "Perform the Gax cleaning with three plates instead of two",
         "response": prog(
             clean_and_stow("plate", "Plate", "1"),
             clean_and_stow("plate", "Plate", "2"),
             clean_and_stow("plate", "Plate", "3"),
             clean_and_stow("cup", "Cup", "1"),
             clean_and_stow("cup", "Cup", "2"),
         )},
        {"routine": "Gabe sandwich",
         "text": "Make me the Gabe sandwich with only 1 slice of tomato",
         "response": prog(
             fetch_knife(),
             slice_target("bread", "Bread"),
             slice_target("tomato", "Tomato"),
             slice_target("lettuce", "Lettuce"),
             call("target_knife", "put_down"),
             plate_clean,
             toast_n(2, "target_plate"),
             place_n("TomatoSliced", 1, "target_plate", "tomatosliced"),
             place_n("LettuceSliced", 1, "target_plate", "lettucesliced"),
         )},
        {"routine": "Kax cleaning",
         "text": "Perform the Kax cleaning with only a mug",
         "response": prog(clean_and_stow("mug", "Mug"))},
    ]
    return unmodified, modified


def personal_fixture(routines: list[dict], unmodified: list[dict],
                     modified: list[dict]) -> dict:
    """Modified requests first: their texts contain the unmodified ones."""
    by_name = {r["name"]: r for r in routines}
    records = []
    for req in modified:
        records.append({"match": {"substring": req["text"]},
                        "response": req["response"]})
    for req in unmodified:
        records.append({"match": {"substring": req["text"]},
                        "response": by_name[req["routine"]]["program"]})
    return {"schema_version": 1, "records": records}


# ------------------------------------------------------------- verification


def write_json(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2) + "\n")


def run_one(ep_path: Path, fixture: Path, feedback: int = 0,
            ablations: tuple[str, ...] = (), seed: int = 0):
    episode = load_episode(ep_path)
    backend = ScriptedBackend(fixture)
    backend.set_context(episode.episode_id)
    store = MemoryStore.load(DATA / "memory" / "seed_memory.jsonl",
                             HashEmbedder())
    planner = Planner(backend, store)
    config = EpisodeRunConfig(feedback_rounds=feedback,
                              ablations=frozenset(ablations), seed=seed)
    result, traces = run_episode(episode, planner, config)
    return result, traces


def verify_suite(name: str, eps: list[EpDef], ep_dir: Path, fixture: Path,
                 feedback: int = 0) -> None:
    total_start = time.perf_counter()
    for ep in eps:
        path = ep_dir / f"{ep.eid}.json"
        start = time.perf_counter()
        result, traces = run_one(path, fixture, feedback=feedback)
        took = time.perf_counter() - start
        status = "ok" if result.success else f"FAIL ({result.error})"
        print(f"  {ep.eid:<18} {status:<10} gc {result.gc_met}/"
              f"{result.gc_total}  steps {result.steps:<4} {took:5.1f}s")
        if not result.success:
            for trace in traces:
                for rec in trace.records:
                    if rec.outcome not in ("ok", "repaired", "corrected",
                                           "skipped"):
                        print(f"      stmt {rec.index}: {rec.source} -> "
                              f"{rec.outcome} {rec.error_text}")
            raise SystemExit(f"{name}: {ep.eid} failed")
        write_json(path, ep.episode_json(ref=max(1, result.steps)))
    print(f"  {name}: all green in "
          f"{time.perf_counter() - total_start:.1f}s")


def verify_adversarial(eps: list[EpDef], ep_dir: Path, fixture: Path) -> None:
    outcomes: dict[str, dict[str, bool]] = {}
    for config_name, ablations in (("full", ()),
                                   ("no_precheck", ("no_precheck",)),
                                   ("no_correction", ("no_correction",))):
        for ep in eps:
            path = ep_dir / f"{ep.eid}.json"
            result, _ = run_one(path, fixture, ablations=ablations)
            outcomes.setdefault(ep.eid, {})[config_name] = result.success
            if config_name == "full":
                if not result.success:
                    raise SystemExit(f"adversarial {ep.eid} fails even with "
                                     f"everything enabled")
                write_json(path, ep.episode_json(ref=max(1, result.steps)))
    srs = {c: sum(1 for o in outcomes.values() if o[c])
           for c in ("full", "no_precheck", "no_correction")}
    for eid, o in outcomes.items():
        print(f"  {eid:<18} full={o['full']} no_precheck={o['no_precheck']} "
              f"no_correction={o['no_correction']}")
    print(f"  SR full={srs['full']}/10 no_precheck={srs['no_precheck']}/10 "
          f"no_correction={srs['no_correction']}/10")
    if srs["full"] - srs["no_precheck"] < 2:
        raise SystemExit("precheck ablation gap below 2 episodes")
    if srs["full"] - srs["no_correction"] < 2:
        raise SystemExit("correction ablation gap below 2 episodes")


def verify_feedback(eps: list[EpDef], ep_dir: Path, fixture: Path) -> None:
    for ep in eps:
        path = ep_dir / f"{ep.eid}.json"
        round0, _ = run_one(path, fixture, feedback=0)
        if round0.success:
            raise SystemExit(f"{ep.eid}: succeeds without feedback; the "
                             f"suite needs a missing subgoal")
        withfb, _ = run_one(path, fixture, feedback=1)
        if not withfb.success:
            raise SystemExit(f"{ep.eid}: still failing after one feedback "
                             f"round")
        print(f"  {ep.eid:<18} round0 gc {round0.gc_met}/{round0.gc_total} "
              f"-> with feedback gc {withfb.gc_met}/{withfb.gc_total}")
        write_json(path, ep.episode_json(ref=max(1, withfb.steps)))


def verify_personalization(routines: list[dict], unmodified: list[dict],
                           modified: list[dict], fixture: Path) -> None:
    store = MemoryStore(HashEmbedder())
    for routine in routines:
        store_personal_plan(store, routine["name"],
                            Dialogue.from_pairs(routine["instruction"]),
                            parse_program(routine["program"], strict=True))
    backend = ScriptedBackend(fixture)
    planner = Planner(backend, store)
    for req in unmodified:
        dialogue = Dialogue.from_pairs(
            [["Driver", "What is my task?"], ["Commander", req["text"]]])
        hits = store.retrieve_topk(dialogue.to_prompt(), 3)
        if not hits or hits[0][0].name != req["routine"]:
            got = [e.name for e, _ in hits]
            raise SystemExit(f"retrieval rank-1 miss for {req['text']!r}: "
                             f"top-3 {got}")
        result = planner.synthesize_plan(dialogue)
        expected = routines[[r["name"] for r in routines]
                            .index(req["routine"])]["program"]
        if render_program(result.program) != expected:
            raise SystemExit(f"planner did not return the stored program "
                             f"for {req['text']!r}")
    for req in modified:
        dialogue = Dialogue.from_pairs(
            [["Driver", "What is my task?"], ["Commander", req["text"]]])
        result = planner.synthesize_plan(dialogue)
        if render_program(result.program) != req["response"]:
            raise SystemExit(f"modification plumbing broke for "
                             f"{req['text']!r}")
    print(f"  personalization: {len(unmodified)} rank-1 retrievals, "
          f"{len(modified)} modified requests ok")


# --------------------------------------------------------------------- main


def main() -> None:
    worlds_dir = DATA / "worlds"
    for builder in (kitchen_main, kitchen_side, adv_kitchen):
        data = builder()
        write_json(worlds_dir / f"{data['name']}.json", data)
        load_world(worlds_dir / f"{data['name']}.json")   # validate
    print(f"worlds: 3 -> {worlds_dir}")

    build_seed_memory(DATA / "memory" / "seed_memory.jsonl")

    oracle = oracle_episodes()
    edh = next(ep for ep in oracle if ep.eid == "ep_toast_edh")
    edh.history = compute_edh_history()
    oracle_dir = DATA / "episodes"
    for ep in oracle:
        write_json(oracle_dir / f"{ep.eid}.json", ep.episode_json())
    write_json(DATA / "backends" / "oracle.json", suite_fixture(oracle))
    print(f"oracle suite: {len(oracle)} episodes")
    verify_suite("oracle", oracle, oracle_dir,
                 DATA / "backends" / "oracle.json")

    adversarial = adversarial_episodes()
    adv_dir = DATA / "episodes_adversarial"
    for ep in adversarial:
        write_json(adv_dir / f"{ep.eid}.json", ep.episode_json())
    write_json(DATA / "backends" / "adversarial.json",
               suite_fixture(adversarial))
    print(f"adversarial suite: {len(adversarial)} episodes")
    verify_adversarial(adversarial, adv_dir,
                       DATA / "backends" / "adversarial.json")

    feedback = feedback_episodes()
    fb_dir = DATA / "episodes_feedback"
    for ep in feedback:
        write_json(fb_dir / f"{ep.eid}.json", ep.episode_json())
    write_json(DATA / "backends" / "feedback.json", suite_fixture(feedback))
    print(f"feedback suite: {len(feedback)} episodes")
    verify_feedback(feedback, fb_dir, DATA / "backends" / "feedback.json")

    routines = personal_routines()
    unmodified, modified = personal_requests()
    write_json(DATA / "personal" / "routines.json", {"routines": routines})
    write_json(DATA / "personal" / "requests.json",
               {"unmodified": unmodified, "modified": modified})
    write_json(DATA / "backends" / "personal.json",
               personal_fixture(routines, unmodified, modified))
    verify_personalization(routines, unmodified, modified,
                           DATA / "backends" / "personal.json")

    write_json(DATA / "backends" / "console.json", console_fixture())
    print("console fixture written")
    print("all fixtures verified")


if __name__ == "__main__":
    main()

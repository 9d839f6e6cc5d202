"""World file loading and validation.

World files are JSON: grid dimensions, wall cells, agent spawn, and a flat
object list. Containment is declared child-side via "parent"; the loader
rebuilds the receptacle content lists in file order.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..dsl import is_known_category
from .state import (
    AgentState,
    SCHEMA_VERSION,
    SimObject,
    WorldConfig,
    WorldState,
)


class WorldFormatError(Exception):
    pass


def _build_object(row: dict) -> SimObject:
    try:
        oid = row["id"]
        category = row["category"]
        position = np.array(row["position"], dtype=np.float64)
        size = np.array(row["size"], dtype=np.float64)
    except KeyError as exc:
        raise WorldFormatError(f"object missing field {exc}") from exc
    if not is_known_category(category):
        raise WorldFormatError(f"object {oid!r} has unknown category "
                               f"{category!r}")
    if position.shape != (3,) or size.shape != (3,):
        raise WorldFormatError(f"object {oid!r} position/size must be 3-vectors")
    return SimObject(
        id=oid,
        category=category,
        position=position,
        size=size,
        open=bool(row.get("open", False)),
        powered=bool(row.get("powered", False)),
        sliced=bool(row.get("sliced", False)),
        clean=bool(row.get("clean", True)),
        cooked=bool(row.get("cooked", False)),
        toasted=bool(row.get("toasted", False)),
        filled_with=row.get("filled_with"),
        parent=row.get("parent"),
        controls=row.get("controls"),
        capacity=int(row.get("capacity", 8)),
        blocks=row.get("blocks"),
    )


def load_world(path: str | Path) -> WorldState:
    path = Path(path)
    data = json.loads(path.read_text())
    if data.get("schema_version") != SCHEMA_VERSION:
        raise WorldFormatError(
            f"unsupported world schema_version {data.get('schema_version')!r}"
        )
    config = WorldConfig()
    if "cell_m" in data:
        config.cell_m = float(data["cell_m"])
        config.step_m = config.cell_m
    if "camera_res" in data:
        config.camera_res = int(data["camera_res"])
    if "ceiling_height" in data:
        config.ceiling_height = float(data["ceiling_height"])
    if "slice_fanout" in data:
        config.slice_fanout = int(data["slice_fanout"])

    width = int(data["width"])
    height = int(data["height"])
    walls = {(int(i), int(j)) for i, j in data.get("walls", [])}
    for (i, j) in walls:
        if not (0 <= i < width and 0 <= j < height):
            raise WorldFormatError(f"wall cell {(i, j)} out of bounds")

    objects: dict[str, SimObject] = {}
    for row in data.get("objects", []):
        obj = _build_object(row)
        if obj.id in objects:
            raise WorldFormatError(f"duplicate object id {obj.id!r}")
        objects[obj.id] = obj
    for obj in objects.values():
        if obj.parent is not None:
            if obj.parent not in objects:
                raise WorldFormatError(
                    f"object {obj.id!r} has unknown parent {obj.parent!r}"
                )
            objects[obj.parent].contents.append(obj.id)
        if obj.controls is not None and obj.controls not in objects:
            raise WorldFormatError(
                f"object {obj.id!r} controls unknown id {obj.controls!r}"
            )

    arow = data["agent"]
    agent = AgentState(
        x=float(arow["x"]), z=float(arow["z"]),
        yaw=int(arow.get("yaw", 0)), pitch=int(arow.get("pitch", 0)),
    )
    world = WorldState(
        width=width, height=height, walls=walls, objects=objects,
        agent=agent, config=config, name=data.get("name", path.stem),
    )
    ai, aj = world.cell_of(agent.x, agent.z)
    if world.blocked_cell(ai, aj):
        raise WorldFormatError("agent spawn cell is blocked")
    return world

"""Action stepping and interaction semantics.

All actions run through step_action. Failed actions leave the world unchanged
and report an error code; failed interactions additionally consume the API
failure budget. Device effects (stove, toaster, coffee machine, faucet,
microwave) apply instantaneously when the device is toggled on.
"""
from __future__ import annotations

import numpy as np

from ..dsl import AFFORDANCES, POUR_DISCARD, SLICED_PRODUCT
from .render import masks_from_frame, render_frame, resolve_pixel
from .state import (
    Action,
    AgentState,
    DetectionMask,
    Observation,
    PITCH_LIMIT,
    PITCH_STEP,
    SimObject,
    WorldState,
    YAW_STEP,
)

# XZ slot pattern for successive placements, as fractions of the half-extent.
_SLOT_FRACS = (
    (0.0, 0.0), (-0.5, -0.5), (0.5, -0.5), (-0.5, 0.5), (0.5, 0.5),
    (-0.5, 0.0), (0.5, 0.0), (0.0, -0.5), (0.0, 0.5),
)

_KNIVES = ("Knife", "ButterKnife")


def inject_failure(world: WorldState, object_id: str, error_code: str) -> None:
    """Queue a one-shot failure for the next interaction with the object."""
    world.pending_failures.setdefault(object_id, []).append(error_code)


def _pose_truth(world: WorldState) -> dict:
    a = world.agent
    return {"x": a.x, "z": a.z, "yaw": a.yaw, "pitch": a.pitch}


def observe(
    world: WorldState,
    render: bool = True,
    action_success: bool = True,
    error_code: str | None = None,
    error_detail: str | None = None,
) -> Observation:
    depth = None
    masks: list[DetectionMask] = []
    rgb = None
    if render:
        frame = render_frame(world)
        depth = frame.depth
        masks = masks_from_frame(world, frame)
        rgb = frame.rgb
    return Observation(
        action_success=action_success,
        error_code=error_code,
        error_detail=error_detail,
        depth=depth,
        masks=masks,
        rgb=rgb,
        pose_truth=_pose_truth(world),
        steps_taken=world.steps_taken,
        api_failures=world.api_failures,
    )


def _fail(world, render, code, detail=None, interaction=False) -> Observation:
    if interaction:
        world.api_failures += 1
    return observe(world, render=render, action_success=False,
                   error_code=code, error_detail=detail)


def _ok(world, render) -> Observation:
    return observe(world, render=render, action_success=True)


def _move(world: WorldState, sign: float, render: bool) -> Observation:
    agent = world.agent
    hx, hz = agent.heading()
    nx = agent.x + sign * world.config.step_m * hx
    nz = agent.z + sign * world.config.step_m * hz
    i, j = world.cell_of(nx, nz)
    if world.blocked_cell(i, j):
        return _fail(world, render, "blocked",
                     "the path in that direction is blocked")
    agent.x, agent.z = nx, nz
    return _ok(world, render)


def _nearest(world: WorldState, source: SimObject, categories: tuple[str, ...],
             radius: float = 1.0) -> SimObject | None:
    if source.controls is not None:
        return world.objects.get(source.controls)
    best, best_d = None, radius
    for obj in world.objects.values():
        if obj.category not in categories:
            continue
        d = float(np.linalg.norm(obj.position - source.position))
        if d < best_d:
            best, best_d = obj, d
    return best


def _burner_cook(world: WorldState, burner: SimObject) -> None:
    for vid in burner.contents:
        vessel = world.objects.get(vid)
        if vessel is None or vessel.category not in ("Pot", "Pan"):
            continue
        for iid in vessel.contents:
            item = world.objects.get(iid)
            if item is None:
                continue
            prof = AFFORDANCES.get(item.category)
            if prof is not None and prof.cookable:
                item.cooked = True


def _apply_toggle_effects(world: WorldState, target: SimObject) -> None:
    cat = target.category
    if cat == "CoffeeMachine":
        for cid in target.contents:
            mug = world.objects.get(cid)
            if (mug is not None and mug.category == "Mug"
                    and mug.clean and mug.filled_with is None):
                mug.filled_with = "coffee"
    elif cat == "Toaster":
        for cid in target.contents:
            item = world.objects.get(cid)
            if item is not None:
                prof = AFFORDANCES.get(item.category)
                if prof is not None and prof.toastable:
                    item.toasted = True
    elif cat == "StoveBurner":
        _burner_cook(world, target)
    elif cat == "StoveKnob":
        burner = _nearest(world, target, ("StoveBurner",))
        if burner is not None:
            burner.powered = True
            _burner_cook(world, burner)
    elif cat == "Microwave":
        for cid in target.contents:
            item = world.objects.get(cid)
            if item is None:
                continue
            prof = AFFORDANCES.get(item.category)
            if prof is not None and prof.cookable:
                item.cooked = True
            for nid in item.contents:
                nested = world.objects.get(nid)
                if nested is None:
                    continue
                nprof = AFFORDANCES.get(nested.category)
                if nprof is not None and nprof.cookable:
                    nested.cooked = True
    elif cat == "Faucet":
        basin = _nearest(world, target, ("SinkBasin", "Sink"))
        if basin is not None:
            for cid in basin.contents:
                item = world.objects.get(cid)
                if item is None:
                    continue
                prof = AFFORDANCES.get(item.category)
                if prof is None:
                    continue
                if prof.cleanable:
                    item.clean = True
                if prof.fillable and item.filled_with is None:
                    item.filled_with = "water"


def _place_position(target: SimObject, held: SimObject) -> np.ndarray:
    # Contents always rest on the receptacle's top face, even for "inside"
    # receptacles: boxes render solid, so anything placed within the body
    # could never be seen or aimed at again. Closed containers still hide
    # their contents through the visibility walk, and an open fridge showing
    # its contents above the box is the desk-scale reading of "inside".
    idx = len(target.contents) % len(_SLOT_FRACS)
    fx, fz = _SLOT_FRACS[idx]
    x = target.position[0] + fx * target.size[0] * 0.3
    z = target.position[2] + fz * target.size[2] * 0.3
    top = target.position[1] + target.size[1] / 2.0
    y = top + held.size[1] / 2.0
    return np.array([x, y, z])


def _do_slice(world: WorldState, target: SimObject) -> None:
    product = SLICED_PRODUCT[target.category]
    n = world.config.slice_fanout
    parent_id = target.parent
    if parent_id is not None:
        parent = world.objects.get(parent_id)
        if parent is not None and target.id in parent.contents:
            parent.contents.remove(target.id)
    del world.objects[target.id]
    spacing = max(0.05, float(target.size[0]) * 0.3)
    size = np.array([
        max(0.05, target.size[0] * 0.5),
        max(0.04, target.size[1] * 0.8),
        max(0.05, target.size[2] * 0.5),
    ])
    for k in range(n):
        cid = world.fresh_id(product)
        off = (k - (n - 1) / 2.0) * spacing
        child = SimObject(
            id=cid,
            category=product,
            position=target.position + np.array([off, 0.0, 0.0]),
            size=size.copy(),
            sliced=True,
            clean=target.clean,
            cooked=target.cooked,
            toasted=False,
            parent=parent_id,
        )
        world.objects[cid] = child
        if parent_id is not None and parent_id in world.objects:
            world.objects[parent_id].contents.append(cid)


def _interact(world: WorldState, action: Action, render: bool) -> Observation:
    frame = render_frame(world)
    target = resolve_pixel(world, frame, action.u or 0, action.v or 0)
    if target is None:
        return _fail(world, render, "not_visible",
                     "no object at the selected pixel", interaction=True)

    pending = world.pending_failures.get(target.id)
    if pending:
        code = pending.pop(0)
        if not pending:
            del world.pending_failures[target.id]
        return _fail(world, render, code,
                     "injected failure", interaction=True)

    agent = world.agent
    dist = target.horizontal_distance_to(agent.x, agent.z)
    if dist > world.config.interact_dist:
        return _fail(world, render, "too_far",
                     f"{target.category} is {dist:.2f}m away",
                     interaction=True)

    prof = AFFORDANCES.get(target.category)
    kind = action.kind

    if kind == "pickup":
        if agent.holding is not None:
            return _fail(world, render, "hand_occupied",
                         "the hand already holds an object", interaction=True)
        if prof is None or not prof.pickupable:
            return _fail(world, render, "affordance",
                         f"{target.category} cannot be picked up",
                         interaction=True)
        if target.parent is not None:
            parent = world.objects.get(target.parent)
            if parent is not None and target.id in parent.contents:
                parent.contents.remove(target.id)
            target.parent = None
        agent.holding = target.id
        world.state_version += 1
        return _ok(world, render)

    if kind == "place":
        if agent.holding is None:
            return _fail(world, render, "hand_empty",
                         "nothing is being held", interaction=True)
        if prof is None or not prof.receptacle:
            return _fail(world, render, "affordance",
                         f"{target.category} is not a receptacle",
                         interaction=True)
        if prof.openable and not target.open:
            return _fail(world, render, "affordance",
                         f"{target.category} is closed", interaction=True)
        if len(target.contents) >= target.capacity:
            return _fail(world, render, "receptacle_full",
                         f"{target.category} is full", interaction=True)
        held = world.objects[agent.holding]
        held.position = _place_position(target, held)
        held.parent = target.id
        target.contents.append(held.id)
        agent.holding = None
        world.state_version += 1
        return _ok(world, render)

    if kind in ("open", "close"):
        if prof is None or not prof.openable:
            return _fail(world, render, "affordance",
                         f"{target.category} cannot be opened",
                         interaction=True)
        want_open = kind == "open"
        if target.open == want_open:
            state = "open" if target.open else "closed"
            return _fail(world, render, "affordance",
                         f"{target.category} is already {state}",
                         interaction=True)
        target.open = want_open
        world.state_version += 1
        return _ok(world, render)

    if kind in ("toggle_on", "toggle_off"):
        if prof is None or not prof.toggleable:
            return _fail(world, render, "affordance",
                         f"{target.category} cannot be toggled",
                         interaction=True)
        want_on = kind == "toggle_on"
        if target.powered == want_on:
            state = "on" if target.powered else "off"
            return _fail(world, render, "affordance",
                         f"{target.category} is already {state}",
                         interaction=True)
        if (want_on and target.category == "Microwave" and target.open):
            return _fail(world, render, "affordance",
                         "the microwave door is open", interaction=True)
        target.powered = want_on
        if want_on:
            _apply_toggle_effects(world, target)
        elif target.category == "StoveKnob":
            burner = _nearest(world, target, ("StoveBurner",))
            if burner is not None:
                burner.powered = False
        world.state_version += 1
        return _ok(world, render)

    if kind == "slice":
        if prof is None or not prof.sliceable:
            return _fail(world, render, "affordance",
                         f"{target.category} cannot be sliced",
                         interaction=True)
        if agent.holding is None:
            return _fail(world, render, "hand_empty",
                         "slicing requires holding a knife", interaction=True)
        held = world.objects[agent.holding]
        if held.category not in _KNIVES:
            return _fail(world, render, "affordance",
                         f"cannot slice with {held.category}",
                         interaction=True)
        _do_slice(world, target)
        world.state_version += 1
        return _ok(world, render)

    if kind == "pour":
        if agent.holding is None:
            return _fail(world, render, "hand_empty",
                         "nothing is being held", interaction=True)
        held = world.objects[agent.holding]
        if held.filled_with is None:
            return _fail(world, render, "affordance",
                         f"the held {held.category} is empty",
                         interaction=True)
        if target.category in POUR_DISCARD:
            held.filled_with = None
            world.state_version += 1
            return _ok(world, render)
        if prof is None or not prof.fillable:
            return _fail(world, render, "affordance",
                         f"cannot pour into {target.category}",
                         interaction=True)
        target.filled_with = held.filled_with
        held.filled_with = None
        world.state_version += 1
        return _ok(world, render)

    return _fail(world, render, "affordance", f"unknown action '{kind}'",
                 interaction=True)


def step_action(world: WorldState, action: Action, render: bool = True) -> Observation:
    """Advance the world by one action; the returned observation reports
    success, budgets, and (when render=True) the egocentric frame."""
    if world.budget_exhausted():
        return observe(world, render=False, action_success=False,
                       error_code="budget_exhausted",
                       error_detail="step or interaction budget exhausted")
    world.steps_taken += 1

    kind = action.kind
    if kind == "forward":
        return _move(world, 1.0, render)
    if kind == "backward":
        return _move(world, -1.0, render)
    if kind == "turn_left":
        world.agent.yaw = (world.agent.yaw + YAW_STEP) % 360
        return _ok(world, render)
    if kind == "turn_right":
        world.agent.yaw = (world.agent.yaw - YAW_STEP) % 360
        return _ok(world, render)
    if kind == "look_up":
        world.agent.pitch = max(-PITCH_LIMIT, world.agent.pitch - PITCH_STEP)
        return _ok(world, render)
    if kind == "look_down":
        world.agent.pitch = min(PITCH_LIMIT, world.agent.pitch + PITCH_STEP)
        return _ok(world, render)
    if action.is_interaction():
        return _interact(world, action, render)
    raise ValueError(f"unknown action kind '{kind}'")

"""Precondition rules checked before each interaction statement.

Every rule reads only the agent's own estimates (what it believes it holds,
what it remembers toggling or opening), never simulator ground truth. A rule
can wave the statement through, supply an inline repair program, declare the
statement already satisfied, or refuse it outright.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..dsl import AFFORDANCES
from ..dsl.program import Call, Instantiate, Statement

KNIFE_CATEGORIES = ("Knife", "ButterKnife")

OK = "ok"
REPAIR = "repair"
SKIP = "skip"
FAIL = "fail"


@dataclass
class Decision:
    kind: str
    repair: list[Statement] | None = None
    reason: str | None = None

    @classmethod
    def ok(cls) -> "Decision":
        return cls(OK)


@dataclass
class TargetEstimate:
    """What the executor believes about the statement's target object."""
    open: bool | None = None
    powered: bool | None = None
    filled: bool = False


def knife_repair() -> list[Statement]:
    return [
        Instantiate("target_knife", "Knife"),
        Call("target_knife", "go_to"),
        Call("target_knife", "pickup"),
    ]


def put_down_repair(held_category: str) -> list[Statement]:
    return [
        Instantiate("held_obj", held_category),
        Call("held_obj", "put_down"),
    ]


def check_preconditions(
    call: Call,
    held_category: str | None,
    held_filled: bool,
    target: TargetEstimate | None = None,
) -> Decision:
    method = call.method

    if method == "slice":
        if held_category in KNIFE_CATEGORIES:
            return Decision.ok()
        repair = knife_repair()
        if held_category is not None:
            repair = put_down_repair(held_category) + repair
        return Decision(REPAIR, repair=repair,
                        reason="slicing needs a knife in hand")

    if method == "pickup":
        if held_category is None:
            return Decision.ok()
        return Decision(REPAIR, repair=put_down_repair(held_category),
                        reason="hand already occupied")

    if method == "place":
        if held_category is None:
            return Decision(FAIL, reason="nothing is held to place")
        return Decision.ok()

    if method == "pour":
        if held_category is None:
            return Decision(FAIL, reason="nothing is held to pour from")
        if not held_filled:
            return Decision(FAIL, reason="the held container is not filled")
        return Decision.ok()

    if method == "fill_up":
        if held_category is None:
            return Decision(FAIL, reason="nothing is held to fill")
        profile = AFFORDANCES.get(held_category)
        if profile is None or not profile.fillable:
            return Decision(FAIL,
                            reason=f"a {held_category} cannot hold liquid")
        return Decision.ok()

    if method == "toggle_on":
        if target is not None and target.powered is True:
            return Decision(SKIP, reason="already powered on")
        return Decision.ok()

    if method == "open":
        if target is not None and target.open is True:
            return Decision(SKIP, reason="already open")
        return Decision.ok()

    return Decision.ok()

"""Static checks over parsed programs.

Catches the mistakes a completion backend actually makes: names outside the
category whitelist, methods an object can never support, picking up a second
object with a full hand, re-opening or re-toggling something the program
already opened or toggled. Statement indices in violations are 0-based
positions in the program, not source lines.
"""
from __future__ import annotations

from dataclasses import dataclass

from .categories import (
    ALLOWED_ATTRIBUTES,
    AFFORDANCES,
    POUR_DISCARD,
    is_known_category,
)
from .program import ActionProgram, Call, CorrectiveCall, Instantiate

RULE_WHITELIST = "whitelist"
RULE_AFFORDANCE = "affordance"
RULE_HOLD_FLOW = "hold_flow"
RULE_DOUBLE_OPEN = "double_open"
RULE_DOUBLE_TOGGLE = "double_toggle"

# Methods that are only legal when the category has the matching flag.
_METHOD_FLAG = {
    "pickup": "pickupable",
    "put_down": "pickupable",
    "place": "pickupable",
    "pickup_and_place": "pickupable",
    "slice": "sliceable",
    "toggle_on": "toggleable",
    "toggle_off": "toggleable",
    "open": "openable",
    "close": "openable",
    "clean": "cleanable",
    "fill_up": "fillable",
    "pour": "fillable",
    "cook": "cookable",
    "toast": "toastable",
}


@dataclass
class Violation:
    index: int
    rule: str
    message: str


def validate_program(program: ActionProgram) -> list[Violation]:
    """Return all violations; an empty list means the program is clean."""
    violations: list[Violation] = []
    env: dict[str, str] = {}          # handle -> category
    holding: str | None = None        # handle currently in the simulated hand
    opened: set[str] = set()          # handles opened with no close since
    powered: set[str] = set()         # handles toggled on with no off since

    def bad(index: int, rule: str, message: str) -> None:
        violations.append(Violation(index=index, rule=rule, message=message))

    for i, stmt in enumerate(program.statements):
        if isinstance(stmt, CorrectiveCall):
            continue

        if isinstance(stmt, Instantiate):
            if not is_known_category(stmt.category):
                bad(i, RULE_WHITELIST, f"unknown category '{stmt.category}'")
            if stmt.landmark is not None and not is_known_category(stmt.landmark):
                bad(i, RULE_WHITELIST,
                    f"unknown landmark category '{stmt.landmark}'")
            for attr in stmt.attributes:
                if attr not in ALLOWED_ATTRIBUTES:
                    bad(i, RULE_WHITELIST, f"unknown attribute '{attr}'")
            env[stmt.handle] = stmt.category
            continue

        assert isinstance(stmt, Call)
        category = env.get(stmt.handle)
        if category is None:
            bad(i, RULE_WHITELIST, f"call on unbound handle '{stmt.handle}'")
            continue

        profile = AFFORDANCES.get(category)
        flag = _METHOD_FLAG.get(stmt.method)
        if profile is not None and flag is not None:
            if not getattr(profile, flag):
                bad(i, RULE_AFFORDANCE,
                    f"{category} does not support {stmt.method}()")
        if profile is not None and stmt.method == "empty":
            if not (profile.receptacle or profile.fillable):
                bad(i, RULE_AFFORDANCE,
                    f"{category} does not support empty()")

        if stmt.arg is not None:
            arg_cat = env.get(stmt.arg)
            if arg_cat is None:
                bad(i, RULE_WHITELIST,
                    f"argument handle '{stmt.arg}' is unbound")
            else:
                arg_profile = AFFORDANCES.get(arg_cat)
                if arg_profile is not None:
                    if stmt.method in ("place", "pickup_and_place"):
                        if not arg_profile.receptacle:
                            bad(i, RULE_AFFORDANCE,
                                f"{arg_cat} is not a receptacle")
                    elif stmt.method == "pour":
                        if not (arg_profile.fillable or arg_cat in POUR_DISCARD):
                            bad(i, RULE_AFFORDANCE,
                                f"cannot pour into {arg_cat}")

        # Hold-flow. pickup_and_place implicitly frees the hand first, so it
        # never trips the rule itself; only a bare pickup with a full hand does.
        if stmt.method == "pickup":
            if holding is not None:
                bad(i, RULE_HOLD_FLOW,
                    f"pickup of '{stmt.handle}' while already holding "
                    f"'{holding}'")
            holding = stmt.handle
        elif stmt.method in ("place", "put_down", "pickup_and_place"):
            holding = None

        if stmt.method == "open":
            if stmt.handle in opened:
                bad(i, RULE_DOUBLE_OPEN,
                    f"'{stmt.handle}' opened twice with no close in between")
            opened.add(stmt.handle)
        elif stmt.method == "close":
            opened.discard(stmt.handle)

        if stmt.method == "toggle_on":
            if stmt.handle in powered:
                bad(i, RULE_DOUBLE_TOGGLE,
                    f"'{stmt.handle}' toggled on while already on")
            powered.add(stmt.handle)
        elif stmt.method == "toggle_off":
            powered.discard(stmt.handle)

    return violations

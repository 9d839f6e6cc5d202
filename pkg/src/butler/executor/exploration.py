"""Frontier exploration.

The agent first rotates in place to seed the map, then repeatedly picks an
unexplored lattice cell (seeded RNG), walks toward it through optimistically
traversable space, and scans. It stops once the unexplored count drops under
the threshold, the step budget runs out, or a caller-provided predicate
fires (used by object search to bail as soon as the target shows up).
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .agent import AgentSession
from .navigation import NavError, plan_route

UNEXPLORED_THRESHOLD = 12
DEFAULT_STEP_BUDGET = 250
_MAX_ROUNDS = 40


def _drive(session: AgentSession, goal: tuple[int, int]) -> bool:
    """Walk toward one cell, replanning around surprise obstacles.

    Returns False when the goal turned out to be unreachable.
    """
    for _ in range(10):
        grid = session.nav_state(optimistic=True)
        start = session.nav_cell()
        if start == goal:
            return True
        try:
            route = plan_route(grid, start, [goal], session.pose.yaw)
        except NavError:
            return False
        bumped = False
        for kind in route.actions:
            obs = session.do(kind)
            if not obs.action_success:
                if kind == "forward":
                    session.mark_blocked_ahead()
                bumped = True
                break
        if not bumped:
            return True
    return False


def explore(
    session: AgentSession,
    rng: np.random.Generator,
    step_budget: int = DEFAULT_STEP_BUDGET,
    unexplored_threshold: int = UNEXPLORED_THRESHOLD,
    stop_when: Callable[[], bool] | None = None,
) -> None:
    start_steps = session.world.steps_taken

    def spent() -> int:
        return session.world.steps_taken - start_steps

    session.pitch_to(30)
    for _ in range(4):
        session.do("turn_left")

    unreachable: set[tuple[int, int]] = set()
    for _ in range(_MAX_ROUNDS):
        if stop_when is not None and stop_when():
            return
        if spent() >= step_budget:
            return
        _, explored = session.map.nav_grids(session.config.step_m)
        candidates = [tuple(c) for c in np.argwhere(~explored)
                      if tuple(c) not in unreachable]
        if len(candidates) < unexplored_threshold:
            return
        pick = candidates[int(rng.integers(len(candidates)))]
        if not _drive(session, pick):
            unreachable.add(pick)
            continue
        for _ in range(4):
            session.do("turn_left")

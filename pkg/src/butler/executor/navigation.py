"""Grid navigation over the mapped step lattice.

A geodesic distance field is computed by breadth-first search from the goal
cells over traversable space. The route then descends the field greedily:
from each cell, move to the 4-neighbor with the lowest remaining distance,
preferring to keep the current heading to avoid spurious turns. Because every
move strictly decreases the field, the realized number of forward steps
equals the BFS shortest-path length.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

Cell = tuple[int, int]

# (dx, dz) indexed by yaw/90; yaw 0 faces +z.
HEADINGS = {0: (0, 1), 90: (1, 0), 180: (0, -1), 270: (-1, 0)}

UNREACHABLE = np.iinfo(np.int32).max


class NavError(Exception):
    pass


@dataclass
class Route:
    cells: list[Cell]
    actions: list[str] = field(default_factory=list)
    final_yaw: int = 0

    @property
    def forward_count(self) -> int:
        return sum(1 for a in self.actions if a == "forward")


def distance_field(traversable: np.ndarray,
                   goals: Iterable[Cell]) -> np.ndarray:
    """Per-cell BFS distance to the nearest traversable goal cell."""
    nx, nz = traversable.shape
    dist = np.full((nx, nz), UNREACHABLE, dtype=np.int32)
    queue: deque[Cell] = deque()
    for i, j in goals:
        if 0 <= i < nx and 0 <= j < nz and traversable[i, j]:
            if dist[i, j] != 0:
                dist[i, j] = 0
                queue.append((i, j))
    while queue:
        i, j = queue.popleft()
        d = dist[i, j] + 1
        for di, dj in ((0, 1), (1, 0), (0, -1), (-1, 0)):
            ni, nj = i + di, j + dj
            if (0 <= ni < nx and 0 <= nj < nz and traversable[ni, nj]
                    and d < dist[ni, nj]):
                dist[ni, nj] = d
                queue.append((ni, nj))
    return dist


def turns_between(cur_yaw: int, target_yaw: int) -> list[str]:
    delta = (target_yaw - cur_yaw) % 360
    if delta == 0:
        return []
    if delta == 90:
        return ["turn_left"]
    if delta == 270:
        return ["turn_right"]
    return ["turn_left", "turn_left"]


def plan_route(traversable: np.ndarray, start: Cell, goals: Iterable[Cell],
               start_yaw: int) -> Route:
    """Greedy descent of the distance field from start into the goal set."""
    goals = list(goals)
    nx, nz = traversable.shape
    i, j = start
    if not (0 <= i < nx and 0 <= j < nz) or not traversable[i, j]:
        raise NavError(f"start cell {start} not traversable")
    dist = distance_field(traversable, goals)
    if dist[i, j] == UNREACHABLE:
        raise NavError("goal unreachable from start")

    route = Route(cells=[start], final_yaw=start_yaw)
    yaw = start_yaw
    while dist[i, j] > 0:
        best = None
        for cand_yaw, (di, dj) in HEADINGS.items():
            ni, nj = i + di, j + dj
            if not (0 <= ni < nx and 0 <= nj < nz and traversable[ni, nj]):
                continue
            if dist[ni, nj] >= dist[i, j]:
                continue
            cost = len(turns_between(yaw, cand_yaw))
            key = (dist[ni, nj], cost, cand_yaw)
            if best is None or key < best[0]:
                best = (key, cand_yaw, (ni, nj))
        if best is None:   # cannot happen on a correct field
            raise NavError("distance field descent stuck")
        _, cand_yaw, (ni, nj) = best
        route.actions.extend(turns_between(yaw, cand_yaw))
        route.actions.append("forward")
        route.cells.append((ni, nj))
        yaw = cand_yaw
        i, j = ni, nj
    route.final_yaw = yaw
    return route


def cells_near_point(traversable: np.ndarray, step_m: float,
                     x: float, z: float, radius: float) -> list[Cell]:
    """Traversable cells whose centers lie within radius of (x, z)."""
    nx, nz = traversable.shape
    out = []
    for i in range(nx):
        cx = (i + 0.5) * step_m
        if abs(cx - x) > radius:
            continue
        for j in range(nz):
            cz = (j + 0.5) * step_m
            if traversable[i, j] and (cx - x) ** 2 + (cz - z) ** 2 <= radius ** 2:
                out.append((i, j))
    return out


def nearest_reachable(traversable: np.ndarray, start: Cell, step_m: float,
                      x: float, z: float) -> Cell | None:
    """Reachable cell closest to a point, when no cell is inside the radius."""
    dist = distance_field(traversable, [start])
    best, best_d = None, None
    nx, nz = traversable.shape
    for i in range(nx):
        for j in range(nz):
            if dist[i, j] == UNREACHABLE:
                continue
            d = ((i + 0.5) * step_m - x) ** 2 + ((j + 0.5) * step_m - z) ** 2
            if best_d is None or d < best_d:
                best, best_d = (i, j), d
    return best


def yaw_facing(from_x: float, from_z: float, to_x: float, to_z: float) -> int:
    """Lattice yaw best aligned with the direction to a point."""
    dx, dz = to_x - from_x, to_z - from_z
    best_yaw, best_dot = 0, -np.inf
    for yaw, (hx, hz) in HEADINGS.items():
        dot = dx * hx + dz * hz
        if dot > best_dot:
            best_yaw, best_dot = yaw, dot
    return best_yaw


def pitch_facing(camera_height: float, target_y: float,
                 horizontal_dist: float) -> int:
    """Nearest 30-degree pitch stop that points the camera at a height."""
    drop = camera_height - target_y
    angle = np.degrees(np.arctan2(drop, max(horizontal_dist, 1e-6)))
    return int(np.clip(30 * round(angle / 30.0), -60, 60))

"""2D occupancy mapping from unprojected depth.

Points are binned into a fine XZ grid. Heights inside the obstacle bands mark
a cell as occupied; points at floor level mark free support. A cell counts as
explored once it has accumulated enough observations, so unseen territory
stays distinguishable from genuinely empty floor. A coarser navigation
lattice (one cell per agent step) is derived by block-pooling.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_CELL_M = 0.05
DEFAULT_BANDS = ((0.05, 0.3), (0.3, 1.0), (1.0, 1.8))
FLOOR_MAX = 0.05
EXPLORED_THRESHOLD = 3


@dataclass
class OccupancyMap:
    width_m: float
    height_m: float
    cell_m: float = DEFAULT_CELL_M
    bands: tuple = DEFAULT_BANDS
    floor_max: float = FLOOR_MAX
    explored_threshold: int = EXPLORED_THRESHOLD
    obstacle_min_points: int = 1
    nx: int = field(init=False)
    nz: int = field(init=False)

    def __post_init__(self):
        self.nx = int(np.ceil(self.width_m / self.cell_m))
        self.nz = int(np.ceil(self.height_m / self.cell_m))
        self.obstacle_count = np.zeros((self.nx, self.nz), dtype=np.int32)
        self.floor_count = np.zeros((self.nx, self.nz), dtype=np.int32)
        self.observed_count = np.zeros((self.nx, self.nz), dtype=np.int32)
        self.forced_free = np.zeros((self.nx, self.nz), dtype=bool)
        self.forced_block = np.zeros((self.nx, self.nz), dtype=bool)
        self.dropped_points = 0

    def cell_of(self, x: float, z: float) -> tuple[int, int]:
        return (int(np.floor(x / self.cell_m)),
                int(np.floor(z / self.cell_m)))

    def update(self, points: np.ndarray) -> None:
        """Fold a batch of reference-frame points into the counts."""
        if len(points) == 0:
            return
        xs = np.floor(points[:, 0] / self.cell_m).astype(np.int64)
        zs = np.floor(points[:, 2] / self.cell_m).astype(np.int64)
        ys = points[:, 1]
        inb = (xs >= 0) & (xs < self.nx) & (zs >= 0) & (zs < self.nz)
        self.dropped_points += int((~inb).sum())
        xs, zs, ys = xs[inb], zs[inb], ys[inb]

        is_floor = ys < self.floor_max
        is_obstacle = np.zeros(len(ys), dtype=bool)
        for lo, hi in self.bands:
            is_obstacle |= (ys >= lo) & (ys < hi)

        np.add.at(self.floor_count, (xs[is_floor], zs[is_floor]), 1)
        np.add.at(self.obstacle_count, (xs[is_obstacle], zs[is_obstacle]), 1)
        counted = is_floor | is_obstacle
        np.add.at(self.observed_count, (xs[counted], zs[counted]), 1)

    def mark_agent_cell(self, x: float, z: float) -> None:
        """The agent's own footprint is free by construction."""
        i, j = self.cell_of(x, z)
        if 0 <= i < self.nx and 0 <= j < self.nz:
            self.forced_free[i, j] = True

    def mark_blocked(self, x: float, z: float) -> None:
        """A cell the agent bumped into is an obstacle, whatever depth said.

        Low obstacles (and objects between the height bands) produce no
        obstacle evidence but still block motion, so collisions are folded
        back into the map to keep replanning honest.
        """
        i, j = self.cell_of(x, z)
        if 0 <= i < self.nx and 0 <= j < self.nz:
            self.forced_block[i, j] = True

    @property
    def obstacle(self) -> np.ndarray:
        return self.obstacle_count >= self.obstacle_min_points

    @property
    def explored(self) -> np.ndarray:
        return (self.observed_count >= self.explored_threshold) | self.forced_free

    @property
    def free(self) -> np.ndarray:
        return (self.explored & ~self.obstacle) | self.forced_free

    def nav_grids(self, step_m: float) -> tuple[np.ndarray, np.ndarray]:
        """(traversable, explored) on the step lattice.

        A step cell is traversable when none of its fine cells are obstacles,
        and explored when any fine cell is.
        """
        factor = max(1, int(round(step_m / self.cell_m)))
        gx = self.nx // factor
        gz = self.nz // factor
        obst = self.obstacle[:gx * factor, :gz * factor]
        expl = self.explored[:gx * factor, :gz * factor]
        obst_b = obst.reshape(gx, factor, gz, factor).any(axis=(1, 3))
        expl_b = expl.reshape(gx, factor, gz, factor).any(axis=(1, 3))
        forced = self.forced_free[:gx * factor, :gz * factor]
        forced_b = forced.reshape(gx, factor, gz, factor).any(axis=(1, 3))
        blocked = self.forced_block[:gx * factor, :gz * factor]
        blocked_b = blocked.reshape(gx, factor, gz, factor).any(axis=(1, 3))
        traversable = ((~obst_b & expl_b) | forced_b) & ~blocked_b
        return traversable, expl_b

    def snapshot(self) -> dict:
        """Compact row-major run-length encoding of obstacle and explored."""
        def rle(grid: np.ndarray) -> list[list[int]]:
            flat = grid.T.ravel()   # row-major over (z, x) for display
            runs = []
            idx = 0
            n = len(flat)
            while idx < n:
                if flat[idx]:
                    start = idx
                    while idx < n and flat[idx]:
                        idx += 1
                    runs.append([int(start), int(idx - start)])
                else:
                    idx += 1
            return runs

        return {
            "cell_m": self.cell_m,
            "nx": self.nx,
            "nz": self.nz,
            "obstacle_runs": rle(self.obstacle),
            "explored_runs": rle(self.explored),
        }

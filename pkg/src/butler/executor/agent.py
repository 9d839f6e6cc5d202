"""Embodied session: one agent, one world, one set of maps.

AgentSession is the single funnel for low-level actions. Every action goes
through the simulator, the returned frame is folded into the occupancy map
and object memory, and the pose estimate advances by dead reckoning (the
simulator's ground-truth pose is never read back). It also owns the event
sink used by the service layer and throttles map snapshot events.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..perception import (
    CameraIntrinsics,
    ObjectMemory,
    OccupancyMap,
    OracleAttributeClassifier,
    Pose,
    unproject,
)
from ..world.sim import observe, step_action
from ..world.state import Action, Observation, WorldState

EventSink = Callable[[str, dict], None]

SNAPSHOT_EVERY = 40


class BudgetExhausted(Exception):
    """The step or interaction-failure budget ran out; the episode is over."""


@dataclass
class PoseEstimate:
    x: float
    z: float
    yaw: int
    pitch: int


class AgentSession:
    def __init__(
        self,
        world: WorldState,
        events: EventSink | None = None,
        snapshot_every: int = SNAPSHOT_EVERY,
        perceive_stride: int = 2,
        attribute_source: str = "oracle",
    ):
        self.world = world
        self.config = world.config
        self.intrinsics = CameraIntrinsics.square(
            self.config.camera_res, self.config.fov_deg)
        width_m = world.width * self.config.cell_m
        height_m = world.height * self.config.cell_m
        self.map = OccupancyMap(width_m, height_m)
        classifier = (OracleAttributeClassifier(world)
                      if attribute_source == "oracle" else None)
        self.memory = ObjectMemory(classifier)
        a = world.agent
        # The spawn pose is given, so the estimate starts exact and stays
        # exact under dead reckoning in this deterministic simulator.
        self.pose = PoseEstimate(a.x, a.z, a.yaw, a.pitch)
        self.events = events
        self.snapshot_every = snapshot_every
        self.perceive_stride = perceive_stride
        self.last_obs: Observation | None = None
        self._snapshot_seq = 0
        self._since_snapshot = 0

    # ------------------------------------------------------------------ io

    def emit(self, kind: str, payload: dict) -> None:
        if self.events is not None:
            self.events(kind, payload)

    def start(self) -> Observation:
        """Take in the spawn frame before any action is issued."""
        obs = observe(self.world)
        self._perceive(obs)
        return obs

    def do(self, kind: str, u: int | None = None,
           v: int | None = None) -> Observation:
        obs = step_action(self.world, Action(kind, u, v))
        if obs.error_code == "budget_exhausted":
            raise BudgetExhausted(obs.error_detail or "budget exhausted")
        if obs.action_success:
            self._advance_pose(kind)
        self._perceive(obs)
        self._since_snapshot += 1
        if self._since_snapshot >= self.snapshot_every:
            self.emit_snapshot()
        return obs

    def refresh(self) -> Observation:
        """Re-render the current viewpoint without consuming a step."""
        obs = observe(self.world)
        self._perceive(obs)
        return obs

    # ------------------------------------------------------- pose tracking

    def _advance_pose(self, kind: str) -> None:
        p = self.pose
        if kind == "forward" or kind == "backward":
            sign = 1.0 if kind == "forward" else -1.0
            rad = np.radians(p.yaw)
            p.x += sign * self.config.step_m * float(np.sin(rad))
            p.z += sign * self.config.step_m * float(np.cos(rad))
        elif kind == "turn_left":
            p.yaw = (p.yaw + 90) % 360
        elif kind == "turn_right":
            p.yaw = (p.yaw - 90) % 360
        elif kind == "look_up":
            p.pitch = max(-60, p.pitch - 30)
        elif kind == "look_down":
            p.pitch = min(60, p.pitch + 30)

    def camera_pose(self) -> Pose:
        p = self.pose
        return Pose.from_agent(p.x, p.z, p.yaw, p.pitch,
                               self.config.camera_height)

    def _perceive(self, obs: Observation) -> None:
        if obs.depth is None:
            return
        pose = self.camera_pose()
        points, _, _ = unproject(obs.depth, self.intrinsics, pose,
                                 stride=self.perceive_stride)
        self.map.update(points)
        self.map.mark_agent_cell(self.pose.x, self.pose.z)
        self.memory.update(obs.masks, obs.depth, self.intrinsics, pose)
        self.last_obs = obs

    # ------------------------------------------------------------ movement

    def pitch_to(self, target: int) -> None:
        target = int(np.clip(30 * round(target / 30.0), -60, 60))
        guard = 0
        while self.pose.pitch != target and guard < 5:
            self.do("look_down" if target > self.pose.pitch else "look_up")
            guard += 1

    def look_around(self, pitches: tuple[int, ...] = (30, 0)) -> None:
        """Full turn at each pitch; the cheap way to sweep a room corner."""
        for pitch in pitches:
            self.pitch_to(pitch)
            for _ in range(4):
                self.do("turn_left")

    # ------------------------------------------------------------- lattice

    def nav_cell(self) -> tuple[int, int]:
        step = self.config.step_m
        return (int(self.pose.x / step), int(self.pose.z / step))

    def nav_state(self, optimistic: bool = True) -> np.ndarray:
        """Traversable grid on the step lattice; unknown space is assumed
        walkable when optimistic, so early routes can cross unseen floor."""
        trav, expl = self.map.nav_grids(self.config.step_m)
        grid = (trav | ~expl) if optimistic else trav.copy()
        i, j = self.nav_cell()
        if 0 <= i < grid.shape[0] and 0 <= j < grid.shape[1]:
            grid[i, j] = True
        return grid

    def mark_blocked_ahead(self) -> None:
        rad = np.radians(self.pose.yaw)
        bx = self.pose.x + self.config.step_m * float(np.sin(rad))
        bz = self.pose.z + self.config.step_m * float(np.cos(rad))
        step = self.config.step_m
        # Block the whole lattice cell, not just one fine cell, so the next
        # plan actually routes around it.
        ci, cj = int(bx / step), int(bz / step)
        self.map.mark_blocked((ci + 0.5) * step, (cj + 0.5) * step)

    # -------------------------------------------------------------- events

    def emit_snapshot(self) -> None:
        self._since_snapshot = 0
        if self.events is None:
            return
        self._snapshot_seq += 1
        payload = self.map.snapshot()
        payload["seq"] = self._snapshot_seq
        payload["agent"] = {
            "x": self.pose.x, "z": self.pose.z,
            "yaw": self.pose.yaw, "pitch": self.pose.pitch,
        }
        payload["objects"] = [
            {"label": inst.label,
             "x": float(inst.centroid[0]), "z": float(inst.centroid[2])}
            for inst in self.memory.instances
        ]
        self.emit("map_snapshot", payload)

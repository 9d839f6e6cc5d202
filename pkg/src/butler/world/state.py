"""World state for the grid household simulator.

The world is a rectangular lattice of square cells. The agent moves on cell
centers in fixed-size steps, rotates in 90-degree yaw and 30-degree pitch
increments, and interacts with objects by pixel coordinates in its egocentric
view. Coordinates are meters: x and z span the floor, y is up.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dsl import AFFORDANCES

SCHEMA_VERSION = 1

# Movement / rotation / camera constants.
STEP_M = 0.25
YAW_STEP = 90
PITCH_STEP = 30
PITCH_LIMIT = 60
CAMERA_HEIGHT = 0.9015
FOV_DEG = 90.0
DEFAULT_CAMERA_RES = 480
INTERACT_DIST = 1.5
MAX_STEPS = 1000
MAX_API_FAILURES = 30

ERROR_CODES = (
    "blocked", "too_far", "not_visible", "hand_occupied", "hand_empty",
    "affordance", "receptacle_full", "budget_exhausted",
)

MOVE_ACTIONS = ("forward", "backward")
ROTATE_ACTIONS = ("turn_left", "turn_right", "look_up", "look_down")
INTERACT_ACTIONS = (
    "pickup", "place", "open", "close", "toggle_on", "toggle_off", "slice",
    "pour",
)

# Receptacles whose contents sit inside the body rather than on the top face.
_INSIDE_RECEPTACLES = frozenset({
    "Fridge", "Cabinet", "Microwave", "Drawer", "Safe", "Box", "Pot", "Pan",
    "Bowl", "Cup", "Mug", "Sink", "SinkBasin", "Toaster", "GarbageCan",
    "LaundryHamper", "Bathtub", "BathtubBasin", "CoffeeMachine", "Toilet",
})


@dataclass
class Action:
    kind: str
    u: int | None = None
    v: int | None = None

    def is_interaction(self) -> bool:
        return self.kind in INTERACT_ACTIONS


@dataclass
class SimObject:
    id: str
    category: str
    position: np.ndarray          # (3,) center, meters
    size: np.ndarray              # (3,) full extents, meters
    open: bool = False
    powered: bool = False
    sliced: bool = False
    clean: bool = True
    cooked: bool = False
    toasted: bool = False
    filled_with: str | None = None
    parent: str | None = None     # containing receptacle id
    contents: list[str] = field(default_factory=list)
    controls: str | None = None   # linked device id (knob -> burner etc.)
    capacity: int = 8
    blocks: bool | None = None    # override for motion blocking

    @property
    def pickupable(self) -> bool:
        prof = AFFORDANCES.get(self.category)
        return bool(prof and prof.pickupable)

    def blocks_motion(self) -> bool:
        if self.blocks is not None:
            return self.blocks
        return not self.pickupable

    def places_inside(self) -> bool:
        return self.category in _INSIDE_RECEPTACLES

    def footprint(self) -> tuple[float, float, float, float]:
        """(xmin, xmax, zmin, zmax) of the XZ bounding rectangle."""
        hx, hz = self.size[0] / 2.0, self.size[2] / 2.0
        return (self.position[0] - hx, self.position[0] + hx,
                self.position[2] - hz, self.position[2] + hz)

    def horizontal_distance_to(self, x: float, z: float) -> float:
        xmin, xmax, zmin, zmax = self.footprint()
        dx = max(xmin - x, 0.0, x - xmax)
        dz = max(zmin - z, 0.0, z - zmax)
        return float(np.hypot(dx, dz))


@dataclass
class AgentState:
    x: float
    z: float
    yaw: int = 0      # degrees, 0 faces +z, turn_left adds 90
    pitch: int = 0    # degrees, positive looks down
    holding: str | None = None

    def heading(self) -> tuple[float, float]:
        rad = np.deg2rad(self.yaw)
        return float(np.sin(rad)), float(np.cos(rad))

    def pose_tuple(self) -> tuple[float, float, int, int]:
        return (self.x, self.z, self.yaw, self.pitch)


@dataclass
class WorldConfig:
    cell_m: float = STEP_M
    step_m: float = STEP_M
    interact_dist: float = INTERACT_DIST
    camera_height: float = CAMERA_HEIGHT
    camera_res: int = DEFAULT_CAMERA_RES
    fov_deg: float = FOV_DEG
    max_steps: int = MAX_STEPS
    max_api_failures: int = MAX_API_FAILURES
    slice_fanout: int = 4
    ceiling_height: float = 2.7
    render_rgb: bool = False


@dataclass
class DetectionMask:
    object_id: str
    category: str
    mask: np.ndarray              # (H, W) bool
    score: float = 1.0


@dataclass
class Observation:
    action_success: bool
    error_code: str | None = None
    error_detail: str | None = None
    depth: np.ndarray | None = None
    masks: list[DetectionMask] = field(default_factory=list)
    rgb: np.ndarray | None = None
    pose_truth: dict | None = None     # oracle-only; agent code must not read
    steps_taken: int = 0
    api_failures: int = 0


class WorldState:
    def __init__(
        self,
        width: int,
        height: int,
        walls: set[tuple[int, int]],
        objects: dict[str, SimObject],
        agent: AgentState,
        config: WorldConfig | None = None,
        name: str = "world",
    ):
        self.width = width
        self.height = height
        self.walls = walls
        self.objects = objects
        self.agent = agent
        self.config = config or WorldConfig()
        self.name = name
        self.steps_taken = 0
        self.api_failures = 0
        self.state_version = 0
        self.pending_failures: dict[str, list[str]] = {}
        self._id_counter = 0
        self._render_cache: dict = {}

    def cell_of(self, x: float, z: float) -> tuple[int, int]:
        return (int(np.floor(x / self.config.cell_m)),
                int(np.floor(z / self.config.cell_m)))

    def cell_center(self, i: int, j: int) -> tuple[float, float]:
        c = self.config.cell_m
        return ((i + 0.5) * c, (j + 0.5) * c)

    def in_bounds(self, i: int, j: int) -> bool:
        return 0 <= i < self.width and 0 <= j < self.height

    def fresh_id(self, category: str) -> str:
        self._id_counter += 1
        return f"{category}_auto{self._id_counter}"

    def is_hidden(self, obj: SimObject) -> bool:
        """Held, or inside a closed openable receptacle anywhere up the chain."""
        if obj.id == self.agent.holding:
            return True
        seen = set()
        parent = obj.parent
        while parent is not None and parent not in seen:
            if parent == self.agent.holding:
                return True
            seen.add(parent)
            container = self.objects.get(parent)
            if container is None:
                break
            prof = AFFORDANCES.get(container.category)
            if prof is not None and prof.openable and not container.open:
                return True
            parent = container.parent
        return False

    def visible_objects(self) -> list[SimObject]:
        return [o for o in self.objects.values() if not self.is_hidden(o)]

    def blocked_cell(self, i: int, j: int) -> bool:
        """True when the agent cannot stand on cell (i, j)."""
        if not self.in_bounds(i, j) or (i, j) in self.walls:
            return True
        x, z = self.cell_center(i, j)
        for obj in self.objects.values():
            if obj.id == self.agent.holding or obj.parent is not None:
                continue
            if not obj.blocks_motion():
                continue
            xmin, xmax, zmin, zmax = obj.footprint()
            if xmin <= x <= xmax and zmin <= z <= zmax:
                return True
        return False

    def budget_exhausted(self) -> bool:
        return (self.steps_taken >= self.config.max_steps
                or self.api_failures >= self.config.max_api_failures)

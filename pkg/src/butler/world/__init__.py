from .goals import (
    Goal,
    GoalResult,
    TaskFormatError,
    TaskReport,
    TaskSpec,
    check_goals,
    load_task,
)
from .loader import WorldFormatError, load_world
from .render import (
    BACKGROUND,
    RenderFrame,
    camera_basis,
    masks_from_frame,
    render_frame,
    resolve_pixel,
)
from .sim import inject_failure, observe, step_action
from .state import (
    Action,
    AgentState,
    CAMERA_HEIGHT,
    DEFAULT_CAMERA_RES,
    DetectionMask,
    ERROR_CODES,
    FOV_DEG,
    INTERACT_DIST,
    MAX_API_FAILURES,
    MAX_STEPS,
    Observation,
    PITCH_LIMIT,
    PITCH_STEP,
    SCHEMA_VERSION,
    STEP_M,
    SimObject,
    WorldConfig,
    WorldState,
    YAW_STEP,
)

__all__ = [
    "Goal", "GoalResult", "TaskFormatError", "TaskReport", "TaskSpec",
    "check_goals", "load_task", "WorldFormatError", "load_world",
    "BACKGROUND", "RenderFrame", "camera_basis", "masks_from_frame",
    "render_frame", "resolve_pixel", "inject_failure", "observe",
    "step_action", "Action", "AgentState", "CAMERA_HEIGHT",
    "DEFAULT_CAMERA_RES", "DetectionMask", "ERROR_CODES", "FOV_DEG",
    "INTERACT_DIST", "MAX_API_FAILURES", "MAX_STEPS", "Observation",
    "PITCH_LIMIT", "PITCH_STEP", "SCHEMA_VERSION", "STEP_M", "SimObject",
    "WorldConfig", "WorldState", "YAW_STEP",
]

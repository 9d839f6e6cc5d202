from .backends import BackendError, CompletionBackend, RemoteBackend, ScriptedBackend
from .dialogue import Dialogue, SPEAKERS
from .locator import (
    DEFAULT_PRIORS,
    LANDMARK_PRIORS,
    MAX_LANDMARKS,
    locate_object_landmarks,
    parse_locator_response,
)
from .planner import (
    CorrectionResult,
    FailureFeedback,
    PlanError,
    Planner,
    PlannerConfig,
    PlanResult,
)
from .prompts import (
    api_text,
    assemble_correction_prompt,
    assemble_locator_prompt,
    assemble_plan_prompt,
    corrective_api_text,
    object_classes_text,
    render_correction_examples,
    render_plan_examples,
)

__all__ = [
    "BackendError", "CompletionBackend", "RemoteBackend", "ScriptedBackend",
    "Dialogue", "SPEAKERS", "DEFAULT_PRIORS", "LANDMARK_PRIORS",
    "MAX_LANDMARKS", "locate_object_landmarks", "parse_locator_response",
    "CorrectionResult", "FailureFeedback", "PlanError", "Planner",
    "PlannerConfig", "PlanResult", "api_text", "assemble_correction_prompt",
    "assemble_locator_prompt", "assemble_plan_prompt", "corrective_api_text",
    "object_classes_text", "render_correction_examples",
    "render_plan_examples",
]

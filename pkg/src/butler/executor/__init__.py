from .agent import AgentSession, BudgetExhausted, PoseEstimate
from .executor import (
    Binding,
    ExecutionTrace,
    Executor,
    ExecutorConfig,
    PreconditionFail,
    StatementFailure,
    StatementRecord,
)
from .exploration import explore
from .failures import (
    CodeFailureClassifier,
    FAILURE_CASES,
    GENERIC_FAILURE,
    classify_failure,
)
from .navigation import (
    NavError,
    Route,
    cells_near_point,
    distance_field,
    pitch_facing,
    plan_route,
    turns_between,
    yaw_facing,
)
from .preconditions import (
    Decision,
    TargetEstimate,
    check_preconditions,
    knife_repair,
    put_down_repair,
)

__all__ = [
    "AgentSession",
    "Binding",
    "BudgetExhausted",
    "CodeFailureClassifier",
    "Decision",
    "ExecutionTrace",
    "Executor",
    "ExecutorConfig",
    "FAILURE_CASES",
    "GENERIC_FAILURE",
    "NavError",
    "PoseEstimate",
    "PreconditionFail",
    "Route",
    "StatementFailure",
    "StatementRecord",
    "TargetEstimate",
    "cells_near_point",
    "check_preconditions",
    "classify_failure",
    "distance_field",
    "explore",
    "knife_repair",
    "pitch_facing",
    "plan_route",
    "put_down_repair",
    "turns_between",
    "yaw_facing",
]

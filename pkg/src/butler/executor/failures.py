"""Textual diagnosis of failed actions.

A failed interaction is matched against a fixed list of failure descriptions;
the winning sentence becomes the feedback that drives correction retrieval
and prompting. The default classifier keys off the simulator error code. An
image-based matcher can be swapped in behind the same protocol without
touching any caller.
"""
from __future__ import annotations

from typing import Protocol

from ..world.state import Observation

FAILURE_CASES = (
    "an object is blocking you from interacting with the selected object",
    "the object is too far away to interact with",
    "the object is too close to interact with",
    "the object is occluded and not visible from the current viewpoint",
    "your hand is already holding an object",
    "the receptacle is too full to place the object",
)

GENERIC_FAILURE = "the action failed for an unknown reason"

_CODE_TO_CASE = {
    "blocked": FAILURE_CASES[0],
    "too_far": FAILURE_CASES[1],
    "not_visible": FAILURE_CASES[3],
    "hand_occupied": FAILURE_CASES[4],
    "receptacle_full": FAILURE_CASES[5],
}


class FailureClassifier(Protocol):
    def classify(self, obs: Observation, subgoal: str) -> str: ...


class CodeFailureClassifier:
    """Maps simulator error codes onto the failure-case list.

    Codes without a counterpart in the list (hand_empty, affordance) fall
    through to the generic sentence rather than inventing new cases.
    """

    def classify(self, obs: Observation, subgoal: str) -> str:
        return _CODE_TO_CASE.get(obs.error_code or "", GENERIC_FAILURE)


def classify_failure(obs: Observation, subgoal: str,
                     classifier: FailureClassifier | None = None) -> str:
    return (classifier or CodeFailureClassifier()).classify(obs, subgoal)

"""Feedback elicitation after a program finishes.

The agent asks a fixed question. The oracle source answers it from the task's
unmet goal conditions, one templated sentence per condition, in goal order;
an empty answer means the user is satisfied and the episode ends. Interactive
sources (console, stdin) supply free-form text instead.
"""
from __future__ import annotations

from ..world.goals import TaskReport

FEEDBACK_QUESTION = (
    "Is the task completed to your satisfaction? Did I miss anything?"
)

_SENTENCE = ("You failed to complete the subtask: {subtask}. "
             "For the object {obj}: {desired}.")


def oracle_feedback(report: TaskReport) -> str:
    """Unmet conditions rendered as correction sentences; empty when done."""
    sentences = []
    for goal in report.unmet_goals():
        subtask = goal.subtask or goal.describe()
        desired = goal.desired or "it is not in the desired state"
        sentences.append(_SENTENCE.format(
            subtask=subtask, obj=goal.category, desired=desired))
    return " ".join(sentences)

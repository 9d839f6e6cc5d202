"""Prompt assembly from bundled templates.

Templates carry {PLACEHOLDER} slots and are filled by literal replacement
(str.format would trip over the braces in the embedded API code). The object
class list is always rendered from the canonical whitelist so prompt and
validator can never disagree.
"""
from __future__ import annotations

from functools import lru_cache

from ..dsl import OBJECT_CATEGORIES, render_program
from ..memory import MemoryEntry
from ..resources import read_data_text


@lru_cache(maxsize=None)
def _template(name: str) -> str:
    return read_data_text("templates", name)


def api_text() -> str:
    return _template("api.txt").rstrip("\n")


def corrective_api_text() -> str:
    return _template("api_corrective.txt").rstrip("\n")


def object_classes_text() -> str:
    return ", ".join(OBJECT_CATEGORIES)


def render_plan_examples(entries: list[MemoryEntry]) -> str:
    blocks = []
    for i, entry in enumerate(entries, start=1):
        blocks.append(
            f"Example {i}:\n"
            f"dialogue: {entry.key_text}\n"
            f"Python script:\n"
            f"{render_program(entry.program)}"
        )
    return "\n\n".join(blocks)


def render_correction_examples(entries: list[MemoryEntry]) -> str:
    """Correction entries reuse MemoryEntry.name as the failed-subgoal label."""
    blocks = []
    for i, entry in enumerate(entries, start=1):
        failure = entry.failure_text or "the action failed"
        blocks.append(
            f"Example {i}:\n"
            f"Failed subgoal: {entry.name or 'subgoal'}\n"
            f"Execution error: {failure}\n"
            f"Input dialogue: {entry.key_text}\n"
            f"Explain: The action failed because {failure}.\n"
            f"Plan (Python script):\n"
            f"{render_program(entry.program)}"
        )
    return "\n\n".join(blocks)


def assemble_plan_prompt(dialogue_text: str, examples: list[MemoryEntry]) -> str:
    prompt = _template("plan_prompt.txt")
    prompt = prompt.replace("{API}", api_text())
    prompt = prompt.replace("{OBJECT_CLASSES}", object_classes_text())
    prompt = prompt.replace("{RETRIEVED_EXAMPLES}", render_plan_examples(examples))
    prompt = prompt.replace("{command}", dialogue_text)
    return prompt


def assemble_correction_prompt(
    failed_subgoal: str,
    error_text: str,
    dialogue_text: str,
    examples: list[MemoryEntry],
) -> str:
    prompt = _template("correction_prompt.txt")
    prompt = prompt.replace("{API}", api_text())
    prompt = prompt.replace("{API_CORRECTIVE}", corrective_api_text())
    prompt = prompt.replace("{OBJECT_CLASSES}", object_classes_text())
    prompt = prompt.replace(
        "{retrieved_plans}", render_correction_examples(examples)
    )
    prompt = prompt.replace("{FAILED_SUBGOAL}", failed_subgoal)
    prompt = prompt.replace("{EXECUTION_ERROR}", error_text)
    prompt = prompt.replace("{INPUT_DIALOGUE}", dialogue_text)
    return prompt


def assemble_locator_prompt(target_category: str, dialogue_text: str) -> str:
    prompt = _template("locator_prompt.txt")
    prompt = prompt.replace("{OBJECT_CLASSES}", object_classes_text())
    prompt = prompt.replace("{INPUT_TARGET_OBJECT}", target_category)
    prompt = prompt.replace("{INPUT_DIALOGUE}", dialogue_text)
    return prompt

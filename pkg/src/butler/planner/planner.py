"""Plan and correction synthesis via retrieval-augmented prompting."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..dsl import ActionProgram, ParseError, Violation, parse_program, validate_program
from ..dsl.parser import looks_like_statement
from ..memory import (
    FAILURE_SEP,
    KIND_CORRECTION,
    KIND_PERSONAL,
    KIND_PLAN,
    MemoryEntry,
    MemoryStore,
)
from .backends import CompletionBackend
from .dialogue import Dialogue
from .prompts import assemble_correction_prompt, assemble_plan_prompt

_RETRY_NOTICE = (
    "\n\nYour previous response could not be parsed as a Python script. "
    "Respond with only InteractionObject statements and method calls, "
    "no prose.\n"
)

_PLAN_MARKER_RE = re.compile(r"Plan \(Python script\):")


def _extract_reflection(response: str) -> str:
    """Reflection text: after an optional 'Explain:' up to the script.

    The correction prompt ends with 'Explain: ', so responses usually start
    with the reflection directly and introduce the program with a
    'Plan (Python script):' marker. Without the marker, the reflection is
    whatever prose precedes the first statement line.
    """
    marker = _PLAN_MARKER_RE.search(response)
    if marker:
        head = response[:marker.start()]
    else:
        kept = []
        for line in response.splitlines():
            if looks_like_statement(line):
                break
            kept.append(line)
        head = "\n".join(kept)
    head = head.strip()
    if head.startswith("Explain:"):
        head = head[len("Explain:"):].strip()
    return head


class PlanError(Exception):
    pass


@dataclass
class PlannerConfig:
    k_retrieval: int = 3
    max_parse_retries: int = 2


@dataclass
class FailureFeedback:
    failed_subgoal: str      # rendered statement text
    error_text: str


@dataclass
class PlanResult:
    program: ActionProgram
    prompt: str
    response: str
    retrieved: list[MemoryEntry] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)


@dataclass
class CorrectionResult:
    program: ActionProgram
    reflection: str
    prompt: str
    response: str
    retrieved: list[MemoryEntry] = field(default_factory=list)


class Planner:
    def __init__(
        self,
        backend: CompletionBackend,
        store: MemoryStore,
        config: PlannerConfig | None = None,
    ):
        self.backend = backend
        self.store = store
        self.config = config or PlannerConfig()
        # Ablation hooks: when set, retrieval is bypassed and these fixed
        # exemplar lists are used as-is.
        self.fixed_plan_exemplars: list[MemoryEntry] | None = None
        self.fixed_correction_exemplars: list[MemoryEntry] | None = None

    def _retrieve(self, key_text: str, kinds: set[str]) -> list[MemoryEntry]:
        hits = self.store.retrieve_topk(
            key_text, self.config.k_retrieval, kind_filter=kinds
        )
        return [entry for entry, _ in hits]

    def _complete_program(self, prompt: str) -> tuple[ActionProgram, str, str]:
        """Query the backend, parsing with retries on unusable output."""
        attempts = 1 + max(0, self.config.max_parse_retries)
        current = prompt
        last_reason = "no statements in response"
        for _ in range(attempts):
            response = self.backend.complete(current)
            try:
                program = parse_program(response, strict=False)
            except ParseError as exc:
                last_reason = str(exc)
                current = prompt + _RETRY_NOTICE
                continue
            if program.statements:
                return program, current, response
            last_reason = "no statements in response"
            current = prompt + _RETRY_NOTICE
        raise PlanError(
            f"backend produced no parseable program after {attempts} "
            f"attempts ({last_reason})"
        )

    def synthesize_plan(self, dialogue: Dialogue) -> PlanResult:
        if not dialogue:
            raise PlanError("cannot plan from an empty dialogue")
        key_text = dialogue.to_prompt()
        if self.fixed_plan_exemplars is not None:
            retrieved = list(self.fixed_plan_exemplars)
        else:
            retrieved = self._retrieve(key_text, {KIND_PLAN, KIND_PERSONAL})
        prompt = assemble_plan_prompt(key_text, retrieved)
        program, _, response = self._complete_program(prompt)
        violations = validate_program(program)
        return PlanResult(
            program=program, prompt=prompt, response=response,
            retrieved=retrieved, violations=violations,
        )

    def synthesize_correction(
        self, dialogue: Dialogue, failure: FailureFeedback
    ) -> CorrectionResult:
        dialogue_text = dialogue.to_prompt() if dialogue else "[]"
        key_text = dialogue_text + FAILURE_SEP + failure.error_text
        if self.fixed_correction_exemplars is not None:
            retrieved = list(self.fixed_correction_exemplars)
        else:
            retrieved = self._retrieve(key_text, {KIND_CORRECTION})
        prompt = assemble_correction_prompt(
            failure.failed_subgoal, failure.error_text, dialogue_text, retrieved
        )
        program, _, response = self._complete_program(prompt)
        reflection = _extract_reflection(response)
        return CorrectionResult(
            program=program, reflection=reflection, prompt=prompt,
            response=response, retrieved=retrieved,
        )

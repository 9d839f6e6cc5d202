"""Episode loading and the end-to-end run loop.

An episode bundles a dialogue, a world file, a task, and a reference path
length; the EDH variant adds a prefix of low-level actions to replay before
planning. run_episode drives plan, execute, feedback, replan through all the
other modules and scores the outcome.
"""
from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ..dsl.program import ActionProgram, render_program
from ..executor import AgentSession, Executor, ExecutorConfig
from ..memory.store import MemoryEntry, MemoryStore
from ..planner.backends import BackendError
from ..planner.dialogue import Dialogue
from ..planner.planner import PlanError, Planner
from ..world.goals import TaskSpec, check_goals, load_task
from ..world.loader import load_world
from ..world.sim import inject_failure
from .feedback import FEEDBACK_QUESTION, oracle_feedback
from .metrics import EpisodeResult

ABLATIONS = ("no_memory", "no_precheck", "no_correction", "no_locator")


class FixtureError(Exception):
    pass


@dataclass
class Episode:
    episode_id: str
    dialogue: Dialogue
    world_file: Path
    task: TaskSpec | None
    reference_path_length: int = 1
    history_actions: list[dict] = field(default_factory=list)
    # One-shot failures armed after the world loads, e.g.
    # {"object_id": "fridge", "error_code": "blocked"}.
    inject_failures: list[dict] = field(default_factory=list)


@dataclass
class EpisodeRunConfig:
    feedback_rounds: int = 0
    feedback_source: str = "oracle"
    ablations: frozenset = frozenset()
    seed: int = 0
    attribute_source: str = "oracle"
    snapshot_every: int = 40
    # Interactive feedback: called with the question, returns the answer.
    ask: Callable[[str], str] | None = None


def load_episode(path: str | Path) -> Episode:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FixtureError(f"cannot read episode {path}: {exc}") from exc
    for key in ("id", "dialogue", "world"):
        if key not in data:
            raise FixtureError(f"episode {path} missing '{key}'")
    try:
        dialogue = Dialogue.from_pairs(data["dialogue"])
    except (TypeError, ValueError) as exc:
        raise FixtureError(f"episode {path}: bad dialogue: {exc}") from exc
    if not dialogue:
        raise FixtureError(f"episode {path}: empty dialogue")
    world_file = (path.parent / data["world"]).resolve()
    if not world_file.exists():
        raise FixtureError(f"episode {path}: world file {world_file} missing")
    task_src = data.get("task")
    if isinstance(task_src, str):
        task = load_task(path.parent / task_src)
    elif task_src is not None:
        task = load_task(task_src)
    else:
        task = None
    ref = int(data.get("reference_path_length", 1))
    if ref < 1:
        raise FixtureError(f"episode {path}: reference_path_length < 1")
    return Episode(
        episode_id=data["id"],
        dialogue=dialogue,
        world_file=world_file,
        task=task,
        reference_path_length=ref,
        history_actions=list(data.get("history_actions", [])),
        inject_failures=list(data.get("inject_failures", [])),
    )


def episode_rng(seed: int, episode_id: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(episode_id.encode())])


def replay_history(session: AgentSession, executor: Executor,
                   actions: list[dict]) -> None:
    """Re-run a prior action sequence so mid-task state matches.

    The agent legitimately knows its own history, so a successful replayed
    pickup seeds the held-object estimate from the detection it clicked.
    """
    for entry in actions:
        kind = entry["kind"]
        u = entry.get("u")
        v = entry.get("v")
        picked_sim_id = None
        if kind == "pickup" and u is not None and session.last_obs is not None:
            for det in session.last_obs.masks:
                if det.mask[v, u]:
                    picked_sim_id = det.object_id
                    break
        obs = session.do(kind, u, v)
        if kind == "pickup" and obs.action_success and picked_sim_id:
            for inst in session.memory.instances:
                if inst.sim_id == picked_sim_id:
                    executor.set_held(inst)
                    break


def _fixed_exemplars(store: MemoryStore, kind: str, k: int = 3) -> list[MemoryEntry]:
    return [e for e in store.entries if e.kind == kind][:k]


def store_personal_plan(
    store: MemoryStore,
    name: str,
    instruction: Dialogue,
    program: ActionProgram,
    overwrite: bool = False,
) -> MemoryEntry:
    """Remember a successful routine under a user-visible name.

    The name goes into the key text so a later "perform the X" request
    retrieves the routine by its name alone.
    """
    key_text = f"{name}\n{instruction.to_prompt()}"
    return store.expand_on_success(name, key_text, program,
                                   overwrite=overwrite)


def run_episode(
    episode: Episode,
    planner: Planner,
    config: EpisodeRunConfig | None = None,
    events: Callable[[str, dict], None] | None = None,
) -> tuple[EpisodeResult, list]:
    config = config or EpisodeRunConfig()
    ablations = frozenset(config.ablations)
    unknown = ablations - set(ABLATIONS)
    if unknown:
        raise ValueError(f"unknown ablations {sorted(unknown)}")

    world = load_world(episode.world_file)
    for spec in episode.inject_failures:
        inject_failure(world, spec["object_id"], spec["error_code"])
    session = AgentSession(world, events=events,
                           snapshot_every=config.snapshot_every,
                           attribute_source=config.attribute_source)
    session.start()
    exec_cfg = ExecutorConfig(
        precheck="no_precheck" not in ablations,
        correction="no_correction" not in ablations,
        use_locator="no_locator" not in ablations,
    )
    rng = episode_rng(config.seed, episode.episode_id)
    executor = Executor(session, planner, exec_cfg, rng)
    replay_history(session, executor, episode.history_actions)

    saved_plan_hook = planner.fixed_plan_exemplars
    saved_corr_hook = planner.fixed_correction_exemplars
    if "no_memory" in ablations:
        planner.fixed_plan_exemplars = _fixed_exemplars(planner.store, "plan")
        planner.fixed_correction_exemplars = _fixed_exemplars(
            planner.store, "correction")

    dialogue = episode.dialogue
    traces = []
    error: str | None = None
    try:
        round_no = 0
        while True:
            try:
                plan = planner.synthesize_plan(dialogue)
            except (BackendError, PlanError) as exc:
                error = str(exc)
                if events is not None:
                    events("failure", {"statement": None, "subgoal": "plan",
                                       "error_text": error})
                break
            if events is not None:
                events("plan", {
                    "round": round_no,
                    "program": render_program(plan.program),
                    "violations": [v.message for v in plan.violations],
                    "retrieved": [e.kind for e in plan.retrieved],
                })
            trace = executor.execute_program(plan.program, dialogue)
            traces.append(trace)
            if trace.aborted or round_no >= config.feedback_rounds:
                break
            if events is not None:
                events("query_feedback", {"question": FEEDBACK_QUESTION})
            if config.feedback_source == "oracle":
                if episode.task is None:
                    break
                answer = oracle_feedback(check_goals(world, episode.task))
            else:
                answer = config.ask(FEEDBACK_QUESTION) if config.ask else ""
            if not answer.strip():
                break
            dialogue = Dialogue.from_pairs(
                list(dialogue.turns) + [("Commander", answer)])
            round_no += 1
    finally:
        planner.fixed_plan_exemplars = saved_plan_hook
        planner.fixed_correction_exemplars = saved_corr_hook

    if episode.task is not None:
        report = check_goals(world, episode.task)
        success = report.success and error is None
        gc_met, gc_total = report.gc_met, report.gc_total
    else:
        success, gc_met, gc_total = error is None, 0, 0
    result = EpisodeResult(
        episode_id=episode.episode_id,
        success=success,
        gc_met=gc_met,
        gc_total=gc_total,
        steps=world.steps_taken,
        reference_path_length=episode.reference_path_length,
        error=error,
    )
    if events is not None:
        events("metrics", result.to_record())
    return result, traces

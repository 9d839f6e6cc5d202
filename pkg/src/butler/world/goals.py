"""Task goals and completion checking.

A task is a list of goal conditions over object states and containment. Each
goal asks for `count` objects of a category matching a state dict, optionally
inside/on a container of a given category (and state). Goals carry human
-readable subtask/desired texts used to phrase programmatic feedback.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .state import SCHEMA_VERSION, SimObject, WorldState

_STATE_KEYS = (
    "sliced", "cooked", "clean", "toasted", "open", "powered", "filled_with",
)


class TaskFormatError(Exception):
    pass


@dataclass
class Goal:
    category: str
    count: int = 1
    state: dict = field(default_factory=dict)
    container_category: str | None = None
    container_state: dict = field(default_factory=dict)
    subtask: str = ""
    desired: str = ""

    def describe(self) -> str:
        return self.subtask or f"{self.category} goal"


@dataclass
class TaskSpec:
    task_id: str
    description: str
    goals: list[Goal]

    @classmethod
    def from_dict(cls, data: dict) -> "TaskSpec":
        if data.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise TaskFormatError(
                f"unsupported task schema_version {data.get('schema_version')!r}"
            )
        goals = []
        for row in data.get("goals", []):
            unknown = set(row.get("state", {})) - set(_STATE_KEYS)
            if unknown:
                raise TaskFormatError(f"unknown state keys {sorted(unknown)}")
            goals.append(Goal(
                category=row["category"],
                count=int(row.get("count", 1)),
                state=dict(row.get("state", {})),
                container_category=row.get("container_category"),
                container_state=dict(row.get("container_state", {})),
                subtask=row.get("subtask", ""),
                desired=row.get("desired", ""),
            ))
        if not goals:
            raise TaskFormatError("task has no goals")
        return cls(
            task_id=data["task_id"],
            description=data.get("description", ""),
            goals=goals,
        )


def load_task(source: str | Path | dict) -> TaskSpec:
    if isinstance(source, dict):
        return TaskSpec.from_dict(source)
    return TaskSpec.from_dict(json.loads(Path(source).read_text()))


def _state_matches(obj: SimObject, state: dict) -> bool:
    for key, want in state.items():
        if getattr(obj, key) != want:
            return False
    return True


@dataclass
class GoalResult:
    goal: Goal
    met: int
    needed: int

    @property
    def satisfied(self) -> bool:
        return self.met >= self.needed


@dataclass
class TaskReport:
    results: list[GoalResult]

    @property
    def success(self) -> bool:
        return all(r.satisfied for r in self.results)

    @property
    def gc_met(self) -> int:
        return sum(r.met for r in self.results)

    @property
    def gc_total(self) -> int:
        return sum(r.needed for r in self.results)

    def unmet_goals(self) -> list[Goal]:
        return [r.goal for r in self.results if not r.satisfied]


def check_goals(world: WorldState, task: TaskSpec) -> TaskReport:
    results = []
    for goal in task.goals:
        matching = 0
        for obj in world.objects.values():
            if obj.category != goal.category:
                continue
            if not _state_matches(obj, goal.state):
                continue
            if goal.container_category is not None:
                if obj.parent is None:
                    continue
                container = world.objects.get(obj.parent)
                if container is None:
                    continue
                if container.category != goal.container_category:
                    continue
                if not _state_matches(container, goal.container_state):
                    continue
            matching += 1
        results.append(GoalResult(goal=goal, met=min(matching, goal.count),
                                  needed=goal.count))
    return TaskReport(results=results)

"""HTTP service hosting live sessions.

Each session owns an isolated world, executor, and event log, driven by a
worker thread that consumes operator messages. Events stream out over
server-sent events; the operator converses through the message endpoint,
which doubles as the feedback channel while a question is pending.
"""
from __future__ import annotations

import json
import queue
import threading
import uuid
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from ..dsl.program import render_program
from ..executor import AgentSession, Executor, ExecutorConfig
from ..memory.store import DuplicateName, MemoryStore
from ..planner.backends import BackendError
from ..planner.dialogue import Dialogue
from ..planner.planner import PlanError, Planner, PlannerConfig
from ..world.goals import check_goals
from ..world.loader import WorldFormatError, load_world
from .episodes import (
    FixtureError,
    episode_rng,
    load_episode,
    replay_history,
    store_personal_plan,
)
from .feedback import FEEDBACK_QUESTION

_KEEPALIVE_S = 15.0
_FEEDBACK_TIMEOUT_S = 300.0


class CreateSession(BaseModel):
    episode_id: str | None = None
    world_file: str | None = None
    feedback_rounds: int = 2


class Message(BaseModel):
    text: str


class SavePlan(BaseModel):
    name: str
    overwrite: bool = False


class LiveSession:
    def __init__(self, session_id: str, world, task, planner: Planner,
                 feedback_rounds: int, seed_id: str):
        self.session_id = session_id
        self.task = task
        self.planner = planner
        self.feedback_rounds = feedback_rounds
        self.events: list[dict] = []
        self.cond = threading.Condition()
        self.pending_feedback = False
        self.closed = False
        self.last_successful: tuple[Dialogue, object] | None = None
        self._commands: queue.Queue = queue.Queue()

        self.agent = AgentSession(world, events=self._record)
        self.agent.start()
        self.executor = Executor(self.agent, planner,
                                 ExecutorConfig(),
                                 episode_rng(0, seed_id))
        self.thread = threading.Thread(target=self._worker, daemon=True)
        self.thread.start()

    # ------------------------------------------------------------- events

    def _record(self, kind: str, payload: dict) -> None:
        with self.cond:
            self.events.append({
                "type": kind,
                "index": len(self.events),
                "payload": payload,
            })
            self.cond.notify_all()

    def latest(self, kind: str) -> dict | None:
        with self.cond:
            for event in reversed(self.events):
                if event["type"] == kind:
                    return event
        return None

    # ------------------------------------------------------------ control

    def post_message(self, text: str) -> str:
        with self.cond:
            if self.closed:
                raise HTTPException(409, "session is closed")
            role = "feedback" if self.pending_feedback else "instruction"
        self._commands.put((role, text))
        return role

    def shutdown(self) -> None:
        with self.cond:
            self.closed = True
            self.cond.notify_all()
        self._commands.put(None)
        self.thread.join(timeout=10)

    # ------------------------------------------------------------- worker

    def _worker(self) -> None:
        while True:
            command = self._commands.get()
            if command is None:
                return
            role, text = command
            if role == "instruction":
                self._run_cycle(text)
            # A stray feedback message with no pending question is dropped.

    def _await_feedback(self) -> str:
        try:
            command = self._commands.get(timeout=_FEEDBACK_TIMEOUT_S)
        except queue.Empty:
            return ""
        if command is None:
            return ""
        role, text = command
        if role == "instruction":
            # The operator moved on; treat the pending question as answered
            # with silence and queue the new instruction behind it.
            self._commands.put(command)
            return ""
        return text

    def _run_cycle(self, instruction: str) -> None:
        dialogue = Dialogue.from_pairs([("Commander", instruction)])
        round_no = 0
        while True:
            try:
                plan = self.planner.synthesize_plan(dialogue)
            except (BackendError, PlanError) as exc:
                self._record("failure", {
                    "statement": None, "subgoal": "plan",
                    "error_text": str(exc),
                })
                break
            self._record("plan", {
                "round": round_no,
                "program": render_program(plan.program),
                "violations": [v.message for v in plan.violations],
                "retrieved": [e.kind for e in plan.retrieved],
            })
            trace = self.executor.execute_program(plan.program, dialogue)
            if not trace.aborted and trace.failed_count == 0:
                self.last_successful = (dialogue, plan.program)
            if trace.aborted or round_no >= self.feedback_rounds:
                break
            with self.cond:
                self.pending_feedback = True
            self._record("query_feedback", {"question": FEEDBACK_QUESTION})
            answer = self._await_feedback()
            with self.cond:
                self.pending_feedback = False
            if not answer.strip():
                break
            dialogue = Dialogue.from_pairs(
                list(dialogue.turns) + [("Commander", answer)])
            round_no += 1
        payload: dict = {"steps": self.agent.world.steps_taken}
        if self.task is not None:
            report = check_goals(self.agent.world, self.task)
            payload.update(success=report.success, gc_met=report.gc_met,
                           gc_total=report.gc_total)
        self._record("metrics", payload)


def create_app(
    backend,
    episodes_dir: str | Path | None = None,
    store: MemoryStore | None = None,
) -> FastAPI:
    from ..memory.embedding import HashEmbedder

    sessions: dict[str, LiveSession] = {}

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        for live in sessions.values():
            live.shutdown()

    app = FastAPI(title="butler service", lifespan=lifespan)
    store = store if store is not None else MemoryStore(HashEmbedder())
    planner = Planner(backend, store, PlannerConfig())
    episodes_dir = Path(episodes_dir) if episodes_dir else None

    def get_session(session_id: str) -> LiveSession:
        live = sessions.get(session_id)
        if live is None:
            raise HTTPException(404, f"no session {session_id}")
        return live

    @app.post("/sessions")
    def create_session(req: CreateSession):
        task = None
        seed_id = req.world_file or req.episode_id or "session"
        if req.episode_id is not None:
            if episodes_dir is None:
                raise HTTPException(400, "service has no episodes directory")
            path = episodes_dir / f"{req.episode_id}.json"
            try:
                episode = load_episode(path)
            except FixtureError as exc:
                raise HTTPException(400, str(exc))
            world = load_world(episode.world_file)
            task = episode.task
            if hasattr(backend, "set_context"):
                backend.set_context(episode.episode_id)
        elif req.world_file is not None:
            try:
                world = load_world(req.world_file)
            except (WorldFormatError, OSError) as exc:
                raise HTTPException(400, str(exc))
        else:
            raise HTTPException(400, "need episode_id or world_file")
        session_id = uuid.uuid4().hex[:12]
        live = LiveSession(session_id, world, task, planner,
                           req.feedback_rounds, seed_id)
        if req.episode_id is not None:
            replay = load_episode(episodes_dir / f"{req.episode_id}.json")
            replay_history(live.agent, live.executor, replay.history_actions)
        sessions[session_id] = live
        return {"session_id": session_id}

    @app.post("/sessions/{session_id}/message")
    def post_message(session_id: str, msg: Message):
        if not msg.text.strip():
            raise HTTPException(400, "empty message")
        role = get_session(session_id).post_message(msg.text)
        return {"accepted": True, "role": role}

    @app.get("/sessions/{session_id}/events")
    def event_stream(session_id: str, since: int = 0):
        live = get_session(session_id)

        def generate():
            cursor = since
            while True:
                with live.cond:
                    while cursor >= len(live.events) and not live.closed:
                        if not live.cond.wait(timeout=_KEEPALIVE_S):
                            break
                    batch = live.events[cursor:]
                    closed = live.closed
                if not batch and not closed:
                    yield ": keepalive\n\n"
                    continue
                for event in batch:
                    cursor = event["index"] + 1
                    yield (f"id: {event['index']}\n"
                           f"data: {json.dumps(event, sort_keys=True)}\n\n")
                if closed:
                    return

        return StreamingResponse(generate(), media_type="text/event-stream")

    @app.get("/sessions/{session_id}/map")
    def latest_map(session_id: str):
        live = get_session(session_id)
        live.agent.emit_snapshot()
        event = live.latest("map_snapshot")
        return event["payload"] if event else {}

    @app.post("/sessions/{session_id}/personal_plans")
    def save_plan(session_id: str, req: SavePlan):
        live = get_session(session_id)
        if live.last_successful is None:
            raise HTTPException(400, "no successful plan in this session yet")
        dialogue, program = live.last_successful
        try:
            entry = store_personal_plan(store, req.name, dialogue, program,
                                        overwrite=req.overwrite)
        except DuplicateName as exc:
            raise HTTPException(409, f"name already stored: {exc}")
        return {"name": entry.name, "key_text": entry.key_text}

    @app.get("/personal_plans")
    def list_plans():
        return [
            {"name": e.name, "key_text": e.key_text,
             "program": render_program(e.program)}
            for e in store.entries if e.kind == "personal"
        ]

    return app

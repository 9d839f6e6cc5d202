"""The HTTP session service: lifecycle, the message channel, server-sent
events, map snapshots, and personal plan storage.

The event stream never ends on its own, so these tests run a real server
in a thread and read it with a streaming client instead of the buffering
ASGI test transport.
"""
from __future__ import annotations

import json
import threading
import time
from contextlib import contextmanager

import httpx
import pytest
import uvicorn

import butler.session.service
from butler.planner import ScriptedBackend
from butler.session.service import create_app

from conftest import BACKENDS_DIR, EPISODES_DIR, WORLDS_DIR

KITCHEN = str(WORLDS_DIR / "kitchen_main.json")


@pytest.fixture(scope="module", autouse=True)
def fast_keepalive():
    """Short SSE keepalive so dropped streams recycle quickly."""
    saved = butler.session.service._KEEPALIVE_S
    butler.session.service._KEEPALIVE_S = 0.2
    yield
    butler.session.service._KEEPALIVE_S = saved


@contextmanager
def _serve(app):
    config = uvicorn.Config(app, host="127.0.0.1", port=0,
                            log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("test server did not start")
        time.sleep(0.02)
    port = server.servers[0].sockets[0].getsockname()[1]
    try:
        yield f"http://127.0.0.1:{port}"
    finally:
        server.should_exit = True
        thread.join(timeout=10)


@pytest.fixture
def client():
    backend = ScriptedBackend(BACKENDS_DIR / "console.json")
    app = create_app(backend, episodes_dir=EPISODES_DIR)
    with _serve(app) as base:
        with httpx.Client(base_url=base, timeout=30) as c:
            yield c


def _create(client, **body):
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 200, resp.text
    return resp.json()["session_id"]


def _say(client, sid, text):
    resp = client.post(f"/sessions/{sid}/message", json={"text": text})
    assert resp.status_code == 200, resp.text
    return resp.json()


def _read_until(client, sid, kind, since=0, timeout=30.0):
    """Collect SSE events from `since` until one of `kind` arrives."""
    events = []
    cursor = since
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        with client.stream("GET", f"/sessions/{sid}/events",
                           params={"since": cursor}) as resp:
            assert resp.status_code == 200
            for line in resp.iter_lines():
                if line.startswith("data: "):
                    event = json.loads(line[len("data: "):])
                    events.append(event)
                    cursor = event["index"] + 1
                    if event["type"] == kind:
                        return events
                if time.monotonic() > deadline:
                    break
    raise AssertionError(
        f"no '{kind}' event in {timeout}s; saw {[e['type'] for e in events]}")


# --------------------------------------------------------------- lifecycle

def test_create_session_needs_a_source(client):
    resp = client.post("/sessions", json={})
    assert resp.status_code == 400
    assert "need episode_id or world_file" in resp.text


def test_create_session_rejects_unknown_episode(client):
    resp = client.post("/sessions", json={"episode_id": "no_such"})
    assert resp.status_code == 400


def test_create_session_rejects_bad_world(client, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema_version": 99}))
    resp = client.post("/sessions", json={"world_file": str(bad)})
    assert resp.status_code == 400
    assert "schema_version" in resp.text


def test_create_session_without_episode_dir():
    backend = ScriptedBackend(BACKENDS_DIR / "console.json")
    with _serve(create_app(backend)) as base:
        resp = httpx.post(f"{base}/sessions",
                          json={"episode_id": "ep_place_salt"}, timeout=30)
        assert resp.status_code == 400
        assert "no episodes directory" in resp.text


def test_unknown_session_is_404(client):
    assert client.post("/sessions/nope/message",
                       json={"text": "hi"}).status_code == 404
    assert client.get("/sessions/nope/map").status_code == 404
    assert client.get("/sessions/nope/events").status_code == 404


def test_empty_message_rejected(client):
    sid = _create(client, world_file=KITCHEN, feedback_rounds=0)
    for text in ("", "   "):
        resp = client.post(f"/sessions/{sid}/message", json={"text": text})
        assert resp.status_code == 400
        assert "empty message" in resp.text


# ----------------------------------------------------------- message cycle

def test_instruction_cycle_streams_events(client):
    sid = _create(client, world_file=KITCHEN, feedback_rounds=0)
    reply = _say(client, sid, "put the salt shaker on the dining table")
    assert reply == {"accepted": True, "role": "instruction"}

    events = _read_until(client, sid, "metrics")
    kinds = [e["type"] for e in events]
    assert kinds[0] == "plan"
    assert "action" in kinds
    assert kinds[-1] == "metrics"

    plan = events[0]["payload"]
    assert plan["round"] == 0
    assert plan["violations"] == []
    assert "target_saltshaker" in plan["program"]

    metrics = events[-1]["payload"]
    assert metrics["steps"] > 0
    assert "success" not in metrics     # plain worlds carry no task

    statuses = [e["payload"]["status"] for e in events
                if e["type"] == "action"]
    assert "running" in statuses and "ok" in statuses
    assert "failed" not in statuses


def test_episode_session_scores_the_task(client):
    sid = _create(client, episode_id="ep_place_salt", feedback_rounds=0)
    _say(client, sid, "put the salt shaker on the dining table")
    events = _read_until(client, sid, "metrics")
    metrics = events[-1]["payload"]
    assert metrics["success"] is True
    assert (metrics["gc_met"], metrics["gc_total"]) == (1, 1)


def test_feedback_question_and_answer(client):
    sid = _create(client, world_file=KITCHEN, feedback_rounds=1)
    _say(client, sid, "put the salt shaker on the dining table")
    events = _read_until(client, sid, "query_feedback")
    assert events[-1]["payload"]["question"].startswith(
        "Is the task completed")

    reply = _say(client, sid, "also wipe it down")
    assert reply["role"] == "feedback"

    cursor = events[-1]["index"] + 1
    rest = _read_until(client, sid, "metrics", since=cursor)
    rounds = [e["payload"]["round"] for e in events + rest
              if e["type"] == "plan"]
    assert rounds == [0, 1]


def test_event_stream_honors_since(client):
    sid = _create(client, world_file=KITCHEN, feedback_rounds=0)
    _say(client, sid, "put the salt shaker on the dining table")
    _read_until(client, sid, "metrics")
    tail = _read_until(client, sid, "metrics", since=2)
    assert tail[0]["index"] == 2
    assert all(e["index"] >= 2 for e in tail)


def test_event_wire_format(client):
    sid = _create(client, world_file=KITCHEN, feedback_rounds=0)
    _say(client, sid, "put the salt shaker on the dining table")
    _read_until(client, sid, "metrics")   # ensure events are buffered

    with client.stream("GET", f"/sessions/{sid}/events") as resp:
        assert resp.headers["content-type"].startswith("text/event-stream")
        lines = resp.iter_lines()
        first = next(lines)
        second = next(lines)
    assert first == "id: 0"
    assert second.startswith("data: ")
    event = json.loads(second[len("data: "):])
    assert set(event) == {"type", "index", "payload"}
    assert event["index"] == 0
    assert second == "data: " + json.dumps(event, sort_keys=True)


# ---------------------------------------------------------------- map view

def test_map_endpoint_returns_fresh_snapshot(client):
    sid = _create(client, world_file=KITCHEN, feedback_rounds=0)
    snap = client.get(f"/sessions/{sid}/map").json()
    assert {"cell_m", "nx", "nz", "obstacle_runs", "explored_runs",
            "seq", "agent", "objects"} <= set(snap)
    assert snap["agent"]["yaw"] in (0, 90, 180, 270)
    assert snap["explored_runs"]   # the spawn frame marked some floor

    _say(client, sid, "put the salt shaker on the dining table")
    _read_until(client, sid, "metrics")
    later = client.get(f"/sessions/{sid}/map").json()
    assert later["seq"] > snap["seq"]
    assert later["objects"]


# ----------------------------------------------------------- personal plans

def test_personal_plan_requires_a_success(client):
    sid = _create(client, world_file=KITCHEN, feedback_rounds=0)
    resp = client.post(f"/sessions/{sid}/personal_plans",
                       json={"name": "salt run"})
    assert resp.status_code == 400
    assert "no successful plan" in resp.text


def test_personal_plan_roundtrip(client):
    sid = _create(client, world_file=KITCHEN, feedback_rounds=0)
    _say(client, sid, "put the salt shaker on the dining table")
    _read_until(client, sid, "metrics")

    resp = client.post(f"/sessions/{sid}/personal_plans",
                       json={"name": "salt run"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["name"] == "salt run"
    assert body["key_text"].startswith("salt run\n")

    plans = client.get("/personal_plans").json()
    assert [p["name"] for p in plans] == ["salt run"]
    assert "pickup_and_place" in plans[0]["program"]

    dup = client.post(f"/sessions/{sid}/personal_plans",
                      json={"name": "salt run"})
    assert dup.status_code == 409

    again = client.post(f"/sessions/{sid}/personal_plans",
                        json={"name": "salt run", "overwrite": True})
    assert again.status_code == 200
    assert len(client.get("/personal_plans").json()) == 1

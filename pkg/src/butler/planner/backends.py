"""Completion backends.

The planner only needs `complete(prompt) -> str`. The scripted backend replays
canned responses from a fixture file for offline runs and tests; the remote
backend talks to an OpenAI-style chat endpoint when one is available.
"""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Protocol

import requests


class BackendError(Exception):
    pass


class CompletionBackend(Protocol):
    @property
    def identity(self) -> str: ...

    def complete(self, prompt: str) -> str: ...


class ScriptedBackend:
    """Replays responses from a fixture of match rules.

    Fixture format: {"schema_version": 1, "records": [{"match": {...},
    "response": "..."}]}. Match conditions (all must hold):
      episode_id     equals the backend's current context episode
      prompt_sha256  hex digest of the full prompt
      substring      appears anywhere in the prompt
    The first matching record wins. A record with an empty match is a
    catch-all.
    """

    def __init__(self, fixture_path: str | Path):
        self.fixture_path = Path(fixture_path)
        data = json.loads(self.fixture_path.read_text())
        self.records = data["records"] if isinstance(data, dict) else data
        self.episode_id: str | None = None
        self.calls: list[str] = []

    @property
    def identity(self) -> str:
        return f"scripted:{self.fixture_path.name}"

    def set_context(self, episode_id: str | None) -> None:
        self.episode_id = episode_id

    def _matches(self, match: dict, prompt: str) -> bool:
        if "episode_id" in match and match["episode_id"] != self.episode_id:
            return False
        if "prompt_sha256" in match:
            digest = hashlib.sha256(prompt.encode("utf-8")).hexdigest()
            if match["prompt_sha256"] != digest:
                return False
        if "substring" in match and match["substring"] not in prompt:
            return False
        if "substrings" in match:
            if not all(s in prompt for s in match["substrings"]):
                return False
        return True

    def complete(self, prompt: str) -> str:
        self.calls.append(prompt)
        for record in self.records:
            if self._matches(record.get("match", {}), prompt):
                return record["response"]
        head = prompt.splitlines()[0][:120] if prompt else ""
        raise BackendError(
            f"no scripted response matches prompt starting {head!r} "
            f"(episode={self.episode_id})"
        )


class RemoteBackend:
    """Chat-completions client; the endpoint and key come from the caller."""

    def __init__(
        self,
        endpoint: str,
        model: str = "default",
        api_key_env: str = "COMPLETION_API_KEY",
        temperature: float = 0.0,
        timeout: float = 60.0,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key_env = api_key_env
        self.temperature = temperature
        self.timeout = timeout

    @property
    def identity(self) -> str:
        return f"remote:{self.model}"

    def complete(self, prompt: str) -> str:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.temperature,
        }
        try:
            resp = requests.post(
                self.endpoint, json=payload, headers=headers,
                timeout=self.timeout,
            )
            resp.raise_for_status()
            body = resp.json()
            return body["choices"][0]["message"]["content"]
        except (requests.RequestException, KeyError, IndexError) as exc:
            raise BackendError(f"remote completion failed: {exc}") from exc

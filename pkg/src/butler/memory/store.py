"""Key-value memory of language-to-program examples.

Keys are embedding vectors of the language side (instruction text, optionally
concatenated with failure feedback); values are parsed action programs plus
bookkeeping. Retrieval is exact k-nearest-neighbor under L2 distance, ties
broken by insertion order so results are reproducible.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from ..dsl import ActionProgram, parse_program, render_program
from .embedding import TextEmbedder

SCHEMA_VERSION = 1

KIND_PLAN = "plan"
KIND_CORRECTION = "correction"
KIND_PERSONAL = "personal"
KINDS = (KIND_PLAN, KIND_CORRECTION, KIND_PERSONAL)

# Separator between instruction text and failure feedback when both form the key.
FAILURE_SEP = "\n[failure] "


class DuplicateName(Exception):
    pass


class EmbedderMismatch(Exception):
    pass


@dataclass
class MemoryEntry:
    key_text: str
    key: np.ndarray
    program: ActionProgram
    kind: str
    name: str | None = None
    failure_text: str | None = None
    created_at: float = field(default_factory=time.time)


class MemoryStore:
    def __init__(self, embedder: TextEmbedder):
        self.embedder = embedder
        self.entries: list[MemoryEntry] = []

    @property
    def embedder_id(self) -> str:
        return self.embedder.embedder_id

    def __len__(self) -> int:
        return len(self.entries)

    def embed_text(self, text: str) -> np.ndarray:
        return self.embedder.embed(text)

    def add(
        self,
        key_text: str,
        program: ActionProgram,
        kind: str,
        name: str | None = None,
        failure_text: str | None = None,
        created_at: float | None = None,
    ) -> MemoryEntry:
        if kind not in KINDS:
            raise ValueError(f"unknown memory kind '{kind}'")
        key = self.embed_text(
            key_text if failure_text is None
            else key_text + FAILURE_SEP + failure_text
        )
        entry = MemoryEntry(
            key_text=key_text, key=key, program=program, kind=kind,
            name=name, failure_text=failure_text,
            created_at=time.time() if created_at is None else created_at,
        )
        self.entries.append(entry)
        return entry

    def retrieve_topk(
        self,
        query: str | np.ndarray,
        k: int,
        kind_filter: str | Iterable[str] | None = None,
    ) -> list[tuple[MemoryEntry, float]]:
        """k entries with smallest L2 distance to the query embedding."""
        if isinstance(query, str):
            qvec = self.embed_text(query)
        else:
            qvec = np.asarray(query, dtype=np.float64)
        if kind_filter is None:
            kinds = set(KINDS)
        elif isinstance(kind_filter, str):
            kinds = {kind_filter}
        else:
            kinds = set(kind_filter)
        pool = [e for e in self.entries if e.kind in kinds]
        if not pool or k <= 0:
            return []
        keys = np.stack([e.key for e in pool])
        dists = np.linalg.norm(keys - qvec[None, :], axis=1)
        # lexsort uses the last key as primary: distance first, then the
        # stable insertion index for ties.
        order = np.lexsort((np.arange(len(pool)), dists))
        return [(pool[i], float(dists[i])) for i in order[:k]]

    def personal_names(self) -> list[str]:
        return [e.name for e in self.entries
                if e.kind == KIND_PERSONAL and e.name]

    def expand_on_success(
        self,
        name: str,
        key_text: str,
        program: ActionProgram,
        overwrite: bool = False,
    ) -> MemoryEntry:
        """Store a successful plan under a user-visible name.

        Named entries power requests like running a stored routine by name
        later. Refuses to shadow an existing name unless told to overwrite.
        """
        for i, existing in enumerate(self.entries):
            if existing.kind == KIND_PERSONAL and existing.name == name:
                if not overwrite:
                    raise DuplicateName(name)
                entry = MemoryEntry(
                    key_text=key_text,
                    key=self.embed_text(key_text),
                    program=program,
                    kind=KIND_PERSONAL,
                    name=name,
                )
                self.entries[i] = entry
                return entry
        return self.add(key_text, program, KIND_PERSONAL, name=name)

    def save(self, path: str | Path) -> None:
        path = Path(path)
        with path.open("w") as f:
            header = {
                "schema_version": SCHEMA_VERSION,
                "embedder_id": self.embedder_id,
                "dim": self.embedder.dim,
            }
            f.write(json.dumps(header) + "\n")
            for e in self.entries:
                row = {
                    "key_text": e.key_text,
                    "key": [float(x) for x in e.key],
                    "program": render_program(e.program),
                    "kind": e.kind,
                    "name": e.name,
                    "failure_text": e.failure_text,
                    "created_at": e.created_at,
                }
                f.write(json.dumps(row) + "\n")

    @classmethod
    def load(cls, path: str | Path, embedder: TextEmbedder) -> "MemoryStore":
        path = Path(path)
        store = cls(embedder)
        with path.open() as f:
            header = json.loads(f.readline())
            if header.get("embedder_id") != embedder.embedder_id:
                raise EmbedderMismatch(
                    f"store was built with {header.get('embedder_id')!r}, "
                    f"loader has {embedder.embedder_id!r}"
                )
            for line in f:
                if not line.strip():
                    continue
                row = json.loads(line)
                store.entries.append(MemoryEntry(
                    key_text=row["key_text"],
                    key=np.array(row["key"], dtype=np.float64),
                    program=parse_program(row["program"]),
                    kind=row["kind"],
                    name=row.get("name"),
                    failure_text=row.get("failure_text"),
                    created_at=row.get("created_at", 0.0),
                ))
        return store

"""Dialogue container and serialization.

Dialogues are turn lists [(speaker, text), ...] with speakers 'Driver' (the
robot) and 'Commander' (the user). When embedded in prompts they are rendered
as the nested-list text form, e.g.
[['Driver', 'hi how can i help'], ['Commander', 'make me coffee']].
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

SPEAKERS = ("Driver", "Commander")

_TAG_RE = re.compile(r"<(Driver|Commander)>")


@dataclass
class Dialogue:
    turns: list[tuple[str, str]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.turns)

    def add(self, speaker: str, text: str) -> None:
        if speaker not in SPEAKERS:
            raise ValueError(f"unknown speaker '{speaker}'")
        self.turns.append((speaker, text))

    def to_prompt(self) -> str:
        """Nested-list text form used for prompts and retrieval keys."""
        return repr([[speaker, text] for speaker, text in self.turns])

    @classmethod
    def from_pairs(cls, pairs: list) -> "Dialogue":
        d = cls()
        for speaker, text in pairs:
            d.add(speaker, text)
        return d

    @classmethod
    def from_inline(cls, text: str) -> "Dialogue":
        """Parse the '<Driver> hello. <Commander> hi.' inline form."""
        parts = _TAG_RE.split(text)
        d = cls()
        # parts = [leading junk, speaker, text, speaker, text, ...]
        for speaker, chunk in zip(parts[1::2], parts[2::2]):
            chunk = chunk.strip()
            if chunk:
                d.add(speaker, chunk)
        return d

"""Benchmark scoring.

Success rate averages whole-episode success; goal-condition rate pools
satisfied conditions over all episodes. Both get a path-length weighted
variant penalizing trajectories longer than the episode's reference path:
w = L_ref / max(L_ref, L).
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass
class EpisodeResult:
    episode_id: str
    success: bool
    gc_met: int
    gc_total: int
    steps: int
    reference_path_length: int
    error: str | None = None

    @property
    def plw(self) -> float:
        ref = max(1, self.reference_path_length)
        return ref / max(ref, self.steps)

    def to_record(self) -> dict:
        return {
            "episode_id": self.episode_id,
            "success": self.success,
            "gc_met": self.gc_met,
            "gc_total": self.gc_total,
            "steps": self.steps,
            "reference_path_length": self.reference_path_length,
            "plw": round(self.plw, 6),
            "error": self.error,
        }


def compute_metrics(rows: list[EpisodeResult]) -> dict:
    if not rows:
        raise ValueError("no episode results to score")
    n = len(rows)
    gc_total = sum(r.gc_total for r in rows)
    sr = sum(1 for r in rows if r.success) / n
    gc = (sum(r.gc_met for r in rows) / gc_total) if gc_total else 0.0
    sr_plw = sum(r.plw for r in rows if r.success) / n
    gc_plw = (sum(r.gc_met * r.plw for r in rows) / gc_total) if gc_total else 0.0
    return {
        "sr": round(sr, 6),
        "gc": round(gc, 6),
        "sr_plw": round(sr_plw, 6),
        "gc_plw": round(gc_plw, 6),
    }

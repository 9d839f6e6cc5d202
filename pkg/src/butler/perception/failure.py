"""Advisory visual failure detection by frame differencing.

An interaction that claims success but leaves the view pixel-identical is
suspicious; one that changes the view probably took effect. This is a weak
signal (the acting hand may be out of frame) and is surfaced as advice only,
never as the authoritative outcome.
"""
from __future__ import annotations

import numpy as np

DEPTH_DELTA = 0.01       # meters considered "changed" per pixel
CHANGED_FRACTION = 1e-4  # fraction of pixels that must change


def detect_failure_pixeldiff(
    depth_before: np.ndarray,
    depth_after: np.ndarray,
    depth_delta: float = DEPTH_DELTA,
    changed_fraction: float = CHANGED_FRACTION,
) -> bool:
    """True when the frames suggest the interaction did NOT take effect."""
    if depth_before.shape != depth_after.shape:
        return False
    changed = np.abs(depth_after - depth_before) > depth_delta
    return bool(changed.mean() < changed_fraction)

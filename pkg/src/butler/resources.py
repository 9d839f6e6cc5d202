"""Access to bundled data files (templates, exemplars, worlds, episodes)."""
from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_path(*parts: str) -> Path:
    """Path to a bundled data file or directory."""
    root = resources.files("butler").joinpath("data")
    target = root.joinpath(*parts) if parts else root
    return Path(str(target))


def read_data_text(*parts: str) -> str:
    return data_path(*parts).read_text()

from .embedding import EMBED_DIM, HashEmbedder, TextEmbedder
from .store import (
    DuplicateName,
    EmbedderMismatch,
    FAILURE_SEP,
    KIND_CORRECTION,
    KIND_PERSONAL,
    KIND_PLAN,
    KINDS,
    MemoryEntry,
    MemoryStore,
    SCHEMA_VERSION,
)

__all__ = [
    "EMBED_DIM", "HashEmbedder", "TextEmbedder", "DuplicateName",
    "EmbedderMismatch", "FAILURE_SEP", "KIND_CORRECTION", "KIND_PERSONAL",
    "KIND_PLAN", "KINDS", "MemoryEntry", "MemoryStore", "SCHEMA_VERSION",
]

"""Deterministic text embeddings for retrieval keys.

A feature-hashing embedder stands in for a frozen neural encoder: token
unigrams and bigrams are hashed into a fixed-dimension signed-count vector and
L2-normalized. hashlib keeps it stable across processes and platforms, which
Python's builtin hash() is not.
"""
from __future__ import annotations

import hashlib
import re
from typing import Protocol

import numpy as np

EMBED_DIM = 256

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class TextEmbedder(Protocol):
    dim: int

    @property
    def embedder_id(self) -> str: ...

    def embed(self, text: str) -> np.ndarray: ...


class HashEmbedder:
    """Seeded feature-hashing embedder; same (dim, seed) means same vectors."""

    def __init__(self, dim: int = EMBED_DIM, seed: int = 0):
        self.dim = dim
        self.seed = seed
        self._salt = seed.to_bytes(8, "little", signed=False)

    @property
    def embedder_id(self) -> str:
        return f"feature-hash-v1-d{self.dim}-s{self.seed}"

    def _bucket(self, feature: str) -> tuple[int, float]:
        h = hashlib.blake2b(
            feature.encode("utf-8"), digest_size=8, salt=self._salt
        ).digest()
        value = int.from_bytes(h, "little")
        sign = 1.0 if value & 1 else -1.0
        return (value >> 1) % self.dim, sign

    def embed(self, text: str) -> np.ndarray:
        tokens = _TOKEN_RE.findall(text.lower())
        vec = np.zeros(self.dim, dtype=np.float64)
        if not tokens:
            return vec
        features = list(tokens)
        features.extend(
            f"{a}_{b}" for a, b in zip(tokens, tokens[1:])
        )
        for feature in features:
            idx, sign = self._bucket(feature)
            vec[idx] += sign
        norm = np.linalg.norm(vec)
        if norm > 0.0:
            vec /= norm
        return vec

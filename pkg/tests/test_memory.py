"""Hash embedder determinism and memory store retrieval semantics."""
from __future__ import annotations

import numpy as np
import pytest

from butler.dsl import parse_program
from butler.memory import (
    DuplicateName,
    EmbedderMismatch,
    FAILURE_SEP,
    HashEmbedder,
    KIND_CORRECTION,
    KIND_PERSONAL,
    KIND_PLAN,
    MemoryStore,
)
from butler.resources import data_path

_PROG = parse_program('target_mug = InteractionObject("Mug")\ntarget_mug.go_to()')


def _store() -> MemoryStore:
    return MemoryStore(HashEmbedder())


# ---------------------------------------------------------------- embedder

def test_embedder_deterministic_across_instances():
    a = HashEmbedder().embed("bring me the salt shaker")
    b = HashEmbedder().embed("bring me the salt shaker")
    np.testing.assert_array_equal(a, b)


def test_embedder_unit_norm_and_zero_vector():
    vec = HashEmbedder().embed("wash the mug in the sink")
    assert vec.shape == (256,)
    assert abs(float(np.linalg.norm(vec)) - 1.0) < 1e-12
    empty = HashEmbedder().embed("!!! ...")
    np.testing.assert_array_equal(empty, np.zeros(256))


def test_embedder_seed_changes_embedding():
    a = HashEmbedder().embed("slice the tomato")
    b = HashEmbedder(seed=1).embed("slice the tomato")
    assert float(np.linalg.norm(a - b)) > 0.1


def test_embedder_identity_string():
    assert HashEmbedder().embedder_id == "feature-hash-v1-d256-s0"
    assert HashEmbedder(dim=64, seed=3).embedder_id == "feature-hash-v1-d64-s3"


def test_embedder_case_and_punctuation_fold():
    emb = HashEmbedder()
    np.testing.assert_array_equal(
        emb.embed("Slice the Tomato!"), emb.embed("slice the tomato"))


# ------------------------------------------------------------- retrieval

def _texts(rng: np.random.Generator, n: int) -> list[str]:
    words = ["slice", "wash", "bring", "mug", "tomato", "plate", "knife",
             "counter", "table", "coffee", "toast", "potato", "sink", "cook"]
    return [" ".join(rng.choice(words, size=5)) for _ in range(n)]


def test_retrieve_topk_matches_brute_force():
    rng = np.random.default_rng(7)
    store = _store()
    texts = _texts(rng, 60)
    for text in texts:
        store.add(text, _PROG, KIND_PLAN)
    keys = np.stack([e.key for e in store.entries])
    for query in _texts(rng, 20):
        qvec = store.embed_text(query)
        dists = np.linalg.norm(keys - qvec[None, :], axis=1)
        expected = sorted(range(len(texts)), key=lambda i: (dists[i], i))[:5]
        got = store.retrieve_topk(query, 5)
        assert [store.entries.index(e) for e, _ in got] == expected
        for (_, d), i in zip(got, expected):
            assert d == pytest.approx(float(dists[i]), abs=1e-12)


def test_retrieve_ties_break_by_insertion_order():
    store = _store()
    first = store.add("wash the mug", _PROG, KIND_PLAN)
    second = store.add("wash the mug", _PROG, KIND_PLAN)
    hits = store.retrieve_topk("wash the mug", 2)
    assert hits[0][0] is first
    assert hits[1][0] is second
    assert hits[0][1] == pytest.approx(0.0, abs=1e-12)


def test_retrieve_kind_filter():
    store = _store()
    store.add("fix it", _PROG, KIND_CORRECTION)
    plan = store.add("fix it", _PROG, KIND_PLAN)
    hits = store.retrieve_topk("fix it", 5, kind_filter=KIND_PLAN)
    assert [e for e, _ in hits] == [plan]
    both = store.retrieve_topk("fix it", 5,
                               kind_filter=(KIND_PLAN, KIND_CORRECTION))
    assert len(both) == 2


def test_retrieve_empty_and_zero_k():
    store = _store()
    assert store.retrieve_topk("anything", 3) == []
    store.add("something", _PROG, KIND_PLAN)
    assert store.retrieve_topk("something", 0) == []


def test_failure_text_extends_the_key():
    store = _store()
    entry = store.add("bring the mug", _PROG, KIND_CORRECTION,
                      failure_text="Mug is 2.10m away")
    combined = store.embed_text(
        "bring the mug" + FAILURE_SEP + "Mug is 2.10m away")
    np.testing.assert_array_equal(entry.key, combined)
    hits = store.retrieve_topk(
        "bring the mug" + FAILURE_SEP + "Mug is 2.10m away", 1)
    assert hits[0][1] == pytest.approx(0.0, abs=1e-12)


def test_add_rejects_unknown_kind():
    with pytest.raises(ValueError, match="unknown memory kind"):
        _store().add("text", _PROG, "recipe")


# ---------------------------------------------------------- personal plans

def test_expand_on_success_and_duplicate_names():
    store = _store()
    store.add("unrelated", _PROG, KIND_PLAN)
    entry = store.expand_on_success("morning coffee", "make my usual coffee",
                                    _PROG)
    assert entry.kind == KIND_PERSONAL
    assert store.personal_names() == ["morning coffee"]
    with pytest.raises(DuplicateName):
        store.expand_on_success("morning coffee", "other key", _PROG)

    replacement = parse_program('target_cup = InteractionObject("Cup")')
    index = store.entries.index(entry)
    updated = store.expand_on_success("morning coffee", "new key text",
                                      replacement, overwrite=True)
    assert store.entries.index(updated) == index
    assert updated.key_text == "new key text"
    assert len(store) == 2


# ----------------------------------------------------------- persistence

def test_save_load_round_trip(tmp_path):
    store = _store()
    store.add("plan key", _PROG, KIND_PLAN)
    store.add("fix key", _PROG, KIND_CORRECTION, failure_text="it broke")
    store.expand_on_success("named", "personal key", _PROG)
    path = tmp_path / "memory.jsonl"
    store.save(path)

    loaded = MemoryStore.load(path, HashEmbedder())
    assert len(loaded) == 3
    for orig, back in zip(store.entries, loaded.entries):
        assert back.key_text == orig.key_text
        assert back.kind == orig.kind
        assert back.name == orig.name
        assert back.failure_text == orig.failure_text
        assert back.program == orig.program
        np.testing.assert_array_equal(back.key, orig.key)


def test_load_rejects_other_embedder(tmp_path):
    store = _store()
    store.add("plan key", _PROG, KIND_PLAN)
    path = tmp_path / "memory.jsonl"
    store.save(path)
    with pytest.raises(EmbedderMismatch):
        MemoryStore.load(path, HashEmbedder(seed=9))


def test_bundled_seed_memory_loads():
    store = MemoryStore.load(data_path("memory", "seed_memory.jsonl"),
                             HashEmbedder())
    assert len(store) == 20
    kinds = {e.kind for e in store.entries}
    assert kinds == {KIND_PLAN, KIND_CORRECTION}

"""Deterministic RNG derivation.

Every sample owns a (master_seed, sample_index) pair.  We hash that pair
through sha256 and key a counter-based Philox generator with the first 16
bytes of the digest.  Hashing decorrelates neighbouring indices, and the
counter-based generator means no hidden global state: the same pair always
yields the same stream, on any platform, in any process.

Named streams (corpus shuffling, split selection, ...) reuse the same
derivation with a different domain tag so they can never collide with a
sample stream.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .core import SeedSpec

_SAMPLE_TAG = b"spatial-forge/sample/v1"
_STREAM_TAG = b"spatial-forge/stream/v1"


def _philox_from_digest(tag: bytes, *parts: bytes) -> np.random.Generator:
    h = hashlib.sha256()
    h.update(tag)
    for p in parts:
        h.update(p)
    key = int.from_bytes(h.digest()[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


def derive_rng(seed: SeedSpec) -> np.random.Generator:
    """Generator for one sample, fully determined by (master, index)."""
    return _philox_from_digest(
        _SAMPLE_TAG,
        seed.master.to_bytes(8, "little"),
        seed.index.to_bytes(8, "little"),
    )


def derive_stream(master: int, name: str) -> np.random.Generator:
    """Generator for a named pipeline stream (e.g. "corpus_order")."""
    return _philox_from_digest(
        _STREAM_TAG,
        int(master).to_bytes(8, "little"),
        name.encode("utf-8"),
    )

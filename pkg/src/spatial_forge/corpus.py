"""Corpus scanning, depth sidecars, and content fingerprinting.

Layout contract: a corpus directory is a tree of RGB rasters.  RGB-D images
pair each raster with sidecar files next to it:

    scene.png
    scene_depth.npy        raw depth, float array (H, W) or (H, W, 1)
    scene_depth.png        alternative: single-channel 16-bit raster
    scene_depth_mask.npy   optional boolean validity mask

When both sidecar forms exist the .npy wins.  Without a mask, pixels with
non-finite or non-positive depth are invalid.  Depth is min-max normalized
per image at load time.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from collections import OrderedDict
from pathlib import Path

import numpy as np
from PIL import Image as PILImage

from .errors import ConfigInvalid, InsufficientValidDepth
from .imaging import normalize_depth

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp")
_SIDECAR_SUFFIXES = ("_depth.npy", "_depth.png", "_depth_mask.npy")


@dataclass(frozen=True)
class CorpusEntry:
    rel_path: str            # recorded in manifests as source_image
    path: Path
    depth_path: Path | None = None
    depth_mask_path: Path | None = None

    @property
    def has_depth(self) -> bool:
        return self.depth_path is not None


def _is_sidecar(name: str) -> bool:
    return any(name.endswith(sfx) for sfx in _SIDECAR_SUFFIXES)


def _scan_dir(root: Path) -> list[CorpusEntry]:
    if not root.is_dir():
        raise ConfigInvalid(f"corpus dir does not exist: {root}")
    entries = []
    for p in sorted(root.rglob("*")):
        if not p.is_file() or p.suffix.lower() not in IMAGE_EXTENSIONS:
            continue
        if _is_sidecar(p.name):
            continue
        stem = p.with_suffix("")
        depth = None
        for cand in (Path(str(stem) + "_depth.npy"), Path(str(stem) + "_depth.png")):
            if cand.is_file():
                depth = cand
                break
        mask = Path(str(stem) + "_depth_mask.npy")
        entries.append(CorpusEntry(
            rel_path=p.relative_to(root).as_posix(),
            path=p,
            depth_path=depth,
            depth_mask_path=mask if mask.is_file() else None,
        ))
    return entries


@dataclass(frozen=True)
class CorpusIndex:
    """Scanned corpora: every image for the 2-D tasks, depth-paired ones for 3-D."""

    entries_2d: tuple[CorpusEntry, ...]
    entries_3d: tuple[CorpusEntry, ...]
    fingerprint: str


def scan_corpus(rgb_dirs: list[str], rgbd_dirs: list[str]) -> CorpusIndex:
    """Scan in config order; duplicate relative paths keep the first occurrence."""
    seen: dict[str, CorpusEntry] = {}
    flat: list[CorpusEntry] = []
    depth_capable: list[CorpusEntry] = []
    for d in rgb_dirs:
        for e in _scan_dir(Path(d)):
            if e.rel_path not in seen:
                seen[e.rel_path] = e
                flat.append(e)
    for d in rgbd_dirs:
        for e in _scan_dir(Path(d)):
            if e.rel_path not in seen:
                seen[e.rel_path] = e
                flat.append(e)
                if e.has_depth:
                    depth_capable.append(e)
    return CorpusIndex(
        entries_2d=tuple(flat),
        entries_3d=tuple(depth_capable),
        fingerprint=corpus_fingerprint(flat),
    )


def _hash_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def corpus_fingerprint(entries: list[CorpusEntry]) -> str:
    """Digest over every image and sidecar byte, in scan order."""
    h = hashlib.sha256()
    for e in entries:
        h.update(e.rel_path.encode("utf-8"))
        h.update(b"\0")
        h.update(_hash_file(e.path).encode("ascii"))
        for side in (e.depth_path, e.depth_mask_path):
            h.update(b"\0")
            if side is not None:
                h.update(_hash_file(side).encode("ascii"))
        h.update(b"\n")
    return h.hexdigest()


def load_image(entry: CorpusEntry) -> np.ndarray:
    with PILImage.open(entry.path) as pil:
        return np.asarray(pil.convert("RGB"), dtype=np.uint8).copy()


def _load_raw_depth(path: Path) -> np.ndarray:
    if path.suffix == ".npy":
        raw = np.load(path)
        if raw.ndim == 3 and raw.shape[2] == 1:
            raw = raw[:, :, 0]
        return np.asarray(raw, dtype=np.float64)
    with PILImage.open(path) as pil:
        return np.asarray(pil, dtype=np.float64)


def load_depth(entry: CorpusEntry) -> tuple[np.ndarray, np.ndarray]:
    """Normalized depth and validity mask for an RGB-D entry."""
    if entry.depth_path is None:
        raise InsufficientValidDepth(f"no depth sidecar for {entry.rel_path}")
    try:
        raw = _load_raw_depth(entry.depth_path)
    except (OSError, ValueError) as exc:
        raise InsufficientValidDepth(f"unreadable depth for {entry.rel_path}: {exc}")
    mask = None
    if entry.depth_mask_path is not None:
        try:
            mask = np.load(entry.depth_mask_path).astype(bool)
        except (OSError, ValueError) as exc:
            raise InsufficientValidDepth(f"unreadable depth mask for {entry.rel_path}: {exc}")
        if mask.shape != raw.shape:
            raise InsufficientValidDepth(f"depth mask shape mismatch for {entry.rel_path}")
    return normalize_depth(raw, mask)


class ImageCache:
    """Tiny LRU over decoded images and normalized depth, keyed by path."""

    def __init__(self, capacity: int = 128):
        self.capacity = capacity
        self._images: OrderedDict[str, np.ndarray] = OrderedDict()
        self._depths: OrderedDict[str, tuple[np.ndarray, np.ndarray]] = OrderedDict()

    def _put(self, store: OrderedDict, key: str, value):
        store[key] = value
        store.move_to_end(key)
        while len(store) > self.capacity:
            store.popitem(last=False)

    def image(self, entry: CorpusEntry) -> np.ndarray:
        key = str(entry.path)
        if key in self._images:
            self._images.move_to_end(key)
            return self._images[key]
        img = load_image(entry)
        self._put(self._images, key, img)
        return img

    def depth(self, entry: CorpusEntry) -> tuple[np.ndarray, np.ndarray]:
        key = str(entry.path)
        if key in self._depths:
            self._depths.move_to_end(key)
            return self._depths[key]
        pair = load_depth(entry)
        self._put(self._depths, key, pair)
        return pair

"""Shared synthetic inputs: textured RGB images, banded depth, corpus trees.

Everything here is seeded, so every test run sees identical pixels.  Depth
maps use horizontal bands with well-separated values plus mild noise: region
triples then exist almost surely, keeping the rejection samplers fast.
"""

from __future__ import annotations

import numpy as np
import pytest

from spatial_forge import imaging


def textured_rgb(h: int = 200, w: int = 256, key: int = 7) -> np.ndarray:
    """Noise plus a horizontal gradient: passes both eligibility gates everywhere."""
    g = np.random.Generator(np.random.Philox(key=key))
    img = g.integers(0, 256, size=(h, w, 3)).astype(np.float64) * 0.7
    img += np.linspace(0.0, 80.0, w)[None, :, None]
    return np.clip(img, 0, 255).astype(np.uint8)


def banded_depth(h: int = 200, w: int = 256, key: int = 13,
                 bands=(1.0, 3.0, 6.0, 9.5), noise: float = 0.01) -> np.ndarray:
    """Raw depth (think meters) in horizontal bands, top band closest."""
    g = np.random.Generator(np.random.Philox(key=key))
    depth = np.empty((h, w), dtype=np.float64)
    rows_per = h // len(bands)
    for i, v in enumerate(bands):
        r1 = (i + 1) * rows_per if i < len(bands) - 1 else h
        depth[i * rows_per:r1, :] = v
    depth += g.normal(0.0, noise, size=depth.shape)
    return depth


def normalized_banded_depth(h: int = 200, w: int = 256, key: int = 13):
    """(depth01, valid) pair ready for the 3-D generators."""
    return imaging.normalize_depth(banded_depth(h, w, key))


@pytest.fixture
def rgb_image() -> np.ndarray:
    return textured_rgb()


@pytest.fixture
def depth_pair():
    return normalized_banded_depth()


def write_corpus(root, n_rgb: int = 4, n_rgbd: int = 4, h: int = 200, w: int = 256,
                 key: int = 100):
    """Write a tiny two-directory corpus; returns (rgb_dir, rgbd_dir)."""
    rgb_dir = root / "rgb"
    rgbd_dir = root / "rgbd"
    rgb_dir.mkdir(parents=True, exist_ok=True)
    rgbd_dir.mkdir(parents=True, exist_ok=True)
    for i in range(n_rgb):
        imaging.save_png(rgb_dir / f"r{i}.png", textured_rgb(h, w, key=key + i))
    for i in range(n_rgbd):
        imaging.save_png(rgbd_dir / f"d{i}.png", textured_rgb(h, w, key=key + 50 + i))
        np.save(rgbd_dir / f"d{i}_depth.npy",
                banded_depth(h, w, key=key + 80 + i).astype(np.float32))
    return rgb_dir, rgbd_dir


SMALL_TASK_COUNTS = {"shuffle": 8, "flip": 4, "inpaint": 4,
                     "depth_order": 4, "rel_position": 4}
SMALL_SHUFFLE_MIX = {"2x2": 2, "2x2-masked": 2, "horiz": 2, "vert": 2}


@pytest.fixture(scope="session")
def small_build(tmp_path_factory):
    """One 24-sample dataset shared by the read-only build/server/CLI tests."""
    from spatial_forge.build import build_dataset
    from spatial_forge.config import BuildConfig

    root = tmp_path_factory.mktemp("small_build")
    rgb_dir, rgbd_dir = write_corpus(root)
    out = root / "out"
    config = BuildConfig(
        rgb_corpus_dirs=(str(rgb_dir),),
        rgbd_corpus_dirs=(str(rgbd_dir),),
        master_seed=42,
        output_dir=str(out),
        task_counts=dict(SMALL_TASK_COUNTS),
        shuffle_mix=dict(SMALL_SHUFFLE_MIX),
    )
    result = build_dataset(config)
    return {"config": config, "root": root, "out": out,
            "manifest": result["manifest"], "stats": result["stats"]}

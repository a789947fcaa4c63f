#!/usr/bin/env python3
"""End-to-end pipeline on a throwaway corpus.

Synthesizes a small RGB / RGB-D corpus, builds a dataset from it, audits the
manifest, carves out the supervised cold-start split, and prints the stats
tables -- the same sequence a production run goes through, shrunk to seconds.
Everything lands under demos_out/pipeline/.

Run from the repository root:

    python3 demos/03_build_pipeline.py
"""

import json
import shutil
from pathlib import Path

import numpy as np

from spatial_forge import build as forge_build
from spatial_forge import imaging
from spatial_forge.config import BuildConfig

OUT = Path(__file__).resolve().parent.parent / "demos_out" / "pipeline"


def synthesize_corpus(root: Path, n_rgb=4, n_rgbd=4):
    rgb_dir = root / "corpus_rgb"
    rgbd_dir = root / "corpus_rgbd"
    rgb_dir.mkdir(parents=True)
    rgbd_dir.mkdir(parents=True)
    for i in range(n_rgb):
        g = np.random.Generator(np.random.Philox(key=1000 + i))
        noise = g.integers(0, 256, size=(200, 256, 3)).astype(np.float64)
        ramp = np.linspace(0.0, 80.0, 256)[None, :, None]
        imaging.save_png(rgb_dir / f"scene{i}.png",
                         np.clip(noise * 0.7 + ramp, 0, 255).astype(np.uint8))
    for i in range(n_rgbd):
        g = np.random.Generator(np.random.Philox(key=2000 + i))
        noise = g.integers(0, 256, size=(200, 256, 3)).astype(np.float64)
        ramp = np.linspace(0.0, 80.0, 256)[None, :, None]
        imaging.save_png(rgbd_dir / f"scan{i}.png",
                         np.clip(noise * 0.7 + ramp, 0, 255).astype(np.uint8))
        bands = np.array([1.0, 3.0, 6.0, 9.5])
        idx = (np.arange(200) * len(bands)) // 200
        raw = bands[idx][:, None] * np.ones((1, 256))
        raw = raw * (1.0 + g.normal(0.0, 0.01, size=(200, 256)))
        np.save(rgbd_dir / f"scan{i}_depth.npy", raw.astype(np.float32))
    return rgb_dir, rgbd_dir


def main():
    if OUT.exists():
        shutil.rmtree(OUT)
    OUT.mkdir(parents=True)

    print("1. synthesizing a tiny corpus ...")
    rgb_dir, rgbd_dir = synthesize_corpus(OUT)

    print("2. building the dataset ...")
    config = BuildConfig(
        rgb_corpus_dirs=(str(rgb_dir),),
        rgbd_corpus_dirs=(str(rgbd_dir),),
        master_seed=99,
        output_dir=str(OUT / "dataset"),
        task_counts={"shuffle": 12, "flip": 6, "inpaint": 6,
                     "depth_order": 6, "rel_position": 6},
        shuffle_mix={"2x2": 3, "2x2-masked": 3, "horiz": 3, "vert": 3},
    )
    result = forge_build.build_dataset(config)
    manifest = result["manifest"]
    print(f"   manifest: {manifest}")

    print("3. auditing the manifest (ids, templates, artifacts, regeneration) ...")
    report = forge_build.verify_manifest(manifest)
    print(f"   audited {report['records']} records -> "
          f"{'clean' if report['ok'] else report['failures']}")

    print("4. carving the cold-start split ...")
    split = forge_build.split_cold_start(manifest, fraction=0.25, seed=0)
    print(f"   cold: {split['cold_total']} samples -> {split['cold_manifest']}")
    print(f"   rl  : {split['rl_total']} samples -> {split['rl_manifest']}")
    print(f"   per-task cold counts: {split['cold_counts']}")

    print("5. stats tables ...")
    _header, records = forge_build.read_manifest(manifest)
    print(json.dumps(forge_build.compute_stats(records), indent=2, sort_keys=True))

    print(f"\ndone; inspect {OUT}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Regenerate the committed golden fixtures from primary tooling.

Builds a small dataset with a fixed seed, keeps its manifest, writes five
responses per sample for the first 20 samples (the reward ladder: strict
correct, lenient correct, strict wrong, strict unparseable, no box), and
records what the `forge score` CLI says about them. The client test suite
replays responses.jsonl through a live server and demands byte-equal rewards
against expected.jsonl.

Run from client/:  python3 scripts/make_fixtures.py
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from spatial_forge import build, imaging
from spatial_forge.config import BuildConfig
from spatial_forge.core import TaskKind

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
MASTER_SEED = 777
N_SAMPLES = 20
TASK_COUNTS = {"shuffle": 8, "flip": 4, "inpaint": 4, "depth_order": 4,
               "rel_position": 4}
SHUFFLE_MIX = {"2x2": 2, "2x2-masked": 2, "horiz": 2, "vert": 2}


def synthesize_corpus(root: Path):
    rgb = root / "rgb"
    rgbd = root / "rgbd"
    rgb.mkdir()
    rgbd.mkdir()
    for i in range(3):
        g = np.random.Generator(np.random.Philox(key=9000 + i))
        noise = g.integers(0, 256, size=(200, 256, 3)).astype(np.float64)
        ramp = np.linspace(0.0, 80.0, 256)[None, :, None]
        img = np.clip(noise * 0.7 + ramp, 0, 255).astype(np.uint8)
        imaging.save_png(rgb / f"r{i}.png", img)
        imaging.save_png(rgbd / f"d{i}.png", img)
        bands = np.array([1.0, 3.0, 6.0, 9.5])
        idx = (np.arange(200) * len(bands)) // 200
        raw = bands[idx][:, None] * np.ones((1, 256))
        raw = raw * (1.0 + g.normal(0.0, 0.01, size=(200, 256)))
        np.save(rgbd / f"d{i}_depth.npy", raw.astype(np.float32))
    return rgb, rgbd


def wrong_answer(task: TaskKind, gt: str) -> str:
    if task in (TaskKind.SHUFFLE, TaskKind.DEPTH_ORDER):
        parts = gt.split("-")
        parts[0] = str((int(parts[0]) % len(parts)) + 1)
        return "-".join(parts)
    if task is TaskKind.FLIP:
        label, direction = gt.split("-")
        return f"{label}-{1 - int(direction)}"
    return {"A": "B", "B": "C", "C": "D", "D": "A"}[gt]


def ladder(task: TaskKind, gt: str) -> list[str]:
    bad = wrong_answer(task, gt)
    return [
        f"<think>compare the regions carefully</think> \\boxed{{{gt}}}",
        f"the answer is \\boxed{{{gt}}}",
        f"<think>compare the regions carefully</think> \\boxed{{{bad}}}",
        "<think>compare the regions carefully</think> \\boxed{unsure}",
        "I cannot tell from this image.",
    ]


def main() -> int:
    FIXTURES.mkdir(exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        rgb, rgbd = synthesize_corpus(root)
        config = BuildConfig(
            rgb_corpus_dirs=(str(rgb),), rgbd_corpus_dirs=(str(rgbd),),
            master_seed=MASTER_SEED, output_dir=str(root / "out"),
            task_counts=TASK_COUNTS, shuffle_mix=SHUFFLE_MIX)
        result = build.build_dataset(config)
        manifest_text = Path(result["manifest"]).read_text()
        (FIXTURES / "manifest.jsonl").write_text(manifest_text)

        index = build.load_reward_index(result["manifest"])
        _header, records = build.read_manifest(result["manifest"])
        sample_ids = [rec["id"] for rec in records][:N_SAMPLES]

        lines = []
        for sid in sample_ids:
            task, gt = index[sid]
            for j, text in enumerate(ladder(task, gt)):
                lines.append(json.dumps({"sample_id": sid, "response": text,
                                         "request_id": f"{sid}:{j}"},
                                        sort_keys=True))
        responses_path = FIXTURES / "responses.jsonl"
        responses_path.write_text("\n".join(lines) + "\n")

        proc = subprocess.run(
            [sys.executable, "-m", "spatial_forge.cli", "score",
             "--manifest", str(FIXTURES / "manifest.jsonl"),
             "--responses", str(responses_path)],
            capture_output=True, text=True, check=True)
        (FIXTURES / "expected.jsonl").write_text(proc.stdout)

    n = len(list((FIXTURES / "expected.jsonl").read_text().splitlines()))
    print(f"wrote fixtures for {len(sample_ids)} samples, {n} scored responses")
    return 0


if __name__ == "__main__":
    sys.exit(main())

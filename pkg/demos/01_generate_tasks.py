#!/usr/bin/env python3
"""Walk through one generated sample of each pretext task.

Builds a synthetic textured RGB image and a banded depth map, runs all five
generators on them, and writes every produced artifact (puzzles, option
panels, annotated scenes) under demos_out/tasks/ so you can open them next to
the printed question/answer pairs.

Run from the repository root:

    python3 demos/01_generate_tasks.py
"""

from pathlib import Path

import numpy as np

from spatial_forge import imaging, tasks2d, tasks3d
from spatial_forge.core import SeedSpec

OUT = Path(__file__).resolve().parent.parent / "demos_out" / "tasks"


def make_rgb(h=240, w=320, key=11):
    """Noise plus a horizontal luminance ramp: textured, never degenerate."""
    g = np.random.Generator(np.random.Philox(key=key))
    noise = g.integers(0, 256, size=(h, w, 3)).astype(np.float64)
    ramp = np.linspace(0.0, 80.0, w)[None, :, None]
    return np.clip(noise * 0.7 + ramp, 0, 255).astype(np.uint8)


def make_depth(h=240, w=320, key=12):
    """Four well-separated depth bands (meters) plus a little jitter."""
    g = np.random.Generator(np.random.Philox(key=key))
    bands = np.array([1.0, 3.0, 6.0, 9.5])
    idx = (np.arange(h) * len(bands)) // h
    raw = bands[idx][:, None] * np.ones((1, w))
    raw = raw * (1.0 + g.normal(0.0, 0.01, size=(h, w)))
    return imaging.normalize_depth(raw.astype(np.float64))


def show(d, note):
    print(f"\n=== {d.task.value} ===")
    print(f"question : {d.question[:110]}{'...' if len(d.question) > 110 else ''}")
    print(f"answer   : {d.answer.canonical()}")
    print(f"note     : {note}")
    paths = []
    for i, img in enumerate(d.images):
        p = OUT / f"{d.task.value}_{i}.png"
        imaging.save_png(p, img)
        paths.append(p.name)
    print(f"artifacts: {', '.join(paths)}")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    img = make_rgb()
    depth, valid = make_depth()

    d = tasks2d.gen_shuffle(img, "2x2", SeedSpec(1, 0), "demo.png")
    show(d, f"pieces were displayed in order {d.aux['perm']}; the answer "
            "lists, per position, which displayed piece restores it")

    d = tasks2d.gen_shuffle(img, "horiz", SeedSpec(1, 1), "demo.png")
    show(d, f"{d.aux['cols']} strips side by side this time")

    d = tasks2d.gen_flip(img, SeedSpec(1, 2), "demo.png")
    axis = "vertical (upside down)" if d.answer.direction == 0 else "horizontal (mirrored)"
    show(d, f"patch {d.answer.label} got a {axis} flip; the three others are untouched")

    d = tasks2d.gen_inpaint(img, SeedSpec(1, 3), "demo.png")
    show(d, f"image 0 is the whited-out scene; images 1-4 are options A-D, "
            f"distractors built by {d.aux['methods']}")

    d = tasks3d.gen_depth_order(img, depth, valid, SeedSpec(1, 4), "demo.png")
    show(d, "three labeled windows; the answer sorts them closest to farthest")

    d = tasks3d.gen_relpos(img, depth, valid, SeedSpec(1, 5), "demo.png")
    show(d, f"anchor point {d.aux['anchor_label']} faces theta={d.aux['theta']} deg; "
            f"ground truth direction is {d.aux['gt_label']}")

    print(f"\nwrote artifacts to {OUT}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Show exactly how responses earn (or lose) reward.

Generates one sample, then scores a ladder of response styles against its
ground truth: perfect, right-answer-wrong-layout, wrong-answer-right-layout,
and unusable.  The reward is a weighted sum of two binary parts --
accuracy 0.9, format 0.1 -- so only four values can ever come out.

Run from the repository root:

    python3 demos/02_score_responses.py
"""

import numpy as np

from spatial_forge import tasks2d, verifier
from spatial_forge.core import SeedSpec


def main():
    g = np.random.Generator(np.random.Philox(key=21))
    img = g.integers(0, 256, size=(200, 256, 3)).astype(np.uint8)
    d = tasks2d.gen_shuffle(img, "2x2", SeedSpec(2, 0), "demo.png")
    gt = d.answer.canonical()
    print(f"task = {d.task.value}, ground truth = {gt!r}\n")

    wrong = "-".join(reversed(gt.split("-")))
    if wrong == gt:  # a palindromic permutation; shift instead
        parts = gt.split("-")
        wrong = "-".join(parts[1:] + parts[:1])

    ladder = [
        ("strict layout, right answer",
         f"<think>match corners, then edges</think> so \\boxed{{{gt}}}"),
        ("no think block, right answer",
         f"the order must be \\boxed{{{gt}}}"),
        ("strict layout, wrong answer",
         f"<think>hmm</think> I'll guess \\boxed{{{wrong}}}"),
        ("strict layout, unparseable answer",
         "<think>hmm</think> \\boxed{dunno}"),
        ("two boxes (layout violation), last one right",
         f"\\boxed{{{wrong}}} wait, actually \\boxed{{{gt}}}"),
        ("no box at all",
         "it is probably fine"),
    ]

    print(f"{'response style':45s} {'r_acc':>5s} {'r_fmt':>5s} {'r':>5s}")
    for label, text in ladder:
        b = verifier.score_text(d.task, gt, text)
        print(f"{label:45s} {b.r_acc:5.1f} {b.r_fmt:5.1f} {b.r:5.1f}")

    print("\nevery reward is 0.9*r_acc + 0.1*r_fmt, so the value set is "
          "{0.0, 0.1, 0.9, 1.0}")


if __name__ == "__main__":
    main()

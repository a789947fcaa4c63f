"""Generators for the depth-based tasks: region depth ordering and relative position.

Depth maps arrive already normalized to [0, 1] with a validity mask (see
corpus module).  Pixel coordinates follow the imaging convention (row, col);
the relative-position math works on (x, z) = (column, normalized depth),
ignoring the vertical axis.
"""

from __future__ import annotations

import math

import numpy as np

from . import imaging, templates
from .core import DepthOrderAnswer, OptionAnswer, SeedSpec, TaskKind
from .draft import DraftSample
from .errors import (
    AmbiguousInstance,
    DimensionMismatch,
    NoValidPair,
    NoValidRegionTriple,
)
from .rng import derive_rng

REGION_RANGE_MAX = 0.15     # max in-region depth spread (normalized units)
REGION_GAP_MIN = 0.05       # min depth gap between consecutive regions
REGION_SIDE_FRACTION = 0.07
REGION_MIN_VALID = 0.90
REGION_ATTEMPTS = 500

THETAS = (0, 90, 180, 270)
PAIR_MIN_SEPARATION = 50.0  # px between the two marked points
PAIR_ATTEMPTS = 500

# thresholds carry the unit of the axis they gate, which swaps with theta:
# parallel to the image plane -> pixels, perpendicular -> normalized depth
THRESH_PARALLEL_PX = 150.0
THRESH_PERPENDICULAR_ND = 0.25

DIRECTION_LABELS = ("Front", "Back", "Left", "Right",
                    "Left-Front", "Left-Back", "Right-Front", "Right-Back")

LETTERS = "ABCD"


def _check_aligned(img: np.ndarray, depth: np.ndarray, valid: np.ndarray) -> None:
    if img.shape[:2] != depth.shape or depth.shape != valid.shape:
        raise DimensionMismatch(
            f"image {img.shape[:2]} vs depth {depth.shape} vs mask {valid.shape}")


def region_side(h: int, w: int) -> int:
    return max(2, round(REGION_SIDE_FRACTION * min(h, w)))


def region_stats(depth, valid, r, c, w):
    """(valid fraction, min, max, mean) over the window's valid pixels."""
    dwin = depth[r:r + w, c:c + w]
    vwin = valid[r:r + w, c:c + w]
    frac = float(vwin.mean())
    if frac == 0.0:
        return 0.0, None, None, None
    vals = dwin[vwin]
    return frac, float(vals.min()), float(vals.max()), float(vals.mean())


def select_depth_regions(depth: np.ndarray, valid: np.ndarray,
                         rng: np.random.Generator) -> tuple[int, list[tuple[int, int]]]:
    """Find three depth-separated square windows; corners returned closest first.

    Rejection-samples window corners until the separation, validity, spread,
    and gap constraints all hold.
    """
    h, w = depth.shape
    side = region_side(h, w)
    if side > min(h, w):
        raise NoValidRegionTriple("image smaller than one region window")

    for _ in range(REGION_ATTEMPTS):
        rows = rng.integers(0, h - side + 1, size=3)
        cols = rng.integers(0, w - side + 1, size=3)
        corners = [(int(rows[i]), int(cols[i])) for i in range(3)]

        centers = [(r + side / 2.0, c + side / 2.0) for r, c in corners]
        if any(math.hypot(centers[a][0] - centers[b][0],
                          centers[a][1] - centers[b][1]) < 2 * side
               for a in range(3) for b in range(a + 1, 3)):
            continue
        if any(abs(corners[a][0] - corners[b][0]) < side
               and abs(corners[a][1] - corners[b][1]) < side
               for a in range(3) for b in range(a + 1, 3)):
            continue

        stats = [region_stats(depth, valid, r, c, side) for r, c in corners]
        if any(s[0] < REGION_MIN_VALID for s in stats):
            continue
        if any(s[2] - s[1] >= REGION_RANGE_MAX for s in stats):
            continue

        order = sorted(range(3), key=lambda i: stats[i][3])
        if any(stats[order[i + 1]][1] - stats[order[i]][2] <= REGION_GAP_MIN
               for i in range(2)):
            continue
        return side, [corners[i] for i in order]

    raise NoValidRegionTriple(f"no admissible triple in {REGION_ATTEMPTS} attempts")


def gen_depth_order(img: np.ndarray, depth: np.ndarray, valid: np.ndarray,
                    seed: SeedSpec, source_image: str) -> DraftSample:
    imaging.check_min_size(img)
    _check_aligned(img, depth, valid)
    rng = derive_rng(seed)

    side, corners = select_depth_regions(depth, valid, rng)
    labels = [int(v) + 1 for v in rng.permutation(3)]  # displayed label per rank

    centers = [(c + side // 2, r + side // 2) for r, c in corners]  # (x, y)
    annotated = imaging.annotate_labels(img, centers, labels)

    return DraftSample(
        task=TaskKind.DEPTH_ORDER,
        question=templates.DEPTH_ORDER_QUESTION,
        images=[annotated],
        answer=DepthOrderAnswer(labels=tuple(labels)),
        seed=seed,
        source_image=source_image,
        aux={
            "window": side,
            "corners": [[r, c] for r, c in corners],
            "labels": labels,
        },
    )


# ---------------------------------------------------------------------------
# relative position


def relpos_transform(x1: float, z1: float, x2: float, z2: float,
                     theta: int) -> tuple[float, float]:
    """Query point in the anchor's frame after translate-then-rotate.

    Cardinal angles only: each output axis then carries a single unit
    (pixels or normalized depth), so the mixed-unit input is sound.
    """
    dx = x2 - x1
    dz = z2 - z1
    if theta == 0:
        return dx, dz
    if theta == 90:
        return dz, -dx
    if theta == 180:
        return -dx, -dz
    if theta == 270:
        return -dz, dx
    raise ValueError(f"theta must be cardinal, got {theta}")


def relpos_thresholds(theta: int) -> tuple[float, float]:
    if theta in (0, 180):
        return THRESH_PARALLEL_PX, THRESH_PERPENDICULAR_ND
    if theta in (90, 270):
        return THRESH_PERPENDICULAR_ND, THRESH_PARALLEL_PX
    raise ValueError(f"theta must be cardinal, got {theta}")


def classify_relpos(x_t: float, z_t: float, theta: int) -> tuple[str | None, str | None]:
    dx_thr, dz_thr = relpos_thresholds(theta)
    px = "Right" if x_t > dx_thr else "Left" if x_t < -dx_thr else None
    pz = "Front" if z_t > dz_thr else "Back" if z_t < -dz_thr else None
    if px is None and pz is None:
        raise AmbiguousInstance(f"({x_t}, {z_t}) below both thresholds")
    return px, pz


def composite_label(px: str | None, pz: str | None) -> str:
    if px and pz:
        return f"{px}-{pz}"
    return px or pz


def gen_relpos(img: np.ndarray, depth: np.ndarray, valid: np.ndarray,
               seed: SeedSpec, source_image: str) -> DraftSample:
    imaging.check_min_size(img)
    _check_aligned(img, depth, valid)
    rng = derive_rng(seed)

    h, w = img.shape[:2]
    theta = THETAS[int(rng.integers(0, 4))]
    anchor_label = 1 + int(rng.integers(0, 2))

    found = None
    for _ in range(PAIR_ATTEMPTS):
        rows = rng.integers(0, h, size=2)
        cols = rng.integers(0, w, size=2)
        p1 = (int(rows[0]), int(cols[0]))
        p2 = (int(rows[1]), int(cols[1]))
        if not (valid[p1] and valid[p2]):
            continue
        if math.hypot(p1[0] - p2[0], p1[1] - p2[1]) < PAIR_MIN_SEPARATION:
            continue
        anchor, query = (p1, p2) if anchor_label == 1 else (p2, p1)
        x1, z1 = float(anchor[1]), float(depth[anchor])
        x2, z2 = float(query[1]), float(depth[query])
        x_t, z_t = relpos_transform(x1, z1, x2, z2, theta)
        try:
            px, pz = classify_relpos(x_t, z_t, theta)
        except AmbiguousInstance:
            continue
        found = (p1, p2, x_t, z_t, px, pz)
        break
    if found is None:
        raise NoValidPair(f"no unambiguous pair in {PAIR_ATTEMPTS} attempts")

    p1, p2, x_t, z_t, px, pz = found
    gt = composite_label(px, pz)

    remaining = [lab for lab in DIRECTION_LABELS if lab != gt]
    picks = rng.choice(len(remaining), size=3, replace=False)
    pool = [gt] + [remaining[int(i)] for i in picks]
    letter_order = [int(v) for v in rng.permutation(4)]
    option_texts = tuple(pool[i] for i in letter_order)
    gt_letter = LETTERS[letter_order.index(0)]

    annotated = imaging.annotate_labels(img, [(p1[1], p1[0]), (p2[1], p2[0])], [1, 2])
    question = templates.relpos_question(anchor_label, templates.FACING_PHRASE[theta],
                                         option_texts)

    return DraftSample(
        task=TaskKind.REL_POSITION,
        question=question,
        images=[annotated],
        answer=OptionAnswer(letter=gt_letter),
        seed=seed,
        source_image=source_image,
        aux={
            "theta": theta,
            "anchor_label": anchor_label,
            "point1": [p1[0], p1[1]],
            "point2": [p2[0], p2[1]],
            "gt_label": gt,
            "options": list(option_texts),
            "letter_order": letter_order,
        },
    )

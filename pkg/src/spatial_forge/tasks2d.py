"""Generators for the depth-free tasks: shuffle, flip, inpaint.

Each generator is a pure function of (image, seed): it derives a fresh RNG
stream from the SeedSpec, so an emitted sample can be regenerated standalone
from its manifest record.  The draw order inside each generator is part of
the determinism contract and must never be reordered.
"""

from __future__ import annotations

import numpy as np

from . import imaging, templates
from .core import FlipAnswer, OptionAnswer, OrderingAnswer, SeedSpec, TaskKind
from .draft import DraftSample
from .errors import IndistinctDistractor, NoAsymmetricPatch
from .rng import derive_rng

SHUFFLE_VARIANTS = ("2x2", "2x2-masked", "horiz", "vert")

FLIP_ASYMMETRY_MIN = 5.0   # mean abs pixel diff a patch must show under its flip

# distractor construction methods, fixed order (draw indices refer to this list)
INPAINT_METHODS = ("interior", "exterior_0.25", "exterior_0.5", "rotate_cw", "rotate_ccw")
INPAINT_PLAN_ATTEMPTS = 8

LETTERS = "ABCD"


def _grid_for_variant(variant: str, rng: np.random.Generator) -> tuple[int, int]:
    if variant in ("2x2", "2x2-masked"):
        return 2, 2
    strips = int(rng.integers(3, 5))
    if variant == "horiz":
        return 1, strips
    if variant == "vert":
        return strips, 1
    raise ValueError(f"unknown shuffle variant: {variant}")


def question_for_grid(variant: str, rows: int, cols: int) -> str:
    if variant == "2x2":
        return templates.SHUFFLE_2X2
    if variant == "2x2-masked":
        return templates.SHUFFLE_2X2_MASKED
    if variant == "horiz":
        return templates.shuffle_strip_question("horiz", cols)
    return templates.shuffle_strip_question("vert", rows)


def gen_shuffle(img: np.ndarray, variant: str, seed: SeedSpec, source_image: str) -> DraftSample:
    imaging.check_min_size(img)
    imaging.check_texture(img)
    rng = derive_rng(seed)

    rows, cols = _grid_for_variant(variant, rng)
    n = rows * cols
    trimmed = imaging.center_trim(img, rows, cols)
    patches = imaging.partition(trimmed, rows, cols)

    # identity would make the question degenerate; redraw
    while True:
        perm = [int(v) for v in rng.permutation(n)]
        if perm != list(range(n)):
            break

    shuffled = [patches[p] for p in perm]
    mask_slot = None
    if variant == "2x2-masked":
        mask_slot = int(rng.integers(0, n))
        shuffled = imaging.whiteout(shuffled, mask_slot)
    composed = imaging.compose(shuffled, rows, cols, list(range(n)))

    answer = OrderingAnswer(order=tuple(int(v) for v in np.argsort(perm)))
    aux = {
        "variant": variant,
        "rows": rows,
        "cols": cols,
        "perm": perm,
        "mask_slot": mask_slot,
        "trimmed_size": [int(trimmed.shape[0]), int(trimmed.shape[1])],
    }
    return DraftSample(
        task=TaskKind.SHUFFLE,
        question=question_for_grid(variant, rows, cols),
        images=[composed],
        answer=answer,
        seed=seed,
        source_image=source_image,
        aux=aux,
    )


def patch_asymmetry(patch: np.ndarray, direction: int) -> float:
    flipped = imaging.flip_patch(patch, direction)
    return float(np.mean(np.abs(patch.astype(np.float64) - flipped.astype(np.float64))))


def gen_flip(img: np.ndarray, seed: SeedSpec, source_image: str) -> DraftSample:
    imaging.check_min_size(img)
    imaging.check_texture(img)
    rng = derive_rng(seed)

    trimmed = imaging.center_trim(img, 2, 2)
    patches = imaging.partition(trimmed, 2, 2)

    direction = int(rng.integers(0, 2))
    # near-symmetric patches would make the flip invisible
    eligible = [k for k in range(4)
                if patch_asymmetry(patches[k], direction) > FLIP_ASYMMETRY_MIN]
    if not eligible:
        raise NoAsymmetricPatch(f"no patch asymmetric under direction {direction}")
    target = eligible[int(rng.integers(0, len(eligible)))]

    patches[target] = imaging.flip_patch(patches[target], direction)
    composed = imaging.compose(patches, 2, 2, [0, 1, 2, 3])

    return DraftSample(
        task=TaskKind.FLIP,
        question=templates.FLIP_QUESTION,
        images=[composed],
        answer=FlipAnswer(label=target, direction=direction),
        seed=seed,
        source_image=source_image,
        aux={
            "rows": 2,
            "cols": 2,
            "label": target,
            "direction": direction,
            "trimmed_size": [int(trimmed.shape[0]), int(trimmed.shape[1])],
        },
    )


def build_distractor(img: np.ndarray, method: str, row0: int, col0: int, side: int) -> np.ndarray:
    """Construct one wrong option from the source image; output is side x side."""
    gt = imaging.crop(img, row0, col0, side, side)
    if method == "interior":
        inner = imaging.crop(gt, side // 4, side // 4, side // 2, side // 2)
        return imaging.resize(inner, side, side)
    if method in ("exterior_0.25", "exterior_0.5"):
        theta = 0.25 if method == "exterior_0.25" else 0.5
        margin = round(theta * side)
        h, w = img.shape[:2]
        r0 = max(0, row0 - margin)
        c0 = max(0, col0 - margin)
        r1 = min(h, row0 + side + margin)
        c1 = min(w, col0 + side + margin)
        outer = imaging.crop(img, r0, c0, r1 - r0, c1 - c0)
        return imaging.resize(outer, side, side)
    if method == "rotate_cw":
        return np.rot90(gt, k=-1).copy()
    if method == "rotate_ccw":
        return np.rot90(gt, k=1).copy()
    raise ValueError(f"unknown distractor method: {method}")


def gen_inpaint(img: np.ndarray, seed: SeedSpec, source_image: str) -> DraftSample:
    imaging.check_min_size(img)
    imaging.check_texture(img)
    rng = derive_rng(seed)

    h, w = img.shape[:2]
    side = min(h // 2, w // 2)
    row0 = int(rng.integers(0, h - side + 1))
    col0 = int(rng.integers(0, w - side + 1))

    gt = imaging.crop(img, row0, col0, side, side)
    masked = imaging.zero_region(img, row0, col0, side, side)

    # redraw the method plan until all four options are pairwise distinct
    options = None
    methods = None
    for _ in range(INPAINT_PLAN_ATTEMPTS):
        picks = rng.choice(len(INPAINT_METHODS), size=3, replace=False)
        cand_methods = [INPAINT_METHODS[int(p)] for p in picks]
        cand = [gt] + [build_distractor(img, m, row0, col0, side) for m in cand_methods]
        if all(not np.array_equal(cand[a], cand[b])
               for a in range(4) for b in range(a + 1, 4)):
            options, methods = cand, cand_methods
            break
    if options is None:
        raise IndistinctDistractor("options collide after plan redraws")

    # slot j of the displayed options shows options[letter_order[j]]
    letter_order = [int(v) for v in rng.permutation(4)]
    displayed = [options[i] for i in letter_order]
    gt_letter = LETTERS[letter_order.index(0)]

    return DraftSample(
        task=TaskKind.INPAINT,
        question=templates.INPAINT_QUESTION,
        images=[masked] + displayed,
        answer=OptionAnswer(letter=gt_letter),
        seed=seed,
        source_image=source_image,
        aux={
            "side": side,
            "row0": row0,
            "col0": col0,
            "methods": methods,
            "letter_order": letter_order,
        },
    )

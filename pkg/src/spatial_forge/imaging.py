"""Image and depth primitives: grids, flips, crops, masks, labels, depth norm.

Conventions used throughout the package:

* RGB images are numpy uint8 arrays of shape (H, W, 3), row-major.
* Rectangles are (row0, col0, height, width), half-open on both axes.
* Depth maps are float64 (H, W) in [0, 1] plus a boolean validity mask.

All operations return fresh arrays; inputs are never mutated.
"""

from __future__ import annotations

import numpy as np
from PIL import Image as PILImage

from .errors import (
    DegenerateImage,
    DimensionMismatch,
    EmptyRect,
    ImageTooSmall,
    IndexOutOfRange,
    InsufficientValidDepth,
    InvalidPermutation,
    OutOfBounds,
)

MIN_SIDE = 64          # task eligibility gate on both dimensions
MIN_PIXEL_STD = 8.0    # below this the image has no usable visual cues

VERTICAL = 0           # flip directions, matching the question wording
HORIZONTAL = 1


def require_rgb(img: np.ndarray) -> None:
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise DimensionMismatch(f"expected (H, W, 3) uint8, got {img.shape} {img.dtype}")


def check_min_size(img: np.ndarray, min_side: int = MIN_SIDE) -> None:
    h, w = img.shape[:2]
    if h < min_side or w < min_side:
        raise ImageTooSmall(f"{h}x{w} below {min_side}px gate")


def check_texture(img: np.ndarray, min_std: float = MIN_PIXEL_STD) -> None:
    if float(np.std(img.astype(np.float64))) < min_std:
        raise DegenerateImage("global pixel std below threshold")


def center_trim(img: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Center-crop to the largest size divisible by the grid."""
    h, w = img.shape[:2]
    th, tw = h - h % rows, w - w % cols
    if th == 0 or tw == 0:
        raise DimensionMismatch(f"cannot trim {h}x{w} for a {rows}x{cols} grid")
    r0 = (h - th) // 2
    c0 = (w - tw) // 2
    return img[r0:r0 + th, c0:c0 + tw].copy()


def partition(img: np.ndarray, rows: int, cols: int) -> list[np.ndarray]:
    """Split into a rows x cols grid, flattened row-major (k = i*cols + j)."""
    require_rgb(img)
    h, w = img.shape[:2]
    if h % rows or w % cols:
        raise DimensionMismatch(f"{rows}x{cols} grid does not divide {h}x{w}")
    ph, pw = h // rows, w // cols
    return [img[i * ph:(i + 1) * ph, j * pw:(j + 1) * pw].copy()
            for i in range(rows) for j in range(cols)]


def _check_perm(order, n: int) -> None:
    if sorted(order) != list(range(n)):
        raise InvalidPermutation(f"not a permutation of 0..{n - 1}: {list(order)}")


def compose(patches: list[np.ndarray], rows: int, cols: int, order) -> np.ndarray:
    """Assemble an image whose slot k shows patches[order[k]]."""
    if len(patches) != rows * cols:
        raise DimensionMismatch(f"{len(patches)} patches for a {rows}x{cols} grid")
    _check_perm(order, len(patches))
    ph, pw = patches[0].shape[:2]
    out = np.empty((rows * ph, cols * pw, 3), dtype=np.uint8)
    for k, src in enumerate(order):
        i, j = divmod(k, cols)
        p = patches[src]
        if p.shape[:2] != (ph, pw):
            raise DimensionMismatch("patches disagree in size")
        out[i * ph:(i + 1) * ph, j * pw:(j + 1) * pw] = p
    return out


def flip_patch(patch: np.ndarray, direction: int) -> np.ndarray:
    if direction == VERTICAL:
        return patch[::-1, :].copy()
    if direction == HORIZONTAL:
        return patch[:, ::-1].copy()
    raise ValueError(f"direction must be 0 or 1, got {direction}")


def whiteout(patches: list[np.ndarray], k: int) -> list[np.ndarray]:
    if not 0 <= k < len(patches):
        raise IndexOutOfRange(f"patch {k} of {len(patches)}")
    out = [p.copy() for p in patches]
    out[k] = np.full_like(out[k], 255)
    return out


def _check_rect(img: np.ndarray, row0: int, col0: int, height: int, width: int) -> None:
    if height <= 0 or width <= 0:
        raise EmptyRect(f"{height}x{width}")
    h, w = img.shape[:2]
    if row0 < 0 or col0 < 0 or row0 + height > h or col0 + width > w:
        raise OutOfBounds(f"rect ({row0},{col0},{height},{width}) outside {h}x{w}")


def zero_region(img: np.ndarray, row0: int, col0: int, height: int, width: int) -> np.ndarray:
    _check_rect(img, row0, col0, height, width)
    out = img.copy()
    out[row0:row0 + height, col0:col0 + width] = 0
    return out


def crop(img: np.ndarray, row0: int, col0: int, height: int, width: int) -> np.ndarray:
    _check_rect(img, row0, col0, height, width)
    return img[row0:row0 + height, col0:col0 + width].copy()


def resize(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize; a same-size call is an exact copy."""
    h, w = img.shape[:2]
    if (h, w) == (out_h, out_w):
        return img.copy()
    pil = PILImage.fromarray(img)
    return np.asarray(pil.resize((out_w, out_h), PILImage.BILINEAR), dtype=np.uint8).copy()


# ---------------------------------------------------------------------------
# label marks

# 3x5 digit glyphs, row-major bit strings
_GLYPHS = {
    "0": "111101101101111",
    "1": "010110010010111",
    "2": "111001111100111",
    "3": "111001111001111",
    "4": "101101111001001",
    "5": "111100111001111",
    "6": "111100111101111",
    "7": "111001001001001",
    "8": "111101111101111",
    "9": "111101111001111",
}


def label_radius(h: int, w: int) -> int:
    return max(6, round(0.015 * min(h, w)))


def _draw_digit(img: np.ndarray, digit: str, cx: int, cy: int, scale: int, value: int) -> None:
    # glyph is 3*scale wide, 5*scale tall, centered at (cx, cy), clamped to bounds
    bits = _GLYPHS[digit]
    h, w = img.shape[:2]
    x0 = cx - (3 * scale) // 2
    y0 = cy - (5 * scale) // 2
    for r in range(5):
        for c in range(3):
            if bits[r * 3 + c] == "0":
                continue
            rr0 = max(0, y0 + r * scale)
            rr1 = min(h, y0 + (r + 1) * scale)
            cc0 = max(0, x0 + c * scale)
            cc1 = min(w, x0 + (c + 1) * scale)
            if rr0 < rr1 and cc0 < cc1:
                img[rr0:rr1, cc0:cc1] = value


def annotate_labels(img: np.ndarray, centers: list[tuple[int, int]], labels: list[int]) -> np.ndarray:
    """Mark each (x, y) center with a filled disc and its numeral.

    Disc color flips against the local background: white disc with a black
    numeral where the neighbourhood is dark, inverted where it is bright.
    Marks are clamped to the image bounds.
    """
    require_rgb(img)
    if len(centers) != len(labels):
        raise DimensionMismatch("centers and labels differ in length")
    h, w = img.shape[:2]
    out = img.copy()
    radius = label_radius(h, w)
    yy, xx = np.mgrid[0:h, 0:w]
    for (cx, cy), label in zip(centers, labels):
        if not (0 <= cx < w and 0 <= cy < h):
            raise OutOfBounds(f"center ({cx},{cy}) outside {h}x{w}")
        r0, r1 = max(0, cy - radius), min(h, cy + radius + 1)
        c0, c1 = max(0, cx - radius), min(w, cx + radius + 1)
        local_mean = float(img[r0:r1, c0:c1].astype(np.float64).mean())
        disc_val, text_val = (255, 0) if local_mean < 128 else (0, 255)
        mask = (xx - cx) ** 2 + (yy - cy) ** 2 <= radius * radius
        out[mask] = disc_val
        scale = max(1, radius // 4)
        for i, digit in enumerate(str(label)):
            _draw_digit(out, digit, cx + i * 4 * scale, cy, scale, text_val)
    return out


# ---------------------------------------------------------------------------
# depth


def default_valid_mask(raw: np.ndarray) -> np.ndarray:
    """Sensor dropouts read as non-finite or non-positive depth."""
    return np.isfinite(raw) & (raw > 0)


def normalize_depth(raw: np.ndarray, valid_mask: np.ndarray | None = None,
                    min_valid_fraction: float = 0.5) -> tuple[np.ndarray, np.ndarray]:
    """Min-max normalize valid pixels to [0, 1]; invalid pixels are zeroed.

    A constant-depth map normalizes to all zeros rather than erroring; the
    region/pair samplers then reject it on their own separation constraints.
    """
    if raw.ndim != 2:
        raise DimensionMismatch(f"depth must be 2-D, got shape {raw.shape}")
    raw = raw.astype(np.float64)
    valid = default_valid_mask(raw) if valid_mask is None else (valid_mask & np.isfinite(raw))
    frac = float(valid.mean()) if valid.size else 0.0
    if frac < min_valid_fraction:
        raise InsufficientValidDepth(f"only {frac:.1%} of pixels valid")
    lo = float(raw[valid].min())
    hi = float(raw[valid].max())
    out = np.zeros_like(raw)
    if hi > lo:
        out[valid] = (raw[valid] - lo) / (hi - lo)
    return out, valid


# ---------------------------------------------------------------------------
# lossless artifact io


def save_png(path, img: np.ndarray) -> None:
    require_rgb(img)
    PILImage.fromarray(img).save(path, format="PNG")


def load_png(path) -> np.ndarray:
    with PILImage.open(path) as pil:
        return np.asarray(pil.convert("RGB"), dtype=np.uint8).copy()

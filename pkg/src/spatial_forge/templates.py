"""Question text for the five tasks.

The strings are fixed verbatim, including their quirks; downstream consumers
key on exact question text, so edits here are breaking changes.  Blanks that
the construction procedure fills (strip counts, camera facing phrase, option
texts) are the only variable parts.
"""

from __future__ import annotations

SHUFFLE_2X2 = (
    "The image has been divided into 4 shuffled patches labeled 0, 1, 2, and 3. "
    "Based on visual clues such as continuity, alignment, and context, answer the "
    "correct arrangement of the patches to restore the original image, where the "
    "format is 'TopLeft-TopRight-BottomLeft-BottomRight'."
)

SHUFFLE_2X2_MASKED = (
    "The image has been divided into 4 shuffled patches labeled 0, 1, 2, and 3. "
    "One of the four patches is masked completely by white pixels. Based on visual "
    "clues such as continuity, alignment, and context, answer the correct "
    "arrangement of the patches to restore the original image, where the format is "
    "'TopLeft-TopRight-BottomLeft-BottomRight'."
)

# strip templates keep the fixed "labeled 0, 1, 2, and 3" wording even for the
# 3-strip layout; only the strip count and the format string vary
_STRIP_FORMATS = {
    ("horiz", 3): "Left-Middle-Right",
    ("horiz", 4): "Left-Middle1-Middle2-Right",
    ("vert", 3): "Top-Middle-Bottom",
    ("vert", 4): "Top-Middle1-Middle2-Bottom",
}

_STRIP_WORD = {"horiz": "horizontal", "vert": "vertical"}


def shuffle_strip_question(orientation: str, strips: int) -> str:
    fmt = _STRIP_FORMATS[(orientation, strips)]
    return (
        f"The image has been divided into {strips} shuffled "
        f"{_STRIP_WORD[orientation]} strips labeled 0, 1, 2, and 3. Based on visual "
        "clues such as continuity, alignment, and context, answer the correct "
        "arrangement of the strips to restore the original image, where the format "
        f"is '{fmt}'."
    )


FLIP_QUESTION = (
    "The image has been divided into 4 labeled 0, 1, 2, and 3. One of the four "
    "patches is flipped either horizontally or vertically. Based on visual clues "
    "such as continuity, alignment, and context, answer the correct patch that is "
    "flipped and the direction the flip, where the format is 'Label-Direction'. "
    "The direction can only be 0(flipped vertically) or 1(flipped horizontally)."
)

INPAINT_QUESTION = (
    "Which image is the missing part in the first image <image1>? Based on visual "
    "clues such as alignment, image content, and positional relationship, select "
    "one of the four options <image2><image3><image4><image5> as the final answer. "
    "The final answer should be chosen from 'A', 'B', 'C', and 'D'."
)

DEPTH_ORDER_QUESTION = (
    "The original image has three regions marked as 1, 2, and 3. Consider the "
    "content, positional relationships, depths of the three regions and other "
    "cues, and sort the depths of the three regions from smallest to largest from "
    "the camera, where the format of the answer is 'Smallest-Middle-Largest'."
)

# orientation angle -> how the hypothetical camera at the anchor mark faces
FACING_PHRASE = {
    0: "facing away from the camera",
    90: "facing to the left of the image",
    180: "facing the camera",
    270: "facing to the right of the image",
}


def relpos_question(anchor_label: int, facing: str, options: tuple[str, str, str, str]) -> str:
    query_label = 2 if anchor_label == 1 else 1
    a, b, c, d = options
    return (
        "I've taken an image and there are two regions marked as 1, and 2 on the "
        f"image. Assume that there is a camera at position '{anchor_label}' and "
        f"it's {facing}. According to the camera, where is the region marked "
        f"'{query_label}'? A. {a} B. {b} C. {c} D. {d}. Consider cues such as "
        "depth, orientation, and 3D spatial relationship. The final answer should "
        "be chosen from 'A', 'B', 'C', and 'D'."
    )


# appended to questions at training time; not stored in the manifest
FORMAT_PROMPT = (
    "You FIRST think about the reasoning process as an internal monologue and "
    "then provide the final answer. The reasoning process MUST BE enclosed within "
    "<think> </think> tags. The final answer MUST BE put in \\boxed{}."
)

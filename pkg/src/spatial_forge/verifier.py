"""Response parsing and reward computation.

The reward is r = 0.9 * r_acc + 0.1 * r_fmt with both components binary, so
r can only take the values {0.0, 0.1, 0.9, 1.0} (the weights sum exactly to
1.0 in float64).  Accuracy extraction is lenient (last boxed answer anywhere
in the text); format scoring is strict.  Scoring never raises: any failure
mode collapses to a zero component.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import QASample, TaskKind
from .errors import Unparseable

ACC_WEIGHT = 0.9
FMT_WEIGHT = 0.1

_THINK_OPEN = "<think>"
_THINK_CLOSE = "</think>"
_BOXED = "\\boxed{"

_LETTER_RE = re.compile(r"^[abcd]$")


@dataclass(frozen=True)
class ParsedResponse:
    think_block: str | None
    boxed_answer: str | None
    strict_format: bool


@dataclass(frozen=True)
class RewardBreakdown:
    r_acc: float
    r_fmt: float
    r: float

    def to_dict(self) -> dict:
        return {"r_acc": float(self.r_acc), "r_fmt": float(self.r_fmt), "r": float(self.r)}


def _find_boxed(text: str) -> list[tuple[int, str]]:
    """All complete boxed commands as (start offset, inner content).

    Brace matching is balanced, so nested braces inside the box survive.
    An unterminated box is ignored rather than swallowing the rest of the text.
    """
    found = []
    i = 0
    while True:
        j = text.find(_BOXED, i)
        if j < 0:
            break
        pos = j + len(_BOXED) - 1  # at the opening brace
        depth = 0
        end = -1
        while pos < len(text):
            ch = text[pos]
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    end = pos
                    break
            pos += 1
        if end < 0:
            i = j + len(_BOXED)
            continue
        found.append((j, text[j + len(_BOXED):end]))
        i = end + 1
    return found


def parse_response(text: str) -> ParsedResponse:
    n_open = text.count(_THINK_OPEN)
    n_close = text.count(_THINK_CLOSE)

    think_block = None
    open_idx = text.find(_THINK_OPEN)
    if open_idx >= 0:
        close_idx = text.find(_THINK_CLOSE, open_idx + len(_THINK_OPEN))
        if close_idx >= 0:
            think_block = text[open_idx + len(_THINK_OPEN):close_idx]

    boxed = _find_boxed(text)
    boxed_answer = boxed[-1][1] if boxed else None

    strict = False
    if n_open == 1 and n_close == 1 and len(boxed) == 1:
        close_idx = text.find(_THINK_CLOSE)
        strict = open_idx < close_idx and boxed[0][0] > close_idx
    return ParsedResponse(think_block=think_block, boxed_answer=boxed_answer,
                          strict_format=strict)


def _parse_hyphen_ints(raw: str) -> list[int]:
    parts = [p.strip() for p in raw.split("-")]
    if not all(re.fullmatch(r"\d", p) for p in parts):
        raise Unparseable(f"not a hyphen-joined digit list: {raw!r}")
    return [int(p) for p in parts]


def canonicalize(task: TaskKind, raw: str) -> str:
    """Map raw answer text to the task's canonical form, or raise Unparseable."""
    if raw is None:
        raise Unparseable("no answer")
    raw = raw.strip()
    if not raw:
        raise Unparseable("empty answer")

    if task in (TaskKind.INPAINT, TaskKind.REL_POSITION):
        if not _LETTER_RE.fullmatch(raw.lower()):
            raise Unparseable(f"not an option letter: {raw!r}")
        return raw.upper()

    if task is TaskKind.SHUFFLE:
        vals = _parse_hyphen_ints(raw)
        k = len(vals)
        if k not in (3, 4) or sorted(vals) != list(range(k)):
            raise Unparseable(f"not a patch ordering: {raw!r}")
        return "-".join(str(v) for v in vals)

    if task is TaskKind.FLIP:
        vals = _parse_hyphen_ints(raw)
        if len(vals) != 2 or vals[0] not in (0, 1, 2, 3) or vals[1] not in (0, 1):
            raise Unparseable(f"not a label-direction pair: {raw!r}")
        return f"{vals[0]}-{vals[1]}"

    if task is TaskKind.DEPTH_ORDER:
        vals = _parse_hyphen_ints(raw)
        if sorted(vals) != [1, 2, 3]:
            raise Unparseable(f"not a region ordering: {raw!r}")
        return "-".join(str(v) for v in vals)

    raise Unparseable(f"unknown task {task!r}")


def score_text(task: TaskKind, gt_canonical: str, response_text: str) -> RewardBreakdown:
    parsed = parse_response(response_text if isinstance(response_text, str) else "")
    r_fmt = 1.0 if parsed.strict_format else 0.0
    r_acc = 0.0
    if parsed.boxed_answer is not None:
        try:
            r_acc = 1.0 if canonicalize(task, parsed.boxed_answer) == gt_canonical else 0.0
        except Unparseable:
            r_acc = 0.0
    return RewardBreakdown(r_acc=r_acc, r_fmt=r_fmt,
                           r=ACC_WEIGHT * r_acc + FMT_WEIGHT * r_fmt)


def score(sample: QASample, response_text: str) -> RewardBreakdown:
    return score_text(sample.task, sample.answer.canonical(), response_text)

"""Core record types: task kinds, seeds, answer keys, and sample records.

Everything here is immutable after construction and validates its payload
up front, so malformed answers can never reach the manifest.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Union

from .errors import InvalidPermutation


def canonical_json(obj: Any) -> str:
    """Stable encoding used for ids and manifest lines: sorted keys, no spaces."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class TaskKind(str, Enum):
    SHUFFLE = "shuffle"
    FLIP = "flip"
    INPAINT = "inpaint"
    DEPTH_ORDER = "depth_order"
    REL_POSITION = "rel_position"


@dataclass(frozen=True)
class SeedSpec:
    """(master, index) pair that fully determines one sample's RNG stream."""

    master: int
    index: int

    def __post_init__(self):
        for name in ("master", "index"):
            v = getattr(self, name)
            if not isinstance(v, int) or not (0 <= v < 2**64):
                raise ValueError(f"SeedSpec.{name} must be a u64, got {v!r}")

    def to_dict(self) -> dict:
        return {"master": self.master, "index": self.index}

    @staticmethod
    def from_dict(d: dict) -> "SeedSpec":
        return SeedSpec(master=int(d["master"]), index=int(d["index"]))


# ---------------------------------------------------------------------------
# answer keys


@dataclass(frozen=True)
class OrderingAnswer:
    """Patch arrangement that restores the original image (shuffle tasks)."""

    order: tuple[int, ...]

    kind = "ordering"

    def __post_init__(self):
        k = len(self.order)
        if k < 2 or sorted(self.order) != list(range(k)):
            raise InvalidPermutation(f"not a permutation of 0..{k - 1}: {self.order}")
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))

    def canonical(self) -> str:
        return "-".join(str(v) for v in self.order)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "order": list(self.order)}


@dataclass(frozen=True)
class FlipAnswer:
    """(patch label, direction) with direction 0 = vertical, 1 = horizontal."""

    label: int
    direction: int

    kind = "flip"

    def __post_init__(self):
        if self.label not in (0, 1, 2, 3):
            raise ValueError(f"flip label out of range: {self.label}")
        if self.direction not in (0, 1):
            raise ValueError(f"flip direction must be 0 or 1: {self.direction}")

    def canonical(self) -> str:
        return f"{self.label}-{self.direction}"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "label": self.label, "direction": self.direction}


@dataclass(frozen=True)
class OptionAnswer:
    """Multiple-choice letter for image- or text-option questions."""

    letter: str

    kind = "option"

    def __post_init__(self):
        if self.letter not in ("A", "B", "C", "D"):
            raise ValueError(f"option letter must be A..D: {self.letter!r}")

    def canonical(self) -> str:
        return self.letter

    def to_dict(self) -> dict:
        return {"kind": self.kind, "letter": self.letter}


@dataclass(frozen=True)
class DepthOrderAnswer:
    """Displayed region labels sorted closest to farthest."""

    labels: tuple[int, ...]

    kind = "depth_order"

    def __post_init__(self):
        if sorted(self.labels) != [1, 2, 3]:
            raise InvalidPermutation(f"not a permutation of 1..3: {self.labels}")
        object.__setattr__(self, "labels", tuple(int(v) for v in self.labels))

    def canonical(self) -> str:
        return "-".join(str(v) for v in self.labels)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "labels": list(self.labels)}


AnswerKey = Union[OrderingAnswer, FlipAnswer, OptionAnswer, DepthOrderAnswer]

_ANSWER_KINDS = {
    "ordering": lambda d: OrderingAnswer(order=tuple(d["order"])),
    "flip": lambda d: FlipAnswer(label=int(d["label"]), direction=int(d["direction"])),
    "option": lambda d: OptionAnswer(letter=str(d["letter"])),
    "depth_order": lambda d: DepthOrderAnswer(labels=tuple(d["labels"])),
}

# answer shape each task is allowed to carry
_TASK_ANSWER_TYPE = {
    TaskKind.SHUFFLE: OrderingAnswer,
    TaskKind.FLIP: FlipAnswer,
    TaskKind.INPAINT: OptionAnswer,
    TaskKind.DEPTH_ORDER: DepthOrderAnswer,
    TaskKind.REL_POSITION: OptionAnswer,
}


def answer_from_dict(d: dict) -> AnswerKey:
    kind = d.get("kind")
    if kind not in _ANSWER_KINDS:
        raise ValueError(f"unknown answer kind: {kind!r}")
    return _ANSWER_KINDS[kind](d)


# ---------------------------------------------------------------------------
# samples


def sample_id(task: TaskKind, question: str, answer: AnswerKey, seed: SeedSpec,
              source_image: str) -> str:
    """Content hash of the fields that define a sample's identity (16 hex chars)."""
    payload = canonical_json({
        "task": task.value,
        "question": question,
        "answer": answer.canonical(),
        "seed": seed.to_dict(),
        "source_image": source_image,
    })
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class QASample:
    id: str
    task: TaskKind
    question: str
    images: tuple[str, ...]
    answer: AnswerKey
    seed: SeedSpec
    source_image: str
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        expect = _TASK_ANSWER_TYPE[self.task]
        if not isinstance(self.answer, expect):
            raise ValueError(
                f"{self.task.value} answer must be {expect.__name__}, "
                f"got {type(self.answer).__name__}")
        want = 5 if self.task is TaskKind.INPAINT else 1
        if len(self.images) != want:
            raise ValueError(
                f"{self.task.value} carries {want} image(s), got {len(self.images)}")
        object.__setattr__(self, "images", tuple(self.images))

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "task": self.task.value,
            "question": self.question,
            "images": list(self.images),
            "answer": self.answer.to_dict(),
            "seed": self.seed.to_dict(),
            "source_image": self.source_image,
            "aux": self.aux,
        }

    @staticmethod
    def from_record(d: dict) -> "QASample":
        return QASample(
            id=d["id"],
            task=TaskKind(d["task"]),
            question=d["question"],
            images=tuple(d["images"]),
            answer=answer_from_dict(d["answer"]),
            seed=SeedSpec.from_dict(d["seed"]),
            source_image=d["source_image"],
            aux=dict(d.get("aux", {})),
        )

"""In-memory sample drafts: a QASample plus its pixel buffers, pre-serialization."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import AnswerKey, QASample, SeedSpec, TaskKind, sample_id


@dataclass
class DraftSample:
    """Generator output before artifact files exist.

    `images` holds the actual uint8 buffers in manifest order; the builder
    writes them out and swaps in relative paths.
    """

    task: TaskKind
    question: str
    images: list
    answer: AnswerKey
    seed: SeedSpec
    source_image: str
    aux: dict = field(default_factory=dict)

    def sample_id(self) -> str:
        return sample_id(self.task, self.question, self.answer, self.seed,
                         self.source_image)

    def finalize(self, image_paths: list[str]) -> QASample:
        if len(image_paths) != len(self.images):
            raise ValueError("path count does not match image count")
        return QASample(
            id=self.sample_id(),
            task=self.task,
            question=self.question,
            images=tuple(image_paths),
            answer=self.answer,
            seed=self.seed,
            source_image=self.source_image,
            aux=self.aux,
        )

"""Build configuration: task mix, corpus locations, seed, output."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import TaskKind
from .errors import ConfigInvalid
from .tasks2d import SHUFFLE_VARIANTS

# release recipe: per-task sample counts and the shuffle sub-mix
DEFAULT_TASK_COUNTS = {
    "shuffle": 16028,
    "flip": 4005,
    "inpaint": 20200,
    "depth_order": 20620,
    "rel_position": 20200,
}

DEFAULT_SHUFFLE_MIX = {
    "2x2": 4000,
    "2x2-masked": 4028,
    "horiz": 4991,
    "vert": 3009,
}

DEFAULT_COLD_START_FRACTION = 0.044

_CONFIG_KEYS = {
    "rgb_corpus_dirs", "rgbd_corpus_dirs", "task_counts", "shuffle_mix",
    "master_seed", "output_dir", "cold_start_fraction",
}


@dataclass(frozen=True)
class BuildConfig:
    rgb_corpus_dirs: tuple[str, ...] = ()
    rgbd_corpus_dirs: tuple[str, ...] = ()
    task_counts: dict = field(default_factory=lambda: dict(DEFAULT_TASK_COUNTS))
    shuffle_mix: dict = field(default_factory=lambda: dict(DEFAULT_SHUFFLE_MIX))
    master_seed: int = 0
    output_dir: str = "forge_out"
    cold_start_fraction: float = DEFAULT_COLD_START_FRACTION

    def __post_init__(self):
        object.__setattr__(self, "rgb_corpus_dirs", tuple(self.rgb_corpus_dirs))
        object.__setattr__(self, "rgbd_corpus_dirs", tuple(self.rgbd_corpus_dirs))
        self.validate()

    def validate(self) -> None:
        want_tasks = {t.value for t in TaskKind}
        if set(self.task_counts) != want_tasks:
            raise ConfigInvalid(
                f"task_counts keys must be {sorted(want_tasks)}, got {sorted(self.task_counts)}")
        if set(self.shuffle_mix) != set(SHUFFLE_VARIANTS):
            raise ConfigInvalid(
                f"shuffle_mix keys must be {sorted(SHUFFLE_VARIANTS)}, got {sorted(self.shuffle_mix)}")
        for name, v in {**self.task_counts, **self.shuffle_mix}.items():
            if not isinstance(v, int) or v < 0:
                raise ConfigInvalid(f"count for {name!r} must be a non-negative int, got {v!r}")
        if sum(self.shuffle_mix.values()) != self.task_counts["shuffle"]:
            raise ConfigInvalid(
                f"shuffle_mix sums to {sum(self.shuffle_mix.values())}, "
                f"but shuffle count is {self.task_counts['shuffle']}")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            raise ConfigInvalid(f"master_seed must be a u64, got {self.master_seed!r}")
        needs_2d = any(self.task_counts[k] > 0 for k in ("shuffle", "flip", "inpaint"))
        needs_3d = any(self.task_counts[k] > 0 for k in ("depth_order", "rel_position"))
        if needs_2d and not (self.rgb_corpus_dirs or self.rgbd_corpus_dirs):
            raise ConfigInvalid("2-D tasks requested but no corpus dirs configured")
        if needs_3d and not self.rgbd_corpus_dirs:
            raise ConfigInvalid("depth tasks requested but no rgbd corpus dirs configured")
        if not 0.0 < self.cold_start_fraction < 1.0:
            raise ConfigInvalid(
                f"cold_start_fraction must be in (0, 1), got {self.cold_start_fraction}")

    @staticmethod
    def from_dict(d: dict) -> "BuildConfig":
        unknown = set(d) - _CONFIG_KEYS
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        kwargs: dict = {}
        if "rgb_corpus_dirs" in d:
            kwargs["rgb_corpus_dirs"] = tuple(d["rgb_corpus_dirs"])
        if "rgbd_corpus_dirs" in d:
            kwargs["rgbd_corpus_dirs"] = tuple(d["rgbd_corpus_dirs"])
        if "task_counts" in d:
            kwargs["task_counts"] = {**DEFAULT_TASK_COUNTS, **d["task_counts"]}
        if "shuffle_mix" in d:
            kwargs["shuffle_mix"] = {**DEFAULT_SHUFFLE_MIX, **d["shuffle_mix"]}
        for key in ("master_seed", "output_dir", "cold_start_fraction"):
            if key in d:
                kwargs[key] = d[key]
        return BuildConfig(**kwargs)

    @staticmethod
    def from_file(path) -> "BuildConfig":
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except OSError as exc:
            raise ConfigInvalid(f"cannot read config {path}: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"config {path} is not valid JSON: {exc}")
        if not isinstance(data, dict):
            raise ConfigInvalid("config root must be a JSON object")
        return BuildConfig.from_dict(data)

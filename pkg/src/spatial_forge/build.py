"""Dataset orchestration: build, split, verify, stats.

The build walks a fixed schedule (shuffle variants, flip, inpaint, depth
ordering, relative position), drawing source images round-robin from
seeded-shuffled corpus listings.  Each emitted sample owns the next
sample_index, so manifests are reproducible byte-for-byte from
(corpus, config, master_seed).
"""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path

import numpy as np

from . import imaging, templates, tasks2d, tasks3d, verifier
from .config import BuildConfig
from .core import QASample, SeedSpec, TaskKind, canonical_json, sample_id
from .corpus import CorpusEntry, CorpusIndex, ImageCache, load_depth, scan_corpus
from .draft import DraftSample
from .errors import (
    CorpusExhausted,
    DegenerateImage,
    ForgeError,
    FractionOutOfRange,
    ImageTooSmall,
    InsufficientValidDepth,
    ManifestUnreadable,
    SampleRejected,
)
from .rng import derive_stream
from .tasks2d import LETTERS, SHUFFLE_VARIANTS

SCHEMA_VERSION = 1

# generation order; sample_index follows this schedule
SCHEDULE = (
    (TaskKind.SHUFFLE, "2x2"),
    (TaskKind.SHUFFLE, "2x2-masked"),
    (TaskKind.SHUFFLE, "horiz"),
    (TaskKind.SHUFFLE, "vert"),
    (TaskKind.FLIP, None),
    (TaskKind.INPAINT, None),
    (TaskKind.DEPTH_ORDER, None),
    (TaskKind.REL_POSITION, None),
)

_DEPTH_TASKS = (TaskKind.DEPTH_ORDER, TaskKind.REL_POSITION)


# ---------------------------------------------------------------------------
# manifest io


def write_manifest(path, header: dict, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(canonical_json(header) + "\n")
        for rec in records:
            f.write(canonical_json(rec) + "\n")


def read_manifest(path) -> tuple[dict, list[dict]]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as exc:
        raise ManifestUnreadable(f"cannot read manifest {path}: {exc}")
    if not lines:
        raise ManifestUnreadable(f"manifest {path} is empty")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ManifestUnreadable(f"manifest header is not JSON: {exc}")
    if not isinstance(header, dict) or "schema_version" not in header or "id" in header:
        raise ManifestUnreadable("first manifest line is not a header")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ManifestUnreadable(f"line {lineno} is not JSON: {exc}")
        if not isinstance(rec, dict) or "id" not in rec:
            raise ManifestUnreadable(f"line {lineno} is not a sample record")
        records.append(rec)
    return header, records


def read_samples(path) -> tuple[dict, list[QASample]]:
    header, records = read_manifest(path)
    samples = []
    for rec in records:
        try:
            samples.append(QASample.from_record(rec))
        except (KeyError, ValueError, ForgeError) as exc:
            raise ManifestUnreadable(f"bad record {rec.get('id', '?')}: {exc}")
    return header, samples


def load_reward_index(path) -> dict[str, tuple[TaskKind, str]]:
    """id -> (task, canonical GT) map; all a scorer needs, images stay on disk."""
    header, samples = read_samples(path)
    index = {}
    for s in samples:
        if s.id in index:
            raise ManifestUnreadable(f"duplicate sample id {s.id}")
        index[s.id] = (s.task, s.answer.canonical())
    return index


# ---------------------------------------------------------------------------
# stats


def compute_stats(records: list[dict]) -> dict:
    """Frequency tables recomputable from a manifest alone."""
    task_counts = Counter()
    variant_counts = Counter()
    theta_counts = Counter()
    flip_direction_counts = Counter()
    gt_letter_counts = Counter()
    for rec in records:
        task = rec["task"]
        task_counts[task] += 1
        aux = rec.get("aux", {})
        if task == TaskKind.SHUFFLE.value:
            variant_counts[aux["variant"]] += 1
        elif task == TaskKind.FLIP.value:
            flip_direction_counts[str(aux["direction"])] += 1
        elif task == TaskKind.REL_POSITION.value:
            theta_counts[str(aux["theta"])] += 1
        if rec["answer"].get("kind") == "option":
            gt_letter_counts[rec["answer"]["letter"]] += 1
    return {
        "task_counts": dict(sorted(task_counts.items())),
        "variant_counts": dict(sorted(variant_counts.items())),
        "theta_counts": dict(sorted(theta_counts.items())),
        "flip_direction_counts": dict(sorted(flip_direction_counts.items())),
        "gt_letter_counts": dict(sorted(gt_letter_counts.items())),
    }


# ---------------------------------------------------------------------------
# build


class _RoundRobin:
    """Per-task cursor over a seeded shuffle of the corpus listing."""

    def __init__(self, entries: tuple[CorpusEntry, ...], master_seed: int, stream: str):
        order = derive_stream(master_seed, stream).permutation(len(entries))
        self.entries = [entries[int(i)] for i in order]
        self.cursor = 0

    def take(self) -> CorpusEntry:
        e = self.entries[self.cursor]
        self.cursor = (self.cursor + 1) % len(self.entries)
        return e

    def __len__(self) -> int:
        return len(self.entries)


def _generate(task: TaskKind, variant: str | None, img, depth_pair, seed: SeedSpec,
              source: str) -> DraftSample:
    if task is TaskKind.SHUFFLE:
        return tasks2d.gen_shuffle(img, variant, seed, source)
    if task is TaskKind.FLIP:
        return tasks2d.gen_flip(img, seed, source)
    if task is TaskKind.INPAINT:
        return tasks2d.gen_inpaint(img, seed, source)
    depth, valid = depth_pair
    if task is TaskKind.DEPTH_ORDER:
        return tasks3d.gen_depth_order(img, depth, valid, seed, source)
    return tasks3d.gen_relpos(img, depth, valid, seed, source)


def build_dataset(config: BuildConfig) -> dict:
    """Run the full schedule; returns {"manifest": path, "stats": dict}."""
    index = scan_corpus(list(config.rgb_corpus_dirs), list(config.rgbd_corpus_dirs))
    needs_2d = any(config.task_counts[t.value] > 0
                   for t in (TaskKind.SHUFFLE, TaskKind.FLIP, TaskKind.INPAINT))
    needs_3d = any(config.task_counts[t.value] > 0 for t in _DEPTH_TASKS)
    if needs_2d and not index.entries_2d:
        raise CorpusExhausted("no images found in the configured corpus dirs")
    if needs_3d and not index.entries_3d:
        raise CorpusExhausted("no depth-paired images found in the rgbd corpus dirs")

    out_dir = Path(config.output_dir)
    images_dir = out_dir / "images"
    images_dir.mkdir(parents=True, exist_ok=True)

    robins: dict[TaskKind, _RoundRobin] = {}
    for task in TaskKind:
        entries = index.entries_3d if task in _DEPTH_TASKS else index.entries_2d
        if entries:
            robins[task] = _RoundRobin(entries, config.master_seed,
                                       f"corpus-order/{task.value}")

    cache = ImageCache()
    # deterministic per-image gates worth remembering across retries
    known_too_small: set[str] = set()
    known_degenerate: set[str] = set()
    known_bad_depth: set[str] = set()

    records: list[dict] = []
    rejections: dict[str, Counter] = {t.value: Counter() for t in TaskKind}
    sample_index = 0

    for task, variant in SCHEDULE:
        count = (config.shuffle_mix[variant] if task is TaskKind.SHUFFLE
                 else config.task_counts[task.value])
        for _ in range(count):
            robin = robins[task]
            draft = None
            for _attempt in range(len(robin)):
                entry = robin.take()
                key = str(entry.path)
                if key in known_too_small:
                    rejections[task.value]["ImageTooSmall"] += 1
                    continue
                if task in _DEPTH_TASKS:
                    if key in known_bad_depth:
                        rejections[task.value]["InsufficientValidDepth"] += 1
                        continue
                elif key in known_degenerate:
                    rejections[task.value]["DegenerateImage"] += 1
                    continue
                seed = SeedSpec(master=config.master_seed, index=sample_index)
                try:
                    img = cache.image(entry)
                    depth_pair = cache.depth(entry) if task in _DEPTH_TASKS else None
                    draft = _generate(task, variant, img, depth_pair, seed, entry.rel_path)
                    break
                except SampleRejected as exc:
                    rejections[task.value][type(exc).__name__] += 1
                    if isinstance(exc, ImageTooSmall):
                        known_too_small.add(key)
                    elif isinstance(exc, DegenerateImage):
                        known_degenerate.add(key)
                    elif isinstance(exc, InsufficientValidDepth):
                        known_bad_depth.add(key)
            if draft is None:
                raise CorpusExhausted(
                    f"no eligible image for {task.value}"
                    f"{'/' + variant if variant else ''} at sample {sample_index}")
            sid = draft.sample_id()
            paths = []
            for k, buf in enumerate(draft.images):
                rel = f"images/{sid}_{k}.png"
                imaging.save_png(out_dir / rel, buf)
                paths.append(rel)
            records.append(draft.finalize(paths).to_record())
            sample_index += 1

    header = {
        "schema_version": SCHEMA_VERSION,
        "master_seed": config.master_seed,
        "corpus_fingerprint": index.fingerprint,
        "task_counts": dict(sorted(config.task_counts.items())),
        "variant_counts": dict(sorted(config.shuffle_mix.items())),
        "rgb_corpus_dirs": list(config.rgb_corpus_dirs),
        "rgbd_corpus_dirs": list(config.rgbd_corpus_dirs),
    }
    manifest_path = out_dir / "manifest.jsonl"
    write_manifest(manifest_path, header, records)

    stats = compute_stats(records)
    stats["rejections"] = {t: dict(sorted(c.items())) for t, c in rejections.items() if c}
    with open(out_dir / "stats.json", "w", encoding="utf-8") as f:
        f.write(canonical_json(stats) + "\n")

    return {"manifest": str(manifest_path), "stats": stats}


# ---------------------------------------------------------------------------
# cold-start split


def split_cold_start(manifest_path, fraction: float, seed: int,
                     out_cold=None, out_rl=None) -> dict:
    """Stratified split: each task contributes round(fraction * count) samples."""
    if not 0.0 < fraction < 1.0:
        raise FractionOutOfRange(f"fraction must be in (0, 1), got {fraction}")
    header, records = read_manifest(manifest_path)

    by_task: dict[str, list[int]] = {}
    for i, rec in enumerate(records):
        by_task.setdefault(rec["task"], []).append(i)

    cold_indices: set[int] = set()
    per_task = {}
    for task, positions in sorted(by_task.items()):
        n = len(positions)
        k = round(fraction * n)
        perm = derive_stream(int(seed), f"cold-split/{task}").permutation(n)
        chosen = {positions[int(p)] for p in perm[:k]}
        cold_indices |= chosen
        per_task[task] = k

    cold = [records[i] for i in range(len(records)) if i in cold_indices]
    rl = [records[i] for i in range(len(records)) if i not in cold_indices]

    mp = Path(manifest_path)
    stem = mp.name[:-len(".jsonl")] if mp.name.endswith(".jsonl") else mp.stem
    cold_path = Path(out_cold) if out_cold else mp.parent / f"{stem}.cold.jsonl"
    rl_path = Path(out_rl) if out_rl else mp.parent / f"{stem}.rl.jsonl"

    def _split_header(role: str, rows: list[dict]) -> dict:
        h = dict(header)
        h["task_counts"] = dict(sorted(Counter(r["task"] for r in rows).items()))
        h["split_role"] = role
        h["split_fraction"] = fraction
        h["split_seed"] = int(seed)
        return h

    write_manifest(cold_path, _split_header("cold_start", cold), cold)
    write_manifest(rl_path, _split_header("rl", rl), rl)
    return {
        "cold_manifest": str(cold_path),
        "rl_manifest": str(rl_path),
        "cold_counts": per_task,
        "cold_total": len(cold),
        "rl_total": len(rl),
    }


# ---------------------------------------------------------------------------
# verify


class _SourceResolver:
    """Find corpus files named by manifest records, per the header's dir lists."""

    def __init__(self, header: dict, search_dirs: list[str] | None = None):
        if search_dirs is not None:
            self.dirs = [Path(d) for d in search_dirs]
        else:
            self.dirs = [Path(d) for d in
                         list(header.get("rgb_corpus_dirs", []))
                         + list(header.get("rgbd_corpus_dirs", []))]
        self._cache: dict[str, CorpusEntry] = {}

    def entry(self, rel_path: str, sample: str) -> CorpusEntry:
        if rel_path in self._cache:
            return self._cache[rel_path]
        for d in self.dirs:
            p = d / rel_path
            if p.is_file():
                stem = p.with_suffix("")
                depth = None
                for cand in (Path(str(stem) + "_depth.npy"), Path(str(stem) + "_depth.png")):
                    if cand.is_file():
                        depth = cand
                        break
                mask = Path(str(stem) + "_depth_mask.npy")
                e = CorpusEntry(rel_path=rel_path, path=p, depth_path=depth,
                                depth_mask_path=mask if mask.is_file() else None)
                self._cache[rel_path] = e
                return e
        raise ManifestUnreadable(f"source image {rel_path} not found for sample {sample}")


def _expect(cond: bool, audit: str, detail: str, failures: list, rec_id: str) -> bool:
    if not cond:
        failures.append({"id": rec_id, "audit": audit, "detail": detail})
    return cond


def _audit_shuffle(rec: QASample, artifacts, source_img, failures):
    aux = rec.aux
    rows, cols = aux["rows"], aux["cols"]
    perm = list(aux["perm"])
    trimmed = imaging.center_trim(source_img, rows, cols)
    patches = imaging.partition(trimmed, rows, cols)
    shuffled = [patches[p] for p in perm]
    if aux.get("mask_slot") is not None:
        shuffled = imaging.whiteout(shuffled, aux["mask_slot"])
    rebuilt = imaging.compose(shuffled, rows, cols, list(range(rows * cols)))
    _expect(np.array_equal(rebuilt, artifacts[0]), "shuffle_regen",
            "artifact differs from regenerated composition", failures, rec.id)

    # restoration: displayed patches composed in answer order give the source back
    displayed = imaging.partition(artifacts[0], rows, cols)
    restored = imaging.compose(displayed, rows, cols, list(rec.answer.order))
    if aux.get("mask_slot") is None:
        _expect(np.array_equal(restored, trimmed), "shuffle_restore",
                "answer order does not restore the source", failures, rec.id)
    else:
        white_at = perm[aux["mask_slot"]]
        rp = imaging.partition(restored, rows, cols)
        sp = imaging.partition(trimmed, rows, cols)
        ok = all(np.array_equal(rp[k], sp[k]) for k in range(rows * cols) if k != white_at)
        ok = ok and bool((rp[white_at] == 255).all())
        _expect(ok, "shuffle_restore_masked",
                "unmasked patches do not restore / mask not white", failures, rec.id)
    _expect(list(rec.answer.order) == list(np.argsort(perm)), "shuffle_answer",
            "answer is not the inverse permutation", failures, rec.id)


def _audit_flip(rec: QASample, artifacts, source_img, failures):
    aux = rec.aux
    trimmed = imaging.center_trim(source_img, 2, 2)
    label, direction = rec.answer.label, rec.answer.direction
    patches = imaging.partition(artifacts[0], 2, 2)
    patches[label] = imaging.flip_patch(patches[label], direction)
    restored = imaging.compose(patches, 2, 2, [0, 1, 2, 3])
    _expect(np.array_equal(restored, trimmed), "flip_restore",
            "re-flip does not restore the source", failures, rec.id)
    src_patches = imaging.partition(trimmed, 2, 2)
    art_patches = imaging.partition(artifacts[0], 2, 2)
    diff = [k for k in range(4) if not np.array_equal(src_patches[k], art_patches[k])]
    _expect(diff == [label], "flip_single_patch",
            f"patches differing from source: {diff}", failures, rec.id)
    _expect((aux["label"], aux["direction"]) == (label, direction), "flip_answer",
            "aux and answer disagree", failures, rec.id)


def _audit_inpaint(rec: QASample, artifacts, source_img, failures):
    aux = rec.aux
    side, row0, col0 = aux["side"], aux["row0"], aux["col0"]
    letter_order = list(aux["letter_order"])
    masked, displayed = artifacts[0], artifacts[1:]

    _expect(np.array_equal(masked, imaging.zero_region(source_img, row0, col0, side, side)),
            "inpaint_mask", "masked master differs from zeroed source", failures, rec.id)
    _expect(all(d.shape == (side, side, 3) for d in displayed), "inpaint_dims",
            "option dimensions are not side x side", failures, rec.id)

    gt = imaging.crop(source_img, row0, col0, side, side)
    options = [gt] + [tasks2d.build_distractor(source_img, m, row0, col0, side)
                      for m in aux["methods"]]
    regen = [options[i] for i in letter_order]
    _expect(all(np.array_equal(a, b) for a, b in zip(regen, displayed)), "inpaint_regen",
            "displayed options differ from regenerated ones", failures, rec.id)

    gt_slot = letter_order.index(0)
    _expect(rec.answer.letter == LETTERS[gt_slot], "inpaint_answer",
            "answer letter does not point at the ground-truth crop", failures, rec.id)
    pasted = masked.copy()
    pasted[row0:row0 + side, col0:col0 + side] = displayed[gt_slot]
    _expect(np.array_equal(pasted, source_img), "inpaint_paste",
            "pasting the answered option back does not restore the source",
            failures, rec.id)
    distinct = all(not np.array_equal(displayed[a], displayed[b])
                   for a in range(4) for b in range(a + 1, 4))
    _expect(distinct, "inpaint_distinct", "options are not pairwise distinct",
            failures, rec.id)


def _audit_depth_order(rec: QASample, artifacts, source_img, depth_pair, failures):
    aux = rec.aux
    depth, valid = depth_pair
    side = aux["window"]
    corners = [tuple(c) for c in aux["corners"]]
    stats = [tasks3d.region_stats(depth, valid, r, c, side) for r, c in corners]
    ok = all(s[0] >= tasks3d.REGION_MIN_VALID for s in stats)
    ok = ok and all(s[2] - s[1] < tasks3d.REGION_RANGE_MAX for s in stats)
    ok = ok and all(stats[i + 1][1] - stats[i][2] > tasks3d.REGION_GAP_MIN for i in range(2))
    _expect(ok, "depth_constraints", "region range/gap/validity violated", failures, rec.id)
    means = [s[3] for s in stats]
    _expect(means[0] < means[1] < means[2], "depth_means",
            "region means not increasing in answer order", failures, rec.id)
    _expect(list(rec.answer.labels) == list(aux["labels"]), "depth_answer",
            "aux labels and answer disagree", failures, rec.id)
    centers = [(c + side // 2, r + side // 2) for r, c in corners]
    regen = imaging.annotate_labels(source_img, centers, list(aux["labels"]))
    _expect(np.array_equal(regen, artifacts[0]), "depth_regen",
            "annotated artifact differs from regeneration", failures, rec.id)


def _audit_relpos(rec: QASample, artifacts, source_img, depth_pair, failures):
    aux = rec.aux
    depth, valid = depth_pair
    theta = aux["theta"]
    p1 = tuple(aux["point1"])
    p2 = tuple(aux["point2"])
    _expect(bool(valid[p1] and valid[p2]), "relpos_valid_depth",
            "marked point lacks valid depth", failures, rec.id)
    anchor, query = (p1, p2) if aux["anchor_label"] == 1 else (p2, p1)
    x_t, z_t = tasks3d.relpos_transform(float(anchor[1]), float(depth[anchor]),
                                        float(query[1]), float(depth[query]), theta)
    try:
        px, pz = tasks3d.classify_relpos(x_t, z_t, theta)
    except ForgeError:
        _expect(False, "relpos_ambiguous", "emitted sample re-classifies as ambiguous",
                failures, rec.id)
        return
    _expect(tasks3d.composite_label(px, pz) == aux["gt_label"], "relpos_label",
            "re-derived label differs from stored one", failures, rec.id)
    options = list(aux["options"])
    gt_slot = LETTERS.index(rec.answer.letter)
    _expect(options[gt_slot] == aux["gt_label"], "relpos_answer",
            "answer letter does not select the ground-truth label", failures, rec.id)
    _expect(len(set(options)) == 4, "relpos_options",
            "options are not pairwise distinct", failures, rec.id)
    regen = imaging.annotate_labels(source_img, [(p1[1], p1[0]), (p2[1], p2[0])], [1, 2])
    _expect(np.array_equal(regen, artifacts[0]), "relpos_regen",
            "annotated artifact differs from regeneration", failures, rec.id)


def _expected_question(rec: QASample) -> str:
    aux = rec.aux
    if rec.task is TaskKind.SHUFFLE:
        return tasks2d.question_for_grid(aux["variant"], aux["rows"], aux["cols"])
    if rec.task is TaskKind.FLIP:
        return templates.FLIP_QUESTION
    if rec.task is TaskKind.INPAINT:
        return templates.INPAINT_QUESTION
    if rec.task is TaskKind.DEPTH_ORDER:
        return templates.DEPTH_ORDER_QUESTION
    return templates.relpos_question(aux["anchor_label"],
                                     templates.FACING_PHRASE[aux["theta"]],
                                     tuple(aux["options"]))


def verify_manifest(manifest_path, search_dirs: list[str] | None = None) -> dict:
    """Re-derive every audited property; returns a report with failure entries.

    Raises ManifestUnreadable for structural problems (missing files, bad
    records); semantic violations land in the report instead.
    """
    header, samples = read_samples(manifest_path)
    root = Path(manifest_path).parent
    resolver = _SourceResolver(header, search_dirs)
    cache = ImageCache()

    failures: list[dict] = []

    ids = [s.id for s in samples]
    if len(set(ids)) != len(ids):
        raise ManifestUnreadable("duplicate sample ids in manifest")
    actual_counts = Counter(s.task.value for s in samples)
    for task, want in header.get("task_counts", {}).items():
        if actual_counts.get(task, 0) != want:
            failures.append({"id": "", "audit": "header_counts",
                            "detail": f"{task}: header {want}, manifest {actual_counts.get(task, 0)}"})

    for rec in samples:
        recomputed = sample_id(rec.task, rec.question, rec.answer, rec.seed,
                               rec.source_image)
        _expect(recomputed == rec.id, "id_recompute", "content hash mismatch",
                failures, rec.id)

        artifacts = []
        for rel in rec.images:
            p = root / rel
            if not p.is_file():
                raise ManifestUnreadable(f"missing artifact {rel} for sample {rec.id}")
            artifacts.append(imaging.load_png(p))

        entry = resolver.entry(rec.source_image, rec.id)
        source_img = cache.image(entry)

        _expect(rec.question == _expected_question(rec), "question_template",
                "question text does not match its template", failures, rec.id)

        depth_pair = None
        if rec.task is TaskKind.SHUFFLE:
            _audit_shuffle(rec, artifacts, source_img, failures)
        elif rec.task is TaskKind.FLIP:
            _audit_flip(rec, artifacts, source_img, failures)
        elif rec.task is TaskKind.INPAINT:
            _audit_inpaint(rec, artifacts, source_img, failures)
        else:
            depth_pair = cache.depth(entry)
            if rec.task is TaskKind.DEPTH_ORDER:
                _audit_depth_order(rec, artifacts, source_img, depth_pair, failures)
            else:
                _audit_relpos(rec, artifacts, source_img, depth_pair, failures)

        # round-trip keystone: the stored answer, wrapped in canonical format,
        # must score 1.0 against an independently regenerated ground truth
        try:
            regen = _generate(rec.task, rec.aux.get("variant"), source_img,
                              depth_pair, rec.seed, rec.source_image)
        except ForgeError as exc:
            _expect(False, "round_trip_reward",
                    f"sample does not regenerate: {exc}", failures, rec.id)
            continue
        wrapped = f"<think>.</think> \\boxed{{{rec.answer.canonical()}}}"
        _expect(verifier.score_text(rec.task, regen.answer.canonical(), wrapped).r == 1.0,
                "round_trip_reward", "stored answer does not score 1.0 against "
                "the regenerated ground truth", failures, rec.id)

    return {
        "records": len(samples),
        "failures": failures,
        "ok": not failures,
    }

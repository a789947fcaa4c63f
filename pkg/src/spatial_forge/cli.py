"""Command-line entry points for building, auditing, and scoring datasets.

Exit codes: 0 success, 1 audit/scoring failure, 2 configuration or corpus
error.  All subcommands are deterministic given their arguments.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import build as build_mod
from .config import BuildConfig, DEFAULT_COLD_START_FRACTION
from .errors import ConfigInvalid, CorpusExhausted, ForgeError, ManifestUnreadable
from .verifier import score_text


def _cmd_build(args) -> int:
    try:
        if args.config:
            config = BuildConfig.from_file(args.config)
        else:
            config = BuildConfig(rgb_corpus_dirs=(), rgbd_corpus_dirs=())
        overrides = {"output_dir": args.out}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.rgb_dir:
            overrides["rgb_corpus_dirs"] = tuple(args.rgb_dir)
        if args.rgbd_dir:
            overrides["rgbd_corpus_dirs"] = tuple(args.rgbd_dir)
        config = dataclasses.replace(config, **overrides)
        config.validate()
    except (ConfigInvalid, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        result = build_mod.build_dataset(config)
    except (ConfigInvalid, CorpusExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {result['manifest']}")
    return 0


def _cmd_split(args) -> int:
    try:
        paths = build_mod.split_cold_start(
            args.manifest,
            fraction=args.fraction,
            seed=args.seed,
            out_cold=args.out_cold,
            out_rl=args.out_rl,
        )
    except ManifestUnreadable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {paths['cold_manifest']} and {paths['rl_manifest']}")
    return 0


def _cmd_verify(args) -> int:
    try:
        report = build_mod.verify_manifest(args.manifest)
    except ManifestUnreadable as exc:
        print(f"audit error: {exc}", file=sys.stderr)
        return 1
    except (ConfigInvalid, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for failure in report["failures"]:
        print(f"FAIL {failure['id']}: {failure['audit']}: {failure['detail']}")
    if report["ok"]:
        print(f"ok: {report['records']} records audited")
        return 0
    print(f"{len(report['failures'])} failure(s) across {report['records']} records",
          file=sys.stderr)
    return 1


def _cmd_stats(args) -> int:
    try:
        _header, records = build_mod.read_manifest(args.manifest)
    except ManifestUnreadable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    stats = build_mod.compute_stats(records)
    json.dump(stats, sys.stdout, indent=2, sort_keys=True)
    print()
    return 0


def _cmd_score(args) -> int:
    try:
        index = build_mod.load_reward_index(args.manifest)
    except ManifestUnreadable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        lines = Path(args.responses).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    unknown = 0
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            sid = req["sample_id"]
            text = req["response"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            print(f"error: line {lineno}: {exc}", file=sys.stderr)
            return 2
        entry = index.get(sid)
        out = {"sample_id": sid}
        if "request_id" in req:
            out["request_id"] = req["request_id"]
        if entry is None:
            unknown += 1
            out["error"] = {"kind": "unknown_sample", "sample_id": sid}
        else:
            task, gt = entry
            out.update(score_text(task, gt, text).to_dict())
        sys.stdout.write(json.dumps(out, sort_keys=True) + "\n")
    if unknown:
        print(f"{unknown} unknown sample id(s)", file=sys.stderr)
        return 2
    return 0


def _cmd_serve(args) -> int:
    from . import server as server_mod
    argv = ["--manifest", args.manifest]
    if args.stdio:
        argv.append("--stdio")
    else:
        argv.extend(["--bind", args.bind])
    if args.echo_gt:
        argv.append("--echo-gt")
    return server_mod.main(argv)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forge",
                                     description="spatial pretext-task data forge")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="synthesize a dataset from a corpus")
    p.add_argument("--config", help="JSON build config (documented in README)")
    p.add_argument("--seed", type=int, default=None, help="override master seed")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--rgb-dir", action="append", default=[],
                   help="RGB corpus directory (repeatable; overrides config)")
    p.add_argument("--rgbd-dir", action="append", default=[],
                   help="RGB-D corpus directory (repeatable; overrides config)")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("split", help="carve a cold-start SFT slice from a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--fraction", type=float, default=DEFAULT_COLD_START_FRACTION)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-cold", default=None)
    p.add_argument("--out-rl", default=None)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("verify", help="re-derive and audit every record in a manifest")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("stats", help="recompute distribution tables from a manifest")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("score", help="batch-score a response file against a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--responses", required=True,
                   help="JSONL of {sample_id, response[, request_id]}")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("serve", help="run the reward service")
    p.add_argument("--manifest", required=True)
    p.add_argument("--bind", default="127.0.0.1:0")
    p.add_argument("--stdio", action="store_true")
    p.add_argument("--echo-gt", action="store_true")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

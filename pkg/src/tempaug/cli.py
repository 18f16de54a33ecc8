"""Command-line interface.

Exit codes: 0 success, 1 usage or validation error, 2 some clips failed,
3 a required external tool is missing.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import shutil
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from . import io as clipio
from .clip import Clip
from .metrics import format_affinity_table, load_affinity_rows, regime_stats, stats_csv
from .pipeline import RunConfig, augment_batch
from .policy import RA, TA, UA, Policy, SearchSpace
from .signal import (
    ConfigError,
    FourierBasis,
    FourierConfig,
    Static,
    fourier_schedule,
    sample_schedule,
    schedule_kind_from_name,
)

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL, EXIT_NO_TOOL = 0, 1, 2, 3
KIND_CHOICES = ["static", "fourier", "linear", "sine", "random", "random-gauss"]
RAW_SUFFIXES = {".raw", ".dvclip"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _interval(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def _synthetic(text: str) -> tuple[int, int, int, int]:
    try:
        dims, count = text.split(",")
        t, h, w = (int(x) for x in dims.lower().split("x"))
        return t, h, w, int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected TxHxW,COUNT, got {text!r}") from None


def _add_policy_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("policy")
    g.add_argument("--policy", choices=["ra", "ta", "ua"], default="ra", help="policy family (default: %(default)s)")
    g.add_argument("--mode", choices=["static", "dynamic"], default="dynamic", help="default: %(default)s")
    g.add_argument("--space", choices=[s.value for s in SearchSpace], default="org", help="default: %(default)s")
    g.add_argument("--n", type=int, default=2, help="ops per clip for ra/ua (default: %(default)s)")
    g.add_argument("--m", type=float, default=9.0, help="ra magnitude in [0, 30] (default: %(default)s)")
    g.add_argument("--p", type=float, default=1.0, help="ra apply probability (default: %(default)s)")
    _add_schedule_flags(g, kind_default="fourier")
    g.add_argument("--seed", type=int, default=0, help="master seed (default: %(default)s)")
    g.add_argument("--workers", type=int, default=1, help="worker threads (default: %(default)s)")


def _add_schedule_flags(g, kind_default: str) -> None:
    g.add_argument("--bases", type=int, default=3, help="Fourier bases C (default: %(default)s)")
    g.add_argument("--freq", type=_interval, default=(0.2, 1.5), metavar="LO:HI", help="frequency range (default: 0.2:1.5)")
    g.add_argument("--amp", type=_interval, default=(0.0, 1.0), metavar="LO:HI", help="amplitude range (default: 0:1)")
    g.add_argument("--no-offset", action="store_true", help="disable random offsets")
    g.add_argument("--shared-amp", action="store_true", help="one amplitude for all Fourier bases")
    g.add_argument("--schedule-kind", "--kind", dest="kind", choices=KIND_CHOICES, default=kind_default,
                   help="schedule family (default: %(default)s)")


def _schedule_kind(args):
    cfg = FourierConfig(args.bases, tuple(args.freq), tuple(args.amp), not args.no_offset, args.shared_amp)
    cfg.validate()
    return schedule_kind_from_name(args.kind, tuple(args.amp), cfg, with_offset=not args.no_offset)


def _policy(args) -> Policy:
    family = {"ra": lambda: RA(args.n, args.m, args.p), "ta": TA, "ua": lambda: UA(args.n)}[args.policy]()
    kind = Static() if args.mode == "static" else _schedule_kind(args)
    policy = Policy(family, kind, SearchSpace(args.space))
    policy.validate()
    if args.workers < 1:
        raise ConfigError("--workers must be >= 1")
    return policy


def _announce(args, **extra) -> None:
    resolved = {k: v for k, v in vars(args).items() if k != "func"}
    resolved.update(extra)
    print("# config: " + json.dumps(resolved, default=str, sort_keys=True), file=sys.stderr)


# augment ----------------------------------------------------------------------


def _clip_sources(root: Path) -> list[Path]:
    if not root.is_dir():
        raise UsageError(f"--input {root} is not a directory")
    return sorted(p for p in root.iterdir() if p.is_dir() or p.suffix.lower() in RAW_SUFFIXES)


class _Loader:
    def __init__(self, path: Path):
        self.path = path
        self.source_id = path.name

    def __call__(self) -> Clip:
        clip = clipio.read_clip(self.path)
        clip.source_id = self.path.name
        return clip


def cmd_augment(args) -> int:
    policy = _policy(args)
    src, dst = Path(args.input), Path(args.output)
    sources = _clip_sources(src)
    if not sources:
        raise UsageError(f"--input {src} contains no clips")
    _announce(args, master_seed=args.seed)
    config = RunConfig(policy, args.seed, args.workers)
    log = open(args.log_policies, "w") if args.log_policies else None
    failures = []
    try:
        for res in augment_batch([_Loader(p) for p in sources], config):
            if res.ok:
                try:
                    clipio.write_clip(res.clip, dst / sources[res.index].name,
                                      clipio.detect_format(sources[res.index]))
                except OSError as exc:
                    res.error = exc
            if not res.ok:
                failures.append((res.source_id, res.error))
                continue
            if log:
                log.write(res.policy.to_json() + "\n")
    finally:
        if log:
            log.close()
    for sid, err in failures:
        print(f"error: {sid}: {err}", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


# schedule -----------------------------------------------------------------------


def cmd_schedule(args) -> int:
    if args.frames < 1:
        raise UsageError("--frames must be >= 1")
    if args.m < 0:
        raise UsageError("--m must be >= 0")
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    _announce(args, master_seed=args.seed)
    if args.config:
        spec = json.loads(Path(args.config).read_text())
        bases = [FourierBasis(float(w), float(f), float(a), int(o)) for w, f, a, o in spec["bases"]]
        schedules = [fourier_schedule(args.frames, args.m, bases)] * args.count
    else:
        kind = _schedule_kind(args)
        rng = np.random.default_rng(args.seed)
        schedules = [sample_schedule(kind, args.frames, args.m, rng) for _ in range(args.count)]

    out = sys.stdout
    if args.format == "csv":
        out.write("sample_id,frame,magnitude\n")
        for i, s in enumerate(schedules):
            out.write(s.to_csv(sample_id=i))
    else:
        for i, s in enumerate(schedules):
            out.write(json.dumps({"sample_id": i, "frames": args.frames, **s.to_dict()}) + "\n")
    return EXIT_OK


# report ---------------------------------------------------------------------------


def cmd_report(args) -> int:
    if args.reference:
        _announce(args)
        sys.stdout.write(format_affinity_table(load_affinity_rows(args.reference)))
        return EXIT_OK
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    if args.frames < 1:
        raise UsageError("--frames must be >= 1")
    _announce(args, master_seed=args.seed)
    rows = []
    for name in args.kinds.split(","):
        name = name.strip()
        if name not in KIND_CHOICES:
            raise UsageError(f"unknown kind {name!r}; choose from {','.join(KIND_CHOICES)}")
        kind = schedule_kind_from_name(name)
        st = regime_stats(kind, args.frames, args.m, args.samples, np.random.default_rng(args.seed))
        rows.append((name, args.frames, args.m, st))
    sys.stdout.write(stats_csv(rows))
    return EXIT_OK


# corrupt --------------------------------------------------------------------------


def corrupt_command(input_path: str, qp: int, output_path: str) -> list[str]:
    return ["ffmpeg", "-i", str(input_path), "-c:v", "libx264", "-preset", "slow", "-crf", str(qp), str(output_path)]


def cmd_corrupt(args) -> int:
    if not 0 <= args.qp <= 51:
        raise UsageError(f"--qp must be in [0, 51], got {args.qp}")
    exe = shutil.which("ffmpeg")
    if exe is None:
        print("error: ffmpeg not found on PATH; install it (e.g. your package manager's 'ffmpeg' package)",
              file=sys.stderr)
        return EXIT_NO_TOOL
    _announce(args)
    cmd = corrupt_command(args.input, args.qp, args.output)
    cmd[0] = exe
    return subprocess.run(cmd).returncode


# bench ------------------------------------------------------------------------------


def clips_digest(clips) -> str:
    h = hashlib.sha256()
    for c in clips:
        h.update(c.source_id.encode())
        h.update(np.asarray(c.frames.shape, dtype=np.int64).tobytes())
        h.update(c.frames.tobytes())
    return h.hexdigest()


def cmd_bench(args) -> int:
    policy = _policy(args)
    if args.synthetic:
        t, h, w, count = args.synthetic
        if min(t, h, w, count) < 1:
            raise UsageError("--synthetic dimensions and count must be >= 1")
        rng = np.random.default_rng(args.seed)
        items = [Clip(rng.integers(0, 256, (t, h, w, 3), dtype=np.uint8), f"synthetic_{i:05d}") for i in range(count)]
    else:
        items = [_Loader(p) for p in _clip_sources(Path(args.input))]
        if not items:
            raise UsageError(f"--input {args.input} contains no clips")
    _announce(args, master_seed=args.seed)

    start = time.perf_counter()
    results = list(augment_batch(items, RunConfig(policy, args.seed, args.workers)))
    elapsed = time.perf_counter() - start

    ok = [r for r in results if r.ok]
    frames = sum(r.clip.num_frames for r in ok)
    op_time: dict[str, float] = {}
    for r in ok:
        for k, v in r.timings.items():
            op_time[k] = op_time.get(k, 0.0) + v
    total_op = sum(op_time.values()) or 1.0
    report = {
        "clips": len(ok),
        "failed": len(results) - len(ok),
        "workers": args.workers,
        "seconds": elapsed,
        "clips_per_sec": len(ok) / elapsed if elapsed > 0 else float("inf"),
        "frames_per_sec": frames / elapsed if elapsed > 0 else float("inf"),
        "op_time_share": {k: v / total_op for k, v in sorted(op_time.items())},
        "digest": clips_digest(r.clip for r in ok),
    }
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        print(f"clips/sec   {report['clips_per_sec']:.2f}")
        print(f"frames/sec  {report['frames_per_sec']:.1f}")
        print(f"digest      {report['digest']}")
        for k, v in report["op_time_share"].items():
            print(f"  {k:<20s} {100 * v:5.1f}%")
    for r in results:
        if not r.ok:
            print(f"error: {r.source_id}: {r.error}", file=sys.stderr)
    return EXIT_PARTIAL if len(ok) < len(results) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tempaug", description=__doc__.splitlines()[0],
                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("augment", help="augment a directory of clips")
    p.add_argument("--input", required=True, help="directory of clip subdirectories or raw clip files")
    p.add_argument("--output", required=True, help="output directory (mirrors the input tree)")
    p.add_argument("--log-policies", metavar="FILE", help="write one applied policy per clip as JSON lines")
    _add_policy_flags(p)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("schedule", help="emit sampled magnitude schedules")
    p.add_argument("--frames", type=int, default=32, help="default: %(default)s")
    p.add_argument("--m", type=float, default=9.0, help="base magnitude (default: %(default)s)")
    _add_schedule_flags(p, kind_default="fourier")
    p.add_argument("--seed", type=int, default=0, help="default: %(default)s")
    p.add_argument("--count", type=int, default=1, help="default: %(default)s")
    p.add_argument("--format", choices=["csv", "json"], default="csv", help="default: %(default)s")
    p.add_argument("--config", metavar="FILE", help='JSON with fixed bases {"bases": [[w, f, A, o], ...]}')
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("report", help="schedule statistics per regime, or an affinity/diversity table")
    p.add_argument("--kinds", default="static,linear,sine,random,random-gauss,fourier", help="default: %(default)s")
    p.add_argument("--frames", type=int, default=32, help="default: %(default)s")
    p.add_argument("--m", type=float, default=9.0, help="default: %(default)s")
    p.add_argument("--samples", type=int, default=1000, help="default: %(default)s")
    p.add_argument("--seed", type=int, default=0, help="default: %(default)s")
    p.add_argument("--reference", metavar="FILE", help="CSV of affinity/diversity rows to render as a table")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("corrupt", help="re-encode a video with H.264 at a given CRF via ffmpeg")
    p.add_argument("--input", required=True)
    p.add_argument("--qp", type=int, required=True, help="CRF in [0, 51]")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("bench", help="measure augmentation throughput")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="directory of clips")
    src.add_argument("--synthetic", type=_synthetic, metavar="TxHxW,COUNT", help="random clips, e.g. 8x64x64,16")
    p.add_argument("--json", action="store_true", help="print a JSON report")
    _add_policy_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""RandAugment / TrivialAugment / UniformAugment style policies for clips.

A policy draws its ops, gates, magnitudes and directions once per clip. In
dynamic mode each step's magnitude becomes the base of a per-frame schedule;
in static mode the schedule is constant. Schedules come from their own random
stream, so a dynamic policy with zero amplitude reproduces the static draw.
"""

from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .clip import Clip
from .ops import OP_TABLE, ORG_OPS, VIDEO_OPS, EraseRegion, OpKind, apply_scheduled, sample_erase_region
from .signal import (
    ConfigError,
    Schedule,
    ScheduleKind,
    Static,
    kind_from_dict,
    kind_to_dict,
    sample_schedule,
)


class SearchSpace(str, enum.Enum):
    Org = "org"
    Mod = "mod"
    Wide = "wide"
    WideMod = "wide-mod"

    @property
    def ops(self) -> tuple[OpKind, ...]:
        if self in (SearchSpace.Mod, SearchSpace.WideMod):
            return ORG_OPS + VIDEO_OPS
        return ORG_OPS

    @property
    def wide(self) -> bool:
        return self in (SearchSpace.Wide, SearchSpace.WideMod)


@dataclass(frozen=True)
class RA:
    n: int = 2
    m: float = 9.0
    p: float = 1.0
    name = "ra"


@dataclass(frozen=True)
class TA:
    name = "ta"


@dataclass(frozen=True)
class UA:
    n: int = 2
    name = "ua"


Family = Union[RA, TA, UA]


@dataclass(frozen=True)
class Policy:
    family: Family = field(default_factory=RA)
    schedule: ScheduleKind = field(default_factory=Static)
    space: SearchSpace = SearchSpace.Org

    @property
    def dynamic(self) -> bool:
        return not isinstance(self.schedule, Static)

    def validate(self) -> None:
        fam = self.family
        if isinstance(fam, RA):
            if fam.n < 1 or not 0 <= fam.m <= 30 or not 0 <= fam.p <= 1:
                raise ConfigError(f"RA needs n >= 1, m in [0, 30], p in [0, 1]; got {fam}")
        elif isinstance(fam, UA):
            if fam.n < 1:
                raise ConfigError(f"UA needs n >= 1; got {fam}")
        elif not isinstance(fam, TA):
            raise ConfigError(f"unknown policy family {fam!r}")
        if not self.space.ops:
            raise ConfigError(f"search space {self.space.value} has no ops")


@dataclass
class Step:
    op: OpKind
    applied: bool
    direction: int
    magnitude: float
    schedule: Schedule
    region: EraseRegion | None = None

    def to_dict(self) -> dict:
        return {
            "op": self.op.value,
            "applied": self.applied,
            "direction": self.direction,
            "magnitude": self.magnitude,
            "schedule": self.schedule.to_dict(),
            "region": self.region.to_dict() if self.region else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Step":
        region = EraseRegion.from_dict(d["region"]) if d.get("region") else None
        return cls(OpKind(d["op"]), bool(d["applied"]), int(d["direction"]), float(d["magnitude"]),
                   Schedule.from_dict(d["schedule"]), region)


@dataclass
class AppliedPolicy:
    """One concrete draw of a policy: everything needed to redo it."""

    family: str
    space: SearchSpace
    seed: int
    steps: list[Step]
    schedule_kind: dict = field(default_factory=lambda: {"kind": "static"})
    source_id: str = ""

    def to_dict(self) -> dict:
        return {
            "source_id": self.source_id,
            "family": self.family,
            "space": self.space.value,
            "seed": self.seed,
            "schedule_kind": self.schedule_kind,
            "steps": [s.to_dict() for s in self.steps],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AppliedPolicy":
        return cls(d["family"], SearchSpace(d["space"]), int(d["seed"]),
                   [Step.from_dict(s) for s in d["steps"]], d.get("schedule_kind", {"kind": "static"}),
                   d.get("source_id", ""))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AppliedPolicy":
        return cls.from_dict(json.loads(text))


def _streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    decisions, schedules = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(decisions), np.random.default_rng(schedules)


def sample_policy(policy: Policy, T: int, seed: int, frame_size: tuple[int, int] | None = None) -> AppliedPolicy:
    """Draw a concrete policy for a clip of ``T`` frames.

    ``frame_size`` is ``(height, width)``; it is needed only to place an
    erase box when the dynamic random erase op is drawn.
    """
    policy.validate()
    if int(T) != T or T < 1:
        raise ValueError(f"frame count must be a positive integer, got {T}")
    rng, sched_rng = _streams(seed)
    ops = policy.space.ops
    fam = policy.family
    n = 1 if isinstance(fam, TA) else fam.n

    steps = []
    for _ in range(n):
        op = ops[int(rng.integers(0, len(ops)))]
        if isinstance(fam, RA):
            applied = bool(rng.random() < fam.p)
            magnitude = float(fam.m)
        elif isinstance(fam, TA):
            applied = True
            magnitude = float(rng.integers(0, 31))
        else:
            prob = rng.random()
            applied = bool(rng.random() < prob)
            magnitude = float(rng.uniform(0.0, 30.0))
        direction = 1 if rng.random() < 0.5 else -1

        region = None
        if op is OpKind.DynamicRandomErase:
            if frame_size is None:
                raise ValueError("frame_size is required when the search space contains DynamicRandomErase")
            region = sample_erase_region(frame_size[0], frame_size[1], rng)

        if policy.dynamic and not OP_TABLE[op].parameterless:
            schedule = sample_schedule(policy.schedule, T, magnitude, sched_rng)
        else:
            schedule = Schedule.constant(T, magnitude)
        steps.append(Step(op, applied, direction, magnitude, schedule, region))

    return AppliedPolicy(fam.name, policy.space, int(seed), steps, kind_to_dict(policy.schedule))


def apply_policy(ap: AppliedPolicy, clip: Clip, timings: dict[str, float] | None = None) -> Clip:
    """Run the applied steps over the clip in order.

    Steps with ``applied=False`` are skipped for the whole clip. When
    ``timings`` is given, seconds spent per op name are accumulated into it.
    """
    for step in ap.steps:
        if step.schedule.length != clip.num_frames:
            raise ValueError(f"step {step.op.value} schedule has {step.schedule.length} values, clip has {clip.num_frames} frames")
    out = clip
    for step in ap.steps:
        if not step.applied:
            continue
        start = time.perf_counter()
        out = apply_scheduled(OP_TABLE[step.op], out, step.schedule, step.direction, step.region, ap.space.wide)
        if timings is not None:
            timings[step.op.value] = timings.get(step.op.value, 0.0) + time.perf_counter() - start
    return Clip(out.frames, clip.source_id)


def policy_schedule_kind(ap: AppliedPolicy) -> ScheduleKind:
    return kind_from_dict(ap.schedule_kind)

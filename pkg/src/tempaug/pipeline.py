"""Clip-level orchestration with scheduling-independent seeding."""

from __future__ import annotations

import hashlib
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .clip import Clip
from .policy import AppliedPolicy, Policy, apply_policy, sample_policy

__all__ = ["Clip", "RunConfig", "BatchResult", "derive_seed", "augment_clip", "augment_batch"]


def derive_seed(master_seed: int, source_id: str) -> int:
    """Stable 64-bit per-clip seed from the master seed and the clip id."""
    h = hashlib.blake2b(digest_size=8)
    h.update(struct.pack("<Q", master_seed & 0xFFFFFFFFFFFFFFFF))
    h.update(source_id.encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class RunConfig:
    policy: Policy = field(default_factory=Policy)
    master_seed: int = 0
    workers: int = 1

    def clip_seed(self, source_id: str) -> int:
        return derive_seed(self.master_seed, source_id)


@dataclass
class BatchResult:
    index: int
    source_id: str
    clip: Clip | None = None
    policy: AppliedPolicy | None = None
    error: Exception | None = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.error is None


def augment_clip(clip: Clip, policy: Policy, seed: int, timings: dict | None = None) -> tuple[Clip, AppliedPolicy]:
    ap = sample_policy(policy, clip.num_frames, seed, (clip.height, clip.width))
    ap.source_id = clip.source_id
    return apply_policy(ap, clip, timings), ap


def _run_one(index: int, item, config: RunConfig) -> BatchResult:
    source_id = getattr(item, "source_id", str(index))
    result = BatchResult(index, source_id)
    try:
        clip = item() if callable(item) else item
        result.source_id = clip.source_id
        result.clip, result.policy = augment_clip(clip, config.policy, config.clip_seed(clip.source_id), result.timings)
    except Exception as exc:  # reported per item; the batch keeps going
        result.error = exc
    return result


def augment_batch(clips: Iterable, config: RunConfig) -> Iterator[BatchResult]:
    """Augment clips, yielding results in input order.

    Items are ``Clip`` objects or zero-argument callables returning one (so
    loading can fail per item). Each clip's seed depends only on the master
    seed and its ``source_id``, never on the worker count.
    """
    items = list(clips)
    if not items:
        raise ValueError("augment_batch needs at least one clip")
    if config.workers < 1:
        raise ValueError(f"workers must be >= 1, got {config.workers}")
    if config.workers == 1:
        for i, item in enumerate(items):
            yield _run_one(i, item, config)
        return
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = [pool.submit(_run_one, i, item, config) for i, item in enumerate(items)]
        for fut in futures:
            yield fut.result()

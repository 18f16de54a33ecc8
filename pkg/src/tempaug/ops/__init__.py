"""Augmentation operations: descriptors, kernels and scheduled application."""

from __future__ import annotations

import numpy as np

from ..clip import Clip
from ..signal import Schedule
from .kernels import EraseRegion, apply_kind, erase_box, sample_erase_region
from .table import (
    MAX_MAGNITUDE,
    OP_TABLE,
    ORG_OPS,
    VIDEO_OPS,
    OpDescriptor,
    OpKind,
    descriptor,
    export_table_json,
    magnitude_to_param,
    table_as_records,
)

__all__ = [
    "EraseRegion",
    "MAX_MAGNITUDE",
    "OP_TABLE",
    "ORG_OPS",
    "VIDEO_OPS",
    "OpDescriptor",
    "OpKind",
    "apply",
    "apply_scheduled",
    "descriptor",
    "erase_box",
    "export_table_json",
    "magnitude_to_param",
    "sample_erase_region",
    "table_as_records",
]


def apply(desc: OpDescriptor, frame: np.ndarray, param: float | None, region: EraseRegion | None = None) -> np.ndarray:
    return apply_kind(desc.kind, frame, param, region)


def apply_scheduled(
    desc: OpDescriptor,
    clip: Clip,
    schedule: Schedule,
    direction: int = 1,
    region: EraseRegion | None = None,
    wide: bool = False,
) -> Clip:
    """Apply ``desc`` frame by frame with magnitudes taken from ``schedule``.

    Magnitudes are clamped to [0, 30] before mapping. Parameterless ops
    ignore the schedule.
    """
    if schedule.length != clip.num_frames:
        raise ValueError(f"schedule has {schedule.length} values but the clip has {clip.num_frames} frames")
    if desc.parameterless:
        out = np.stack([apply_kind(desc.kind, f) for f in clip.frames])
        return Clip(out, clip.source_id)
    mags = np.clip(schedule.values, 0.0, MAX_MAGNITUDE)
    out = np.empty_like(clip.frames)
    for t, frame in enumerate(clip.frames):
        param = magnitude_to_param(desc, float(mags[t]), direction, wide)
        out[t] = apply_kind(desc.kind, frame, param, region)
    return Clip(out, clip.source_id)

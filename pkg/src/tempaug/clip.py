"""The clip container shared by every module."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Clip:
    """T same-sized RGB frames stored as one ``(T, H, W, 3)`` uint8 array."""

    frames: np.ndarray
    source_id: str = ""

    def __post_init__(self) -> None:
        frames = np.asarray(self.frames)
        if frames.dtype != np.uint8 or frames.ndim != 4 or frames.shape[3] != 3:
            raise ValueError(f"clip frames must be a (T, H, W, 3) uint8 array, got {frames.dtype} {frames.shape}")
        if min(frames.shape[:3]) < 1:
            raise ValueError(f"clip needs T, H, W >= 1, got {frames.shape[:3]}")
        self.frames = frames

    @classmethod
    def from_frames(cls, frames, source_id: str = "") -> "Clip":
        frames = list(frames)
        if not frames:
            raise ValueError("clip needs at least one frame")
        shapes = {f.shape for f in frames}
        if len(shapes) != 1:
            raise ValueError(f"frames differ in size: {sorted(shapes)}")
        return cls(np.stack(frames), source_id)

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Clip):
            return NotImplemented
        return self.frames.shape == other.frames.shape and bool(np.array_equal(self.frames, other.frames))

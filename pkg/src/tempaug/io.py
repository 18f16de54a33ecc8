"""Clip storage: PNG image-sequence directories and the raw clip file.

Raw clip layout (little-endian)::

    16 bytes  magic b"DVCLIP01" padded with NUL bytes
    u32 T, u32 H, u32 W
    T*H*W*3 bytes of row-major RGB
"""

from __future__ import annotations

import enum
import re
import struct
from pathlib import Path

import numpy as np
from PIL import Image

from .clip import Clip

MAGIC = b"DVCLIP01".ljust(16, b"\0")
_HEADER = struct.Struct("<16sIII")
_FRAME_RE = re.compile(r"^frame_(\d{5,})\.(png|jpe?g)$", re.IGNORECASE)


class FormatError(ValueError):
    """A clip on disk does not match its declared format."""


class ClipFormat(str, enum.Enum):
    ImageSequence = "image-sequence"
    RawClip = "raw"


def detect_format(path: Path) -> ClipFormat:
    return ClipFormat.ImageSequence if Path(path).is_dir() else ClipFormat.RawClip


def frame_name(index: int) -> str:
    return f"frame_{index:05d}.png"


def _read_sequence(path: Path) -> Clip:
    found: dict[int, Path] = {}
    for p in path.iterdir():
        m = _FRAME_RE.match(p.name)
        if m:
            idx = int(m.group(1))
            if idx in found:
                raise FormatError(f"{path}: frame index {idx} appears twice ({found[idx].name}, {p.name})")
            found[idx] = p
    if not found:
        raise FormatError(f"{path}: no frame_NNNNN.png files")
    for i in range(max(found) + 1):
        if i not in found:
            raise FormatError(f"{path}: missing frame index {i} ({frame_name(i)})")

    frames = []
    for i in range(len(found)):
        try:
            with Image.open(found[i]) as im:
                frames.append(np.asarray(im.convert("RGB"), dtype=np.uint8))
        except OSError as exc:
            raise OSError(f"{found[i]}: cannot read frame: {exc}") from exc
        if frames[-1].shape != frames[0].shape:
            raise FormatError(
                f"{found[i]}: frame is {frames[-1].shape[1]}x{frames[-1].shape[0]}, "
                f"expected {frames[0].shape[1]}x{frames[0].shape[0]}"
            )
    return Clip(np.stack(frames), path.name)


def _read_raw(path: Path) -> Clip:
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: file too short for a raw clip header")
    magic, t, h, w = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic[:8]!r}")
    expected = _HEADER.size + t * h * w * 3
    if len(data) != expected:
        raise FormatError(f"{path}: expected {expected} bytes for {t}x{h}x{w}, found {len(data)}")
    frames = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size).reshape(t, h, w, 3).copy()
    return Clip(frames, path.stem)


def read_clip(path, fmt: ClipFormat | None = None) -> Clip:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"{path}: no such file or directory")
    fmt = ClipFormat(fmt) if fmt else detect_format(path)
    return _read_sequence(path) if fmt is ClipFormat.ImageSequence else _read_raw(path)


def write_clip(clip: Clip, path, fmt: ClipFormat | None = None) -> None:
    path = Path(path)
    fmt = ClipFormat(fmt) if fmt else (ClipFormat.RawClip if path.suffix else ClipFormat.ImageSequence)
    try:
        if fmt is ClipFormat.ImageSequence:
            path.mkdir(parents=True, exist_ok=True)
            for i, frame in enumerate(clip.frames):
                Image.fromarray(frame, "RGB").save(path / frame_name(i), format="PNG")
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            t, h, w = clip.frames.shape[:3]
            with open(path, "wb") as fh:
                fh.write(_HEADER.pack(MAGIC, t, h, w))
                fh.write(np.ascontiguousarray(clip.frames).tobytes())
    except OSError as exc:
        raise OSError(f"{path}: cannot write clip: {exc}") from exc

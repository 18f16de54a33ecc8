"""Vectorized per-frame augmentation kernels.

Frames are ``(H, W, 3)`` uint8 RGB arrays. Arithmetic runs in float32 and is
quantized back to uint8 (clamp, then round half away from zero) only once,
at the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .table import OpKind

F32 = np.float32
FILL = (128, 128, 128)


@dataclass(frozen=True)
class EraseRegion:
    """Per-clip erase box placement. Only the area changes from frame to frame."""

    center_x: int
    center_y: int
    aspect: float
    fill: tuple[int, int, int] = FILL

    def to_dict(self) -> dict:
        return {"center_x": self.center_x, "center_y": self.center_y, "aspect": self.aspect, "fill": list(self.fill)}

    @classmethod
    def from_dict(cls, d: dict) -> "EraseRegion":
        return cls(int(d["center_x"]), int(d["center_y"]), float(d["aspect"]), tuple(int(v) for v in d["fill"]))


def sample_erase_region(height: int, width: int, rng: np.random.Generator) -> EraseRegion:
    cx = int(rng.integers(0, width))
    cy = int(rng.integers(0, height))
    aspect = math.exp(rng.uniform(math.log(1 / 3), math.log(3)))
    return EraseRegion(cx, cy, float(aspect))


def quantize(x: np.ndarray) -> np.ndarray:
    return np.floor(np.clip(x, F32(0), F32(255)) + F32(0.5)).astype(np.uint8)


def _check_frame(frame: np.ndarray) -> None:
    if frame.dtype != np.uint8 or frame.ndim != 3 or frame.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) uint8 frame, got {frame.dtype} {frame.shape}")
    if frame.shape[0] < 1 or frame.shape[1] < 1:
        raise ValueError("frame dimensions must be positive")


# geometry ------------------------------------------------------------------


def _grid(h: int, w: int):
    ys, xs = np.meshgrid(np.arange(h, dtype=F32), np.arange(w, dtype=F32), indexing="ij")
    return xs, ys, F32((w - 1) / 2), F32((h - 1) / 2)


def _bilinear(frame: np.ndarray, xs: np.ndarray, ys: np.ndarray, fill=FILL) -> np.ndarray:
    h, w = frame.shape[:2]
    x0 = np.floor(xs)
    y0 = np.floor(ys)
    fx = (xs - x0)[..., None]
    fy = (ys - y0)[..., None]
    # two-pixel fill border: out-of-bounds taps clip onto it, and so do their +1 neighbours
    padded = np.empty((h + 4, w + 4, 3), dtype=F32)
    padded[...] = np.asarray(fill, dtype=F32)
    padded[2:-2, 2:-2] = frame
    ix = np.clip(x0, -2, w).astype(np.intp) + 2
    iy = np.clip(y0, -2, h).astype(np.intp) + 2
    ix1 = ix + 1
    iy1 = iy + 1

    one = F32(1)
    top = padded[iy, ix] * (one - fx) + padded[iy, ix1] * fx
    bottom = padded[iy1, ix] * (one - fx) + padded[iy1, ix1] * fx
    return quantize(top * (one - fy) + bottom * fy)


def shear_x(frame, s):
    xs, ys, cx, cy = _grid(*frame.shape[:2])
    return _bilinear(frame, xs + F32(s) * (ys - cy), ys)


def shear_y(frame, s):
    xs, ys, cx, cy = _grid(*frame.shape[:2])
    return _bilinear(frame, xs, ys + F32(s) * (xs - cx))


def translate_x(frame, t):
    xs, ys, _, _ = _grid(*frame.shape[:2])
    return _bilinear(frame, xs - F32(t * frame.shape[1]), ys)


def translate_y(frame, t):
    xs, ys, _, _ = _grid(*frame.shape[:2])
    return _bilinear(frame, xs, ys - F32(t * frame.shape[0]))


def rotate(frame, degrees):
    xs, ys, cx, cy = _grid(*frame.shape[:2])
    theta = math.radians(degrees)
    c, s = F32(math.cos(theta)), F32(math.sin(theta))
    dx, dy = xs - cx, ys - cy
    return _bilinear(frame, c * dx - s * dy + cx, s * dx + c * dy + cy)


def scale(frame, factor):
    """Zoom about the centre: crops on factor > 1, pads with fill on factor < 1."""
    xs, ys, cx, cy = _grid(*frame.shape[:2])
    f = F32(factor)
    return _bilinear(frame, (xs - cx) / f + cx, (ys - cy) / f + cy)


# photometric -----------------------------------------------------------------


def _luma(src: np.ndarray) -> np.ndarray:
    return src[..., 0] * F32(0.299) + src[..., 1] * F32(0.587) + src[..., 2] * F32(0.114)


def _blend(src: np.ndarray, degenerate: np.ndarray, factor: float) -> np.ndarray:
    return quantize(degenerate + F32(factor) * (src - degenerate))


def brightness(frame, factor):
    src = frame.astype(F32)
    return _blend(src, np.zeros_like(src), factor)


def color(frame, factor):
    src = frame.astype(F32)
    return _blend(src, np.repeat(_luma(src)[..., None], 3, axis=2), factor)


def contrast(frame, factor):
    src = frame.astype(F32)
    gray = quantize(_luma(src)).astype(np.int64)
    mean = F32(gray.sum() / gray.size)
    return _blend(src, np.full_like(src, mean), factor)


def sharpness(frame, factor):
    src = frame.astype(F32)
    h, w = frame.shape[:2]
    smooth = src.copy()
    if h > 2 and w > 2:
        acc = np.zeros((h - 2, w - 2, 3), dtype=F32)
        for dy in range(3):
            for dx in range(3):
                acc = acc + src[dy : dy + h - 2, dx : dx + w - 2]
        smooth[1:-1, 1:-1] = acc / F32(9)
    return _blend(src, smooth, factor)


def solarize(frame, threshold):
    t = int(threshold)
    return np.where(frame >= t, 255 - frame, frame).astype(np.uint8)


def posterize(frame, bits):
    b = int(bits)
    mask = (0xFF << (8 - b)) & 0xFF
    return frame & np.uint8(mask)


def invert(frame):
    return 255 - frame


def autocontrast(frame):
    out = np.empty_like(frame)
    for c in range(3):
        ch = frame[..., c]
        lo, hi = int(ch.min()), int(ch.max())
        if hi <= lo:
            out[..., c] = ch
            continue
        scale_ = F32(255) / F32(hi - lo)
        out[..., c] = quantize((ch.astype(F32) - F32(lo)) * scale_)
    return out


def equalize(frame):
    out = np.empty_like(frame)
    for c in range(3):
        ch = frame[..., c]
        hist = np.bincount(ch.ravel(), minlength=256)
        nonzero = hist[hist > 0]
        step = (int(nonzero.sum()) - int(nonzero[-1])) // 255
        if step == 0:
            out[..., c] = ch
            continue
        cum = np.concatenate(([0], np.cumsum(hist)[:-1]))
        lut = np.minimum((cum + step // 2) // step, 255).astype(np.uint8)
        out[..., c] = lut[ch]
    return out


def hue_shift(frame, shift):
    rgb = frame.astype(F32) / F32(255)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    delta = maxc - minc
    safe_max = np.where(maxc > 0, maxc, F32(1))
    safe_delta = np.where(delta > 0, delta, F32(1))
    sat = np.where(maxc > 0, delta / safe_max, F32(0))
    hr = (g - b) / safe_delta
    hg = F32(2) + (b - r) / safe_delta
    hb = F32(4) + (r - g) / safe_delta
    h = np.where(r == maxc, hr, np.where(g == maxc, hg, hb))
    h = np.where(delta > 0, np.mod(h / F32(6), F32(1)), F32(0))
    h = np.mod(h + F32(shift), F32(1))

    v = maxc
    h6 = h * F32(6)
    i = np.floor(h6)
    f = h6 - i
    p = v * (F32(1) - sat)
    q = v * (F32(1) - sat * f)
    t = v * (F32(1) - sat * (F32(1) - f))
    sector = i.astype(np.int64) % 6
    choices_r = [v, q, p, p, t, v]
    choices_g = [t, v, v, q, p, p]
    choices_b = [p, p, t, v, v, q]
    out = np.stack(
        [np.choose(sector, choices_r), np.choose(sector, choices_g), np.choose(sector, choices_b)], axis=-1
    )
    return quantize(out * F32(255))


def erase_box(height: int, width: int, area_fraction: float, region: EraseRegion) -> tuple[int, int, int, int]:
    """(top, left, bottom, right) of the erase box, clipped to the frame."""
    area = area_fraction * height * width
    bh = int(math.floor(math.sqrt(area * region.aspect) + 0.5))
    bw = int(math.floor(math.sqrt(area / region.aspect) + 0.5))
    bh, bw = min(bh, height), min(bw, width)
    top = region.center_y - bh // 2
    left = region.center_x - bw // 2
    return max(top, 0), max(left, 0), min(top + bh, height), min(left + bw, width)


def erase(frame, area_fraction, region: EraseRegion):
    out = frame.copy()
    t, l, b, r = erase_box(frame.shape[0], frame.shape[1], area_fraction, region)
    out[t:b, l:r] = np.asarray(region.fill, dtype=np.uint8)
    return out


_PARAM_KERNELS = {
    OpKind.ShearX: shear_x,
    OpKind.ShearY: shear_y,
    OpKind.TranslateX: translate_x,
    OpKind.TranslateY: translate_y,
    OpKind.Rotate: rotate,
    OpKind.Solarize: solarize,
    OpKind.Posterize: posterize,
    OpKind.Contrast: contrast,
    OpKind.Color: color,
    OpKind.Brightness: brightness,
    OpKind.Sharpness: sharpness,
    OpKind.DynamicScale: scale,
    OpKind.DynamicColor: hue_shift,
}

_PLAIN_KERNELS = {
    OpKind.AutoContrast: autocontrast,
    OpKind.Invert: invert,
    OpKind.Equalize: equalize,
}


def apply_kind(kind: OpKind, frame: np.ndarray, param: float | None = None, region: EraseRegion | None = None):
    """Apply one op to one frame and return a new frame of the same shape."""
    kind = OpKind(kind)
    _check_frame(frame)
    if kind in _PLAIN_KERNELS:
        return _PLAIN_KERNELS[kind](frame)
    if param is None or not math.isfinite(param):
        raise ValueError(f"{kind.value} needs a finite parameter, got {param!r}")
    if kind is OpKind.DynamicRandomErase:
        if region is None:
            raise ValueError("DynamicRandomErase needs an erase region")
        return erase(frame, param, region)
    return _PARAM_KERNELS[kind](frame, param)

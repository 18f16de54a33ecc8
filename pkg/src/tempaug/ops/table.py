"""Operation descriptors and the magnitude -> parameter mapping.

All policies share one magnitude scale, [0, 30]. Each op maps it linearly
from its origin (the parameter at magnitude 0, the identity where one
exists) to the range extreme picked by the direction.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

MAX_MAGNITUDE = 30.0


class OpKind(str, enum.Enum):
    ShearX = "ShearX"
    ShearY = "ShearY"
    TranslateX = "TranslateX"
    TranslateY = "TranslateY"
    Rotate = "Rotate"
    AutoContrast = "AutoContrast"
    Invert = "Invert"
    Equalize = "Equalize"
    Solarize = "Solarize"
    Posterize = "Posterize"
    Contrast = "Contrast"
    Color = "Color"
    Brightness = "Brightness"
    Sharpness = "Sharpness"
    DynamicScale = "DynamicScale"
    DynamicColor = "DynamicColor"
    DynamicRandomErase = "DynamicRandomErase"


ORG_OPS = tuple(OpKind)[:14]
VIDEO_OPS = tuple(OpKind)[14:]


@dataclass(frozen=True)
class OpDescriptor:
    """How a magnitude turns into a kernel parameter for one op.

    ``param_range``/``wide_range`` are (low, high). ``origin`` is the value at
    magnitude 0. For signed ops direction +1 heads to ``high`` and -1 to
    ``low``; unsigned ops always head to the endpoint that is not the origin.
    ``identity`` is None for ops that always change the frame.
    """

    kind: OpKind
    param_range: tuple[float, float] | None
    wide_range: tuple[float, float] | None
    origin: float | None
    identity: float | None
    signed: bool
    discrete: bool

    @property
    def parameterless(self) -> bool:
        return self.param_range is None

    def range_for(self, wide: bool) -> tuple[float, float] | None:
        return self.wide_range if wide else self.param_range


def _d(kind, rng, wide, origin, identity, signed=False, discrete=False):
    return OpDescriptor(OpKind(kind), rng, wide, origin, identity, signed, discrete)


OP_TABLE: dict[OpKind, OpDescriptor] = {
    d.kind: d
    for d in [
        _d("ShearX", (-0.3, 0.3), (-0.5, 0.5), 0.0, 0.0, signed=True),
        _d("ShearY", (-0.3, 0.3), (-0.5, 0.5), 0.0, 0.0, signed=True),
        # fraction of the frame dimension
        _d("TranslateX", (-0.45, 0.45), (-0.5, 0.5), 0.0, 0.0, signed=True),
        _d("TranslateY", (-0.45, 0.45), (-0.5, 0.5), 0.0, 0.0, signed=True),
        # degrees, counter-clockwise
        _d("Rotate", (-30.0, 30.0), (-50.0, 50.0), 0.0, 0.0, signed=True),
        _d("AutoContrast", None, None, None, None),
        _d("Invert", None, None, None, None),
        _d("Equalize", None, None, None, None),
        # threshold; 256 leaves the frame untouched
        _d("Solarize", (0.0, 256.0), (0.0, 256.0), 256.0, 256.0, discrete=True),
        # bits kept
        _d("Posterize", (4.0, 8.0), (2.0, 8.0), 8.0, 8.0, discrete=True),
        _d("Contrast", (0.1, 1.9), (0.01, 1.99), 1.0, 1.0, signed=True),
        _d("Color", (0.1, 1.9), (0.01, 1.99), 1.0, 1.0, signed=True),
        _d("Brightness", (0.1, 1.9), (0.01, 1.99), 1.0, 1.0, signed=True),
        _d("Sharpness", (0.1, 1.9), (0.01, 1.99), 1.0, 1.0, signed=True),
        # resize factor about the frame centre
        _d("DynamicScale", (0.667, 1.5), (0.5, 2.0), 1.0, 1.0, signed=True),
        # hue shift as a fraction of the hue circle
        _d("DynamicColor", (-0.1, 0.1), (-0.3, 0.3), 0.0, 0.0, signed=True),
        # erased box area as a fraction of the frame area; never an identity
        _d("DynamicRandomErase", (0.1, 0.3), (0.1, 0.6), 0.1, None),
    ]
}


def descriptor(kind: OpKind | str) -> OpDescriptor:
    return OP_TABLE[OpKind(kind)]


def _round_half_away(x: float) -> float:
    return math.copysign(math.floor(abs(x) + 0.5), x)


def magnitude_to_param(desc: OpDescriptor, magnitude: float, direction: int = 1, wide: bool = False) -> float | None:
    """Map a magnitude in [0, 30] to the op's kernel parameter.

    Returns None for parameterless ops. Magnitudes are expected pre-clamped;
    this function clamps again defensively.
    """
    if desc.parameterless:
        return None
    lo, hi = desc.range_for(wide)
    if desc.signed:
        target = hi if direction >= 0 else lo
    else:
        target = lo if desc.origin == hi else hi
    m = min(max(float(magnitude), 0.0), MAX_MAGNITUDE)
    r = m / MAX_MAGNITUDE
    # endpoint-exact interpolation
    param = desc.origin * (1.0 - r) + target * r
    if desc.discrete:
        param = _round_half_away(param)
    return param


def table_as_records() -> list[dict]:
    return [
        {
            "op": d.kind.value,
            "range": list(d.param_range) if d.param_range else None,
            "wide_range": list(d.wide_range) if d.wide_range else None,
            "origin": d.origin,
            "identity": d.identity,
            "signed": d.signed,
            "discrete": d.discrete,
            "video_only": d.kind in VIDEO_OPS,
        }
        for d in OP_TABLE.values()
    ]


def export_table_json(indent: int | None = 2) -> str:
    return json.dumps({"magnitude_domain": [0.0, MAX_MAGNITUDE], "ops": table_as_records()}, indent=indent)


if __name__ == "__main__":
    print(export_table_json())

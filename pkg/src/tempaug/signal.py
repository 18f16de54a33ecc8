"""Per-frame magnitude schedules.

A schedule is a length-T array of magnitudes, one per frame. The main
generator mixes a few randomly drawn sinusoids (Fourier sampling); the
remaining generators are the comparison baselines (static, linear ramp,
single sinusoid, per-frame random, smoothed random).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence, Union

import numpy as np

__all__ = [
    "ConfigError",
    "FourierBasis",
    "FourierConfig",
    "Schedule",
    "Static",
    "Linear",
    "Sinusoidal",
    "RandomPerFrame",
    "RandomGaussianSmoothed",
    "Fourier",
    "ScheduleKind",
    "fourier_schedule",
    "linear_schedule",
    "sample_fourier_schedule",
    "sample_baseline_schedule",
    "sample_schedule",
    "total_variation",
    "schedule_kind_from_name",
]


class ConfigError(ValueError):
    """Raised for invalid sampler configuration."""


@dataclass(frozen=True)
class FourierBasis:
    weight: float
    frequency: float
    amplitude: float
    offset: int

    def as_list(self) -> list:
        return [self.weight, self.frequency, self.amplitude, self.offset]


@dataclass(frozen=True)
class FourierConfig:
    """Distributions the Fourier sampler draws its bases from.

    Defaults are 3 bases, frequencies in [0.2, 1.5], amplitudes in [0, 1]
    and random offsets. ``shared_amplitude`` draws one amplitude for all
    bases instead of one per basis.
    """

    num_bases: int = 3
    freq_range: tuple[float, float] = (0.2, 1.5)
    amp_range: tuple[float, float] = (0.0, 1.0)
    offsets_enabled: bool = True
    shared_amplitude: bool = False

    def validate(self) -> None:
        if int(self.num_bases) != self.num_bases or self.num_bases < 1:
            raise ConfigError(f"num_bases must be a positive integer, got {self.num_bases}")
        lo, hi = self.freq_range
        if not (lo > 0 and lo <= hi and math.isfinite(hi)):
            raise ConfigError(f"invalid freq_range {self.freq_range}")
        _check_amp_range(self.amp_range)


def _check_amp_range(amp_range: Sequence[float]) -> None:
    lo, hi = amp_range
    if not (0.0 <= lo <= hi <= 1.0):
        raise ConfigError(f"amp_range must satisfy 0 <= lo <= hi <= 1, got {tuple(amp_range)}")


@dataclass
class Schedule:
    values: np.ndarray
    base_magnitude: float
    bases: list[FourierBasis] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValueError("schedule values must be a non-empty 1-D array")

    @property
    def length(self) -> int:
        return int(self.values.size)

    @classmethod
    def constant(cls, length: int, magnitude: float) -> "Schedule":
        _check_length(length)
        return cls(np.full(length, float(magnitude)), float(magnitude))

    def is_constant(self) -> bool:
        return bool(np.all(self.values == self.values[0]))

    def to_dict(self) -> dict:
        # repr-precision floats keep the JSON round trip bit-exact
        return {
            "base_magnitude": self.base_magnitude,
            "values": [float(v) for v in self.values],
            "bases": [b.as_list() for b in self.bases],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Schedule":
        bases = [FourierBasis(float(w), float(f), float(a), int(o)) for w, f, a, o in d.get("bases", [])]
        return cls(np.array(d["values"], dtype=np.float64), float(d["base_magnitude"]), bases)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self, sample_id: int | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for t, v in enumerate(self.values):
            row = [t, f"{v:.9g}"]
            writer.writerow(row if sample_id is None else [sample_id, *row])
        return buf.getvalue()


# Schedule kinds. Each baseline carries its own amplitude range so that a
# zero-amplitude run collapses every kind to the static schedule.


@dataclass(frozen=True)
class Static:
    name = "static"


@dataclass(frozen=True)
class Linear:
    with_offset: bool = True
    amp_range: tuple[float, float] = (0.0, 1.0)
    name = "linear"


@dataclass(frozen=True)
class Sinusoidal:
    with_offset: bool = True
    amp_range: tuple[float, float] = (0.0, 1.0)
    name = "sine"


@dataclass(frozen=True)
class RandomPerFrame:
    amp_range: tuple[float, float] = (0.0, 1.0)
    name = "random"


@dataclass(frozen=True)
class RandomGaussianSmoothed:
    kernel_width: float = 5.0
    amp_range: tuple[float, float] = (0.0, 1.0)
    name = "random-gauss"


@dataclass(frozen=True)
class Fourier:
    config: FourierConfig = field(default_factory=FourierConfig)
    name = "fourier"


ScheduleKind = Union[Static, Linear, Sinusoidal, RandomPerFrame, RandomGaussianSmoothed, Fourier]

_KIND_NAMES = ("static", "linear", "sine", "random", "random-gauss", "fourier")


def schedule_kind_from_name(
    name: str,
    amp_range: tuple[float, float] = (0.0, 1.0),
    fourier: FourierConfig | None = None,
    with_offset: bool = True,
    kernel_width: float = 5.0,
) -> ScheduleKind:
    """Build a schedule kind from its command-line name."""
    amp_range = (float(amp_range[0]), float(amp_range[1]))
    if name == "static":
        return Static()
    if name == "linear":
        return Linear(with_offset, amp_range)
    if name in ("sine", "sinusoidal"):
        return Sinusoidal(with_offset, amp_range)
    if name == "random":
        return RandomPerFrame(amp_range)
    if name == "random-gauss":
        return RandomGaussianSmoothed(kernel_width, amp_range)
    if name == "fourier":
        cfg = fourier or FourierConfig()
        return Fourier(FourierConfig(cfg.num_bases, cfg.freq_range, amp_range, cfg.offsets_enabled, cfg.shared_amplitude))
    raise ConfigError(f"unknown schedule kind {name!r}; expected one of {', '.join(_KIND_NAMES)}")


def kind_to_dict(kind: ScheduleKind) -> dict:
    d = {"kind": kind.name}
    d.update(asdict(kind))
    return d


def kind_from_dict(d: dict) -> ScheduleKind:
    name = d["kind"]
    if name == "fourier":
        c = d["config"]
        cfg = FourierConfig(int(c["num_bases"]), tuple(c["freq_range"]), tuple(c["amp_range"]),
                            bool(c["offsets_enabled"]), bool(c.get("shared_amplitude", False)))
        return Fourier(cfg)
    return schedule_kind_from_name(
        name,
        amp_range=tuple(d.get("amp_range", (0.0, 1.0))),
        with_offset=d.get("with_offset", True),
        kernel_width=d.get("kernel_width", 5.0),
    )


def _check_length(T: int) -> None:
    if int(T) != T or T < 1:
        raise ValueError(f"frame count must be a positive integer, got {T}")


def _check_magnitude(M: float) -> None:
    if not (math.isfinite(M) and M >= 0):
        raise ValueError(f"base magnitude must be a finite non-negative number, got {M}")


def _minmax_deviation(s: np.ndarray, half_range: float) -> np.ndarray:
    """Min-max normalize ``s`` onto [-half_range, half_range]; constants map to 0."""
    lo, hi = s.min(), s.max()
    if hi == lo or half_range == 0.0:
        return np.zeros_like(s)
    return -half_range + (s - lo) / (hi - lo) * (2.0 * half_range)


def basis_signal(T: int, frequency: float, offset: int) -> np.ndarray:
    """Raw sinusoid sin(2 f pi k / (T-1)) for k = offset+1 .. offset+T."""
    k = np.arange(offset + 1, offset + T + 1, dtype=np.float64)
    denom = T - 1 if T > 1 else 1
    return np.sin(2.0 * frequency * np.pi * k / denom)


def fourier_schedule(T: int, M: float, bases: Sequence[FourierBasis]) -> Schedule:
    """Evaluate the weighted sum of normalized sinusoids for fixed bases.

    Each basis is min-max normalized onto [M - M*A_b, M + M*A_b]. The sum is
    accumulated as M plus weighted deviations, which equals the plain weighted
    sum when the weights sum to one and keeps zero amplitude exactly at M.
    """
    _check_length(T)
    _check_magnitude(M)
    values = np.full(T, float(M))
    for b in bases:
        if not 0 <= b.offset <= max(T - 1, 0):
            raise ValueError(f"offset {b.offset} outside [0, {T - 1}]")
        values += b.weight * _minmax_deviation(basis_signal(T, b.frequency, b.offset), M * b.amplitude)
    return Schedule(values, float(M), list(bases))


def sample_fourier_schedule(T: int, M: float, cfg: FourierConfig, rng: np.random.Generator) -> Schedule:
    cfg.validate()
    _check_length(T)
    _check_magnitude(M)
    weights = rng.dirichlet(np.ones(cfg.num_bases))
    shared = float(rng.uniform(*cfg.amp_range)) if cfg.shared_amplitude else None
    bases = []
    for w in weights:
        f = float(rng.uniform(*cfg.freq_range))
        a = shared if shared is not None else float(rng.uniform(*cfg.amp_range))
        o = int(rng.integers(0, T)) if cfg.offsets_enabled else 0
        bases.append(FourierBasis(float(w), f, a, o))
    return fourier_schedule(T, M, bases)


def linear_schedule(T: int, M: float, amplitude: float, ascending: bool = True, offset: int = 0) -> Schedule:
    """Ramp spanning [M(1-A), M(1+A)], optionally rolled by ``offset`` frames."""
    _check_length(T)
    _check_magnitude(M)
    if T == 1 or amplitude == 0.0:
        return Schedule.constant(T, M)
    ramp = -1.0 + 2.0 * np.arange(T) / (T - 1)
    if not ascending:
        ramp = ramp[::-1]
    values = M + M * amplitude * ramp
    if offset:
        values = np.roll(values, offset)
    return Schedule(values, float(M))


def _gaussian_smooth(x: np.ndarray, sigma: float) -> np.ndarray:
    radius = max(1, int(math.ceil(3.0 * sigma)))
    taps = np.arange(-radius, radius + 1)
    kernel = np.exp(-0.5 * (taps / sigma) ** 2)
    n = x.size
    out = np.empty_like(x)
    for t in range(n):
        lo, hi = max(0, t - radius), min(n, t + radius + 1)
        k = kernel[lo - t + radius : hi - t + radius]
        out[t] = np.dot(k, x[lo:hi]) / k.sum()
    return out


def sample_baseline_schedule(kind: ScheduleKind, T: int, M: float, rng: np.random.Generator) -> Schedule:
    _check_length(T)
    _check_magnitude(M)
    if isinstance(kind, Static):
        return Schedule.constant(T, M)
    if isinstance(kind, Fourier):
        return sample_fourier_schedule(T, M, kind.config, rng)
    if isinstance(kind, Sinusoidal):
        cfg = FourierConfig(1, (1.0, 1.0), kind.amp_range, kind.with_offset)
        return sample_fourier_schedule(T, M, cfg, rng)

    _check_amp_range(kind.amp_range)
    amplitude = float(rng.uniform(*kind.amp_range))
    if isinstance(kind, Linear):
        ascending = bool(rng.integers(0, 2))
        offset = int(rng.integers(0, T)) if kind.with_offset else 0
        return linear_schedule(T, M, amplitude, ascending, offset)
    if isinstance(kind, (RandomPerFrame, RandomGaussianSmoothed)):
        u = rng.uniform(-1.0, 1.0, size=T)
        if isinstance(kind, RandomPerFrame):
            return Schedule(M + M * amplitude * u, float(M))
        if not kind.kernel_width > 0:
            raise ConfigError(f"kernel_width must be positive, got {kind.kernel_width}")
        smoothed = _gaussian_smooth(u, float(kind.kernel_width))
        return Schedule(M + _minmax_deviation(smoothed, M * amplitude), float(M))
    raise ConfigError(f"unsupported schedule kind {kind!r}")


sample_schedule = sample_baseline_schedule


def total_variation(s: Schedule | np.ndarray) -> float:
    values = s.values if isinstance(s, Schedule) else np.asarray(s, dtype=np.float64)
    if values.size < 2:
        return 0.0
    return float(np.abs(np.diff(values)).sum())

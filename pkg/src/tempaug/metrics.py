"""Schedule statistics and augmentation affinity/diversity ratios.

``affinity`` and ``diversity`` only compute ratios; the accuracies and
losses they consume come from training runs outside this package.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial.distance import pdist

from .signal import ScheduleKind, sample_schedule, total_variation

STATS_HEADER = ("regime", "T", "M", "n", "mean_tv", "mean_pairwise")


@dataclass(frozen=True)
class RegimeStats:
    mean_total_variation: float
    mean_pairwise_distance: float
    samples: int
    # standard errors: TV over schedules, pairwise over disjoint pairs
    tv_stderr: float = 0.0
    pairwise_stderr: float = 0.0


def _stderr(x: np.ndarray) -> float:
    if x.size < 2:
        return 0.0
    return float(x.std(ddof=1) / math.sqrt(x.size))


def regime_stats(kind: ScheduleKind, T: int, M: float, n_samples: int, rng: np.random.Generator) -> RegimeStats:
    """Mean total variation and mean pairwise L2 distance / sqrt(T) of ``n_samples`` schedules."""
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    values = np.stack([sample_schedule(kind, T, M, rng).values for _ in range(n_samples)])
    tv = np.array([total_variation(v) for v in values])
    dists = pdist(values) / math.sqrt(T)
    disjoint = np.linalg.norm(values[0:-1:2] - values[1::2], axis=1) / math.sqrt(T)
    return RegimeStats(float(tv.mean()), float(dists.mean()), n_samples, _stderr(tv), _stderr(disjoint))


def stats_csv(rows: list[tuple[str, int, float, RegimeStats]], header: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(STATS_HEADER)
    for name, T, M, st in rows:
        w.writerow([name, T, f"{M:g}", st.samples, f"{st.mean_total_variation:.6f}", f"{st.mean_pairwise_distance:.6f}"])
    return buf.getvalue()


@dataclass(frozen=True)
class AffinityInput:
    accuracy_on_augmented_val: float
    accuracy_on_clean_val: float


@dataclass(frozen=True)
class DiversityInput:
    final_train_loss_augmented: float
    final_train_loss_clean: float


def affinity(inp: AffinityInput) -> float:
    """Accuracy on augmented validation data relative to clean validation data."""
    if inp.accuracy_on_clean_val <= 0:
        raise ValueError("clean validation accuracy must be positive")
    return inp.accuracy_on_augmented_val / inp.accuracy_on_clean_val


def diversity(inp: DiversityInput) -> float:
    """Final training loss with augmentation relative to training without it."""
    if inp.final_train_loss_clean <= 0:
        raise ValueError("clean final training loss must be positive")
    return inp.final_train_loss_augmented / inp.final_train_loss_clean


@dataclass(frozen=True)
class AffinityRow:
    config: str
    affinity: float
    diversity: float
    delta_top1: float | None = None


def load_affinity_rows(path) -> list[AffinityRow]:
    """Read reference rows from CSV.

    Either precomputed ``aff``/``div`` columns or the raw measurements
    ``acc_augmented, acc_clean, loss_augmented, loss_clean`` are accepted.
    """
    rows = []
    with open(Path(path), newline="") as fh:
        for rec in csv.DictReader(fh):
            if rec.get("aff") not in (None, ""):
                aff, div = float(rec["aff"]), float(rec["div"])
            else:
                aff = affinity(AffinityInput(float(rec["acc_augmented"]), float(rec["acc_clean"])))
                div = diversity(DiversityInput(float(rec["loss_augmented"]), float(rec["loss_clean"])))
            delta = rec.get("delta_top1")
            rows.append(AffinityRow(rec["config"], aff, div, float(delta) if delta not in (None, "") else None))
    return rows


def format_affinity_table(rows: list[AffinityRow]) -> str:
    """Plain-text table with Config./Aff./Div. columns, plus ΔTop-1 when every row has it."""
    with_delta = all(r.delta_top1 is not None for r in rows)
    header = ["Config.", "Aff.", "Div."] + (["ΔTop-1."] if with_delta else [])
    body = []
    for r in rows:
        line = [r.config, f"{r.affinity:.2f}", f"{r.diversity:.2f}"]
        if with_delta:
            line.append(f"{r.delta_top1:+.1f}")
        body.append(line)
    widths = [max(len(x[i]) for x in [header, *body]) for i in range(len(header))]
    fmt = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    rule = "-" * len(fmt(header))
    return "\n".join([fmt(header), rule, *map(fmt, body)]) + "\n"

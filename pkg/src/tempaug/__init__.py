"""Temporally varying video augmentation driven by Fourier-sampled magnitude schedules."""

from .clip import Clip
from .ops import OpKind, apply_scheduled, magnitude_to_param
from .pipeline import RunConfig, augment_batch, augment_clip
from .policy import RA, TA, UA, AppliedPolicy, Policy, SearchSpace, apply_policy, sample_policy
from .signal import (
    Fourier,
    FourierBasis,
    FourierConfig,
    Linear,
    RandomGaussianSmoothed,
    RandomPerFrame,
    Schedule,
    Sinusoidal,
    Static,
    sample_fourier_schedule,
    total_variation,
)

__version__ = "0.1.0"

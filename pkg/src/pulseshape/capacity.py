"""Private/quantum capacity bounds of the lossy dephasing channel.

The pure-loss channel with transmissivity eta has capacity
-log2(1 - eta); the dephasing channel's capacity is the relative entropy
of its phase distribution to the uniform one; a composition of the two
is bounded by the minimum.  Fading variants average the loss bound over
an empirical transmissivity distribution and estimate the dephasing
capacity from phase samples with an equal-width histogram plug-in.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .ambiguity import wrap_phase, woodward
from .errors import InvalidParameterError
from .profiles import ProfileKind, SpectralProfile

log = logging.getLogger(__name__)

# Transmissivity samples are capped here before -log2(1 - eta): a single
# eta = 1 sample (zero offset at zero fluctuation) would otherwise
# poison the average with an infinity.  The cap contributes ~49.8 bits.
ETA_CLAMP = 1.0 - 1e-15

DEFAULT_BINS = 1024


class Binding(Enum):
    LOSS = "loss"
    DEPHASING = "dephasing"
    MIN = "min"


@dataclass(frozen=True)
class CapacityBound:
    """A capacity value in bits per channel use.

    ``bits_per_use`` may be math.inf (lossless / dephasing-free limit).
    ``binding`` records which constituent produced the value; ``stderr``
    is the estimator standard error where the value came from samples.
    """

    bits_per_use: float
    binding: Binding | None = None
    stderr: float = 0.0
    clamped: bool = False

    def __post_init__(self):
        if not (self.bits_per_use >= 0.0):
            raise InvalidParameterError(
                f"capacity must be >= 0, got {self.bits_per_use}")


@dataclass(frozen=True)
class PhaseSampleSet:
    """Phase samples wrapped to [-pi, pi); optional nonnegative weights."""

    samples: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "samples", wrap_phase(np.asarray(self.samples, dtype=float)))
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != self.samples.shape or np.any(w < 0):
                raise InvalidParameterError("weights must be nonnegative and match samples")
            object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class TransmissivitySampleSet:
    """Transmissivity samples in [0, 1]."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.size and (np.any(s < 0.0) or np.any(s > 1.0 + 1e-12)):
            raise InvalidParameterError("transmissivity samples must lie in [0, 1]")
        object.__setattr__(self, "samples", np.clip(s, 0.0, 1.0))


def plob(eta: float) -> CapacityBound:
    """Pure-loss capacity -log2(1 - eta); eta = 1 yields +inf."""
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameterError(f"eta must be in [0, 1], got {eta}")
    if eta == 1.0:
        return CapacityBound(bits_per_use=math.inf, binding=Binding.LOSS)
    return CapacityBound(bits_per_use=-math.log2(1.0 - eta), binding=Binding.LOSS)


def dephasing_capacity(phases: PhaseSampleSet, bins: int = DEFAULT_BINS) -> CapacityBound:
    """Histogram plug-in estimate of D(p || uniform) in bits.

    [-pi, pi) is partitioned into ``bins`` equal cells; empty cells
    contribute zero; the result is floored at 0.  A point mass saturates
    at log2(bins).
    """
    if bins < 2:
        raise InvalidParameterError(f"bins must be >= 2, got {bins}")
    if phases.samples.size == 0:
        raise InvalidParameterError("empty phase sample set")
    edges = np.linspace(-math.pi, math.pi, bins + 1)
    counts, _ = np.histogram(phases.samples, bins=edges, weights=phases.weights)
    total = counts.sum()
    p_hat = counts / total
    occupied = p_hat > 0
    # density ratio to uniform inside an occupied cell is p_hat * bins
    terms = p_hat[occupied] * np.log2(p_hat[occupied] * bins)
    value = max(0.0, float(terms.sum()))
    # per-sample contribution spread, for a standard error of the mean
    if phases.weights is None:
        cell = np.digitize(phases.samples, edges[1:-1])
        per_sample = np.log2(np.maximum(p_hat[cell] * bins, 1e-300))
        n = phases.samples.size
        stderr = float(per_sample.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    else:
        stderr = 0.0
    return CapacityBound(bits_per_use=value, binding=Binding.DEPHASING, stderr=stderr)


def fading_plob(etas: TransmissivitySampleSet) -> CapacityBound:
    """Sample mean of -log2(1 - eta) with eta capped just below 1."""
    s = etas.samples
    if s.size == 0:
        raise InvalidParameterError("empty transmissivity sample set")
    clamped = bool(np.any(s > ETA_CLAMP))
    if clamped:
        log.info("fading_plob: %d samples clamped at eta = %.1e",
                 int(np.sum(s > ETA_CLAMP)), ETA_CLAMP)
    vals = -np.log2(1.0 - np.minimum(s, ETA_CLAMP))
    stderr = float(vals.std(ddof=1) / math.sqrt(s.size)) if s.size > 1 else 0.0
    return CapacityBound(bits_per_use=float(vals.mean()), binding=Binding.LOSS,
                         stderr=stderr, clamped=clamped)


def min_composition(loss: CapacityBound, deph: CapacityBound) -> CapacityBound:
    """Upper bound of the composite channel: the smaller constituent."""
    if loss.bits_per_use < deph.bits_per_use:
        pick, binding = loss, Binding.LOSS
    elif deph.bits_per_use < loss.bits_per_use:
        pick, binding = deph, Binding.DEPHASING
    else:
        pick, binding = loss, Binding.MIN
    return CapacityBound(bits_per_use=pick.bits_per_use, binding=binding,
                         stderr=pick.stderr, clamped=loss.clamped or deph.clamped)


def systematic_loss(p: SpectralProfile, delta_omega_d: float, delta_tau: float) -> float:
    """Loss 1 - |chi| induced by constant Doppler and delay offsets."""
    return float(1.0 - np.abs(woodward(p, delta_omega_d, delta_tau).value))


class FluctuationKind(Enum):
    SYSTEMATIC_DOPPLER = "systematic_doppler"
    STOCHASTIC_DOPPLER = "stochastic_doppler"


def asymptotic_capacity(p: SpectralProfile, kind: FluctuationKind,
                        magnitude: float) -> CapacityBound:
    """Small-Doppler closed forms of the capacity bounds at zero delay.

    ``magnitude`` is the systematic shift or the fluctuation standard
    deviation, in the same angular-frequency units as the bandwidth.
    Zero magnitude yields the +inf sentinel.
    """
    if magnitude < 0:
        raise InvalidParameterError(f"magnitude must be >= 0, got {magnitude}")
    if magnitude == 0.0:
        return CapacityBound(bits_per_use=math.inf)
    w = p.width_param
    x = magnitude / (2.0 * w)
    egamma = np.euler_gamma
    if kind is FluctuationKind.SYSTEMATIC_DOPPLER:
        if p.kind is ProfileKind.GAUSSIAN:
            bits = -math.log2(0.5 * x**2)
        elif p.kind is ProfileKind.DOUBLE_LORENTZIAN:
            bits = -math.log2(x**2)
        else:
            bits = -math.log2(0.5 * x**2)
        return CapacityBound(bits_per_use=max(0.0, bits), binding=Binding.LOSS)
    # stochastic Doppler fluctuations
    if p.kind is ProfileKind.GAUSSIAN:
        bits = -math.log2(0.25 * x**2) + egamma / math.log(2.0)
        return CapacityBound(bits_per_use=max(0.0, bits), binding=Binding.LOSS)
    if p.kind is ProfileKind.DOUBLE_LORENTZIAN:
        bits = -math.log2(0.5 * x**2) + egamma / math.log(2.0)
        return CapacityBound(bits_per_use=max(0.0, bits), binding=Binding.LOSS)
    # single-sided Lorentzian: Doppler fluctuations also dephase
    loss_bits = -math.log2(0.25 * x**2) + egamma / math.log(2.0)
    deph_bits = -0.5 * math.log2(math.e / (2.0 * math.pi) * x**2)
    return min_composition(
        CapacityBound(bits_per_use=max(0.0, loss_bits), binding=Binding.LOSS),
        CapacityBound(bits_per_use=max(0.0, deph_bits), binding=Binding.DEPHASING))

"""Balanced homodyne detection with spectral mode mismatch.

The signal and local oscillator are coherent states whose spectral modes
overlap through a complex factor gamma.  The photon-number difference
statistics of the mismatched measurement coincide (in mean) with those
of a mode-matched measurement behind a beamsplitter of transmissivity
|gamma| and a phase shifter of arg(gamma); the variances differ exactly
by the undetected perpendicular-mode noise (1 - |gamma|^2) |alpha_S|^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .ambiguity import AmbiguityValue, wrap_phase, woodward
from .errors import InvalidParameterError
from .profiles import SpectralProfile


@dataclass(frozen=True)
class CoherentAmplitude:
    """Complex amplitude |alpha| e^{i theta}; |alpha|^2 is the mean photon number."""

    modulus: float
    phase: float = 0.0

    def __post_init__(self):
        if self.modulus < 0:
            raise InvalidParameterError(f"modulus must be >= 0, got {self.modulus}")
        object.__setattr__(self, "phase", float(wrap_phase(self.phase)))

    @property
    def value(self) -> complex:
        return self.modulus * cmath.exp(1j * self.phase)


@dataclass(frozen=True)
class OverlapGamma:
    """Complex mode overlap of signal and local oscillator."""

    value: complex

    @property
    def eta(self) -> float:
        """Effective transmissivity |gamma|."""
        return abs(self.value)

    @property
    def big_gamma(self) -> float:
        """Overlap phase arg(gamma), wrapped to [-pi, pi)."""
        return float(wrap_phase(cmath.phase(self.value)))


@dataclass(frozen=True)
class HomodyneStats:
    """Photon-number difference statistics of one detection event."""

    mean_diff: float
    variance: float
    snr: float
    degenerate: bool = False


def overlap_from_offsets(p: SpectralProfile, omega_d: float, tau: float) -> OverlapGamma:
    """Mode overlap induced by a Doppler shift and delay: the narrowband
    ambiguity value itself."""
    chi: AmbiguityValue = woodward(p, omega_d, tau)
    return OverlapGamma(value=complex(chi.value))


def beamsplitter_out(a1: complex, a2: complex) -> tuple[complex, complex]:
    """Balanced beamsplitter: ((a1 + i a2)/sqrt2, (i a1 + a2)/sqrt2)."""
    r = math.sqrt(0.5)
    return (a1 + 1j * a2) * r, (1j * a1 + a2) * r


def _stats(mean: float, variance: float) -> HomodyneStats:
    if variance <= 0.0:
        return HomodyneStats(mean_diff=mean, variance=variance, snr=0.0,
                             degenerate=True)
    return HomodyneStats(mean_diff=mean, variance=variance,
                         snr=abs(mean) / math.sqrt(variance))


def difference_stats(alpha_s: CoherentAmplitude, alpha_l: CoherentAmplitude,
                     gamma: OverlapGamma) -> HomodyneStats:
    """Difference statistics of the mode-mismatch model.

    mean = 2 Im(conj(gamma) conj(alpha_S) alpha_L); the variance is the
    full shot noise |alpha_S|^2 + |alpha_L|^2.
    """
    mean = 2.0 * (np.conj(gamma.value) * np.conj(alpha_s.value) * alpha_l.value).imag
    variance = alpha_s.modulus**2 + alpha_l.modulus**2
    return _stats(mean, variance)


def equivalent_channel_stats(alpha_s: CoherentAmplitude, alpha_l: CoherentAmplitude,
                             eta: float, big_gamma: float) -> HomodyneStats:
    """Difference statistics after a loss-and-phase channel |alpha> -> |eta e^{i Gamma} alpha>.

    The mean equals difference_stats for eta = |gamma|, Gamma = arg gamma;
    the variance omits the undetected perpendicular-mode noise.
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameterError(f"eta must be in [0, 1], got {eta}")
    mean = 2.0 * (eta * cmath.exp(-1j * big_gamma)
                  * np.conj(alpha_s.value) * alpha_l.value).imag
    variance = (eta * alpha_s.modulus) ** 2 + alpha_l.modulus**2
    return _stats(mean, variance)


def strong_lo_snr(alpha_s: CoherentAmplitude, gamma: OverlapGamma) -> float:
    """Strong local oscillator limit of the SNR: 2 |Im(gamma alpha_S)|."""
    return 2.0 * abs((gamma.value * alpha_s.value).imag)


def port_means(alpha_s: CoherentAmplitude, alpha_l: CoherentAmplitude,
               gamma: OverlapGamma) -> tuple[float, float]:
    """Mean photon numbers at the two detector ports."""
    al = alpha_l.value
    as_ = alpha_s.value
    g = gamma.value
    cross = (1j * np.conj(al) * as_ * g).real
    base = 0.5 * (abs(al) ** 2 + abs(as_) ** 2)
    return base - cross, base + cross

"""Normalized spectral amplitude families and their temporal counterparts.

Three pulse families are supported: Gaussian, single-sided Lorentzian
(one-sided exponential decay in time) and double-sided Lorentzian
(two-sided exponential in time).  All families are normalized so that
the power spectral density |F(omega)|^2 and the temporal intensity
|A(t)|^2 both integrate to one, and are parameterized by a common
bandwidth defined as the half width at half maximum (HWHM) of the PSD.

All internal computation uses bandwidth units: frequencies are measured
in multiples of the HWHM and times in its inverse.  The optical carrier
enters only through the dimensionless ratio omega_0 / bandwidth.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidParameterError

# Minimum carrier-to-bandwidth ratio for the Fourier relation between
# spectral and temporal amplitudes to hold to good accuracy.
NARROWBAND_MIN_CARRIER_RATIO = 100.0


class ProfileKind(str, Enum):
    GAUSSIAN = "gaussian"
    SINGLE_LORENTZIAN = "single_lorentzian"
    DOUBLE_LORENTZIAN = "double_lorentzian"


@dataclass(frozen=True)
class SpectralProfile:
    """A normalized spectral amplitude family.

    carrier_ratio is the peak frequency in units of the bandwidth,
    bandwidth is the PSD half width at half maximum in angular
    frequency units (1.0 means "work in bandwidth units").
    """

    kind: ProfileKind
    carrier_ratio: float
    bandwidth: float = 1.0

    @property
    def omega0(self) -> float:
        """Peak (carrier) angular frequency."""
        return self.carrier_ratio * self.bandwidth

    @property
    def width_param(self) -> float:
        """Internal width parameter matching the HWHM normalization.

        Gaussian standard deviation sigma = bw / sqrt(ln 4); double-sided
        Lorentzian decay rate s = bw / sqrt(sqrt(2) - 1); the single-sided
        Lorentzian width equals the bandwidth itself.
        """
        if self.kind is ProfileKind.GAUSSIAN:
            return self.bandwidth / math.sqrt(math.log(4.0))
        if self.kind is ProfileKind.DOUBLE_LORENTZIAN:
            return self.bandwidth / math.sqrt(math.sqrt(2.0) - 1.0)
        return self.bandwidth


def make_profile(kind: ProfileKind | str, carrier_ratio: float,
                 bandwidth: float = 1.0) -> SpectralProfile:
    """Build a profile, validating parameters.

    Raises InvalidParameterError for non-positive carrier_ratio or
    bandwidth.
    """
    kind = ProfileKind(kind)
    if not carrier_ratio > 0:
        raise InvalidParameterError(
            f"carrier_ratio must be positive, got {carrier_ratio}")
    if not bandwidth > 0:
        raise InvalidParameterError(
            f"bandwidth must be positive, got {bandwidth}")
    return SpectralProfile(kind=kind, carrier_ratio=float(carrier_ratio),
                           bandwidth=float(bandwidth))


def spectral_amplitude(p: SpectralProfile, omega):
    """Normalized spectral amplitude F(omega).  Vectorized over omega."""
    omega = np.asarray(omega, dtype=float)
    d = omega - p.omega0
    w = p.width_param
    if p.kind is ProfileKind.GAUSSIAN:
        out = (2.0 * math.pi * w**2) ** (-0.25) * np.exp(-d**2 / (4.0 * w**2))
        return out.astype(complex) if out.ndim else complex(out)
    if p.kind is ProfileKind.SINGLE_LORENTZIAN:
        return np.sqrt(w / math.pi) / (w + 1j * d)
    # double-sided Lorentzian
    out = math.sqrt(2.0 * w / math.pi) * w / (w**2 + d**2)
    return out.astype(complex) if out.ndim else complex(out)


def temporal_amplitude(p: SpectralProfile, t):
    """Normalized temporal amplitude A(t), the Fourier transform of F.

    Vectorized over t.  Warns (non-fatally) when the carrier ratio is
    too small for the narrowband Fourier relation to be trustworthy.
    The single-sided profile is causal; the value at t = 0 is the full
    right-limit value.
    """
    if p.carrier_ratio < NARROWBAND_MIN_CARRIER_RATIO:
        warnings.warn(
            f"carrier_ratio = {p.carrier_ratio:g} < "
            f"{NARROWBAND_MIN_CARRIER_RATIO:g}; the spectral amplitude has "
            "non-negligible support at negative frequencies and the "
            "temporal amplitude is only approximate", stacklevel=2)
    t = np.asarray(t, dtype=float)
    w = p.width_param
    carrier = np.exp(1j * p.omega0 * t)
    if p.kind is ProfileKind.GAUSSIAN:
        env = (2.0 * w**2 / math.pi) ** 0.25 * np.exp(-(w * t) ** 2)
    elif p.kind is ProfileKind.DOUBLE_LORENTZIAN:
        env = math.sqrt(w) * np.exp(-w * np.abs(t))
    else:
        env = np.where(t >= 0.0, math.sqrt(2.0 * w) * np.exp(-w * np.clip(t, 0.0, None)), 0.0)
    out = env * carrier
    return out if out.ndim else complex(out)


def power_spectral_density(p: SpectralProfile, omega):
    """|F(omega)|^2.  Vectorized over omega."""
    f = spectral_amplitude(p, omega)
    return np.abs(f) ** 2 if np.ndim(f) else abs(f) ** 2

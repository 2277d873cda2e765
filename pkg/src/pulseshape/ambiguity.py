"""Generalized correlation of a pulse with its Doppler-shifted, delayed copy.

Four routes to the same quantity are provided:

* ``woodward`` -- the narrowband closed forms, where the Doppler stretch
  is replaced by a rigid carrier shift ``omega_d``;
* ``exact_ambiguity`` -- the closed forms of the exact overlap ``Q(z, tau)``
  for a relative frequency stretch ``z``;
* ``quadrature_ambiguity`` -- an independent numerical oracle that
  integrates the time-domain overlap for an arbitrary amplitude callback;
* ``asymptotic_woodward`` -- the small- and large-Doppler expansions.

The modulus of any of these acts as an effective transmissivity of the
induced channel; the argument is the channel phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import quad

from .errors import InvalidParameterError, QuadratureError
from .profiles import ProfileKind, SpectralProfile, temporal_amplitude

# Below this value of |omega_d * tau| the double-sided Lorentzian bracket
# is evaluated by Taylor expansion to avoid the 0/0 at omega_d -> 0.
_DL_BRACKET_SERIES_THRESHOLD = 1e-6

# Below this |z| the exact double-sided Lorentzian overlap falls back to
# the narrowband form; the grouped 1/z terms lose all precision earlier.
_DL_EXACT_MIN_Z = 1e-9


def wrap_phase(phi):
    """Wrap angles to [-pi, pi).  Vectorized."""
    return np.mod(np.asarray(phi, dtype=float) + math.pi, 2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class AmbiguityValue:
    """Complex correlation value; |value| <= 1 for normalized amplitudes."""

    value: complex

    @property
    def magnitude(self):
        return np.abs(self.value)

    @property
    def phase(self):
        """Argument wrapped to [-pi, pi)."""
        return wrap_phase(np.angle(self.value))


@dataclass(frozen=True)
class OffsetPoint:
    """A Doppler/delay offset.

    ``omega_d`` is the carrier frequency shift (z * omega_0); ``tau`` the
    delay.  ``z`` optionally carries the underlying relative stretch.
    """

    omega_d: float
    tau: float
    z: float | None = None

    def __post_init__(self):
        if self.z is not None and not (1.0 + self.z > 0.0):
            raise InvalidParameterError(
                f"relative shift z = {self.z} implies non-positive received frequency")

    @classmethod
    def from_relative_shift(cls, z: float, tau: float, p: SpectralProfile) -> "OffsetPoint":
        return cls(omega_d=z * p.omega0, tau=tau, z=z)


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for the time-domain overlap quadrature.

    The integration window is [-half_width, half_width] in units of the
    inverse bandwidth; envelope tails beyond it are below 1e-26 for all
    built-in profiles at the default width.
    """

    half_width: float = 60.0
    tol: float = 1e-10
    limit: int = 200


def _dl_bracket(s: float, omega_d, abs_tau):
    """cos(wd*|tau|/2) + (2s/wd) sin(wd*|tau|/2), with the removable
    singularity at wd -> 0 handled by series."""
    omega_d = np.asarray(omega_d, dtype=float)
    abs_tau = np.asarray(abs_tau, dtype=float)
    a = 0.5 * omega_d * abs_tau
    small = np.abs(omega_d * abs_tau) < _DL_BRACKET_SERIES_THRESHOLD
    safe_wd = np.where(small, 1.0, omega_d)
    direct = np.cos(a) + (2.0 * s / safe_wd) * np.sin(a)
    # 3-term expansion of cos(a) + s|tau| * sinc-like term
    series = 1.0 + s * abs_tau - 0.5 * a**2 * (1.0 + s * abs_tau / 3.0) \
        + a**4 / 24.0 * (1.0 + s * abs_tau / 5.0)
    return np.where(small, series, direct)


def _woodward_raw(p: SpectralProfile, omega_d, tau):
    """Closed-form narrowband ambiguity, elementwise over omega_d, tau."""
    omega_d = np.asarray(omega_d, dtype=float)
    tau = np.asarray(tau, dtype=float)
    w = p.width_param
    w0 = p.omega0
    if p.kind is ProfileKind.GAUSSIAN:
        mod = np.exp(-omega_d**2 / (8.0 * w**2) - 0.5 * (w * tau) ** 2)
        return mod * np.exp(-1j * tau * (w0 - 0.5 * omega_d))
    if p.kind is ProfileKind.DOUBLE_LORENTZIAN:
        abs_tau = np.abs(tau)
        env = np.exp(-w * abs_tau - 1j * tau * (w0 - 0.5 * omega_d))
        return env * _dl_bracket(w, omega_d, abs_tau) / (1.0 + (omega_d / (2.0 * w)) ** 2)
    # single-sided Lorentzian, piecewise in the sign of tau
    lead = np.exp(-np.abs(tau) * w) / (1.0 + 1j * omega_d / (2.0 * w))
    phase = np.where(tau < 0.0, -tau * (w0 - omega_d), -tau * w0)
    return lead * np.exp(1j * phase)


def woodward(p: SpectralProfile, omega_d, tau) -> AmbiguityValue:
    """Narrowband ambiguity chi(omega_d, tau) for the given profile.

    Accepts scalars or arrays (broadcast elementwise).
    """
    val = _woodward_raw(p, omega_d, tau)
    return AmbiguityValue(value=val if np.ndim(val) else complex(val))


def _expm1c(w: complex) -> complex:
    """exp(w) - 1 without cancellation for small |w|."""
    if abs(w) > 1e-4:
        return np.exp(w) - 1.0
    return w * (1.0 + w / 2.0 * (1.0 + w / 3.0 * (1.0 + w / 4.0)))


def _exact_gaussian(p: SpectralProfile, z: float, tau: float) -> complex:
    w = p.width_param
    w0 = p.omega0
    den = z * (z + 2.0) + 2.0
    pref = math.sqrt(2.0 * (1.0 + z) / den)
    expo = -(w0**2 * z**2 + 4j * w0 * w**2 * tau * (z + 2.0)
             + 4.0 * w**4 * tau**2) / (4.0 * w**2 * den)
    return pref * np.exp(expo)


def _exact_double_lorentzian(p: SpectralProfile, z: float, tau: float) -> complex:
    s = p.width_param
    w0 = p.omega0
    if abs(z) < _DL_EXACT_MIN_Z:
        return complex(_woodward_raw(p, z * w0, tau))
    if tau >= 0.0:
        k = s + 1j * w0
        reg_a = 1.0 / (s * (z + 2.0) - 1j * w0 * z)
        reg_b = 1.0 / (s * (z + 2.0) + 1j * w0 * z)
    else:
        k = s - 1j * w0
        tau = -tau
        reg_a = 1.0 / (s * (z + 2.0) + 1j * w0 * z)
        reg_b = 1.0 / (s * (z + 2.0) - 1j * w0 * z)
    # grouped form of the two singular 1/(k z) terms; finite as z -> 0
    base = np.exp(-tau * k)
    grouped = base * _expm1c(tau * k * z / (1.0 + z)) / (z * k)
    q = grouped + base * np.exp(tau * k * z / (1.0 + z)) * reg_a + base * reg_b
    return s * math.sqrt(1.0 + z) * q


def _exact_single_lorentzian(p: SpectralProfile, z: float, tau: float) -> complex:
    dv = p.width_param
    w0 = p.omega0
    den = dv * (z + 2.0) + 1j * w0 * z
    if tau >= 0.0:
        num = np.exp(-tau * (dv + 1j * w0))
    else:
        num = np.exp(tau * (dv - 1j * w0) / (1.0 + z))
    return 2.0 * dv * math.sqrt(1.0 + z) * num / den


def exact_ambiguity(p: SpectralProfile, z: float, tau: float) -> AmbiguityValue:
    """Exact overlap Q(z, tau) including the spectral stretch.

    Raises InvalidParameterError for z <= -1 (non-positive received
    frequency).
    """
    if not (1.0 + z > 0.0):
        raise InvalidParameterError(f"need 1 + z > 0, got z = {z}")
    if p.kind is ProfileKind.GAUSSIAN:
        val = _exact_gaussian(p, z, tau)
    elif p.kind is ProfileKind.DOUBLE_LORENTZIAN:
        val = _exact_double_lorentzian(p, z, tau)
    else:
        val = _exact_single_lorentzian(p, z, tau)
    return AmbiguityValue(value=complex(val))


def quadrature_ambiguity(amplitude, z: float, tau: float,
                         config: QuadratureConfig = QuadratureConfig()) -> AmbiguityValue:
    """Numerical overlap sqrt(1+z) * int conj(A((1+z)t + tau)) A(t) dt.

    ``amplitude`` is any square-integrable callback t -> complex.  The
    domain is split at the envelope kinks t = 0 and t = -tau/(1+z) so
    one-sided envelopes integrate cleanly.  Raises QuadratureError
    (carrying the best estimate) if the accumulated error estimate
    exceeds the configured tolerance.
    """
    if not (1.0 + z > 0.0):
        raise InvalidParameterError(f"need 1 + z > 0, got z = {z}")

    def integrand(t):
        return np.conj(amplitude((1.0 + z) * t + tau)) * amplitude(t)

    T = config.half_width
    kinks = [-T, 0.0, -tau / (1.0 + z), T]
    points = sorted({t for t in kinks if -T <= t <= T})
    total = 0.0 + 0.0j
    err = 0.0
    for a, b in zip(points[:-1], points[1:]):
        val, e = quad(integrand, a, b, epsabs=config.tol / 10.0,
                      epsrel=config.tol, limit=config.limit, complex_func=True)
        total += val
        err += abs(e)
    total *= math.sqrt(1.0 + z)
    err *= math.sqrt(1.0 + z)
    if err > config.tol:
        raise QuadratureError(
            f"quadrature error {err:.3e} exceeds tolerance {config.tol:.3e}",
            best_estimate=total, error_estimate=err)
    return AmbiguityValue(value=complex(total))


class DopplerRegime(Enum):
    SMALL_DOPPLER = "small"
    LARGE_DOPPLER = "large"


def asymptotic_woodward(p: SpectralProfile, omega_d: float, tau: float,
                        regime: DopplerRegime) -> AmbiguityValue:
    """Leading-order expansions of the narrowband ambiguity.

    The small-Doppler forms hold for |omega_d| much smaller than the
    bandwidth, the large-Doppler ones for much larger; the caller picks
    the regime.  omega_d = 0 in the large-Doppler regime is rejected.
    """
    w = p.width_param
    w0 = p.omega0
    abs_tau = abs(tau)
    if regime is DopplerRegime.LARGE_DOPPLER and omega_d == 0.0:
        raise InvalidParameterError("large-Doppler expansion diverges at omega_d = 0")

    if p.kind is ProfileKind.GAUSSIAN:
        phase = np.exp(-1j * (w0 - 0.5 * omega_d) * tau - 0.5 * (w * tau) ** 2)
        if regime is DopplerRegime.SMALL_DOPPLER:
            val = (1.0 - 0.5 * (omega_d / (2.0 * w)) ** 2) * phase
        else:
            val = np.exp(-0.5 * (omega_d / (2.0 * w)) ** 2) * phase
    elif p.kind is ProfileKind.DOUBLE_LORENTZIAN:
        env = np.exp(-1j * (w0 - 0.5 * omega_d) * tau - w * abs_tau)
        if regime is DopplerRegime.SMALL_DOPPLER:
            val = (1.0 - (omega_d / (2.0 * w)) ** 2) * env \
                * _dl_bracket(w, omega_d, abs_tau)
        else:
            val = (omega_d / (2.0 * w)) ** -2 * env * np.cos(0.5 * omega_d * abs_tau)
    else:
        branch = np.exp(-1j * (w0 - omega_d) * tau) if tau < 0.0 \
            else np.exp(-1j * w0 * tau)
        decay = np.exp(-w * abs_tau)
        if regime is DopplerRegime.SMALL_DOPPLER:
            val = (1.0 - 0.5 * (omega_d / (2.0 * w)) ** 2) \
                * np.exp(-1j * omega_d / (2.0 * w)) * decay * branch
        else:
            val = (omega_d / (2.0 * w)) ** -1 * decay * np.exp(-1j * math.pi / 2.0) * branch
    return AmbiguityValue(value=complex(val))


def quadrature_for_profile(p: SpectralProfile, z: float, tau: float,
                           config: QuadratureConfig = QuadratureConfig()) -> AmbiguityValue:
    """Convenience oracle: quadrature_ambiguity with the profile's own
    temporal amplitude as the callback."""
    return quadrature_ambiguity(lambda t: temporal_amplitude(p, t), z, tau, config)

"""Tests of the ambiguity/overlap functions.

The quadrature oracle integrates the time-domain overlap directly and is
fully independent of the closed forms, so agreement between the two
validates both.
"""

import cmath
import math

import numpy as np
import pytest

from pulseshape.ambiguity import (DopplerRegime, OffsetPoint, QuadratureConfig,
                                  asymptotic_woodward, exact_ambiguity,
                                  quadrature_ambiguity, quadrature_for_profile,
                                  woodward, wrap_phase)
from pulseshape.errors import InvalidParameterError, QuadratureError
from pulseshape.profiles import ProfileKind, make_profile

ALL_KINDS = list(ProfileKind)


@pytest.fixture(params=ALL_KINDS, ids=[k.value for k in ALL_KINDS])
def profile(request):
    return make_profile(request.param, carrier_ratio=1e5)


def test_wrap_phase_range():
    phi = np.array([-math.pi, math.pi, 3.0 * math.pi, -4.5 * math.pi, 0.1])
    wrapped = wrap_phase(phi)
    assert np.all(wrapped >= -math.pi)
    assert np.all(wrapped < math.pi)
    assert wrapped[0] == pytest.approx(-math.pi)
    assert wrapped[1] == pytest.approx(-math.pi)  # pi maps to the open end
    assert wrapped[4] == pytest.approx(0.1)


def test_offset_point_validation():
    OffsetPoint(omega_d=1.0, tau=0.0, z=-0.5)
    with pytest.raises(InvalidParameterError):
        OffsetPoint(omega_d=1.0, tau=0.0, z=-1.0)


def test_offset_point_from_relative_shift(profile):
    pt = OffsetPoint.from_relative_shift(2e-5, 0.3, profile)
    assert pt.omega_d == pytest.approx(2e-5 * profile.omega0)
    assert pt.z == 2e-5


def test_zero_offset_is_unity(profile):
    chi = woodward(profile, 0.0, 0.0)
    assert chi.value == pytest.approx(1.0 + 0.0j, abs=1e-14)


def test_magnitude_bounded_by_one(profile):
    rng = np.random.default_rng(7)
    wd = rng.uniform(-8.0, 8.0, 200)
    tau = rng.uniform(-5.0, 5.0, 200)
    mags = np.abs(woodward(profile, wd, tau).value)
    assert np.all(mags <= 1.0 + 1e-12)


def test_magnitude_even_in_doppler(profile):
    """|chi(-omega_d, tau)| = |chi(omega_d, tau)| for symmetric envelopes;
    the single-sided profile obeys it too at tau = 0."""
    for wd in (0.7, 2.3, 5.0):
        for tau in (0.0, 1.1, -0.4):
            a = abs(woodward(profile, wd, tau).value)
            b = abs(woodward(profile, -wd, tau).value)
            assert a == pytest.approx(b, rel=1e-12)


def test_pure_doppler_closed_values():
    """Spot values at omega_d = 5 bandwidths, tau = 0."""
    sl = make_profile(ProfileKind.SINGLE_LORENTZIAN, 1e5)
    assert abs(woodward(sl, 5.0, 0.0).value) == pytest.approx(
        1.0 / math.sqrt(1.0 + 6.25), rel=1e-12)
    dl = make_profile(ProfileKind.DOUBLE_LORENTZIAN, 1e5)
    s = dl.width_param
    assert abs(woodward(dl, 5.0, 0.0).value) == pytest.approx(
        1.0 / (1.0 + (2.5 / s) ** 2), rel=1e-12)
    g = make_profile(ProfileKind.GAUSSIAN, 1e5)
    sig = g.width_param
    assert abs(woodward(g, 5.0, 0.0).value) == pytest.approx(
        math.exp(-25.0 / (8.0 * sig**2)), rel=1e-12)


def test_pure_delay_closed_values():
    """At omega_d = 0 the overlap reduces to the envelope autocorrelation."""
    tau = 1.7
    g = make_profile(ProfileKind.GAUSSIAN, 1e5)
    assert abs(woodward(g, 0.0, tau).value) == pytest.approx(
        math.exp(-0.5 * (g.width_param * tau) ** 2), rel=1e-12)
    dl = make_profile(ProfileKind.DOUBLE_LORENTZIAN, 1e5)
    s = dl.width_param
    assert abs(woodward(dl, 0.0, tau).value) == pytest.approx(
        (1.0 + s * tau) * math.exp(-s * tau), rel=1e-12)
    sl = make_profile(ProfileKind.SINGLE_LORENTZIAN, 1e5)
    assert abs(woodward(sl, 0.0, tau).value) == pytest.approx(
        math.exp(-tau), rel=1e-12)


def test_dl_removable_singularity():
    """The double-sided form is continuous across omega_d = 0."""
    dl = make_profile(ProfileKind.DOUBLE_LORENTZIAN, 1e5)
    ref = woodward(dl, 0.0, 1.3).value
    for wd in (1e-12, 1e-9, 1e-7, -1e-8):
        # the channel phase itself moves at first order (tau omega_d / 2),
        # so allow exactly that much drift and nothing more
        assert woodward(dl, wd, 1.3).value == pytest.approx(
            ref, abs=abs(wd) * 1.3 + 1e-12)
    # both sides of the series/direct switch agree (the envelope factor
    # is flat to second order there, unlike the carrier phase)
    from pulseshape.ambiguity import _dl_bracket
    s = dl.width_param
    below = float(_dl_bracket(s, 0.9e-6, 1.0))
    above = float(_dl_bracket(s, 1.1e-6, 1.0))
    assert below == pytest.approx(above, abs=1e-11)


def test_woodward_vectorized(profile):
    wd = np.linspace(-3, 3, 5)
    tau = np.linspace(-2, 2, 5)
    arr = woodward(profile, wd, tau).value
    assert arr.shape == (5,)
    for i in range(5):
        assert arr[i] == pytest.approx(
            woodward(profile, wd[i], tau[i]).value, rel=1e-14)


def test_exact_reduces_to_woodward_at_small_z(profile):
    """For z -> 0 at fixed omega_d = z omega_0, Q approaches chi."""
    for z, tau in [(1e-5, 0.0), (3e-5, 1.2), (-2e-5, -0.7), (5e-5, 3.0)]:
        wd = z * profile.omega0
        q = exact_ambiguity(profile, z, tau).value
        chi = woodward(profile, wd, tau).value
        assert q == pytest.approx(chi, abs=2e-4)


def test_exact_rejects_nonpositive_frequency(profile):
    with pytest.raises(InvalidParameterError):
        exact_ambiguity(profile, -1.0, 0.0)


def test_exact_zero_offset_is_unity(profile):
    assert exact_ambiguity(profile, 0.0, 0.0).value == pytest.approx(1.0, abs=1e-12)


def test_quadrature_matches_closed_forms(profile):
    cfg = QuadratureConfig(tol=1e-8)
    for z, tau in [(0.0, 0.0), (2e-5, 0.5), (-3e-5, -1.0), (1e-5, 2.0)]:
        wd = z * profile.omega0
        q = quadrature_for_profile(profile, z, tau, cfg).value
        chi = woodward(profile, wd, tau).value
        # the oracle carries the full spectral stretch; the closed form
        # is its narrowband limit, good to O(z) of the carrier phase
        assert q == pytest.approx(chi, abs=1e-4)


def test_quadrature_custom_callback():
    """The oracle accepts an arbitrary amplitude callback."""
    sig = 1.0 / math.sqrt(math.log(4.0))

    def amp(t):
        return (2.0 * sig**2 / math.pi) ** 0.25 * np.exp(-(sig * t) ** 2)

    # baseband Gaussian: chi(0, tau) = exp(-sig^2 tau^2 / 2)
    val = quadrature_ambiguity(amp, 0.0, 1.5).value
    assert val == pytest.approx(math.exp(-0.5 * (sig * 1.5) ** 2), abs=1e-10)


def test_quadrature_error_carries_best_estimate():
    def amp(t):
        return (2.0 / math.pi) ** 0.25 * np.exp(-(t ** 2))

    with pytest.raises(QuadratureError) as exc_info:
        quadrature_ambiguity(amp, 0.0, 0.0, QuadratureConfig(tol=1e-30))
    err = exc_info.value
    assert err.best_estimate == pytest.approx(1.0, abs=1e-8)
    assert err.error_estimate > 1e-30


def test_asymptotic_small_doppler(profile):
    for wd in (0.01, -0.02):
        for tau in (0.0, 0.8):
            approx = asymptotic_woodward(profile, wd, tau,
                                         DopplerRegime.SMALL_DOPPLER).value
            exact = woodward(profile, wd, tau).value
            assert approx == pytest.approx(exact, rel=1e-3)


def test_asymptotic_large_doppler(profile):
    for wd in (40.0, 80.0):
        approx = asymptotic_woodward(profile, wd, 0.0,
                                     DopplerRegime.LARGE_DOPPLER).value
        exact = woodward(profile, wd, 0.0).value
        assert abs(approx) == pytest.approx(abs(exact), rel=0.05)


def test_asymptotic_large_doppler_rejects_zero(profile):
    with pytest.raises(InvalidParameterError):
        asymptotic_woodward(profile, 0.0, 1.0, DopplerRegime.LARGE_DOPPLER)


def test_phase_property_wrapped(profile):
    chi = woodward(profile, 1.0, 4.0)
    assert -math.pi <= float(chi.phase) < math.pi
    assert cmath.exp(1j * float(chi.phase)) == pytest.approx(
        chi.value / abs(chi.value), rel=1e-12)

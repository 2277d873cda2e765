"""Monte-Carlo engine for fluctuating Doppler shifts and delays.

Offsets are drawn from normal distributions around their systematic
values, mapped through the narrowband ambiguity function to
transmissivity/phase samples, and reduced to fading-loss and dephasing
capacity bounds.  Sampling is counter-based: every deviate is a pure
function of (seed, sample index), so streams are reproducible and
independent of evaluation order or worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import ndtri

from .ambiguity import OffsetPoint, _woodward_raw, wrap_phase
from .capacity import (Binding, CapacityBound, PhaseSampleSet,
                       TransmissivitySampleSet, dephasing_capacity,
                       fading_plob, min_composition)
from .errors import InvalidParameterError
from .profiles import SpectralProfile

# splitmix64 constants; the uniform-to-normal map is the inverse normal
# CDF so the sample stream is reproducible across implementations.
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_CELL_SALT = np.uint64(0xC2B2AE3D27D4EB4F)


@dataclass(frozen=True)
class FluctuationSpec:
    """Systematic offsets and fluctuation standard deviations."""

    delta_omega_d: float = 0.0
    delta_tau: float = 0.0
    sigma_omega_d: float = 0.0
    sigma_tau: float = 0.0

    def __post_init__(self):
        if self.sigma_omega_d < 0 or self.sigma_tau < 0:
            raise InvalidParameterError("fluctuation standard deviations must be >= 0")


@dataclass(frozen=True)
class McConfig:
    """Monte-Carlo settings; ``chunk`` bounds the per-batch memory."""

    n_samples: int
    seed: int
    bins: int = 1024
    chunk: int = 1 << 18

    def __post_init__(self):
        if self.n_samples < 1:
            raise InvalidParameterError("n_samples must be >= 1")
        if self.bins < 2:
            raise InvalidParameterError("bins must be >= 2")
        if self.chunk < 1:
            raise InvalidParameterError("chunk must be >= 1")


@dataclass(frozen=True)
class McResult:
    """One Monte-Carlo channel estimate."""

    capacity: CapacityBound
    loss_bound: float
    dephasing_bound: float
    eta_mean: float
    eta_std: float
    phase_std: float
    standard_error: float
    degenerate_phase: bool = False


def _mix64(x):
    """splitmix64 finalizer (Stafford variant); vectorized on uint64.

    All arithmetic is modulo 2**64 by construction.
    """
    with np.errstate(over="ignore"):
        x = np.asarray(x, dtype=np.uint64)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return x ^ (x >> np.uint64(31))


def _standard_normal(seed: int, index, lane: int):
    """Deterministic standard normal deviates for the given sample indices.

    Each (seed, index, lane) triple maps to one splitmix64 output, whose
    top 53 bits become a uniform in (0, 1) pushed through the inverse
    normal CDF.
    """
    index = np.asarray(index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        state = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF)) \
            + (np.uint64(2) * index + np.uint64(lane)) * _GOLDEN
    bits = _mix64(state)
    u = ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(u)


def cell_seed(seed: int, row: int, col: int) -> int:
    """Derived 64-bit seed for one grid cell; splitmix64 mixing of
    (seed, row, col) keeps cells independent and order-insensitive."""
    with np.errstate(over="ignore"):
        base = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF)) \
            + np.uint64(row) * _GOLDEN + np.uint64(col) * _CELL_SALT
    return int(_mix64(base))


def sample_offsets(spec: FluctuationSpec, cfg: McConfig, index: int) -> OffsetPoint:
    """The offset drawn for one sample ordinal; bit-reproducible."""
    if not 0 <= index < cfg.n_samples:
        raise InvalidParameterError(f"index {index} outside [0, {cfg.n_samples})")
    xi_wd = float(_standard_normal(cfg.seed, index, 0))
    xi_tau = float(_standard_normal(cfg.seed, index, 1))
    return OffsetPoint(omega_d=spec.delta_omega_d + spec.sigma_omega_d * xi_wd,
                       tau=spec.delta_tau + spec.sigma_tau * xi_tau)


def _offset_arrays(spec: FluctuationSpec, cfg: McConfig, start: int, count: int):
    idx = np.arange(start, start + count, dtype=np.uint64)
    wd = spec.delta_omega_d + spec.sigma_omega_d * _standard_normal(cfg.seed, idx, 0)
    tau = spec.delta_tau + spec.sigma_tau * _standard_normal(cfg.seed, idx, 1)
    return wd, tau


def simulate_channel(p: SpectralProfile, spec: FluctuationSpec, cfg: McConfig) -> McResult:
    """Monte-Carlo capacity bound of the induced fading lossy dephasing channel.

    Per sample: chi = woodward(omega_d, tau); eta = |chi|; the phase is
    arg(chi) minus the systematic phase arg(chi(delta_omega_d, delta_tau))
    (a known unitary, removable in post-processing), wrapped to [-pi, pi).
    The loss bound averages -log2(1 - eta); the dephasing bound is the
    histogram relative-entropy estimate.  A degenerate (zero-spread)
    phase set means no dephasing at all; its bound is reported as +inf
    rather than the histogram saturation value.
    """
    n = cfg.n_samples
    phase_sys = float(np.angle(_woodward_raw(p, spec.delta_omega_d, spec.delta_tau)))
    eta_parts = []
    phi_parts = []
    for start in range(0, n, cfg.chunk):
        count = min(cfg.chunk, n - start)
        wd, tau = _offset_arrays(spec, cfg, start, count)
        chi = _woodward_raw(p, wd, tau)
        eta_parts.append(np.abs(chi))
        phi_parts.append(wrap_phase(np.angle(chi) - phase_sys))
    eta = np.concatenate(eta_parts)
    phi = np.concatenate(phi_parts)

    loss = fading_plob(TransmissivitySampleSet(np.minimum(eta, 1.0)))
    degenerate = bool(np.all(phi == phi[0]))
    if degenerate:
        deph = CapacityBound(bits_per_use=math.inf, binding=Binding.DEPHASING)
    else:
        deph = dephasing_capacity(PhaseSampleSet(phi), bins=cfg.bins)
    cap = min_composition(loss, deph)
    return McResult(capacity=cap,
                    loss_bound=loss.bits_per_use,
                    dephasing_bound=deph.bits_per_use,
                    eta_mean=float(eta.mean()),
                    eta_std=float(eta.std()),
                    phase_std=float(phi.std()),
                    standard_error=cap.stderr,
                    degenerate_phase=degenerate)


def capacity_grid(p: SpectralProfile, sigma_tau_axis, sigma_omega_d_axis,
                  cfg: McConfig, workers: int = 1):
    """Grid of simulate_channel results; rows follow sigma_tau, columns
    sigma_omega_d, systematic offsets fixed at zero.

    Every cell runs with its own derived seed, so results are identical
    for any worker count.  Returns a list of lists of McResult.
    """
    sigma_tau_axis = list(sigma_tau_axis)
    sigma_omega_d_axis = list(sigma_omega_d_axis)
    if not sigma_tau_axis or not sigma_omega_d_axis:
        raise InvalidParameterError("grid axes must be nonempty")
    if any(v < 0 for v in sigma_tau_axis + sigma_omega_d_axis):
        raise InvalidParameterError("grid axis values must be >= 0")

    def run_cell(i, j):
        spec = FluctuationSpec(sigma_tau=sigma_tau_axis[i],
                               sigma_omega_d=sigma_omega_d_axis[j])
        return simulate_channel(p, spec, replace(cfg, seed=cell_seed(cfg.seed, i, j)))

    cells = [(i, j) for i in range(len(sigma_tau_axis))
             for j in range(len(sigma_omega_d_axis))]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda ij: run_cell(*ij), cells))
    else:
        results = [run_cell(i, j) for i, j in cells]
    ncol = len(sigma_omega_d_axis)
    return [results[r * ncol:(r + 1) * ncol] for r in range(len(sigma_tau_axis))]


def capacity_ratio_grid(p_a: SpectralProfile, p_b: SpectralProfile,
                        sigma_tau_axis, sigma_omega_d_axis,
                        cfg: McConfig, workers: int = 1):
    """Elementwise ln(P_A / P_B) of the two profiles' capacity grids.

    Both grids use the same derived per-cell seeds, so the comparison is
    paired.  Cells where the ratio is undefined (0/0 or inf/inf) come
    back as nan; a zero denominator alone gives +inf.
    """
    grid_a = capacity_grid(p_a, sigma_tau_axis, sigma_omega_d_axis, cfg, workers)
    grid_b = capacity_grid(p_b, sigma_tau_axis, sigma_omega_d_axis, cfg, workers)
    out = np.empty((len(grid_a), len(grid_a[0])), dtype=float)
    for i, (row_a, row_b) in enumerate(zip(grid_a, grid_b)):
        for j, (a, b) in enumerate(zip(row_a, row_b)):
            pa = a.capacity.bits_per_use
            pb = b.capacity.bits_per_use
            if (pa == 0.0 and pb == 0.0) or (math.isinf(pa) and math.isinf(pb)):
                out[i, j] = math.nan
            elif pb == 0.0:
                out[i, j] = math.inf
            elif math.isinf(pb) or pa == 0.0:
                out[i, j] = -math.inf
            else:
                out[i, j] = math.log(pa / pb)
    return out

"""Command-line front end.

Subcommands::

    pulseshape ambiguity          --scenario s.json [--out prefix]
    pulseshape capacity-systematic --scenario s.json [--out prefix]
    pulseshape capacity-stochastic --scenario s.json [--out prefix]
                                   [--seed N] [--samples N] [--threads N]
    pulseshape homodyne           --scenario s.json [--out prefix]
    pulseshape selfcheck

Outputs are plain CSV with ``#``-prefixed metadata header lines; axis
columns use bandwidth units (Doppler in multiples of the HWHM, delay in
its inverse).  ``inf`` and ``nan`` appear as literal lowercase tokens.
Re-running a scenario reproduces byte-identical data sections; a JSON
manifest with per-output checksums is written next to the CSVs.

Exit codes: 0 success, 2 scenario/parse error, 3 self-check failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import math
import sys
import time
from dataclasses import replace

import numpy as np

from . import ambiguity as amb
from . import capacity as cap
from . import stochastic as stoch
from .errors import PulseshapeError, ScenarioError
from .homodyne import (CoherentAmplitude, OverlapGamma, difference_stats,
                       equivalent_channel_stats, overlap_from_offsets,
                       strong_lo_snr)
from .profiles import (ProfileKind, make_profile, power_spectral_density,
                       temporal_amplitude)
from .scenario import (RunManifest, Scenario, TOOL_VERSION, load_scenario,
                       scenario_hash)

EXIT_OK = 0
EXIT_SCENARIO = 2
EXIT_CHECK = 3
EXIT_IO = 4

_SHORT = {ProfileKind.GAUSSIAN: "g",
          ProfileKind.DOUBLE_LORENTZIAN: "dl",
          ProfileKind.SINGLE_LORENTZIAN: "sl"}


def _fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def _write_csv(path: str, meta: dict, header: list[str], rows) -> str:
    """Write one CSV; returns the SHA-256 of the data section (the
    non-comment lines), which must be reproducible across runs."""
    data_lines = [",".join(header)]
    for row in rows:
        data_lines.append(",".join(v if isinstance(v, str) else _fmt(v) for v in row))
    data = "\n".join(data_lines) + "\n"
    digest = hashlib.sha256(data.encode()).hexdigest()
    with open(path, "w") as fh:
        for key, value in meta.items():
            fh.write(f"# {key}: {value}\n")
        fh.write(data)
    return digest


def _require(scenario: Scenario, attr: str, command: str):
    if getattr(scenario, attr) is None:
        raise ScenarioError(f"command '{command}' requires scenario key '{attr}'")


def _profiles(scenario: Scenario):
    return [make_profile(kind, scenario.carrier_ratio, scenario.bandwidth)
            for kind in scenario.profiles]


def run_ambiguity(scenario: Scenario, prefix: str, meta: dict) -> dict:
    _require(scenario, "doppler_axis", "ambiguity")
    _require(scenario, "delay_axis", "ambiguity")
    wds = scenario.doppler_axis.values() * scenario.bandwidth
    taus = scenario.delay_axis.values() / scenario.bandwidth
    outputs = {}
    moduli = {}
    header = ["omega_d_over_bw", "tau_times_bw", "chi_abs", "chi_phase"]
    for p in _profiles(scenario):
        grid_wd, grid_tau = np.meshgrid(wds, taus, indexing="ij")
        chi = amb.woodward(p, grid_wd, grid_tau).value
        moduli[p.kind] = np.abs(chi)
        rows = [(wd / scenario.bandwidth, tau * scenario.bandwidth,
                 abs(c), float(amb.wrap_phase(np.angle(c))))
                for wd, tau, c in zip(grid_wd.ravel(), grid_tau.ravel(), chi.ravel())]
        path = f"{prefix}_ambiguity_{p.kind.value}.csv"
        outputs[path] = _write_csv(path, meta, header, rows)
    for a, b in itertools.combinations(scenario.profiles, 2):
        diff = moduli[a] - moduli[b]
        rows = []
        for i, wd in enumerate(wds):
            for j, tau in enumerate(taus):
                rows.append((wd / scenario.bandwidth, tau * scenario.bandwidth,
                             diff[i, j]))
        path = f"{prefix}_ambiguity_diff_{_SHORT[a]}_{_SHORT[b]}.csv"
        outputs[path] = _write_csv(
            path, meta, ["omega_d_over_bw", "tau_times_bw", "chi_abs_diff"], rows)
    return outputs


def run_capacity_systematic(scenario: Scenario, prefix: str, meta: dict) -> dict:
    _require(scenario, "doppler_axis", "capacity-systematic")
    wds = scenario.doppler_axis.values() * scenario.bandwidth
    kinds = [ProfileKind.GAUSSIAN, ProfileKind.DOUBLE_LORENTZIAN,
             ProfileKind.SINGLE_LORENTZIAN]
    profiles = {k: make_profile(k, scenario.carrier_ratio, scenario.bandwidth)
                for k in kinds}
    caps = {k: [] for k in kinds}
    for wd in wds:
        for k in kinds:
            eta = 1.0 - cap.systematic_loss(profiles[k], wd, 0.0)
            caps[k].append(cap.plob(min(eta, 1.0)).bits_per_use)

    def log_ratio(a, b):
        if a == 0.0 and b == 0.0 or (math.isinf(a) and math.isinf(b)):
            return math.nan
        if b == 0.0:
            return math.inf
        if a == 0.0 or math.isinf(b):
            return -math.inf
        return math.log(a / b)

    header = ["delta_omega_d_over_bw", "p_gauss", "p_dl", "p_sl",
              "log_g_sl", "log_g_dl", "log_dl_sl"]
    rows = []
    for i, wd in enumerate(wds):
        g = caps[ProfileKind.GAUSSIAN][i]
        dl = caps[ProfileKind.DOUBLE_LORENTZIAN][i]
        sl = caps[ProfileKind.SINGLE_LORENTZIAN][i]
        rows.append((wd / scenario.bandwidth, g, dl, sl,
                     log_ratio(g, sl), log_ratio(g, dl), log_ratio(dl, sl)))
    path = f"{prefix}_capacity_systematic.csv"
    return {path: _write_csv(path, meta, header, rows)}


def run_capacity_stochastic(scenario: Scenario, prefix: str, meta: dict,
                            threads: int = 1) -> dict:
    for attr in ("sigma_doppler_axis", "sigma_delay_axis", "monte_carlo"):
        _require(scenario, attr, "capacity-stochastic")
    mc = scenario.monte_carlo
    cfg = stoch.McConfig(n_samples=mc.samples, seed=mc.seed, bins=mc.bins,
                         chunk=mc.chunk)
    sigma_taus = scenario.sigma_delay_axis.values() / scenario.bandwidth
    sigma_wds = scenario.sigma_doppler_axis.values() * scenario.bandwidth
    outputs = {}
    grids = {}
    header = ["sigma_tau_times_bw", "sigma_wd_over_bw", "cap_bound_bits",
              "binding_tag", "loss_bound", "deph_bound", "stderr"]
    for p in _profiles(scenario):
        grid = stoch.capacity_grid(p, sigma_taus, sigma_wds, cfg, workers=threads)
        grids[p.kind] = grid
        rows = []
        for i, st in enumerate(sigma_taus):
            for j, sw in enumerate(sigma_wds):
                r = grid[i][j]
                rows.append((st * scenario.bandwidth, sw / scenario.bandwidth,
                             r.capacity.bits_per_use, r.capacity.binding.value,
                             r.loss_bound, r.dephasing_bound, r.standard_error))
        path = f"{prefix}_capacity_stochastic_{p.kind.value}.csv"
        outputs[path] = _write_csv(path, meta, header, rows)
    for a, b in itertools.combinations(scenario.profiles, 2):
        rows = []
        for i, st in enumerate(sigma_taus):
            for j, sw in enumerate(sigma_wds):
                pa = grids[a][i][j].capacity.bits_per_use
                pb = grids[b][i][j].capacity.bits_per_use
                if (pa == 0.0 and pb == 0.0) or (math.isinf(pa) and math.isinf(pb)):
                    val = math.nan
                elif pb == 0.0:
                    val = math.inf
                elif pa == 0.0 or math.isinf(pb):
                    val = -math.inf
                else:
                    val = math.log(pa / pb)
                rows.append((st * scenario.bandwidth, sw / scenario.bandwidth, val))
        path = f"{prefix}_capacity_ratio_{_SHORT[a]}_{_SHORT[b]}.csv"
        outputs[path] = _write_csv(
            path, meta, ["sigma_tau_times_bw", "sigma_wd_over_bw", "log_ratio"], rows)
    return outputs


def run_homodyne(scenario: Scenario, prefix: str, meta: dict) -> dict:
    for attr in ("homodyne", "doppler_axis", "delay_axis"):
        _require(scenario, attr, "homodyne")
    h = scenario.homodyne
    alpha_s = CoherentAmplitude(h.signal_modulus, h.signal_phase)
    alpha_l = CoherentAmplitude(h.lo_modulus, h.lo_phase)
    wds = scenario.doppler_axis.values() * scenario.bandwidth
    taus = scenario.delay_axis.values() / scenario.bandwidth
    header = ["omega_d_over_bw", "tau_times_bw", "eta", "gamma_phase",
              "mean_mismatch", "mean_equiv", "mean_gap",
              "var_mismatch", "var_equiv", "var_gap",
              "snr_mismatch", "snr_equiv", "snr_strong_lo"]
    outputs = {}
    for p in _profiles(scenario):
        rows = []
        for wd in wds:
            for tau in taus:
                gamma = overlap_from_offsets(p, wd, tau)
                full = difference_stats(alpha_s, alpha_l, gamma)
                equiv = equivalent_channel_stats(alpha_s, alpha_l,
                                                 gamma.eta, gamma.big_gamma)
                rows.append((wd / scenario.bandwidth, tau * scenario.bandwidth,
                             gamma.eta, gamma.big_gamma,
                             full.mean_diff, equiv.mean_diff,
                             full.mean_diff - equiv.mean_diff,
                             full.variance, equiv.variance,
                             full.variance - equiv.variance,
                             full.snr, equiv.snr, strong_lo_snr(alpha_s, gamma)))
        path = f"{prefix}_homodyne_{p.kind.value}.csv"
        outputs[path] = _write_csv(path, meta, header, rows)
    return outputs


def run_selfcheck(out=sys.stdout) -> int:
    """Cross-validation suite: closed forms vs quadrature, asymptotics,
    and normalization.  Returns the number of failed checks."""
    from scipy.integrate import quad

    checks = []
    profiles = [make_profile(kind, 1e5, 1.0) for kind in ProfileKind]
    for p in profiles:
        w0 = p.omega0
        # Lorentzian tails fall off only polynomially: integrate each
        # half-line, splitting at the peak.
        val = sum(quad(lambda w: power_spectral_density(p, w), a, b,
                       limit=400, epsabs=1e-10, epsrel=1e-10)[0]
                  for a, b in [(-np.inf, w0), (w0, np.inf)])
        checks.append((f"psd-normalization {p.kind.value}", abs(val - 1.0), 1e-8))
        ratio = power_spectral_density(p, w0 + 1.0) / power_spectral_density(p, w0)
        checks.append((f"psd-hwhm {p.kind.value}", abs(ratio - 0.5), 1e-12))
        val = sum(quad(lambda t: abs(temporal_amplitude(p, t)) ** 2, a, b, limit=400)[0]
                  for a, b in [(-50, 0), (0, 50)])
        checks.append((f"parseval {p.kind.value}", abs(val - 1.0), 1e-6))
        worst = 0.0
        for wd in (0.0, 3.0, -3.0):
            for tau in (0.0, 2.0, -2.0):
                z = wd / w0
                q = amb.quadrature_for_profile(p, z, tau,
                                              amb.QuadratureConfig(tol=1e-9))
                chi = amb.woodward(p, wd, tau)
                worst = max(worst, abs(q.value - chi.value))
        checks.append((f"oracle-equivalence {p.kind.value}", worst, 1e-4))
        for regime, wd, tol in ((amb.DopplerRegime.SMALL_DOPPLER, 0.01, 0.01),
                                (amb.DopplerRegime.LARGE_DOPPLER, 50.0, 0.05)):
            approx = amb.asymptotic_woodward(p, wd, 0.0, regime)
            exact = amb.woodward(p, wd, 0.0)
            rel = abs(approx.value - exact.value) / abs(exact.value)
            checks.append((f"asymptotics-{regime.value} {p.kind.value}", rel, tol))
    dl = make_profile(ProfileKind.DOUBLE_LORENTZIAN, 1e5)
    gap = abs(amb.woodward(dl, 1e-12, 1.0).value - amb.woodward(dl, 0.0, 1.0).value)
    checks.append(("dl-removable-singularity", gap, 1e-10))

    failures = 0
    for name, observed, tol in checks:
        ok = observed <= tol
        failures += 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'} {name}: observed={observed:.3e} "
              f"tol={tol:.0e}", file=out)
    print(f"selfcheck: {len(checks) - failures}/{len(checks)} checks passed", file=out)
    return failures


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulseshape",
        description="Pulse-shape robustness analysis under Doppler shift and delay")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("ambiguity", "capacity-systematic", "capacity-stochastic", "homodyne"):
        sp = sub.add_parser(name)
        sp.add_argument("--scenario", required=True, help="scenario JSON file")
        sp.add_argument("--out", default=None, help="output path prefix")
        if name == "capacity-stochastic":
            sp.add_argument("--seed", type=int, default=None,
                            help="override the scenario seed")
            sp.add_argument("--samples", type=int, default=None,
                            help="override the scenario sample count")
            sp.add_argument("--threads", type=int, default=1,
                            help="worker threads for grid cells (never changes results)")
    sub.add_parser("selfcheck")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "selfcheck":
        return EXIT_CHECK if run_selfcheck() else EXIT_OK
    try:
        scenario = load_scenario(args.scenario)
        if args.command == "capacity-stochastic":
            if getattr(args, "seed", None) is not None or \
                    getattr(args, "samples", None) is not None:
                if scenario.monte_carlo is None:
                    raise ScenarioError(
                        "--seed/--samples overrides require a monte_carlo section")
                mc = scenario.monte_carlo
                if args.seed is not None:
                    mc = replace(mc, seed=args.seed)
                if args.samples is not None:
                    mc = replace(mc, samples=args.samples)
                scenario = replace(scenario, monte_carlo=mc)
        prefix = args.out if args.out is not None else scenario.output_prefix
        sha = scenario_hash(scenario)
        seed = scenario.monte_carlo.seed if scenario.monte_carlo else None
        meta = {"tool": f"pulseshape {TOOL_VERSION}",
                "command": args.command,
                "scenario_hash": sha,
                "seed": seed if seed is not None else "none"}
        started = time.monotonic()
        if args.command == "ambiguity":
            outputs = run_ambiguity(scenario, prefix, meta)
        elif args.command == "capacity-systematic":
            outputs = run_capacity_systematic(scenario, prefix, meta)
        elif args.command == "capacity-stochastic":
            outputs = run_capacity_stochastic(scenario, prefix, meta,
                                              threads=args.threads)
        else:
            outputs = run_homodyne(scenario, prefix, meta)
        manifest = RunManifest(tool_version=TOOL_VERSION, command=args.command,
                               scenario_hash=sha, seed=seed,
                               duration_s=time.monotonic() - started,
                               outputs=outputs)
        with open(f"{prefix}.manifest.json", "w") as fh:
            fh.write(manifest.to_json() + "\n")
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except PulseshapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    return EXIT_OK


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()

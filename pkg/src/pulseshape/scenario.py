"""Scenario files, run manifests, and their JSON (de)serialization.

A scenario is a JSON object describing which profiles to evaluate,
which offset/fluctuation axes to sweep, the Monte-Carlo configuration,
and where to write outputs.  Unknown keys are a hard error: a silent
typo in a sweep axis is the main reproduction hazard.  The scenario
hash is a SHA-256 over the canonical (sorted-key) JSON encoding, so it
is stable under key reordering.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ScenarioError
from .profiles import ProfileKind

TOOL_VERSION = "0.1.0"

_SPACINGS = ("linear", "log")


@dataclass(frozen=True)
class Axis:
    """A sweep axis: ``points`` values from ``start`` to ``stop``."""

    start: float
    stop: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.points < 1:
            raise ScenarioError(f"axis points must be >= 1, got {self.points}")
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise ScenarioError("axis range must be finite")
        if self.spacing not in _SPACINGS:
            raise ScenarioError(f"axis spacing must be one of {_SPACINGS}")
        if self.spacing == "log" and (self.start <= 0 or self.stop <= 0):
            raise ScenarioError("log-spaced axis requires positive endpoints")

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start], dtype=float)
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class MonteCarloSettings:
    samples: int
    seed: int
    bins: int = 1024
    chunk: int = 1 << 18


@dataclass(frozen=True)
class HomodyneSettings:
    signal_modulus: float
    signal_phase: float = 0.0
    lo_modulus: float = 1e4
    lo_phase: float = 1.5707963267948966  # pi/2: quadrature with maximal mean


@dataclass(frozen=True)
class Scenario:
    profiles: tuple[ProfileKind, ...] = (ProfileKind.GAUSSIAN,
                                         ProfileKind.DOUBLE_LORENTZIAN,
                                         ProfileKind.SINGLE_LORENTZIAN)
    carrier_ratio: float = 1e5
    bandwidth: float = 1.0
    doppler_axis: Axis | None = None
    delay_axis: Axis | None = None
    sigma_doppler_axis: Axis | None = None
    sigma_delay_axis: Axis | None = None
    monte_carlo: MonteCarloSettings | None = None
    homodyne: HomodyneSettings | None = None
    output_prefix: str = "out"


def _check_keys(obj: dict, allowed: set[str], context: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ScenarioError(f"unknown key(s) in {context}: {sorted(unknown)}")


def _parse_axis(obj, context: str) -> Axis:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{context} must be an object")
    _check_keys(obj, {"start", "stop", "points", "spacing"}, context)
    for key in ("start", "stop", "points"):
        if key not in obj:
            raise ScenarioError(f"{context} is missing required key '{key}'")
    return Axis(start=float(obj["start"]), stop=float(obj["stop"]),
                points=int(obj["points"]), spacing=obj.get("spacing", "linear"))


def parse_scenario(obj: dict) -> Scenario:
    if not isinstance(obj, dict):
        raise ScenarioError("scenario must be a JSON object")
    allowed = {"profiles", "carrier_ratio", "bandwidth", "doppler_axis",
               "delay_axis", "sigma_doppler_axis", "sigma_delay_axis",
               "monte_carlo", "homodyne", "output_prefix"}
    _check_keys(obj, allowed, "scenario")

    kwargs = {}
    if "profiles" in obj:
        try:
            kwargs["profiles"] = tuple(ProfileKind(name) for name in obj["profiles"])
        except ValueError as exc:
            raise ScenarioError(f"unknown profile kind: {exc}") from None
        if not kwargs["profiles"]:
            raise ScenarioError("profiles must be nonempty")
    for key in ("carrier_ratio", "bandwidth"):
        if key in obj:
            val = float(obj[key])
            if not val > 0:
                raise ScenarioError(f"{key} must be positive, got {val}")
            kwargs[key] = val
    for key in ("doppler_axis", "delay_axis", "sigma_doppler_axis", "sigma_delay_axis"):
        if key in obj:
            kwargs[key] = _parse_axis(obj[key], key)
    if "monte_carlo" in obj:
        mc = obj["monte_carlo"]
        _check_keys(mc, {"samples", "seed", "bins", "chunk"}, "monte_carlo")
        for key in ("samples", "seed"):
            if key not in mc:
                raise ScenarioError(f"monte_carlo is missing required key '{key}'")
        kwargs["monte_carlo"] = MonteCarloSettings(
            samples=int(mc["samples"]), seed=int(mc["seed"]),
            bins=int(mc.get("bins", 1024)), chunk=int(mc.get("chunk", 1 << 18)))
    if "homodyne" in obj:
        h = obj["homodyne"]
        _check_keys(h, {"signal_modulus", "signal_phase", "lo_modulus", "lo_phase"},
                    "homodyne")
        if "signal_modulus" not in h:
            raise ScenarioError("homodyne is missing required key 'signal_modulus'")
        defaults = HomodyneSettings(signal_modulus=0.0)
        kwargs["homodyne"] = HomodyneSettings(
            signal_modulus=float(h["signal_modulus"]),
            signal_phase=float(h.get("signal_phase", defaults.signal_phase)),
            lo_modulus=float(h.get("lo_modulus", defaults.lo_modulus)),
            lo_phase=float(h.get("lo_phase", defaults.lo_phase)))
    if "output_prefix" in obj:
        kwargs["output_prefix"] = str(obj["output_prefix"])
    return Scenario(**kwargs)


def scenario_to_dict(s: Scenario) -> dict:
    out: dict = {"profiles": [k.value for k in s.profiles],
                 "carrier_ratio": s.carrier_ratio,
                 "bandwidth": s.bandwidth,
                 "output_prefix": s.output_prefix}
    for key in ("doppler_axis", "delay_axis", "sigma_doppler_axis", "sigma_delay_axis"):
        axis = getattr(s, key)
        if axis is not None:
            out[key] = asdict(axis)
    if s.monte_carlo is not None:
        out["monte_carlo"] = asdict(s.monte_carlo)
    if s.homodyne is not None:
        out["homodyne"] = asdict(s.homodyne)
    return out


def serialize_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), sort_keys=True, indent=2)


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON in {path}: line {exc.lineno}, "
                            f"column {exc.colno}: {exc.msg}") from None
    return parse_scenario(obj)


def scenario_hash(s: Scenario) -> str:
    canonical = json.dumps(scenario_to_dict(s), sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass
class RunManifest:
    """Machine-readable record of one CLI run."""

    tool_version: str
    command: str
    scenario_hash: str
    seed: int | None
    duration_s: float = 0.0
    outputs: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

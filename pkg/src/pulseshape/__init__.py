"""Pulse-shape robustness analysis for Doppler-shifted, delayed optical pulses."""

from .ambiguity import (AmbiguityValue, DopplerRegime, OffsetPoint,
                        QuadratureConfig, asymptotic_woodward, exact_ambiguity,
                        quadrature_ambiguity, quadrature_for_profile, woodward,
                        wrap_phase)
from .capacity import (Binding, CapacityBound, FluctuationKind, PhaseSampleSet,
                       TransmissivitySampleSet, asymptotic_capacity,
                       dephasing_capacity, fading_plob, min_composition, plob,
                       systematic_loss)
from .errors import (InvalidParameterError, PulseshapeError, QuadratureError,
                     ScenarioError)
from .homodyne import (CoherentAmplitude, HomodyneStats, OverlapGamma,
                       beamsplitter_out, difference_stats,
                       equivalent_channel_stats, overlap_from_offsets,
                       port_means, strong_lo_snr)
from .profiles import (ProfileKind, SpectralProfile, make_profile,
                       power_spectral_density, spectral_amplitude,
                       temporal_amplitude)
from .scenario import (Axis, HomodyneSettings, MonteCarloSettings, RunManifest,
                       Scenario, load_scenario, parse_scenario, scenario_hash,
                       serialize_scenario)
from .stochastic import (FluctuationSpec, McConfig, McResult, capacity_grid,
                         capacity_ratio_grid, cell_seed, sample_offsets,
                         simulate_channel)

__version__ = "0.1.0"

"""Intrinsic-decoherence dynamics of three coupled oscillators."""

from ._core import (
    CoherentOracle,
    FockSeriesEngine,
    PhotonNumbers,
    ScenarioConfig,
    SpectralData,
    SystemParams,
    TruncationError,
    ConfigError,
    asymptotic_time,
    coherent_oracle,
    damping_factor,
    effective_frequencies,
    mean_photon_numbers,
    mixing_angle,
    per_k_expectations,
    poisson_kmax,
    preset,
    presets,
    run_scenario,
    schrodinger_occupations,
    single_particle_matrix,
    steady_n3,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]

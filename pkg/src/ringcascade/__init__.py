"""Cascaded-SFWM photon-triplet simulator for dual microring resonators."""

__version__ = "0.1.0"

from .device import (BandId, BandSpec, ChannelId, DeviceSpec, RingResonance,
                     asymptotic_coefficient, check_energy_conservation,
                     decay_rate, dispersion_omega, escape_efficiency,
                     field_enhancement)
from .pump import (PumpSpec, PumpSpectrum, amplitude_from_drive,
                   average_power, gaussian_spectrum, intracavity_peak_power,
                   pulse_energy)
from .wavefunctions import (BiphotonAmplitude, ConvergenceError, GridSet,
                            KGrid, TriphotonAmplitude, channel_probabilities,
                            compute_bwf, compute_twf,
                            two_pair_probability_bound)
from .analysis import (PurityReport, RateReport, projections_and_isosurface,
                       purity, reduced_density, triplet_rate)
from .kernels import Chi3Tensor, ModeProfileGrid, gamma_nl, k1_profile, k2_profile
from .config import ConfigError, SimulationConfig
from .presets import build_preset

__all__ = [
    "BandId", "BandSpec", "ChannelId", "DeviceSpec", "RingResonance",
    "asymptotic_coefficient", "check_energy_conservation", "decay_rate",
    "dispersion_omega", "escape_efficiency", "field_enhancement",
    "PumpSpec", "PumpSpectrum", "amplitude_from_drive", "average_power",
    "gaussian_spectrum", "intracavity_peak_power", "pulse_energy",
    "BiphotonAmplitude", "ConvergenceError", "GridSet", "KGrid",
    "TriphotonAmplitude", "channel_probabilities", "compute_bwf",
    "compute_twf", "two_pair_probability_bound",
    "PurityReport", "RateReport", "projections_and_isosurface", "purity",
    "reduced_density", "triplet_rate",
    "Chi3Tensor", "ModeProfileGrid", "gamma_nl", "k1_profile", "k2_profile",
    "ConfigError", "SimulationConfig", "build_preset",
]

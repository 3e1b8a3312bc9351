"""Finite-time qubit Otto engine: work-heat statistics and fluctuation relations."""
from .cycle import HistoryRecord, PeakSet, discrete_joint, enumerate_histories, run_cycle, stroke_energies
from .distrib import (
    broaden_joint,
    efficiency_distribution,
    efficiency_oracle,
    efficiency_peak_L,
    eta_moments,
    macroscopic,
    pearson,
)
from .fluct import detailed_ft_check, entropy_production, integral_ft, reverse_peaks
from .qdyn import DriveProtocol, TransitionProbabilities, eigensystem, propagate, transition_probability
from .thermal import ThermalConfig, apply_channel, gibbs_populations, kraus_thermalization

__version__ = "0.1.0"

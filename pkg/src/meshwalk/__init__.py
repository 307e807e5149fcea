"""
meshwalk
========

Discrete-time photonic quantum walks on a two-band mesh lattice, with
drifting complex potentials and the tools to tell whether they are invisible.
"""

from __future__ import annotations

__version__ = "0.1.0"

import logging

from .bands import (
    ChannelSearchError,
    ChannelSet,
    MovingFrameParams,
    band_table,
    enumerate_channels,
    group_velocity,
    moving_bloch_amplitudes,
    quasi_energy,
)
from .born import BornPrediction, born_weights
from .config import ConfigError, ExperimentFile, load_config
from .harness import (
    DeltaExcitation,
    ExperimentConfig,
    ExperimentResult,
    IncompleteScatteringError,
    RecordConfig,
    WavePacketExcitation,
    make_wavepacket,
    residual_series,
    run_pair,
    run_sweep,
    simulate_pair,
    transmitted_channel_analysis,
)
from .lattice import (
    Band,
    CoinConfig,
    LatticeOverflowError,
    LatticeState,
    band_energy,
    bloch_eigenpair,
    evolve,
    step,
)
from .potentials import (
    DriftingPotential,
    FFTGrid,
    KKMultiPole,
    Pole,
    RealPartOf,
    Tabulated,
    eval_shape,
    hermitian_truncation,
    random_multipole,
    spectrum,
    spectrum_analytic,
    spectrum_fft,
)
from .writers import read_field_map, write_field_map, write_summary

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

__all__ = [
    "__version__",
    "Band",
    "CoinConfig",
    "LatticeState",
    "LatticeOverflowError",
    "step",
    "evolve",
    "band_energy",
    "bloch_eigenpair",
    "Pole",
    "KKMultiPole",
    "RealPartOf",
    "Tabulated",
    "DriftingPotential",
    "FFTGrid",
    "eval_shape",
    "spectrum",
    "spectrum_analytic",
    "spectrum_fft",
    "hermitian_truncation",
    "random_multipole",
    "MovingFrameParams",
    "ChannelSet",
    "ChannelSearchError",
    "quasi_energy",
    "group_velocity",
    "moving_bloch_amplitudes",
    "enumerate_channels",
    "band_table",
    "BornPrediction",
    "born_weights",
    "DeltaExcitation",
    "WavePacketExcitation",
    "RecordConfig",
    "ExperimentConfig",
    "ExperimentResult",
    "IncompleteScatteringError",
    "make_wavepacket",
    "simulate_pair",
    "run_pair",
    "run_sweep",
    "residual_series",
    "transmitted_channel_analysis",
    "ConfigError",
    "ExperimentFile",
    "load_config",
    "write_field_map",
    "read_field_map",
    "write_summary",
]

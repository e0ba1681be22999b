"""Shaping and analysis of multimode single-photon states."""

from .cavity import CavityParams, apply, group_delay, pulse_stats, transfer_function
from .codes import (
    CodeBook,
    SymbolVector,
    crosstalk_matrix,
    decode,
    encode,
    make_timebin_codebook,
    orthonormalize,
)
from .fm import (
    ModulationParams,
    OracleConfig,
    oracle_run,
    oracle_simulate,
    perturbative_spectrum_paper,
    perturbative_spectrum_two_sideband,
    sideband_report,
)
from .specgrid import (
    SampledGrid,
    SpectralAmplitude,
    TimeAmplitude,
    gaussian_amplitude,
    inner_product,
    normalize,
    to_freq,
    to_time,
)
from .states import CoherentState, SinglePhotonState, count_rate, intensity_spectrum, mean_field

__version__ = "0.1.0"

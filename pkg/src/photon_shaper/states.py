"""Single-photon and multimode coherent states in amplitude representation.

Both states are carried by a single spectral amplitude. For a coherent state
the amplitude is the displacement alpha(omega) and fixes the mean field. For a
single photon it is the probability amplitude nu(omega) and the mean field
vanishes identically. The count rate is |amplitude(t)|^2 in both cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .specgrid import SpectralAmplitude, TimeAmplitude, to_time

__all__ = [
    "SinglePhotonState",
    "CoherentState",
    "mean_field",
    "count_rate",
    "intensity_spectrum",
    "photon_number",
]

NORM_TOL = 1e-9


@dataclass(frozen=True)
class SinglePhotonState:
    """One excitation spread over frequency modes with amplitude ``nu``."""

    nu: SpectralAmplitude

    def __post_init__(self):
        n2 = self.nu.norm_squared()
        if abs(n2 - 1.0) > NORM_TOL:
            raise ValueError(f"single-photon amplitude must be normalised, got |nu|^2 = {n2!r}")

    @property
    def grid(self):
        return self.nu.grid


@dataclass(frozen=True)
class CoherentState:
    """Displaced vacuum; ``alpha`` need not be normalised."""

    alpha: SpectralAmplitude

    @property
    def grid(self):
        return self.alpha.grid

    @property
    def mean_photon_number(self) -> float:
        return self.alpha.norm_squared()


State = Union[SinglePhotonState, CoherentState]


def _amplitude(state: State) -> SpectralAmplitude:
    if isinstance(state, SinglePhotonState):
        return state.nu
    if isinstance(state, CoherentState):
        return state.alpha
    raise TypeError(f"not a state: {state!r}")


def mean_field(state: State) -> TimeAmplitude:
    """<a(t)> in the rotating frame. Identically zero for a single photon."""
    if isinstance(state, SinglePhotonState):
        return TimeAmplitude(state.grid, np.zeros(state.grid.n_points))
    return to_time(_amplitude(state))


def count_rate(state: State) -> np.ndarray:
    """Photon detection probability per unit time n(t) on ``grid.t``."""
    return np.abs(to_time(_amplitude(state)).values) ** 2


def intensity_spectrum(state: State) -> np.ndarray:
    """<a^dag(omega) a(omega)> on ``grid.omega``."""
    return np.abs(_amplitude(state).values) ** 2


def photon_number(state: State) -> float:
    return _amplitude(state).norm_squared()

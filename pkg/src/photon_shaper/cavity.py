"""Reflection off an empty one-sided cavity.

In the frame of the input carrier the cavity acts as an all-pass filter

    H(omega) = (gamma/2 + i(omega - delta)) / (gamma/2 - i(omega - delta))

with ``delta = omega_c - omega_i``. A narrowband pulse on resonance is delayed
by ``4/gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .specgrid import SampledGrid, SpectralAmplitude, _weighted_moments

__all__ = ["CavityParams", "transfer_function", "apply", "group_delay", "pulse_stats"]


@dataclass(frozen=True)
class CavityParams:
    gamma: float
    delta: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be positive and finite, got {self.gamma}")
        if not np.isfinite(self.delta):
            raise ValueError(f"delta must be finite, got {self.delta}")


def transfer_function(p: CavityParams, omega):
    """Complex reflection coefficient H(omega); scalar or array."""
    x = np.asarray(omega, dtype=float) - p.delta
    h = (0.5 * p.gamma + 1j * x) / (0.5 * p.gamma - 1j * x)
    return complex(h) if np.ndim(h) == 0 else h


def apply(p: CavityParams, nu: SpectralAmplitude) -> SpectralAmplitude:
    """Reflected amplitude H(omega) nu(omega)."""
    return SpectralAmplitude(nu.grid, transfer_function(p, nu.omega) * nu.values)


def group_delay(p: CavityParams, omega):
    """d arg H / d omega = (4/gamma) / (1 + 4 (omega - delta)^2 / gamma^2)."""
    x = np.asarray(omega, dtype=float) - p.delta
    tau = (4.0 / p.gamma) / (1.0 + 4.0 * x**2 / p.gamma**2)
    return float(tau) if np.ndim(tau) == 0 else tau


def pulse_stats(grid: SampledGrid, n: np.ndarray) -> tuple[float, float]:
    """Mean arrival time and RMS width of a count-rate trace n(t).

    Raises
    ------
    ValueError
        If ``n`` carries no probability mass.
    """
    n = np.asarray(n, dtype=float)
    if n.shape != (grid.n_points,):
        raise ValueError("count rate does not match the grid")
    if not n.sum() * grid.delta_t > 0:
        raise ValueError("count rate has zero mass")
    return _weighted_moments(grid.t, n)

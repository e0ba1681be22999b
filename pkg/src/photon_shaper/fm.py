"""Intracavity frequency modulation of a single-photon pulse.

The cavity frequency is modulated as ``f(t) = epsilon * cos(big_omega * t)``.
Three routes to the output spectrum are provided:

* :func:`perturbative_spectrum_paper` -- the textbook single-sideband
  first-order formula, kept verbatim for comparison.
* :func:`perturbative_spectrum_two_sideband` -- first-order result with both
  exponentials of the cosine and the cavity response at the input and the
  scattered frequency.
* :func:`oracle_simulate` -- direct RK4 integration of the single-excitation
  amplitude through the time-varying cavity,

      d alpha/dt = -(i f(t) + i delta + gamma/2) alpha + sqrt(gamma) nu_in(t)
      nu_out(t)  = sqrt(gamma) alpha(t) - nu_in(t)

  starting from an empty cavity. This is the reference the formulas are
  judged against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cavity import CavityParams
from .specgrid import (
    SampledGrid,
    SpectralAmplitude,
    TimeAmplitude,
    _weighted_moments,
    to_freq,
    to_time,
)

__all__ = [
    "ModulationParams",
    "OracleConfig",
    "OracleResult",
    "SidebandReport",
    "IntegrationError",
    "perturbative_spectrum_paper",
    "perturbative_spectrum_two_sideband",
    "pulse_support",
    "oracle_run",
    "oracle_simulate",
    "sideband_report",
]

RING_DOWN = 20.0  # in units of 1/gamma
SUPPORT_TAIL = 1e-12
DRIFT_LIMIT = 1e-4


class IntegrationError(RuntimeError):
    """The oracle lost photon number beyond what the integrator can explain."""


@dataclass(frozen=True)
class ModulationParams:
    epsilon: float
    big_omega: float

    def __post_init__(self):
        if not (np.isfinite(self.epsilon) and self.epsilon >= 0):
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if not (np.isfinite(self.big_omega) and self.big_omega > 0):
            raise ValueError(f"big_omega must be > 0, got {self.big_omega}")

    def is_perturbative(self, p: CavityParams) -> bool:
        return self.epsilon <= p.gamma / 10


def _shift_bins(grid: SampledGrid, m: ModulationParams) -> int:
    ratio = m.big_omega / grid.delta_omega
    s = int(round(ratio))
    if abs(ratio - s) > 1e-6 * max(1.0, abs(ratio)):
        raise ValueError(
            f"big_omega={m.big_omega} is not a multiple of delta_omega={grid.delta_omega}"
        )
    if s >= grid.n_points // 2:
        raise ValueError("big_omega lies outside the frequency grid")
    return s


def _shifted(x: np.ndarray, s: int) -> np.ndarray:
    """y[j] = x[j - s], zero-filled."""
    y = np.zeros_like(x)
    if s > 0:
        y[s:] = x[:-s]
    elif s < 0:
        y[:s] = x[-s:]
    else:
        y[:] = x
    return y


def _require_resonant(p: CavityParams):
    if p.delta != 0:
        raise ValueError("perturbative formulas assume the carrier sits on the cavity resonance (delta = 0)")


def perturbative_spectrum_paper(
    p: CavityParams, m: ModulationParams, nu: SpectralAmplitude
) -> np.ndarray:
    """(eps gamma / (gamma^2/4 + omega^2))^2 |nu(omega - Omega)|^2 + |nu(omega)|^2."""
    _require_resonant(p)
    s = _shift_bins(nu.grid, m)
    w = nu.omega
    power = np.abs(nu.values) ** 2
    weight = (m.epsilon * p.gamma / (p.gamma**2 / 4 + w**2)) ** 2
    return weight * _shifted(power, s) + power


def perturbative_spectrum_two_sideband(
    p: CavityParams, m: ModulationParams, nu: SpectralAmplitude
) -> np.ndarray:
    """First-order spectrum with sidebands at both +Omega and -Omega.

    A photon entering at ``omega -/+ Omega`` is scattered to ``omega`` with
    amplitude ``-i (eps gamma / 2) / ((gamma/2 - i omega)(gamma/2 - i(omega -/+ Omega)))``.
    """
    _require_resonant(p)
    s = _shift_bins(nu.grid, m)
    w = nu.omega
    g2 = p.gamma**2 / 4
    power = np.abs(nu.values) ** 2
    coeff = (m.epsilon * p.gamma / 2) ** 2 / (g2 + w**2)
    upper = _shifted(power, s) / (g2 + (w - m.big_omega) ** 2)
    lower = _shifted(power, -s) / (g2 + (w + m.big_omega) ** 2)
    return coeff * (upper + lower) + power


@dataclass(frozen=True)
class OracleConfig:
    """Integrator settings: fixed RK4 step ``dt`` over ``window = (t_start, t_end)``."""

    dt: float
    window: tuple[float, float]
    method: str = "rk4"

    @staticmethod
    def max_step(grid: SampledGrid, p: CavityParams, m: ModulationParams) -> float:
        return min(0.01 * 2 * np.pi / m.big_omega, 0.01 * 2 / p.gamma, 0.1 * grid.delta_t)

    @classmethod
    def for_pulse(
        cls,
        p: CavityParams,
        m: ModulationParams,
        nu: SpectralAmplitude,
        substeps: Optional[int] = None,
        margin: float = 0.0,
    ) -> "OracleConfig":
        """Smallest valid window around ``nu`` and the coarsest valid step.

        ``substeps`` fixes the number of RK4 steps per grid sample instead.
        """
        grid = nu.grid
        if substeps is None:
            substeps = math.ceil(grid.delta_t / cls.max_step(grid, p, m) - 1e-9)
        lo, hi = pulse_support(nu)
        t_start = lo - margin
        t_end = hi + RING_DOWN / p.gamma + margin
        i0 = math.floor(t_start / grid.delta_t)
        i1 = math.ceil(t_end / grid.delta_t)
        return cls(dt=grid.delta_t / substeps, window=(i0 * grid.delta_t, i1 * grid.delta_t))

    def substeps(self, grid: SampledGrid) -> int:
        ratio = grid.delta_t / self.dt
        r = int(round(ratio))
        if r < 1 or abs(ratio - r) > 1e-9 * ratio:
            raise ValueError("dt must divide the grid time step delta_t")
        return r

    def validate(self, p: CavityParams, m: ModulationParams, nu: SpectralAmplitude) -> None:
        grid = nu.grid
        if self.method != "rk4":
            raise ValueError(f"unknown integration method {self.method!r}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.dt > self.max_step(grid, p, m) * (1 + 1e-9):
            raise ValueError(
                f"dt={self.dt} exceeds the step limit {self.max_step(grid, p, m)}"
            )
        self.substeps(grid)
        t_start, t_end = self.window
        if not t_start < t_end:
            raise ValueError("window must satisfy t_start < t_end")
        if t_start < grid.t[0] - 1e-9 * grid.delta_t or t_end > grid.t[-1] + 1e-9 * grid.delta_t:
            raise ValueError("window extends beyond the time grid")
        lo, hi = pulse_support(nu)
        tol = 1e-9 * grid.delta_t
        if t_start > lo + tol:
            raise ValueError(f"window starts at {t_start} after the pulse begins ({lo})")
        if t_end < hi + RING_DOWN / p.gamma - tol:
            raise ValueError(
                f"window ends at {t_end}, ring-down requires t_end >= {hi + RING_DOWN / p.gamma}"
            )


@dataclass(frozen=True)
class OracleResult:
    nu_out: SpectralAmplitude
    nu_out_t: TimeAmplitude
    residual_intracavity: float
    input_norm2: float
    output_norm2: float

    @property
    def conservation_residual(self) -> float:
        """|‖nu_out‖^2 - ‖nu_in‖^2|."""
        return abs(self.output_norm2 - self.input_norm2)


def pulse_support(nu: SpectralAmplitude, tail: float = SUPPORT_TAIL) -> tuple[float, float]:
    """Time interval outside which at most ``tail`` of |nu(t)|^2 lies."""
    g = nu.grid
    mass = np.abs(to_time(nu).values) ** 2 * g.delta_t
    total = mass.sum()
    if not total > 0:
        raise ValueError("pulse has zero norm")
    cum = np.cumsum(mass) / total
    lo = int(np.searchsorted(cum, tail / 2, side="left"))
    hi = int(np.searchsorted(cum, 1 - tail / 2, side="left"))
    hi = min(hi, g.n_points - 1)
    return float(g.t[lo]), float(g.t[hi])


def _fine_input(nu: SpectralAmplitude, refine: int) -> tuple[np.ndarray, float]:
    """Band-limited interpolant of nu(t) on a grid ``refine`` times finer.

    Returns samples and their spacing; sample ``refine * j`` coincides with
    ``grid.t[j]``.
    """
    g = nu.grid
    n = g.n_points
    big = refine * n
    padded = np.zeros(big, dtype=np.complex128)
    padded[big // 2 - n // 2 : big // 2 - n // 2 + n] = nu.values
    vals = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(padded)))
    return vals * g.delta_omega / np.sqrt(2 * np.pi), g.delta_t / refine


def oracle_run(
    p: CavityParams,
    m: ModulationParams,
    nu: SpectralAmplitude,
    cfg: Optional[OracleConfig] = None,
) -> OracleResult:
    """Integrate the modulated cavity and return the full accounting.

    Raises
    ------
    IntegrationError
        If the photon-number balance drifts by more than ``1e-4``.
    """
    if cfg is None:
        cfg = OracleConfig.for_pulse(p, m, nu)
    cfg.validate(p, m, nu)
    g = nu.grid
    r = cfg.substeps(g)
    fine, _ = _fine_input(nu, 2 * r)
    half = cfg.dt / 2

    i0 = int(round(cfg.window[0] / g.delta_t)) + g.n_points // 2
    i1 = int(round(cfg.window[1] / g.delta_t)) + g.n_points // 2
    n_steps = (i1 - i0) * r
    k0 = 2 * r * i0  # index into the fine grid
    u = fine[k0 : k0 + 2 * n_steps + 1]
    t_fine = g.t[i0] + half * np.arange(2 * n_steps + 1)

    sg = np.sqrt(p.gamma)
    coef = -(1j * (m.epsilon * np.cos(m.big_omega * t_fine) + p.delta) + p.gamma / 2)
    drive = sg * u

    # RK4 on a linear ODE: alpha_{k+1} = P_k alpha_k + Q_k
    c0, c1, c2 = coef[0:-1:2], coef[1::2], coef[2::2]
    d0, d1, d2 = drive[0:-1:2], drive[1::2], drive[2::2]
    h = cfg.dt

    def step(a, with_drive):
        s0, s1, s2 = (d0, d1, d2) if with_drive else (0.0, 0.0, 0.0)
        k1 = c0 * a + s0
        k2 = c1 * (a + half * k1) + s1
        k3 = c1 * (a + half * k2) + s1
        k4 = c2 * (a + h * k3) + s2
        return a + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)

    P = step(np.ones(n_steps, dtype=np.complex128), False).tolist()
    Q = step(np.zeros(n_steps, dtype=np.complex128), True).tolist()

    alpha = np.empty(i1 - i0 + 1, dtype=np.complex128)
    a = 0j
    alpha[0] = a
    j = 1
    for k in range(n_steps):
        a = P[k] * a + Q[k]
        if (k + 1) % r == 0:
            alpha[j] = a
            j += 1

    out_t = np.zeros(g.n_points, dtype=np.complex128)
    out_t[i0 : i1 + 1] = sg * alpha - u[:: 2 * r]
    nu_out_t = TimeAmplitude(g, out_t)
    result = OracleResult(
        nu_out=to_freq(nu_out_t),
        nu_out_t=nu_out_t,
        residual_intracavity=float(abs(a) ** 2),
        input_norm2=nu.norm_squared(),
        output_norm2=nu_out_t.norm_squared(),
    )
    drift = result.conservation_residual - result.residual_intracavity
    if abs(drift) > DRIFT_LIMIT * max(1.0, result.input_norm2):
        raise IntegrationError(f"photon number drifted by {drift:.3e}")
    return result


def oracle_simulate(
    p: CavityParams,
    m: ModulationParams,
    nu: SpectralAmplitude,
    cfg: Optional[OracleConfig] = None,
) -> SpectralAmplitude:
    """Output amplitude nu_out(omega) from the time-domain integration."""
    return oracle_run(p, m, nu, cfg).nu_out


@dataclass(frozen=True)
class SidebandReport:
    carrier_mass: float
    upper_mass: float
    lower_mass: float


def sideband_report(grid: SampledGrid, spectrum: np.ndarray, m: ModulationParams) -> SidebandReport:
    """Integrate ``spectrum`` over half-width Omega/2 windows at 0, +Omega, -Omega."""
    spectrum = np.asarray(spectrum, dtype=float)
    if spectrum.shape != (grid.n_points,):
        raise ValueError("spectrum does not match the grid")
    w = grid.omega
    half = m.big_omega / 2
    if 1.5 * m.big_omega > -w[0] or 1.5 * m.big_omega > w[-1] + grid.delta_omega:
        raise ValueError("sideband windows extend beyond the frequency grid")

    tol = 1e-9 * grid.delta_omega

    def mass(centre):
        # samples sitting on a window edge count half, so adjacent windows share them
        dist = np.abs(w - centre)
        weight = np.where(dist < half - tol, 1.0, np.where(dist <= half + tol, 0.5, 0.0))
        return float(np.dot(spectrum, weight) * grid.delta_omega), weight

    carrier, weight = mass(0.0)
    if carrier > 0:
        _, width = _weighted_moments(w, spectrum * weight)
        if m.big_omega < 4 * width:
            raise ValueError(
                f"carrier RMS width {width:.3g} too large for Omega={m.big_omega}: windows overlap"
            )
    upper, _ = mass(m.big_omega)
    lower, _ = mass(-m.big_omega)
    return SidebandReport(carrier, upper, lower)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from photon_shaper.specgrid import (
    GridMismatchError,
    SampledGrid,
    SpectralAmplitude,
    TimeAmplitude,
    gaussian_amplitude,
    inner_product,
    is_resolved,
    normalize,
    rms_width,
    to_freq,
    to_time,
)


def rel_l2(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def test_grid_reciprocity():
    g = SampledGrid(4096, 0.0137)
    assert g.delta_omega * g.delta_t * g.n_points == pytest.approx(2 * np.pi, rel=1e-15)
    assert g.omega[0] == pytest.approx(-2048 * 0.0137)
    assert g.omega[-1] == pytest.approx(2047 * 0.0137)
    assert g.t[g.n_points // 2] == 0.0


@pytest.mark.parametrize("n, dw", [(4, 1.0), (16, 0.0), (16, -1.0), (16, np.nan)])
def test_grid_rejects_bad_parameters(n, dw):
    with pytest.raises(ValueError):
        SampledGrid(n, dw)


def test_grid_and_amplitudes_are_immutable(small_grid):
    nu = gaussian_amplitude(small_grid, 1.0)
    with pytest.raises(AttributeError):
        nu.values = np.zeros(small_grid.n_points)
    with pytest.raises(ValueError):
        nu.values[0] = 1.0
    with pytest.raises(Exception):
        small_grid.n_points = 8


def test_gaussian_pair_closed_form(desk_grid):
    # nu(omega) = (pi s^2)^(-1/4) exp(-omega^2/2s^2)  <->  nu(t) = (s^2/pi)^(1/4) exp(-s^2 t^2/2)
    for sigma in (0.05, 0.3, 1.0):
        nu_t = to_time(gaussian_amplitude(desk_grid, sigma))
        t = desk_grid.t
        exact = (sigma**2 / np.pi) ** 0.25 * np.exp(-(sigma**2) * t**2 / 2)
        assert np.max(np.abs(nu_t.values - exact)) < 1e-12


def test_zero_maps_to_zero(small_grid):
    z = SpectralAmplitude(small_grid, np.zeros(small_grid.n_points))
    assert not np.any(to_time(z).values)
    assert not np.any(to_freq(to_time(z)).values)


def test_impulse_at_carrier_has_constant_modulus(small_grid):
    vals = np.zeros(small_grid.n_points)
    vals[small_grid.n_points // 2] = 1.0
    mod = np.abs(to_time(SpectralAmplitude(small_grid, vals)).values)
    assert np.ptp(mod) < 1e-15
    assert mod[0] == pytest.approx(small_grid.delta_omega / np.sqrt(2 * np.pi))


def test_round_trip_gaussian(desk_grid):
    nu = gaussian_amplitude(desk_grid, 0.4, t0=12.0)
    assert rel_l2(to_freq(to_time(nu)).values, nu.values) < 1e-12


def test_shift_theorem(desk_grid):
    # nu(t - t0) transforms to exp(+i omega t0) nu(omega); built in the time domain
    sigma, t0 = 0.5, 40.0
    t = desk_grid.t
    shifted_t = (sigma**2 / np.pi) ** 0.25 * np.exp(-(sigma**2) * (t - t0) ** 2 / 2)
    got = to_freq(TimeAmplitude(desk_grid, shifted_t))
    expected = gaussian_amplitude(desk_grid, sigma).values * np.exp(1j * desk_grid.omega * t0)
    assert np.max(np.abs(got.values - expected)) < 1e-12


def test_inner_product_examples(small_grid):
    a = gaussian_amplitude(small_grid, 1.0)
    assert inner_product(a, a) == pytest.approx(1.0, abs=1e-12)
    assert inner_product(a, 1j * a) == pytest.approx(1j, abs=1e-12)
    w = small_grid.omega
    left = SpectralAmplitude(small_grid, np.where(w < 0, 1.0, 0.0))
    right = SpectralAmplitude(small_grid, np.where(w > 0, 1.0, 0.0))
    assert inner_product(left, right) == 0


def test_inner_product_grid_mismatch():
    a = gaussian_amplitude(SampledGrid(64, 0.1), 1.0)
    b = gaussian_amplitude(SampledGrid(64, 0.2), 1.0)
    with pytest.raises(GridMismatchError):
        inner_product(a, b)
    with pytest.raises(GridMismatchError):
        a + b


def test_normalize(small_grid):
    nu = gaussian_amplitude(small_grid, 1.0)
    assert np.allclose(normalize(2 * nu).values, nu.values, atol=1e-15)
    assert np.allclose(normalize(nu).values, nu.values, atol=1e-15)
    assert abs(normalize(3.7j * nu).norm_squared() - 1) < 1e-12
    with pytest.raises(ValueError):
        normalize(0 * nu)


def test_resolution_guard(desk_grid):
    assert is_resolved(gaussian_amplitude(desk_grid, 0.1))
    assert not is_resolved(gaussian_amplitude(desk_grid, 20.0))   # too wide in frequency
    assert not is_resolved(gaussian_amplitude(desk_grid, 0.001))  # too long in time


def test_rms_width_of_gaussian(desk_grid):
    # |nu(omega)|^2 ~ exp(-omega^2/sigma^2) has RMS width sigma/sqrt(2)
    assert rms_width(gaussian_amplitude(desk_grid, 0.2)) == pytest.approx(0.2 / np.sqrt(2), rel=1e-10)


def _random_bandlimited(grid, seed, width=0.25):
    rng = np.random.default_rng(seed)
    n = grid.n_points
    vals = (rng.normal(size=n) + 1j * rng.normal(size=n)) * np.exp(-(grid.omega / (width * grid.omega[-1])) ** 2)
    return SpectralAmplitude(grid, vals)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), scale=st.floats(1e-3, 1e3))
def test_parseval_and_round_trip(seed, scale):
    g = SampledGrid(512, 0.07)
    nu = scale * _random_bandlimited(g, seed)
    nu_t = to_time(nu)
    nf, nt = nu.norm_squared(), nu_t.norm_squared()
    assert abs(nf - nt) <= 1e-10 * max(1.0, nf)
    assert rel_l2(to_freq(nu_t).values, nu.values) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(
    seeds=st.tuples(*[st.integers(0, 2**32 - 1)] * 3),
    c1=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    c2=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
)
def test_inner_product_sesquilinear(seeds, c1, c2):
    g = SampledGrid(256, 0.1)
    a, b, c = (_random_bandlimited(g, s, width=1.0) for s in seeds)
    lhs = inner_product(a, c1 * b + c2 * c)
    rhs = c1 * inner_product(a, b) + c2 * inner_product(a, c)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))
    lhs = inner_product(c1 * b + c2 * c, a)
    rhs = np.conj(c1) * inner_product(b, a) + np.conj(c2) * inner_product(c, a)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))
    assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=1e-12)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from photon_shaper.cavity import CavityParams, apply
from photon_shaper.codes import (
    CodeBook,
    RankDeficientError,
    SymbolVector,
    all_symbol_vectors,
    crosstalk_matrix,
    decode,
    encode,
    make_timebin_codebook,
    orthonormalize,
    overlap_time_domain,
)
from photon_shaper.specgrid import SampledGrid, SpectralAmplitude, gaussian_amplitude, inner_product


@pytest.fixture(scope="module")
def grid():
    return SampledGrid(4096, 0.01)


@pytest.fixture(scope="module")
def book4(grid):
    return make_timebin_codebook(grid, 4, 20.0)


def brute_gram(signals):
    k = len(signals)
    return np.array([[inner_product(signals[i], signals[j]) for j in range(k)] for i in range(k)])


def test_timebin_two_bins_orthogonal(grid):
    book = make_timebin_codebook(grid, 2, 30.0)
    assert abs(inner_product(book.signals[0], book.signals[1])) < 1e-12
    for s in book.signals:
        assert s.norm() == pytest.approx(1.0, abs=1e-12)


def test_timebin_gram_identity(book4):
    gram = brute_gram(book4.signals)
    assert np.max(np.abs(gram - np.eye(4))) <= 1e-10
    assert np.allclose(gram, book4.gram(), atol=1e-14)


def test_timebin_rejects_oversized_bins(grid):
    with pytest.raises(ValueError):
        make_timebin_codebook(grid, 10, grid.time_span / 5)
    with pytest.raises(ValueError):
        make_timebin_codebook(grid, 2, grid.delta_t / 10)


def test_codebook_rejects_non_orthonormal(grid):
    a = gaussian_amplitude(grid, 0.5)
    with pytest.raises(ValueError):
        CodeBook((a, a))


def test_orthonormalize_keeps_orthonormal_input(book4):
    again = orthonormalize(book4.signals)
    for a, b in zip(again.signals, book4.signals):
        assert np.max(np.abs(a.values - b.values)) < 1e-13


def test_orthonormalize_fixes_phase(book4):
    rotated = [s * np.exp(1j * k) for k, s in enumerate(book4.signals)]
    out = orthonormalize(rotated)
    for raw, q in zip(rotated, out.signals):
        ov = inner_product(raw, q)
        assert ov.real > 0 and abs(ov.imag) < 1e-12


def test_orthonormalize_rank_deficient(grid):
    a = gaussian_amplitude(grid, 0.5)
    with pytest.raises(RankDeficientError):
        orthonormalize([a, a])
    with pytest.raises(RankDeficientError):
        orthonormalize([a, 2 * a, gaussian_amplitude(grid, 0.5, t0=3.0)])


def test_orthonormalize_overlapping_gaussians(grid):
    sigma = 0.5
    raw = [gaussian_amplitude(grid, sigma, omega0=-sigma), gaussian_amplitude(grid, sigma, omega0=sigma)]
    assert abs(inner_product(*raw)) > 0.3
    book = orthonormalize(raw)
    assert np.max(np.abs(brute_gram(book.signals) - np.eye(2))) <= 1e-10
    # span preserved: each raw signal is reproduced from the new basis
    for r in raw:
        coeffs = [inner_product(q, r) for q in book.signals]
        rebuilt = sum(c * q.values for c, q in zip(coeffs, book.signals))
        assert np.max(np.abs(rebuilt - r.values)) < 1e-12


def test_orthonormalize_ill_conditioned_family(grid):
    # heavily overlapping family; the second pass keeps the Gram identity tight
    raw = [gaussian_amplitude(grid, 1.0, omega0=0.3 * k) for k in range(6)]  # Gram min singular value ~1e-7
    book = orthonormalize(raw)
    assert np.max(np.abs(book.gram() - np.eye(6))) <= 1e-10


def test_symbol_vector_amplitudes():
    s = SymbolVector((1, 0, 1, 1))
    assert np.allclose(s.amplitudes, np.array([1, 0, 1, 1]) / np.sqrt(3))
    assert str(s) == "1011"
    assert SymbolVector.from_string("0110").bits == (0, 1, 1, 0)
    with pytest.raises(ValueError):
        SymbolVector((0, 2))
    with pytest.raises(ValueError):
        SymbolVector((0, 0)).amplitudes


def test_encode_single_and_pair(book4):
    st1 = encode(book4, SymbolVector((0, 1, 0, 0)))
    assert np.array_equal(st1.nu.values, book4.signals[1].values)
    st2 = encode(book4, SymbolVector((1, 1, 0, 0)))
    expected = (book4.signals[0].values + book4.signals[1].values) / np.sqrt(2)
    assert np.max(np.abs(st2.nu.values - expected)) < 1e-15
    assert st2.nu.norm() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        encode(book4, SymbolVector((0, 0, 0, 0)))
    with pytest.raises(ValueError):
        encode(book4, SymbolVector((1, 0)))


def test_decode_examples(grid):
    book = make_timebin_codebook(grid, 3, 25.0)
    res = decode(book, book.signals[1])
    assert np.allclose(res.overlaps, [0, 1, 0], atol=1e-12)
    assert res.bits == (0, 1, 0)
    nu = SpectralAmplitude(grid, (book.signals[0].values + book.signals[2].values) / np.sqrt(2))
    res = decode(book, nu, 0.5)
    assert np.allclose(np.abs(res.overlaps) ** 2, [0.5, 0, 0.5], atol=1e-12)
    assert res.bits == (1, 0, 1)
    with pytest.raises(ValueError):
        decode(book, nu, 1.0)


def test_decode_after_broadband_cavity(book4):
    # code bandwidth ~ 2 pi / T << gamma: near-flat cavity phase over the code band
    p = CavityParams(50.0)
    for s in all_symbol_vectors(4):
        out = apply(p, encode(book4, s).nu)
        assert decode(book4, out).bits == s.bits


def test_round_trip_exhaustive(grid):
    for k in (1, 2, 5, 8):
        book = make_timebin_codebook(grid, k, 6.0)
        for s in all_symbol_vectors(k):
            assert decode(book, encode(book, s)).bits == s.bits


def test_time_and_frequency_overlaps_agree(book4, grid):
    nu = encode(book4, SymbolVector((1, 0, 1, 1))).nu
    for b in book4.signals:
        assert abs(overlap_time_domain(b, nu) - inner_product(b, nu)) <= 1e-10


def test_crosstalk_identity_for_broad_cavity(book4):
    m = crosstalk_matrix(book4, CavityParams(1e6))
    assert np.max(np.abs(m - np.eye(4))) < 1e-6


def test_crosstalk_columns_bounded_by_one(book4):
    for gamma in (0.005, 0.05, 0.5, 5.0):
        m = crosstalk_matrix(book4, CavityParams(gamma))
        assert np.all(np.linalg.norm(m, axis=0) <= 1 + 1e-9)


def test_crosstalk_matches_brute_force(book4):
    p = CavityParams(0.1, 0.02)
    m = crosstalk_matrix(book4, p)
    for k in range(4):
        for l in range(4):
            assert m[k, l] == pytest.approx(inner_product(book4.signals[k], apply(p, book4.signals[l])), abs=1e-13)


def test_crosstalk_strongly_mixes_for_cavity_matched_to_bin(book4):
    # gamma ~ 1/T: the ring-down of bin l lands in bin l+1
    m = crosstalk_matrix(book4, CavityParams(1 / 20.0))
    off = np.abs(m - np.diag(np.diag(m)))
    assert off.max() > 0.5
    assert np.max(np.abs(np.triu(m, 1))) < 1e-3  # causal: no leakage into earlier bins


@settings(max_examples=25, deadline=None)
@given(k=st.integers(1, 10), seed=st.integers(0, 2**32 - 1))
def test_encoded_states_are_normalised_and_decodable(k, seed):
    g = SampledGrid(2048, 0.02)
    book = make_timebin_codebook(g, k, 10.0)
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=k)
    if not bits.any():
        bits[rng.integers(k)] = 1
    s = SymbolVector(tuple(bits))
    state = encode(book, s)
    assert abs(state.nu.norm_squared() - 1) <= 1e-9
    assert decode(book, state).bits == s.bits

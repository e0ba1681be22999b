"""Single-photon pulse codes: orthonormal code signals, encode and matched-filter decode."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import cavity
from .specgrid import (
    GridMismatchError,
    SampledGrid,
    SpectralAmplitude,
    TimeAmplitude,
    inner_product,
    to_freq,
    to_time,
)
from .states import SinglePhotonState

__all__ = [
    "CodeBook",
    "SymbolVector",
    "DecodeResult",
    "RankDeficientError",
    "make_timebin_codebook",
    "orthonormalize",
    "encode",
    "decode",
    "crosstalk_matrix",
    "all_symbol_vectors",
    "overlap_time_domain",
]

GRAM_TOL = 1e-10


class RankDeficientError(ValueError):
    pass


def _stack(signals: Sequence[SpectralAmplitude]) -> np.ndarray:
    return np.array([s.values for s in signals])


@dataclass(frozen=True)
class CodeBook:
    """Ordered orthonormal code signals beta_k on a common grid."""

    signals: tuple[SpectralAmplitude, ...]
    labels: tuple[int, ...] = field(default=())

    def __post_init__(self):
        signals = tuple(self.signals)
        if not signals:
            raise ValueError("a codebook needs at least one signal")
        grid = signals[0].grid
        if any(s.grid != grid for s in signals):
            raise GridMismatchError("code signals live on different grids")
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "labels", tuple(self.labels) or tuple(range(len(signals))))
        if len(self.labels) != len(signals):
            raise ValueError("one label per signal required")
        err = np.abs(self.gram() - np.eye(len(signals))).max()
        if err > GRAM_TOL:
            raise ValueError(f"code signals are not orthonormal (Gram error {err:.2e})")

    @property
    def grid(self) -> SampledGrid:
        return self.signals[0].grid

    @property
    def size(self) -> int:
        return len(self.signals)

    def __len__(self):
        return len(self.signals)

    def gram(self) -> np.ndarray:
        b = _stack(self.signals)
        return b.conj() @ b.T * self.grid.delta_omega


@dataclass(frozen=True)
class SymbolVector:
    """Binary code symbols; amplitudes are bits / sqrt(number of set bits)."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"symbols must be binary, got {self.bits}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, s: str) -> "SymbolVector":
        return cls(tuple(int(c) for c in s.strip()))

    def __str__(self):
        return "".join(map(str, self.bits))

    @property
    def amplitudes(self) -> np.ndarray:
        b = np.array(self.bits, dtype=float)
        k = b.sum()
        if k == 0:
            raise ValueError("all-zero symbol vector carries no photon")
        return b / np.sqrt(k)


def all_symbol_vectors(k: int) -> Iterator[SymbolVector]:
    """Every nonzero K-bit symbol vector, in counting order."""
    for bits in itertools.product((0, 1), repeat=k):
        if any(bits):
            yield SymbolVector(bits)


def make_timebin_codebook(grid: SampledGrid, k: int, bin_width: float) -> CodeBook:
    """K abutting rectangular time bins of width ``bin_width`` centred on t = 0.

    Each bin collects the grid samples with ``t`` inside it and is
    normalised on the grid, so the Gram matrix is exactly diagonal.
    """
    if k < 1:
        raise ValueError("need at least one code signal")
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    total = k * bin_width
    if total > grid.time_span:
        raise ValueError(f"{k} bins of width {bin_width} exceed the time span {grid.time_span}")
    t = grid.t
    start = -total / 2
    # bin index per sample; half-open bins [start + k T, start + (k+1) T)
    idx = np.floor((t - start) / bin_width + 1e-9).astype(int)
    signals = []
    for j in range(k):
        sel = idx == j
        count = int(sel.sum())
        if count == 0:
            raise ValueError("bin_width is below the time resolution of the grid")
        vals = np.where(sel, 1.0 / np.sqrt(count * grid.delta_t), 0.0)
        signals.append(to_freq(TimeAmplitude(grid, vals)))
    return CodeBook(tuple(signals))


def orthonormalize(raw: Sequence[SpectralAmplitude], min_singular: float = 1e-8) -> CodeBook:
    """Gram-Schmidt with one reorthogonalisation pass.

    Phase convention: each output has a real positive overlap with the raw
    signal it was built from, so an orthonormal input is returned unchanged.

    Raises
    ------
    RankDeficientError
        If the smallest singular value of the Gram matrix is below ``min_singular``.
    """
    raw = list(raw)
    if not raw:
        raise ValueError("nothing to orthonormalise")
    grid = raw[0].grid
    if any(r.grid != grid for r in raw):
        raise GridMismatchError("raw signals live on different grids")
    a = _stack(raw)
    dw = grid.delta_omega
    gram = a.conj() @ a.T * dw
    sv = np.linalg.svd(gram, compute_uv=False)
    if sv.min() <= min_singular * max(1.0, sv.max()):
        raise RankDeficientError(f"raw signals are linearly dependent (min singular value {sv.min():.2e})")

    basis: list[np.ndarray] = []
    for v in a:
        q = v.copy()
        for _ in range(2):
            for b in basis:
                q = q - (np.vdot(b, q) * dw) * b
        nrm = np.sqrt(np.vdot(q, q).real * dw)
        q = q / nrm
        overlap = np.vdot(v, q)
        q = q * (abs(overlap) / overlap)
        basis.append(q)
    return CodeBook(tuple(SpectralAmplitude(grid, q) for q in basis))


def encode(book: CodeBook, s: SymbolVector) -> SinglePhotonState:
    if len(s.bits) != book.size:
        raise ValueError(f"symbol vector has {len(s.bits)} bits, codebook has {book.size} signals")
    vals = s.amplitudes @ _stack(book.signals)
    return SinglePhotonState(SpectralAmplitude(book.grid, vals))


@dataclass(frozen=True)
class DecodeResult:
    overlaps: np.ndarray
    bits: tuple[int, ...]

    @property
    def symbols(self) -> SymbolVector:
        return SymbolVector(self.bits)


def decode(book: CodeBook, nu, threshold: float = 0.5) -> DecodeResult:
    """Matched filter: c_k = <beta_k, nu>, bit set where |c_k|^2 >= threshold * max |c|^2."""
    if isinstance(nu, SinglePhotonState):
        nu = nu.nu
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    if nu.grid != book.grid:
        raise GridMismatchError("amplitude and codebook live on different grids")
    c = _stack(book.signals).conj() @ nu.values * book.grid.delta_omega
    power = np.abs(c) ** 2
    peak = power.max()
    if peak == 0:
        bits = (0,) * book.size
    else:
        bits = tuple(int(x) for x in power >= threshold * peak)
    return DecodeResult(c, bits)


def crosstalk_matrix(book: CodeBook, p: cavity.CavityParams) -> np.ndarray:
    """M[k, l] = <beta_k, H beta_l>: how the cavity mixes code channels.

    Column norms are at most one; the shortfall is amplitude leaving the code span.
    """
    b = _stack(book.signals)
    h = cavity.transfer_function(p, book.grid.omega)
    return b.conj() @ (b * h).T * book.grid.delta_omega


def overlap_time_domain(a: SpectralAmplitude, b: SpectralAmplitude) -> complex:
    """<a, b> evaluated from the time-domain samples."""
    return inner_product(to_time(a), to_time(b))

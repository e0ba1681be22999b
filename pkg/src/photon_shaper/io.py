"""Text file formats for amplitudes and codebooks, plus table writers.

State file::

    <n>,<delta_omega>
    0,<re>,<im>
    1,<re>,<im>
    ...

One row per frequency sample, index ``j`` meaning ``omega = (j - n/2) * delta_omega``.
A codebook file is a line holding ``K`` followed by K state blocks.
Floats are written with ``repr`` so files round-trip exactly and reruns
are byte-identical.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Mapping, Sequence, TextIO

import numpy as np

from .codes import CodeBook
from .specgrid import SampledGrid, SpectralAmplitude

__all__ = [
    "FileFormatError",
    "write_state",
    "read_state",
    "write_codebook",
    "read_codebook",
    "write_table",
]


class FileFormatError(ValueError):
    pass


def _f(x) -> str:
    return repr(float(x))


def _write_block(fh: TextIO, nu: SpectralAmplitude) -> None:
    g = nu.grid
    fh.write(f"{g.n_points},{_f(g.delta_omega)}\n")
    for j, (re, im) in enumerate(zip(nu.values.real.tolist(), nu.values.imag.tolist())):
        fh.write(f"{j},{re!r},{im!r}\n")


def _read_block(lines: list[str], pos: int) -> tuple[SpectralAmplitude, int]:
    try:
        n_str, dw_str = lines[pos].split(",")
        grid = SampledGrid(int(n_str), float(dw_str))
    except (IndexError, ValueError) as exc:
        raise FileFormatError(f"bad state header at line {pos + 1}: {exc}") from None
    n = grid.n_points
    rows = lines[pos + 1 : pos + 1 + n]
    if len(rows) != n:
        raise FileFormatError(f"expected {n} sample rows, found {len(rows)}")
    vals = np.empty(n, dtype=np.complex128)
    for j, row in enumerate(rows):
        parts = row.split(",")
        if len(parts) != 3 or int(parts[0]) != j:
            raise FileFormatError(f"bad sample row {pos + 2 + j}: {row!r}")
        vals[j] = complex(float(parts[1]), float(parts[2]))
    if not np.all(np.isfinite(vals)):
        raise FileFormatError("non-finite sample values")
    return SpectralAmplitude(grid, vals), pos + 1 + n


def _lines(path) -> list[str]:
    with open(path) as fh:
        return [ln.strip() for ln in fh if ln.strip()]


def write_state(path, nu: SpectralAmplitude) -> None:
    with open(path, "w", newline="\n") as fh:
        _write_block(fh, nu)


def read_state(path) -> SpectralAmplitude:
    lines = _lines(path)
    nu, end = _read_block(lines, 0)
    if end != len(lines):
        raise FileFormatError("trailing data after state block")
    return nu


def write_codebook(path, book: CodeBook) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{book.size}\n")
        for s in book.signals:
            _write_block(fh, s)


def read_codebook(path) -> CodeBook:
    lines = _lines(path)
    try:
        k = int(lines[0])
    except (IndexError, ValueError):
        raise FileFormatError("codebook must start with the signal count K") from None
    if k < 1:
        raise FileFormatError("codebook needs K >= 1")
    pos, signals = 1, []
    for _ in range(k):
        s, pos = _read_block(lines, pos)
        signals.append(s)
    if pos != len(lines):
        raise FileFormatError("trailing data after codebook")
    return CodeBook(tuple(signals))


def write_table(
    out_dir, name: str, columns: Mapping[str, Sequence], fmt: str = "csv"
) -> Path:
    """Write equal-length columns as ``name.csv`` or ``name.json``."""
    out_dir = Path(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    cols = {k: (v.tolist() if isinstance(v, np.ndarray) else list(v)) for k, v in columns.items()}
    lengths = {len(v) for v in cols.values()}
    if len(lengths) > 1:
        raise ValueError(f"columns of {name} have unequal lengths {lengths}")
    if fmt == "json":
        path = out_dir / f"{name}.json"
        with open(path, "w", newline="\n") as fh:
            json.dump(cols, fh, indent=1)
            fh.write("\n")
        return path
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")
    path = out_dir / f"{name}.csv"

    def cell(x):
        if isinstance(x, float):
            return repr(x)
        return str(x)

    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for row in zip(*cols.values()):
            fh.write(",".join(cell(x) for x in row) + "\n")
    return path

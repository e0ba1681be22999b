import numpy as np
import pytest

from photon_shaper.codes import make_timebin_codebook
from photon_shaper.io import (
    FileFormatError,
    read_codebook,
    read_state,
    write_codebook,
    write_state,
    write_table,
)
from photon_shaper.specgrid import SampledGrid, gaussian_amplitude


@pytest.fixture
def grid():
    return SampledGrid(64, 0.25)


def test_state_round_trip_is_exact(tmp_path, grid):
    nu = gaussian_amplitude(grid, 1.3, t0=0.7)
    write_state(tmp_path / "s.txt", nu)
    back = read_state(tmp_path / "s.txt")
    assert back.grid == grid
    assert np.array_equal(back.values, nu.values)


def test_state_file_layout(tmp_path, grid):
    write_state(tmp_path / "s.txt", gaussian_amplitude(grid, 1.0))
    lines = (tmp_path / "s.txt").read_text().splitlines()
    assert lines[0] == "64,0.25"
    assert len(lines) == 65
    assert lines[1].startswith("0,") and lines[-1].startswith("63,")
    assert all(len(ln.split(",")) == 3 for ln in lines[1:])


@pytest.mark.parametrize(
    "text",
    [
        "",
        "64\n",
        "8,0.5\n0,1,0\n",
        "8,0.5\n" + "".join(f"{j},1,0\n" for j in range(8)) + "extra\n",
        "8,0.5\n" + "".join(f"{j + 1},1,0\n" for j in range(8)),
        "8,-0.5\n" + "".join(f"{j},1,0\n" for j in range(8)),
        "8,0.5\n" + "".join(f"{j},nan,0\n" for j in range(8)),
    ],
)
def test_bad_state_files(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(ValueError):
        read_state(path)


def test_codebook_round_trip(tmp_path, grid):
    book = make_timebin_codebook(grid, 3, 4.0)
    write_codebook(tmp_path / "cb.txt", book)
    text = (tmp_path / "cb.txt").read_text().splitlines()
    assert text[0] == "3" and text[1] == "64,0.25"
    back = read_codebook(tmp_path / "cb.txt")
    assert back.size == 3
    for a, b in zip(back.signals, book.signals):
        assert np.array_equal(a.values, b.values)


def test_codebook_file_must_be_orthonormal(tmp_path, grid):
    nu = gaussian_amplitude(grid, 1.0)
    path = tmp_path / "cb.txt"
    with open(path, "w") as fh:
        fh.write("2\n")
    for _ in range(2):
        write_state(tmp_path / "one.txt", nu)
        with open(path, "a") as fh:
            fh.write((tmp_path / "one.txt").read_text())
    with pytest.raises(ValueError):
        read_codebook(path)
    path.write_text("zero\n")
    with pytest.raises(FileFormatError):
        read_codebook(path)


def test_write_table_csv_and_json(tmp_path):
    cols = {"a": np.array([0.1, 2.0]), "b": [1, 2]}
    p = write_table(tmp_path, "x", cols)
    assert p.read_text() == "a,b\n0.1,1\n2.0,2\n"
    p = write_table(tmp_path, "x", cols, "json")
    import json

    assert json.loads(p.read_text()) == {"a": [0.1, 2.0], "b": [1, 2]}
    with pytest.raises(ValueError):
        write_table(tmp_path, "y", {"a": [1], "b": [1, 2]})

"""How a cavity scrambles time-bin codes as its linewidth shrinks.

For each linewidth, reports the crosstalk matrix leakage and how many of the
2^K - 1 symbol vectors still decode correctly after reflection.

    python scripts/code_crosstalk.py --K 4 --out results/crosstalk
"""

import argparse

import numpy as np

from photon_shaper.cavity import CavityParams, apply
from photon_shaper.codes import all_symbol_vectors, crosstalk_matrix, decode, encode, make_timebin_codebook
from photon_shaper.io import write_table
from photon_shaper.specgrid import SampledGrid


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--K", type=int, default=4)
    ap.add_argument("--bin-width", type=float, default=50.0)
    ap.add_argument("--gammas", type=float, nargs="+", default=[1e3, 1.0, 0.3, 0.1, 0.03, 0.01])
    ap.add_argument("--n", type=int, default=16384)
    ap.add_argument("--delta-omega", type=float, default=0.003)
    ap.add_argument("--out", default="results/crosstalk")
    args = ap.parse_args(argv)

    grid = SampledGrid(args.n, args.delta_omega)
    book = make_timebin_codebook(grid, args.K, args.bin_width)
    vectors = list(all_symbol_vectors(args.K))
    rows = {k: [] for k in ("gamma", "max_offdiag", "min_diag", "min_column_norm", "decoded_ok")}
    print(f"{'gamma':>8} {'max|M_kl|':>10} {'min|M_kk|':>10} {'min col':>8} {'decoded':>9}")
    for gamma in args.gammas:
        p = CavityParams(gamma)
        m = np.abs(crosstalk_matrix(book, p))
        off = m - np.diag(np.diag(m))
        col = np.sqrt((m**2).sum(axis=0))
        good = sum(decode(book, apply(p, encode(book, s).nu)).bits == s.bits for s in vectors)
        for k, v in zip(rows, (gamma, off.max(), np.diag(m).min(), col.min(), good)):
            rows[k].append(v if k == "decoded_ok" else float(v))
        print(f"{gamma:8.3g} {off.max():10.4f} {np.diag(m).min():10.4f} {col.min():8.4f} {good:4d}/{len(vectors)}")
    print("wrote", write_table(args.out, "code_crosstalk", rows))


if __name__ == "__main__":
    main()

"""Delay and broadening of a Gaussian photon reflected off a cavity.

Sweeps the spectral width relative to the linewidth and the detuning, and
compares the measured delay with the group delay at the carrier.

    python scripts/cavity_delay_sweep.py --out results/delay
"""

import argparse

import numpy as np

from photon_shaper.cavity import CavityParams, apply, group_delay, pulse_stats
from photon_shaper.io import write_table
from photon_shaper.specgrid import SampledGrid, gaussian_amplitude
from photon_shaper.states import SinglePhotonState, count_rate


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--ratios", type=float, nargs="+", default=[0.01, 0.03, 0.1, 0.3, 1.0, 3.0])
    ap.add_argument("--detunings", type=float, nargs="+", default=[0.0, 0.5, 1.0])
    ap.add_argument("--n", type=int, default=16384)
    ap.add_argument("--delta-omega", type=float, default=0.003)
    ap.add_argument("--out", default="results/delay")
    args = ap.parse_args(argv)

    grid = SampledGrid(args.n, args.delta_omega)
    rows = {k: [] for k in ("sigma_over_gamma", "delta", "delay", "group_delay", "width_in", "width_out")}
    print(f"{'sigma/g':>8} {'delta':>6} {'delay':>9} {'tau(0)':>9} {'w_in':>10} {'w_out':>10}")
    for delta in args.detunings:
        p = CavityParams(args.gamma, delta * args.gamma)
        for r in args.ratios:
            nu = gaussian_amplitude(grid, r * args.gamma)
            t_in, w_in = pulse_stats(grid, count_rate(SinglePhotonState(nu)))
            t_out, w_out = pulse_stats(grid, count_rate(SinglePhotonState(apply(p, nu))))
            tau = group_delay(p, 0.0)
            for k, v in zip(rows, (r, p.delta, t_out - t_in, tau, w_in, w_out)):
                rows[k].append(float(v))
            print(f"{r:8.3f} {p.delta:6.2f} {t_out - t_in:9.4f} {tau:9.4f} {w_in:10.4f} {w_out:10.4f}")
    print("wrote", write_table(args.out, "delay_sweep", rows))


if __name__ == "__main__":
    main()

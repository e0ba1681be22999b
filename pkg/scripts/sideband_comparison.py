"""Sideband masses from the direct integration against both perturbative formulas.

Sweeps modulation frequency and depth for a narrowband pulse on a resonant
cavity and writes one row per (Omega, epsilon) point.

    python scripts/sideband_comparison.py --out results/sidebands
"""

import argparse

import numpy as np

from photon_shaper.cavity import CavityParams
from photon_shaper.fm import (
    ModulationParams,
    oracle_simulate,
    perturbative_spectrum_paper,
    perturbative_spectrum_two_sideband,
    sideband_report,
)
from photon_shaper.io import write_table
from photon_shaper.specgrid import SampledGrid, gaussian_amplitude


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--omegas", type=float, nargs="+", default=[0.2, 0.25, 0.3, 0.35, 0.4])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.01, 0.02, 0.04])
    ap.add_argument("--n", type=int, default=16384)
    ap.add_argument("--delta-omega", type=float, default=0.0025)
    ap.add_argument("--out", default="results/sidebands")
    args = ap.parse_args(argv)

    grid = SampledGrid(args.n, args.delta_omega)
    p = CavityParams(args.gamma)
    rows = {k: [] for k in ("big_omega", "epsilon", "oracle_upper", "oracle_lower",
                            "two_sideband_upper", "paper_upper", "paper_over_oracle", "predicted_ratio")}
    print(f"{'Omega':>6} {'eps':>6} {'oracle':>11} {'two-sb':>11} {'paper':>11} {'paper/orc':>9} {'4g2/4/(g2/4+W2)':>15}")
    for big_omega in args.omegas:
        nu = gaussian_amplitude(grid, min(0.02, 0.05 * big_omega) * args.gamma)
        for e in args.eps:
            m = ModulationParams(e * args.gamma, big_omega * args.gamma)
            orc = sideband_report(grid, np.abs(oracle_simulate(p, m, nu).values) ** 2, m)
            two = sideband_report(grid, perturbative_spectrum_two_sideband(p, m, nu), m)
            paper = sideband_report(grid, perturbative_spectrum_paper(p, m, nu), m)
            g2 = args.gamma**2 / 4
            predicted = 4 * g2 / (g2 + m.big_omega**2)
            for k, v in zip(rows, (m.big_omega, m.epsilon, orc.upper_mass, orc.lower_mass,
                                   two.upper_mass, paper.upper_mass,
                                   paper.upper_mass / orc.upper_mass, predicted)):
                rows[k].append(float(v))
            print(f"{m.big_omega:6.3f} {m.epsilon:6.3f} {orc.upper_mass:11.4e} {two.upper_mass:11.4e} "
                  f"{paper.upper_mass:11.4e} {paper.upper_mass / orc.upper_mass:9.3f} {predicted:15.3f}")
    print("wrote", write_table(args.out, "sideband_comparison", rows))


if __name__ == "__main__":
    main()

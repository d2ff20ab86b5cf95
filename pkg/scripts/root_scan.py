"""Scan Bethe root sets across sectors and print them with their certificates.

    python scripts/root_scan.py --spin 1 -L 5 --m-max 3
"""

import argparse

from xxxchain.hamiltonian import ChainHamiltonian
from xxxchain.solver import SolverOptions, solve_sector
from xxxchain.su2 import Spin


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--spin", default="1")
    parser.add_argument("-L", "--length", type=int, default=5)
    parser.add_argument("--m-max", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--n-random", type=int, default=64)
    args = parser.parse_args()

    spin = Spin.parse(args.spin)
    opts = SolverOptions(seed=args.seed, n_random=args.n_random)
    ham = ChainHamiltonian(spin, args.length)
    for m in range(args.m_max + 1):
        certs = solve_sector(spin, args.length, m, opts, ham)
        print(f"--- sector m = {m}: {len(certs)} certified root sets")
        for cert in certs:
            roots = ", ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in cert.lam)
            flavor = " singular" if cert.singular else ""
            print(f"  E = {cert.energy.real:+.10f}  residuals "
                  f"(bethe {cert.bethe_residual:.1e}, eigen {cert.eigen_residual:.1e}, "
                  f"hw {cert.hw_residual:.1e}){flavor}  [{roots}]")


if __name__ == "__main__":
    main()

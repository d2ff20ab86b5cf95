"""Command-line interface.

Commands: beta, local-h, chain-h, ed, solve, state, verify, aba-compare.
JSON (default) or CSV goes to stdout, diagnostics to stderr.  Exit codes:
0 success, 1 verification failure, 2 usage error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import verify
from .bethe import build_bethe_state
from .errors import ChainError, ResourceCapError
from .hamiltonian import ChainHamiltonian, build_beta_table, local_h
from .solver import SolverOptions, solve_sector
from .su2 import DEFAULT_CAP, Spin

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _emit_json(obj):
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _emit_csv(header, rows):
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _spin(args, parser) -> Spin:
    try:
        return Spin.parse(args.spin)
    except (ValueError, ZeroDivisionError) as exc:
        parser.error(f"invalid --spin {args.spin!r}: {exc}")


def _cap(args) -> int:
    if args.cap is not None:
        return args.cap
    env = os.environ.get("BETHE_CAP")
    return int(env) if env else DEFAULT_CAP


def _solver_options(args) -> SolverOptions:
    opts = SolverOptions()
    if getattr(args, "tol_newton", None) is not None:
        opts.tol_newton = args.tol_newton
    if getattr(args, "tol_eigen", None) is not None:
        opts.tol_eigen = args.tol_eigen
        opts.tol_hw = args.tol_eigen
    if getattr(args, "tol_match", None) is not None:
        opts.tol_match = args.tol_match
    if getattr(args, "seed", None) is not None:
        opts.seed = args.seed
    if getattr(args, "strategy", None):
        opts.strategies = tuple(args.strategy)
    return opts


def cmd_beta(args, parser):
    spin = _spin(args, parser)
    table = build_beta_table(spin)
    if args.format == "csv":
        _emit_csv(["m1", "m2", "n", "value"],
                  [(m1, m2, n, repr(v)) for (m1, m2, n), v in table.sorted_items()])
    else:
        _emit_json(table.to_json())
    return EXIT_OK


def cmd_local_h(args, parser):
    spin = _spin(args, parser)
    matrix = local_h(spin)
    if args.format == "csv":
        _emit_csv([f"c{j}" for j in range(matrix.shape[1])],
                  [[repr(v) for v in row] for row in matrix])
    else:
        _emit_json({"two_s": spin.two_s, "matrix": [list(row) for row in matrix]})
    return EXIT_OK


def cmd_chain_h(args, parser):
    spin = _spin(args, parser)
    ham = ChainHamiltonian(spin, args.length, cap=_cap(args))
    matrix = ham.dense()
    if args.format == "csv":
        _emit_csv([f"c{j}" for j in range(matrix.shape[1])],
                  [[repr(v) for v in row] for row in matrix])
    else:
        _emit_json({"two_s": spin.two_s, "L": args.length,
                    "matrix": [list(row) for row in matrix]})
    return EXIT_OK


def cmd_ed(args, parser):
    spin = _spin(args, parser)
    ham = ChainHamiltonian(spin, args.length, cap=_cap(args))
    report = verify.exact_diagonalize(spin, args.length, m=args.sector, hamiltonian=ham)
    flat = sorted(float(v) for vals in report.ed.values() for v in vals)
    if args.format == "csv":
        _emit_csv(["m", "eigenvalue"],
                  [(m, repr(float(v))) for m, vals in sorted(report.ed.items()) for v in vals])
    else:
        out = {"two_s": spin.two_s, "L": args.length,
               "ed": [{"m": m, "eigenvalues": [float(v) for v in vals]}
                      for m, vals in sorted(report.ed.items())]}
        if args.sector is None:
            out["eigenvalues"] = flat
        else:
            out["m"] = args.sector
            out["eigenvalues"] = [float(v) for v in report.ed[args.sector]]
        _emit_json(out)
    return EXIT_OK


def cmd_solve(args, parser):
    spin = _spin(args, parser)
    if args.sector is None:
        parser.error("solve requires -m/--sector")
    opts = _solver_options(args)
    ham = ChainHamiltonian(spin, args.length, cap=_cap(args))
    certs = solve_sector(spin, args.length, args.sector, opts, ham)
    if args.format == "csv":
        _emit_csv(
            ["energy_re", "energy_im", "bethe_residual", "eigen_residual",
             "hw_residual", "iterations", "singular", "lambda"],
            [(repr(c.energy.real), repr(c.energy.imag), repr(c.bethe_residual),
              repr(c.eigen_residual), repr(c.hw_residual), c.iterations,
              int(c.singular), ";".join(f"{z.real}{z.imag:+}j" for z in c.lam))
             for c in certs],
        )
    else:
        _emit_json({"two_s": spin.two_s, "L": args.length, "m": args.sector,
                    "certificates": [c.to_json() for c in certs]})
    return EXIT_OK


def _parse_complex_list(text, parser, flag):
    try:
        return [complex(part.replace(" ", "")) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        parser.error(f"invalid {flag} {text!r}: {exc}")


def cmd_state(args, parser):
    spin = _spin(args, parser)
    if (args.roots is None) == (args.momenta is None):
        parser.error("state requires exactly one of --lambda or --k")
    if args.roots is not None:
        state = build_bethe_state(spin, args.length,
                                  lam=_parse_complex_list(args.roots, parser, "--lambda"))
    else:
        state = build_bethe_state(spin, args.length,
                                  k=_parse_complex_list(args.momenta, parser, "--k"))
    ham = ChainHamiltonian(spin, args.length, cap=_cap(args))
    residual = verify.eigen_residual(state, ham)
    payload = state.to_json(residual=residual)
    if args.format == "csv":
        _emit_csv(["index", "amplitude_re", "amplitude_im"],
                  [(i, repr(z.real), repr(z.imag)) for i, z in enumerate(state.vector)])
    else:
        _emit_json(payload)
    return EXIT_OK


def cmd_aba_compare(args, parser):
    spin = _spin(args, parser)
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    if args.roots is not None:
        lams = _parse_complex_list(args.roots, parser, "--lambda")
    else:
        lams = []
        while len(lams) < args.count:
            z = complex(rng.normal(scale=1.5), rng.normal(scale=1.5))
            if min(abs(z - 1j * spin.s), abs(z + 1j * spin.s)) > 0.1:
                lams.append(z)
    rows = []
    for lam in lams:
        phi = verify.aba_phi1(spin, args.length, lam)
        psi = build_bethe_state(spin, args.length, lam=[lam])
        rows.append({"lambda": [lam.real, lam.imag],
                     "overlap": verify.overlap(phi, psi.vector)})
    out = {"two_s": spin.two_s, "L": args.length, "count": len(rows),
           "overlaps": rows, "min_overlap": min(r["overlap"] for r in rows)}
    if args.format == "csv":
        _emit_csv(["lambda_re", "lambda_im", "overlap"],
                  [(repr(r["lambda"][0]), repr(r["lambda"][1]), repr(r["overlap"])) for r in rows])
    else:
        _emit_json(out)
    return EXIT_OK


def _verify_checks(args, parser):
    """Invariant suite over the default grid, extendable by --spin/-L."""
    from . import suite

    chain = None
    if args.spin is not None or args.length is not None:
        if args.spin is None or args.length is None:
            parser.error("verify needs both --spin and -L to extend the chain grid")
        chain = (_spin(args, parser), args.length)
    return suite.run_all(seed=args.seed if args.seed is not None else 0, chain=chain)


def cmd_verify(args, parser):
    checks = _verify_checks(args, parser)
    if args.only:
        checks = [c for c in checks if args.only in c[0]]
        if not checks:
            parser.error(f"--only {args.only!r} matches no checks")
    if args.inject_fault:
        checks.append((args.inject_fault, False, "injected fault (test hook)"))
    failed = [c for c in checks if not c[1]]
    payload = {
        "checks": [{"name": name, "passed": ok, "detail": detail}
                   for name, ok, detail in checks],
        "passed": not failed,
    }
    if args.format == "csv":
        _emit_csv(["name", "passed", "detail"],
                  [(name, int(ok), detail) for name, ok, detail in checks])
    else:
        _emit_json(payload)
    for name, ok, detail in failed:
        print(f"FAILED {name}: {detail}", file=sys.stderr)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def _add_common(sub, length_default=None, need_length=True):
    sub.add_argument("--spin", required=True, help="spin as rational in halves, e.g. 1/2, 1, 3/2")
    if need_length:
        sub.add_argument("-L", "--length", type=int, default=length_default,
                         required=length_default is None)
    sub.add_argument("-m", "--sector", type=int, default=None)
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--tol-newton", dest="tol_newton", type=float, default=None)
    sub.add_argument("--tol-eigen", dest="tol_eigen", type=float, default=None)
    sub.add_argument("--tol-match", dest="tol_match", type=float, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--cap", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xxxchain",
        description="Spin-s XXX chain: Hamiltonian, Bethe states, solver, verification",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("beta", help="dump the beta coefficient table")
    _add_common(sub, need_length=False)
    sub.set_defaults(func=cmd_beta)

    sub = subs.add_parser("local-h", help="dump the local two-site Hamiltonian")
    _add_common(sub, need_length=False)
    sub.set_defaults(func=cmd_local_h)

    sub = subs.add_parser("chain-h", help="dump the dense chain Hamiltonian")
    _add_common(sub)
    sub.set_defaults(func=cmd_chain_h)

    sub = subs.add_parser("ed", help="exact diagonalization per sector")
    _add_common(sub)
    sub.set_defaults(func=cmd_ed)

    sub = subs.add_parser("solve", help="solve the Bethe equations in one sector")
    _add_common(sub)
    sub.add_argument("--strategy", action="append",
                     choices=("free-momenta", "two-string", "strings", "random"),
                     help="seeding strategy (repeatable; default: all)")
    sub.set_defaults(func=cmd_solve)

    sub = subs.add_parser("state", help="build a Bethe state from roots or momenta")
    _add_common(sub)
    sub.add_argument("--lambda", dest="roots", default=None,
                     help="comma-separated complex rapidities, e.g. '0.5+0j,-0.5+0j'")
    sub.add_argument("--k", dest="momenta", default=None,
                     help="comma-separated complex momenta")
    sub.set_defaults(func=cmd_state)

    sub = subs.add_parser("verify", help="run the invariant suite")
    sub.add_argument("--spin", default=None, help="extend the chain checks to this spin (with -L)")
    sub.add_argument("-L", "--length", type=int, default=None)
    sub.add_argument("--only", default=None, help="substring filter on check names")
    sub.add_argument("--inject-fault", default=None, help="append a failing check (test hook)")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--seed", type=int, default=None)
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("aba-compare", help="overlap of the monodromy one-magnon state with Psi_1")
    _add_common(sub)
    sub.add_argument("--lambda", dest="roots", default=None,
                     help="comma-separated rapidities (default: random sample)")
    sub.add_argument("--count", type=int, default=20)
    sub.set_defaults(func=cmd_aba_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ChainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

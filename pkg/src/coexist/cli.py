"""
Command line entry point.

Subcommands: ``solve``, ``sweep``, ``table1``, ``region``, ``verify``.
Exit codes: 0 success, 2 infeasible scenario, 3 configuration or domain
error, 4 failed statistical verification.
"""

import argparse
import sys
from typing import List, Optional

from . import __version__
from .config import load_config
from .errors import ConfigError, DomainError, InfeasibleError, UnsupportedError
from .experiments import (SWEEP_FIELDS, TABLE1_FIELDS, SweepSpec, run_region, run_solver,
                          run_sweep, run_verify, sweep_csv, table1, table1_rows, table1_text,
                          write_csv)
from .scenario import lin2db
from .simulate import CSV_FIELDS
from .solvers import SOLVERS, feasibility_joint

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_CONFIG = 3
EXIT_STATISTICAL = 4


def _echo(sc) -> str:
    return "\n".join([
        f"N = {sc.N}, model = {sc.model.value}, noise = {'white' if sc.is_white else 'colored'}",
        f"SNR = {lin2db(sc.h2 * sc.P_c / sc.var_v):.4g} dB, "
        f"INR = {lin2db(sc.var_f / sc.var_v):.4g} dB, "
        f"SCR = {lin2db(sc.var_a / sc.var_c) if sc.var_c > 0 else float('inf'):.4g} dB",
        f"rho_min = {lin2db(sc.rho_min):.4g} dB, N*P_r = {sc.total_radar_energy:.6g} "
        f"({lin2db(sc.total_radar_energy):.4g} dB)",
        f"beta = {sc.beta:g}, alpha = {sc.alpha:g}"
        + (f", papr_delta = {sc.papr_delta:g}" if sc.papr_delta is not None else ""),
    ])


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    sc = cfg.scenario()
    print(_echo(sc))
    feas = feasibility_joint(sc)
    print(f"feasible = {str(feas.feasible).lower()}, rho_max = {feas.rho_max:.6g} "
          f"({lin2db(feas.rho_max):.4f} dB)")
    row = run_solver(sc, cfg.solver)
    if not row["feasible"]:
        note = row.get("note", "")
        if note.startswith("unsupported"):
            print(f"error: {note}", file=sys.stderr)
            return EXIT_CONFIG
        rho = row.get("rho_max", feas.rho_max)
        print(f"infeasible: rho_min = {sc.rho_min:.6g} exceeds rho_max = {rho:.6g} "
              f"({lin2db(rho):.4f} dB)", file=sys.stderr)
        return EXIT_INFEASIBLE
    for key in ("gamma_N", "epsilon", "R0", "R1", "CR", "SINR"):
        print(f"{key} = {row[key]:.12g}")
    if args.out:
        write_csv(["solver"] + SWEEP_FIELDS[1:], [row], args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    spec = SweepSpec.from_config(cfg, csv_path=None, svg_path=args.svg)
    rows = run_sweep(spec, workers=args.workers)
    _emit(sweep_csv(spec, rows), args.out)
    return EXIT_OK


def cmd_table1(args) -> int:
    grid = table1(args.cum_radar_snr_db)
    print(table1_text(grid))
    if args.out:
        write_csv(TABLE1_FIELDS, table1_rows(grid), args.out)
    return EXIT_OK


def cmd_region(args) -> int:
    cfg = load_config(args.config)
    n = args.samples or cfg.region.get("n_samples", 2000)
    models = cfg.region.get("models", ["coherent", "incoherent"])
    seed = args.seed if args.seed is not None else cfg.region.get("seed", 0)
    rows = run_region(cfg, n_samples=n, seed=seed, models=models, svg_path=args.svg)
    text = write_csv(["model", "noise", "kind", "index", "beta", "R0", "R1"], rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    sc = cfg.scenario()
    trials = args.trials or cfg.verify.get("trials", 100_000)
    seed = args.seed if args.seed is not None else cfg.verify.get("seed", 42)
    if trials < 10_000:
        raise DomainError(f"--trials must be >= 10000 for the KL estimate, got {trials}")
    row = run_solver(sc, cfg.solver)
    if not row["feasible"]:
        rho = row.get("rho_max", feasibility_joint(sc).rho_max)
        print(f"infeasible: rho_max = {rho:.6g}", file=sys.stderr)
        return EXIT_INFEASIBLE
    design = SOLVERS[cfg.solver](sc).design
    reports = run_verify(sc, design, trials, seed)
    for r in reports:
        print(r.to_text())
    if args.out:
        write_csv(CSV_FIELDS, [row for r in reports for row in r.csv_rows()], args.out)
    failed = [f"{r.kind}.{name}" for r in reports for name in r.failed_checks()]
    if failed:
        print("verification failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_STATISTICAL
    print("all checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coexist",
                                description="Radar/communication co-design experiments")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", required=True, metavar="PATH")
        sp.add_argument("--out", metavar="PATH", help="CSV output path")
        return sp

    common(sub.add_parser("solve", help="solve one configured scenario"))
    sp = common(sub.add_parser("sweep", help="one-parameter sweep"))
    sp.add_argument("--svg", metavar="PATH")
    sp.add_argument("--workers", type=int, default=1, metavar="N")
    sp = common(sub.add_parser("table1", help="optimized CR grid at rho_min = 10 dB"),
                config=False)
    sp.add_argument("--cum-radar-snr-db", type=float, default=None,
                    help="cumulated radar SNR (default: exact Swerling-I value)")
    sp = common(sub.add_parser("region", help="achievable rate-pair region"))
    sp.add_argument("--svg", metavar="PATH")
    sp.add_argument("--seed", type=int, default=None, metavar="N")
    sp.add_argument("--samples", type=int, default=None, metavar="N")
    sp = common(sub.add_parser("verify", help="Monte Carlo check of the optimal design"))
    sp.add_argument("--trials", type=int, default=None, metavar="N")
    sp.add_argument("--seed", type=int, default=None, metavar="N")
    return p


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "table1": cmd_table1,
    "region": cmd_region,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc} (rho_max = {exc.rho_max:.6g})", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, DomainError, UnsupportedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

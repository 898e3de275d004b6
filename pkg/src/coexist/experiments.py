"""
Experiment drivers behind the command line: the reference CR grid, parameter sweeps,
rate regions and Monte Carlo verification.  All CSV numbers are written with
12 significant digits; rows come out in axis order whatever the worker count.
"""

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .config import ScenarioConfig
from .errors import DomainError, InfeasibleError, UnsupportedError
from .region import psi_curve, sample_region
from .scenario import DesignOutcome, Scenario, from_db_spec
from .simulate import MonteCarloReport, estimate_kl, simulate_comm_cell, simulate_radar_cell
from .solvers import SOLVERS, feasibility_joint
from .svg import Series, write_svg

__all__ = [
    "SweepSpec",
    "SWEEP_FIELDS",
    "REGION_FIELDS",
    "TABLE1_FIELDS",
    "fmt",
    "run_solver",
    "run_sweep",
    "sweep_csv",
    "table1",
    "table1_text",
    "run_region",
    "run_verify",
    "write_csv",
    "TABLE1_N",
    "TABLE1_COLUMNS",
]

SWEEP_FIELDS = ["solver", "feasible", "R0", "R1", "CR", "SINR", "gamma_N", "epsilon",
                "cr_alpha", "rho_max", "note"]
REGION_FIELDS = ["model", "noise", "kind", "index", "beta", "R0", "R1"]
TABLE1_FIELDS = ["N", "beta", "inr_db", "CR"]
TABLE1_N = (2, 4, 8, 16, 32)
TABLE1_COLUMNS = ((-10.0, 0.1), (-10.0, 0.5), (10.0, 0.1), (10.0, 0.5))


def fmt(v) -> str:
    """12-significant-digit text for floats, empty for missing values."""
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def write_csv(fieldnames: Sequence[str], rows: Sequence[dict], path=None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fieldnames), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: fmt(r.get(k)) for k in fieldnames})
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def run_solver(sc: Scenario, name: str) -> dict:
    """One CSV-ready row for solver ``name`` on ``sc``.

    Infeasible or unsupported cases yield ``feasible = False`` with empty
    metrics and a short note.
    """
    row: Dict[str, object] = {"solver": name, "feasible": False}
    try:
        out: DesignOutcome = SOLVERS[name](sc)
    except InfeasibleError as exc:
        rho = exc.rho_max
        if math.isnan(rho):
            rho = feasibility_joint(sc).rho_max
        row.update(rho_max=rho, note="infeasible")
        return row
    except (UnsupportedError, DomainError) as exc:
        row.update(note=f"unsupported: {exc}")
        return row
    if not out.feasible:
        row.update(note="infeasible")
        return row
    row.update(feasible=True, R0=out.r0, R1=out.r1, CR=out.cr, SINR=out.sinr,
               gamma_N=out.gamma_N_star, epsilon=out.epsilon_star,
               cr_alpha=sc.alpha * out.r1 + (1 - sc.alpha) * out.r0)
    return row


@dataclass
class SweepSpec:
    """One-parameter sweep over a configured base scenario."""

    axis: str
    values: List[float]
    base: ScenarioConfig
    solvers: List[str]
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None

    def scenario_at(self, value: float) -> Scenario:
        v = int(value) if self.axis == "N" else float(value)
        return self.base.scenario(**{self.axis: v})

    @classmethod
    def from_config(cls, cfg: ScenarioConfig, csv_path=None, svg_path=None) -> "SweepSpec":
        if cfg.sweep is None:
            raise DomainError(f"{cfg.source}: no sweep section")
        return cls(cfg.sweep.axis, cfg.sweep.values, cfg, cfg.sweep.solvers,
                   csv_path, svg_path)


def _sweep_point(args):
    spec, value = args
    sc = spec.scenario_at(value)
    rows = []
    for name in spec.solvers:
        row = run_solver(sc, name)
        row[spec.axis] = value
        rows.append(row)
    return rows


def run_sweep(spec: SweepSpec, workers: int = 1) -> List[dict]:
    """Rows ordered by axis index, then by solver order."""
    jobs = [(spec, v) for v in spec.values]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_point, jobs))
    else:
        chunks = [_sweep_point(j) for j in jobs]
    rows = [r for chunk in chunks for r in chunk]
    if spec.csv_path:
        sweep_csv(spec, rows, spec.csv_path)
    if spec.svg_path:
        series = []
        for name in spec.solvers:
            pts = [r for r in rows if r["solver"] == name]
            series.append(Series(name, [r[spec.axis] for r in pts],
                                 [r.get("CR", float("nan")) for r in pts]))
        write_svg(spec.svg_path, series, title=f"CR versus {spec.axis}",
                  xlabel=spec.axis, ylabel="CR [bits/channel use]")
    return rows


def sweep_csv(spec: SweepSpec, rows, path=None) -> str:
    return write_csv([spec.axis] + SWEEP_FIELDS, rows, path)


def table1(cum_radar_snr_db=None) -> Dict[tuple, float]:
    """Optimized CR at rho_min = 10 dB, SCR = 20 dB, SNR = 10 dB, white noise.

    Keys are ``(N, inr_db, beta)``.
    """
    solve = SOLVERS["optimal"]
    grid = {}
    for N in TABLE1_N:
        for inr, beta in TABLE1_COLUMNS:
            sc = from_db_spec(10.0, inr, 20.0, 10.0, cum_radar_snr_db, N=N, beta=beta)
            grid[(N, inr, beta)] = solve(sc).cr
    return grid


def table1_rows(grid) -> List[dict]:
    return [{"N": N, "beta": b, "inr_db": inr, "CR": grid[(N, inr, b)]}
            for N in TABLE1_N for inr, b in TABLE1_COLUMNS]


def table1_text(grid) -> str:
    head = "   N | " + " | ".join(f"INR {inr:+.0f} dB, b={b:.1f}" for inr, b in TABLE1_COLUMNS)
    lines = [head, "-" * len(head)]
    for N in TABLE1_N:
        cells = " | ".join(f"{grid[(N, inr, b)]:>18.4f}" for inr, b in TABLE1_COLUMNS)
        lines.append(f"{N:>4} | {cells}")
    return "\n".join(lines)


def run_region(cfg: ScenarioConfig, n_samples: int = 2000, seed: int = 0,
               models: Sequence[str] = ("coherent", "incoherent"),
               beta_grid=None, csv_path=None, svg_path=None) -> List[dict]:
    """Boundary and sample rows for every requested interference model.

    With correlated radar noise the boundary under white noise of equal
    power is added (``noise = white``) for comparison.
    """
    beta_grid = np.linspace(0.0, 1.0, 101) if beta_grid is None else beta_grid
    base = cfg.scenario()
    feas = feasibility_joint(base)
    if not feas.feasible:
        raise InfeasibleError(
            f"rho_min = {base.rho_min:.6g} exceeds rho_max = {feas.rho_max:.6g}",
            rho_max=feas.rho_max)
    rows: List[dict] = []
    series: List[Series] = []
    for model in models:
        sc = base.with_model(model)
        noise = "white" if sc.is_white else "colored"
        est = sample_region(sc, n_samples, seed=seed, beta_grid=beta_grid)
        for i, (b, p) in enumerate(est.boundary):
            rows.append(dict(model=model, noise=noise, kind="boundary", index=i, beta=b,
                             R0=p.r0, R1=p.r1))
        for i, p in enumerate(est.interior_samples):
            rows.append(dict(model=model, noise=noise, kind="sample", index=i, R0=p.r0,
                             R1=p.r1))
        S = est.samples_array()
        series.append(Series(f"{model} samples", S[:, 0], S[:, 1], kind="scatter"))
        if est.boundary:
            B = est.boundary_array()
            series.append(Series(f"{model} psi ({noise})", B[:, 1], B[:, 2]))
        if not sc.is_white:
            white = sc.with_white_noise()
            try:
                curve = psi_curve(white, beta_grid)
            except (UnsupportedError, InfeasibleError):
                curve = []
            for i, (b, p) in enumerate(curve):
                rows.append(dict(model=model, noise="white", kind="boundary", index=i,
                                 beta=b, R0=p.r0, R1=p.r1))
            if curve:
                series.append(Series(f"{model} psi (white)", [p.r0 for _, p in curve],
                                     [p.r1 for _, p in curve]))
    if csv_path:
        write_csv(REGION_FIELDS, rows, csv_path)
    if svg_path:
        write_svg(svg_path, series, title="Achievable rate pairs", xlabel="R0",
                  ylabel="R1")
    return rows


def run_verify(sc: Scenario, design, n_trials: int = 100_000,
               seed: int = 42) -> List[MonteCarloReport]:
    """Radar (both hypotheses), comm and KL simulations of one design."""
    return [
        simulate_radar_cell(sc, design, "H0", n_trials, seed),
        simulate_radar_cell(sc, design, "H1", n_trials, seed + 1),
        simulate_comm_cell(sc, design, n_trials, seed + 2),
        estimate_kl(sc, design, n_trials, seed + 3),
    ]

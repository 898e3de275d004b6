import csv
import dataclasses
import io
import math
import pathlib

import numpy as np
import pytest

from coexist.cli import EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_OK, main
from coexist.experiments import SweepSpec, run_sweep, sweep_csv
from coexist.config import load_config
from coexist.metrics import RatePoint
from coexist.region import psi_curve, support_margin
from coexist.scenario import from_db_spec
from coexist.solvers import solve_optimal

CONFIGS = pathlib.Path(__file__).resolve().parents[1] / "configs"


def write(tmp_path, text, name="c.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def values(out):
    return dict(line.split(" = ", 1) for line in out.splitlines()
                if " = " in line and "," not in line)


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_solve_reference_cell(capsys, tmp_path):
    out_csv = tmp_path / "o.csv"
    assert main(["solve", "--config", str(CONFIGS / "reference_cell.yaml"),
                 "--out", str(out_csv)]) == EXIT_OK
    v = values(capsys.readouterr().out)
    assert float(v["CR"]) == pytest.approx(3.27, abs=0.02)
    for key in ("gamma_N", "epsilon", "R0", "R1", "SINR"):
        assert key in v
    row = read_csv(out_csv)[0]
    assert row["solver"] == "optimal" and row["feasible"] == "true"


def test_solve_infeasible(capsys, tmp_path):
    cfg = write(tmp_path, "scenario: {N: 8, rho_min_db: 18}\n")
    assert main(["solve", "--config", cfg]) == EXIT_INFEASIBLE
    err = capsys.readouterr().err
    assert "rho_max" in err and "16.6" in err


def test_solve_beta_zero(capsys, tmp_path):
    cfg = write(tmp_path, "scenario: {N: 8, beta: 0, rho_min_db: 5}\n")
    assert main(["solve", "--config", cfg]) == EXIT_OK
    cr = float(values(capsys.readouterr().out)["CR"])
    assert cr == pytest.approx(math.log2(11), abs=1e-9)


def test_config_error_exit(capsys, tmp_path):
    cfg = write(tmp_path, "scenario:\n  N: 8\n  snr: 3\n")
    assert main(["solve", "--config", cfg]) == EXIT_CONFIG
    assert "c.yaml:3" in capsys.readouterr().err


def test_unsupported_solver_exit(tmp_path):
    cfg = write(tmp_path, "scenario: {N: 8, papr_delta: 2}\nsolver: papr_naif\n")
    assert main(["solve", "--config", cfg]) == EXIT_CONFIG


def test_sweep_workers_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cfg = str(CONFIGS / "baselines.yaml")
    assert main(["sweep", "--config", cfg, "--out", str(a), "--workers", "1"]) == EXIT_OK
    assert main(["sweep", "--config", cfg, "--out", str(b), "--workers", "2",
                 "--svg", str(tmp_path / "b.svg")]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "b.svg").read_text().startswith("<svg")
    rows = read_csv(a)
    assert list(rows[0])[:10] == ["rho_min_db", "solver", "feasible", "R0", "R1", "CR",
                                  "SINR", "gamma_N", "epsilon", "cr_alpha"]
    assert len(rows) == 17 * 3


def test_sweep_csv_round_trip():
    spec = SweepSpec.from_config(load_config(CONFIGS / "rho_sweep.yaml"))
    rows = run_sweep(spec)
    parsed = list(csv.DictReader(io.StringIO(sweep_csv(spec, rows))))
    for row, back in zip(rows, parsed):
        for key in ("R0", "R1", "CR", "SINR", "gamma_N", "epsilon"):
            if row["feasible"]:
                assert float(back[key]) == pytest.approx(row[key], rel=1e-11)
            else:
                assert back[key] == ""


def test_rho_sweep_monotone_with_onset():
    spec = SweepSpec.from_config(load_config(CONFIGS / "rho_sweep.yaml"))
    rows = run_sweep(spec)
    feas = [r for r in rows if r["feasible"]]
    cr = [r["CR"] for r in feas]
    assert np.all(np.diff(cr) <= 1e-12)
    onset = 10 * math.log10([r for r in rows if not r["feasible"]][0]["rho_max"])
    assert onset == pytest.approx(16.66, abs=0.05)
    assert all(r["rho_min_db"] <= onset for r in feas)
    assert all(r["rho_min_db"] > onset for r in rows if not r["feasible"])


def test_alpha_mismatch_loss_small():
    spec = SweepSpec.from_config(load_config(CONFIGS / "alpha_mismatch.yaml"))
    rows = run_sweep(spec)
    matched = [r for r in rows if abs(r["beta"] - 0.3) < 1e-12][0]["cr_alpha"]
    loss = [(matched - r["cr_alpha"]) / matched for r in rows]
    assert min(loss) >= -1e-12
    assert max(loss) < 0.05


def test_papr_sweep_cr_grows_with_delta():
    cfg = load_config(CONFIGS / "papr_delta.yaml")
    for rho in (0.0, 5.0, 10.0, 14.0):
        base = dataclasses.replace(cfg, params={**cfg.params, "rho_min_db": rho})
        spec = SweepSpec("delta", [1, 2, 4, 8], base, ["papr_naif"])
        vals = [r["CR"] for r in run_sweep(spec)]
        assert np.all(np.diff(vals) >= -1e-12)
        # delta = N leaves the unconstrained optimum untouched
        assert vals[-1] == pytest.approx(solve_optimal(base.scenario()).cr, abs=1e-12)


def test_table1_command(capsys, tmp_path):
    out = tmp_path / "t.csv"
    assert main(["table1", "--out", str(out)]) == EXIT_OK
    rows = read_csv(out)
    assert len(rows) == 20
    cell = {(int(r["N"]), float(r["inr_db"]), float(r["beta"])): float(r["CR"]) for r in rows}
    assert cell[(2, -10.0, 0.1)] == pytest.approx(3.29, abs=0.02)
    assert cell[(16, 10.0, 0.5)] == pytest.approx(3.36, abs=0.02)
    for inr, beta in ((-10.0, 0.1), (-10.0, 0.5), (10.0, 0.1), (10.0, 0.5)):
        col = [cell[(N, inr, beta)] for N in (2, 4, 8, 16, 32)]
        assert np.all(np.diff(col) > 0)
    assert "3.2687" in capsys.readouterr().out


def test_region_command(tmp_path):
    cfg = write(tmp_path, "scenario: {N: 2, rho_min_db: 5}\nregion: {n_samples: 300}\n")
    out, svg = tmp_path / "r.csv", tmp_path / "r.svg"
    assert main(["region", "--config", cfg, "--out", str(out), "--svg", str(svg)]) == EXIT_OK
    rows = read_csv(out)
    bound = {m: [r for r in rows if r["model"] == m and r["kind"] == "boundary"]
             for m in ("coherent", "incoherent")}
    assert len(bound["coherent"]) == 101
    coh_samples = np.array([[float(r["R0"]), float(r["R1"])] for r in rows
                            if r["model"] == "coherent" and r["kind"] == "sample"])
    inc_boundary = [(float(r["beta"]), RatePoint(float(r["R0"]), float(r["R1"])))
                    for r in bound["incoherent"]]
    assert support_margin(inc_boundary, coh_samples) >= 0
    sc = from_db_spec(10, 10, 20, 5, N=2)
    for r, beta in ((bound["coherent"][0], 0.0), (bound["coherent"][-1], 1.0)):
        single = solve_optimal(sc.replace(beta=beta))
        assert float(r["R0"]) == pytest.approx(single.r0, rel=1e-11)
        assert float(r["R1"]) == pytest.approx(single.r1, rel=1e-11)
    assert svg.read_text().startswith("<svg")


def test_region_infeasible(tmp_path):
    cfg = write(tmp_path, "scenario: {N: 2, rho_min_db: 18}\n")
    assert main(["region", "--config", cfg]) == EXIT_INFEASIBLE


def test_colored_noise_dominates():
    cfg = load_config(CONFIGS / "colored_noise.yaml")
    colored = cfg.scenario()
    betas = np.linspace(0, 1, 11)
    for (b, c), (_, w) in zip(psi_curve(colored, betas),
                              psi_curve(colored.with_white_noise(), betas)):
        assert b * c.r1 + (1 - b) * c.r0 >= b * w.r1 + (1 - b) * w.r0 - 1e-12


def test_verify_command(capsys, tmp_path):
    out = tmp_path / "v.csv"
    rc = main(["verify", "--config", str(CONFIGS / "reference_cell.yaml"), "--out", str(out)])
    text = capsys.readouterr().out
    assert rc == EXIT_OK, text
    assert "all checks passed" in text
    assert {r["simulator"] for r in read_csv(out)} == {"radar_H0", "radar_H1", "comm", "kl"}


def test_verify_alpha_zero(tmp_path):
    cfg = write(tmp_path, "scenario: {N: 4, alpha: 0}\n")
    assert main(["verify", "--config", cfg, "--trials", "20000"]) == EXIT_OK


def test_verify_too_few_trials(capsys):
    rc = main(["verify", "--config", str(CONFIGS / "reference_cell.yaml"), "--trials", "10"])
    assert rc == EXIT_CONFIG
    assert "trials" in capsys.readouterr().err


def test_solve_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cfg = str(CONFIGS / "reference_cell.yaml")
    main(["solve", "--config", cfg, "--out", str(a)])
    main(["solve", "--config", cfg, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()

"""
Monte Carlo checks of the analytic model.

Each simulator splits its trials into ``N_BATCHES`` batches.  Batch ``b``
draws from ``Philox(SeedSequence(seed).spawn(N_BATCHES)[b])``, so a report
depends only on ``(scenario, design, n_trials, seed)`` and batches can be
evaluated in any order.  Standard errors of nonlinear estimators (SINR) come
from the spread of the per-batch estimates; those of plain averages (KL
divergences) from the sample standard deviation.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DomainError
from .linalg import psd_sqrt
from .metrics import interference_plus_noise, kl_divergences, sinr
from .scenario import Design, Scenario

__all__ = [
    "Check",
    "MonteCarloReport",
    "simulate_radar_cell",
    "simulate_comm_cell",
    "estimate_kl",
    "N_BATCHES",
    "N_SIGMA",
]

N_BATCHES = 20
N_SIGMA = 4.0
MIN_RADAR_TRIALS = 1000
MIN_KL_TRIALS = 10_000
_ABS_FLOOR = 1e-12


@dataclass(frozen=True)
class Check:
    """One empirical-versus-analytic comparison."""

    name: str
    empirical: float
    analytic: float
    stderr: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.empirical - self.analytic) <= self.tolerance

    @property
    def z(self) -> float:
        if self.stderr == 0:
            return 0.0 if self.empirical == self.analytic else math.inf
        return (self.empirical - self.analytic) / self.stderr


@dataclass
class MonteCarloReport:
    """Empirical estimates, their analytic targets and the derived checks.

    Fields that a given simulator does not estimate are left as ``None``.
    """

    kind: str
    n_trials: int
    seed: int
    analytic_sinr: Optional[float] = None
    empirical_sinr: Optional[float] = None
    sinr_stderr: Optional[float] = None
    empirical_interf_cov_error: Optional[float] = None
    empirical_kl: Optional[Tuple[float, float]] = None
    kl_stderr: Optional[Tuple[float, float]] = None
    analytic_kl: Optional[Tuple[float, float]] = None
    bernoulli_hit_rate: Optional[float] = None
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_checks(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_text(self) -> str:
        lines = [f"[{self.kind}]", f"n_trials = {self.n_trials}", f"seed = {self.seed}"]
        for c in self.checks:
            lines.append(
                f"{c.name}: empirical {c.empirical:.12g} analytic {c.analytic:.12g} "
                f"stderr {c.stderr:.3g} tol {c.tolerance:.3g} "
                f"{'PASS' if c.passed else 'FAIL'}")
        return "\n".join(lines)

    def csv_rows(self) -> List[Dict[str, object]]:
        return [{
            "simulator": self.kind,
            "check": c.name,
            "empirical": f"{c.empirical:.12g}",
            "analytic": f"{c.analytic:.12g}",
            "stderr": f"{c.stderr:.12g}",
            "tolerance": f"{c.tolerance:.12g}",
            "passed": str(c.passed).lower(),
            "n_trials": self.n_trials,
            "seed": self.seed,
        } for c in self.checks]

    def to_csv(self) -> str:
        buf = io.StringIO()
        rows = self.csv_rows()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()


CSV_FIELDS = ["simulator", "check", "empirical", "analytic", "stderr", "tolerance",
              "passed", "n_trials", "seed"]


def _batches(n_trials: int, seed: int):
    children = np.random.SeedSequence(seed).spawn(N_BATCHES)
    sizes = [len(a) for a in np.array_split(np.arange(n_trials), N_BATCHES)]
    for size, child in zip(sizes, children):
        yield size, np.random.Generator(np.random.Philox(child))


def _cn(rng: np.random.Generator, n: int, factor: np.ndarray) -> np.ndarray:
    """``n`` rows distributed as CN(0, factor factor^H)."""
    N = factor.shape[0]
    z = (rng.standard_normal((n, N)) + 1j * rng.standard_normal((n, N))) / math.sqrt(2.0)
    return z @ factor.T


def _check_trials(n_trials, minimum):
    if int(n_trials) != n_trials or n_trials < minimum:
        raise DomainError(f"n_trials must be an integer >= {minimum}, got {n_trials}")
    return int(n_trials)


def _batch_stderr(values) -> float:
    v = np.asarray(values, dtype=float)
    return float(np.std(v, ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0


def _whitened_sinr(sc: Scenario, s: np.ndarray, scatter: np.ndarray, n: int) -> float:
    """``var_a s^H S^-1 s`` with the inverse-Wishart bias factor removed."""
    N = s.size
    S = scatter / n
    S = S + 1e-10 * float(np.trace(S).real) / N * np.eye(N)
    q = float(np.vdot(s, cho_solve(cho_factor(S), s)).real)
    return sc.var_a * q * (n - N) / n


def simulate_radar_cell(sc: Scenario, d: Design, hypothesis: str = "H0",
                        n_trials: int = 100_000, seed: int = 42) -> MonteCarloReport:
    """Simulate one radar range cell and estimate the SINR.

    Under ``H0`` the SINR is ``var_a s^H S^-1 s`` with ``S`` the sample
    covariance of the interference-plus-noise returns.  Under ``H1`` it is
    the output power ratio of the whitening matched filter ``K^-1 s``
    between target-present and target-absent returns, minus one.
    """
    n = _check_trials(n_trials, MIN_RADAR_TRIALS)
    if hypothesis not in ("H0", "H1"):
        raise DomainError(f"hypothesis must be 'H0' or 'H1', got {hypothesis!r}")
    s = d.s
    N = sc.N
    Fx = psd_sqrt(sc.var_g * d.R_x)
    Fw = psd_sqrt(sc.noise)
    sd_c = math.sqrt(sc.var_c / 2.0)
    sd_a = math.sqrt(sc.var_a / 2.0)
    K = interference_plus_noise(sc, d)
    analytic = sinr(sc, d)
    filt = np.linalg.solve(K, s) if np.any(s) else np.zeros(N, dtype=complex)

    def clutter(rng, m):
        return sd_c * (rng.standard_normal(m) + 1j * rng.standard_normal(m))

    scatter_total = np.zeros((N, N), dtype=complex)
    p0_total = p1_total = 0.0
    batch_est = []
    for m, rng in _batches(n, seed):
        r0 = _cn(rng, m, Fx) + clutter(rng, m)[:, None] * s + _cn(rng, m, Fw)
        if hypothesis == "H0":
            scatter = r0.T @ r0.conj()
            scatter_total += scatter
            if np.any(s):
                batch_est.append(_whitened_sinr(sc, s, scatter, m))
        else:
            a = sd_a * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
            r1 = (_cn(rng, m, Fx) + clutter(rng, m)[:, None] * s + _cn(rng, m, Fw)
                  + a[:, None] * s)
            p0 = float(np.sum(np.abs(r0 @ filt.conj()) ** 2))
            p1 = float(np.sum(np.abs(r1 @ filt.conj()) ** 2))
            p0_total += p0
            p1_total += p1
            if p0 > 0:
                batch_est.append(p1 / p0 - 1.0)

    if not np.any(s):
        est, se = 0.0, 0.0
    elif hypothesis == "H0":
        est, se = _whitened_sinr(sc, s, scatter_total, n), _batch_stderr(batch_est)
    else:
        est, se = p1_total / p0_total - 1.0, _batch_stderr(batch_est)
    check = Check(f"sinr_{hypothesis}", est, analytic, se,
                  N_SIGMA * se + _ABS_FLOOR * max(1.0, analytic))
    return MonteCarloReport(kind=f"radar_{hypothesis}", n_trials=n, seed=int(seed),
                            analytic_sinr=analytic, empirical_sinr=est, sinr_stderr=se,
                            checks=[check])


def _cov_check(name, scatter, count, target) -> Check:
    """Relative Frobenius error of a sample covariance.

    For complex Gaussian rows ``E ||S - C||_F^2 = tr(C)^2 / n``, so the
    error scale is ``tr(C) / (||C||_F sqrt(n))`` and the tolerance is
    ``N_SIGMA`` times that.
    """
    norm = float(np.linalg.norm(target))
    err = float(np.linalg.norm(scatter / count - target)) / norm
    scale = float(np.trace(target).real) / (norm * math.sqrt(count))
    return Check(name, err, 0.0, scale, N_SIGMA * scale)


def simulate_comm_cell(sc: Scenario, d: Design, n_trials: int = 100_000,
                       seed: int = 42) -> MonteCarloReport:
    """Simulate the communication receiver of one range cell.

    Each trial is interfered with probability ``alpha``; interfered trials
    add ``S f`` with ``f ~ CN(0, R_f)``.  Checks the interference-plus-noise
    covariance ``var_v I + S R_f S^H`` on interfered trials, the noise-only
    covariance ``var_v I`` on the others, the full observation covariance,
    and the hit rate.
    """
    n = _check_trials(n_trials, MIN_RADAR_TRIALS)
    N = sc.N
    S = np.diag(d.s)
    Ff = psd_sqrt(sc.R_f)
    Fx = psd_sqrt(d.R_x)
    sd_v = math.sqrt(sc.var_v / 2.0)
    h = math.sqrt(sc.h2)
    clean_target = sc.var_v * np.eye(N)
    hit_target = clean_target + S @ sc.R_f @ S.conj().T
    z_target = sc.h2 * d.R_x + hit_target

    hit_sc = np.zeros((N, N), dtype=complex)
    clean_sc = np.zeros((N, N), dtype=complex)
    z_sc = np.zeros((N, N), dtype=complex)
    hits = 0
    for m, rng in _batches(n, seed):
        zeta = rng.random(m) < sc.alpha
        v = sd_v * (rng.standard_normal((m, N)) + 1j * rng.standard_normal((m, N)))
        f = _cn(rng, m, Ff)
        x = _cn(rng, m, Fx)
        interf = v + zeta[:, None] * (f @ S.T)
        z = h * x + interf
        hit_rows = interf[zeta]
        clean_rows = interf[~zeta]
        hit_sc += hit_rows.T @ hit_rows.conj()
        clean_sc += clean_rows.T @ clean_rows.conj()
        z_sc += z[zeta].T @ z[zeta].conj()
        hits += int(zeta.sum())

    rate = hits / n
    se_rate = math.sqrt(sc.alpha * (1 - sc.alpha) / n)
    checks = [Check("hit_rate", rate, sc.alpha, se_rate, N_SIGMA * se_rate)]
    cov_err = None
    if hits > N:
        c = _cov_check("interference_cov", hit_sc, hits, hit_target)
        checks.append(c)
        checks.append(_cov_check("observation_cov", z_sc, hits, z_target))
        cov_err = c.empirical
    if n - hits > N:
        c = _cov_check("noise_only_cov", clean_sc, n - hits, clean_target)
        checks.append(c)
        if cov_err is None:
            cov_err = c.empirical
    return MonteCarloReport(kind="comm", n_trials=n, seed=int(seed),
                            empirical_interf_cov_error=cov_err,
                            bernoulli_hit_rate=rate, checks=checks)


def _gauss_loglik(r: np.ndarray, chol, logdet: float) -> np.ndarray:
    y = cho_solve(chol, r.T)
    quad = np.einsum("ij,ij->j", r.T.conj(), y).real
    return -quad - logdet - r.shape[1] * math.log(math.pi)


def estimate_kl(sc: Scenario, d: Design, n_trials: int = 100_000,
                seed: int = 42) -> MonteCarloReport:
    """Monte Carlo estimates of both KL divergences between target hypotheses.

    The log-likelihood ratio ``ln f1(r) - ln f0(r)`` is evaluated from the
    complete Gaussian densities with covariances ``K`` and
    ``K + var_a s s^H``.  Averaging it over ``H1`` draws estimates
    ``D(f1 || f0)``; minus its average over ``H0`` draws estimates
    ``D(f0 || f1)``.  Results are in nats.
    """
    n = _check_trials(n_trials, MIN_KL_TRIALS)
    K0 = interference_plus_noise(sc, d)
    K1 = K0 + sc.var_a * np.outer(d.s, d.s.conj())
    c0, c1 = cho_factor(K0, lower=True), cho_factor(K1, lower=True)
    ld0 = 2.0 * float(np.sum(np.log(np.diag(c0[0]).real)))
    ld1 = 2.0 * float(np.sum(np.log(np.diag(c1[0]).real)))
    F0, F1 = psd_sqrt(K0), psd_sqrt(K1)

    llr1, llr0 = [], []
    for m, rng in _batches(n, seed):
        r1 = _cn(rng, m, F1)
        r0 = _cn(rng, m, F0)
        llr1.append(_gauss_loglik(r1, c1, ld1) - _gauss_loglik(r1, c0, ld0))
        llr0.append(_gauss_loglik(r0, c1, ld1) - _gauss_loglik(r0, c0, ld0))
    l1 = np.concatenate(llr1)
    l0 = -np.concatenate(llr0)
    emp = (float(l1.mean()), float(l0.mean()))
    se = (float(l1.std(ddof=1) / math.sqrt(n)), float(l0.std(ddof=1) / math.sqrt(n)))
    rho = sinr(sc, d)
    ana = kl_divergences(rho)
    checks = [
        Check("kl_10", emp[0], ana[0], se[0], N_SIGMA * se[0] + _ABS_FLOOR),
        Check("kl_01", emp[1], ana[1], se[1], N_SIGMA * se[1] + _ABS_FLOOR),
    ]
    return MonteCarloReport(kind="kl", n_trials=n, seed=int(seed), analytic_sinr=rho,
                            empirical_kl=emp, kl_stderr=se, analytic_kl=tuple(ana),
                            checks=checks)

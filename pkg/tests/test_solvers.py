import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from coexist.errors import InfeasibleError, UnsupportedError
from coexist.linalg import random_unitary
from coexist.metrics import rate0, sinr
from coexist.scenario import InterferenceModel, SolverTag, exp_corr_noise, from_db_spec
from coexist.solvers import (feasibility_joint, fixed_waveform_gamma,
                             solve_coherent_fixed_codebook, solve_coherent_fixed_waveform,
                             solve_colored_joint, solve_joint, solve_optimal)


def test_feasibility_rho_max_white():
    sc = from_db_spec(10, 10, 20, 10, N=8)
    f = feasibility_joint(sc)
    NPr = sc.total_radar_energy
    assert f.feasible
    assert f.rho_max == pytest.approx(NPr / (0.01 * NPr + 1), rel=1e-12)
    assert 10 * math.log10(f.rho_max) == pytest.approx(16.66, abs=0.01)


def test_feasibility_clutter_free_and_colored():
    sc = from_db_spec(10, 10, 20, 10, N=8).replace(var_c=0.0)
    assert feasibility_joint(sc).rho_max == pytest.approx(sc.total_radar_energy)
    white = from_db_spec(10, 10, 20, 10, N=8)
    colored = white.replace(noise=exp_corr_noise(8, 2 / 3))
    assert feasibility_joint(colored).rho_max > feasibility_joint(white).rho_max


def test_feasibility_clutter_limited():
    sc = from_db_spec(10, 10, 5, 6, N=8)  # var_c * rho_min > var_a
    assert not feasibility_joint(sc).feasible
    with pytest.raises(InfeasibleError):
        solve_joint(sc)


def test_fixed_codebook_white():
    sc = from_db_spec(10, 10, 20, 10, N=4).replace(rho_min=2.0)
    out = solve_coherent_fixed_codebook(sc, sc.P_c * np.eye(4))
    assert out.epsilon_star == pytest.approx(2 * 11 / 0.98, rel=1e-12)
    assert out.sinr == pytest.approx(2.0, rel=1e-9)
    assert out.sinr == pytest.approx(sinr(sc, out.design), rel=1e-12)


def test_fixed_codebook_with_empty_direction(rng):
    sc = from_db_spec(10, 10, 20, 10, N=4)
    U = random_unitary(4, rng)
    R = (U * np.array([16.0, 12.0, 12.0, 0.0])) @ U.conj().T
    out = solve_coherent_fixed_codebook(sc, R)
    assert out.epsilon_star == pytest.approx(sc.rho_min / (1 - 0.01 * sc.rho_min), rel=1e-9)
    assert out.sinr == pytest.approx(sc.rho_min, rel=1e-9)


def test_fixed_codebook_infeasible_reports_rho_max():
    sc = from_db_spec(10, 10, 20, 16, N=4)
    with pytest.raises(InfeasibleError) as exc:
        solve_coherent_fixed_codebook(sc, sc.P_c * np.eye(4))
    NPr = sc.total_radar_energy
    assert exc.value.rho_max == pytest.approx(NPr / (sc.P_c + 0.01 * NPr + 1))


def _grid_fixed_waveform(sc, E, n=1_000_001):
    N, b = sc.N, sc.beta
    c, f = sc.h2 / sc.var_v, sc.var_f / sc.var_v
    up = min(sc.P_c, (sc.var_a * E - (sc.var_w + sc.var_c * E) * sc.rho_min)
             / (sc.var_g * sc.rho_min))

    def G(g):
        return ((N - 1) * np.log1p(c * (N * sc.P_c - g) / (N - 1)) + (1 - b) * np.log1p(c * g)
                + b * np.log1p(c * g + f * E) - b * np.log1p(f * E))

    grid = np.linspace(0, up, n)
    v = G(grid)
    i = int(np.argmax(v))
    res = minimize_scalar(lambda x: -G(x), bounds=(grid[max(i - 1, 0)], grid[min(i + 1, n - 1)]),
                          method="bounded", options={"xatol": 1e-13})
    return max(v[i], -res.fun), up


def test_fixed_waveform_against_grid(rng):
    checked = 0
    while checked < 15:
        sc = from_db_spec(rng.uniform(0, 20), rng.uniform(-10, 20), rng.uniform(10, 30),
                          rng.uniform(-5, 12), N=int(rng.integers(2, 12)),
                          beta=rng.uniform(0, 1))
        E = rng.uniform(0.2, 1.0) * sc.total_radar_energy
        if sc.rho_min > E / (sc.var_c * E + 1):
            continue
        s = rng.standard_normal(sc.N) + 1j * rng.standard_normal(sc.N)
        s *= math.sqrt(E) / np.linalg.norm(s)
        out = solve_coherent_fixed_waveform(sc, s)
        best, up = _grid_fixed_waveform(sc, E)
        if up < 0:
            continue
        assert out.cr == pytest.approx(best / sc.N / math.log(2), abs=1e-8)
        assert out.sinr >= sc.rho_min * (1 - 1e-9)
        assert np.allclose(out.design.R_x @ s, out.gamma_N_star * s, atol=1e-8 * sc.P_c)
        checked += 1


def test_fixed_waveform_beta_zero_is_uniform_when_unconstrained():
    sc = from_db_spec(10, 10, 20, 0, N=4, beta=0.0)
    assert fixed_waveform_gamma(sc, sc.total_radar_energy) == pytest.approx(sc.P_c, rel=1e-9)


def test_fixed_waveform_precondition():
    sc = from_db_spec(10, 10, 20, 10, N=4)
    with pytest.raises(InfeasibleError):
        solve_coherent_fixed_waveform(sc, np.array([0.1, 0, 0, 0]))


@pytest.mark.parametrize("N,beta,inr,expected", [(8, 0.5, 10, 3.27), (32, 0.1, -10, 3.45)])
def test_joint_table_rows(N, beta, inr, expected):
    out = solve_joint(from_db_spec(10, inr, 20, 10, N=N, beta=beta))
    assert out.cr == pytest.approx(expected, abs=0.02)
    assert out.solver_tag is SolverTag.JOINT


def test_joint_structure_and_sinr():
    for model in ("coherent", "incoherent"):
        sc = from_db_spec(10, 10, 20, 10, N=6, beta=0.3, model=model)
        out = solve_joint(sc)
        R, s = out.design.R_x, out.design.s
        assert np.allclose(R, np.diag(np.diag(R)))
        assert np.allclose(s[:-1], 0) and s[-1].real > 0
        assert out.sinr == pytest.approx(sc.rho_min, rel=1e-9)
        assert out.cr == pytest.approx(sc.beta * out.r1 + (1 - sc.beta) * out.r0, abs=1e-12)


def test_joint_coherent_equals_incoherent():
    for rho in np.linspace(0, 16, 9):
        a = solve_joint(from_db_spec(10, 10, 20, rho, N=8, beta=0.1, model="coherent"))
        b = solve_joint(from_db_spec(10, 10, 20, rho, N=8, beta=0.1, model="incoherent"))
        assert a.cr == pytest.approx(b.cr, abs=1e-12)


def test_joint_beta_zero_white_codebook():
    sc = from_db_spec(10, 10, 20, 5, N=8, beta=0.0)
    out = solve_joint(sc)
    assert out.gamma_N_star == pytest.approx(sc.P_c, rel=1e-9)
    assert out.cr == pytest.approx(rate0(sc, sc.P_c * np.eye(8)), abs=1e-12)


def test_joint_rejects_general_and_colored():
    R = 10 * np.eye(2, dtype=complex)
    with pytest.raises(UnsupportedError):
        solve_joint(from_db_spec(10, 10, 20, 5, N=2, model=InterferenceModel.general(R)))
    with pytest.raises(UnsupportedError):
        solve_joint(from_db_spec(10, 10, 20, 5, N=3, noise=exp_corr_noise(3, 0.5)))


def test_colored_reduces_to_white():
    sc = from_db_spec(10, 10, 20, 10, N=8, beta=0.5)
    assert solve_colored_joint(sc).cr == pytest.approx(solve_joint(sc).cr, abs=1e-12)


def test_colored_exp_corr():
    white = from_db_spec(10, 10, 20, 10, N=8, beta=0.5)
    colored = white.replace(noise=exp_corr_noise(8, 2 / 3))
    out = solve_colored_joint(colored)
    assert out.cr >= solve_joint(white).cr - 1e-12
    assert out.sinr == pytest.approx(colored.rho_min, rel=1e-9)
    assert out.sinr == pytest.approx(sinr(colored, out.design), rel=1e-12)
    phi, v = colored.noise_min_eigpair
    s = out.design.s
    assert abs(abs(np.vdot(v, s)) - np.linalg.norm(s)) < 1e-9 * np.linalg.norm(s)
    assert solve_optimal(colored).cr == out.cr


def test_colored_incoherent_unsupported():
    sc = from_db_spec(10, 10, 20, 10, N=4, model="incoherent", noise=exp_corr_noise(4, 0.5))
    with pytest.raises(UnsupportedError):
        solve_colored_joint(sc)

import numpy as np
import pytest

from coexist.metrics import sinr
from coexist.scenario import from_db_spec
from coexist.solvers import baseline_disjoint, baseline_orthogonal, solve_joint


@pytest.mark.parametrize("model", ["coherent", "incoherent"])
@pytest.mark.parametrize("rho", [0.0, 4.0, 8.0])
def test_baselines_below_joint(model, rho):
    sc = from_db_spec(10, 10, 20, rho, N=8, beta=0.1, model=model)
    joint = solve_joint(sc).cr
    for out in (baseline_disjoint(sc), baseline_orthogonal(sc)):
        assert out.feasible
        assert out.cr <= joint + 1e-12
        assert out.sinr == pytest.approx(sc.rho_min, rel=1e-9)
        assert out.design.power_ok(sc)


def test_orthogonal_coherent_beats_incoherent():
    coh = baseline_orthogonal(from_db_spec(10, 10, 20, 5, N=8, beta=0.5, model="coherent"))
    inc = baseline_orthogonal(from_db_spec(10, 10, 20, 5, N=8, beta=0.5, model="incoherent"))
    # coherent echoes stay in span(u), so R1 equals R0
    assert coh.r1 == pytest.approx(coh.r0, abs=1e-12)
    assert inc.cr < coh.cr


def test_orthogonal_subspaces():
    sc = from_db_spec(10, 10, 20, 5, N=6)
    d = baseline_orthogonal(sc).design
    assert np.linalg.norm(d.R_x @ d.s) < 1e-10
    assert np.trace(d.R_x).real == pytest.approx(6 * sc.P_c)


def test_disjoint_infeasible_flag():
    sc = from_db_spec(10, 10, 20, 16.5, N=8)
    out = baseline_disjoint(sc)
    assert not out.feasible
    assert out.epsilon_star == pytest.approx(sc.total_radar_energy)
    assert sinr(sc, out.design) < sc.rho_min


def test_clutter_limited_flag():
    out = baseline_orthogonal(from_db_spec(10, 10, 5, 6, N=4))
    assert not out.feasible


def test_disjoint_nearly_optimal_at_small_targets():
    for rho in (-5.0, 0.0, 2.0):
        sc = from_db_spec(10, 10, 20, rho, N=8, beta=0.1, model="coherent")
        assert solve_joint(sc).cr - baseline_disjoint(sc).cr <= 0.05
    # incoherent echoes hit every dimension, so the gap closes only at lower targets
    gaps = [solve_joint(sc).cr - baseline_disjoint(sc).cr
            for sc in (from_db_spec(10, 10, 20, r, N=8, beta=0.1, model="incoherent")
                       for r in (-10.0, -15.0, -20.0))]
    assert gaps[0] > gaps[1] > gaps[2] and gaps[1] <= 0.05


def test_disjoint_clutter_free_energy():
    sc = from_db_spec(10, 10, 20, 0, N=8).replace(var_c=0.0)
    out = baseline_disjoint(sc)
    assert out.epsilon_star == pytest.approx(sc.rho_min * (sc.var_g * sc.P_c + sc.var_w)
                                             / sc.var_a, rel=1e-12)

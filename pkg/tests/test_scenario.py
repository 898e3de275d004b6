import math

import numpy as np
import pytest

from coexist.errors import DomainError
from coexist.scenario import (Design, InterferenceKind, InterferenceModel, db2lin,
                              exp_corr_noise, from_db_spec, lin2db, swerling1_required_snr,
                              validate)


def test_from_db_spec_normalization():
    sc = from_db_spec(10, 10, 20, 10, N=8)
    assert sc.P_c == pytest.approx(10.0)
    assert sc.var_f == pytest.approx(10.0)
    assert sc.var_c == pytest.approx(0.01)
    assert sc.rho_min == pytest.approx(10.0)
    assert (sc.var_v, sc.var_w, sc.var_a, sc.h2, sc.var_g) == (1, 1, 1, 1, 1)
    assert sc.alpha == sc.beta == 0.5
    assert sc.is_white and sc.model is InterferenceKind.COHERENT


def test_default_cumulated_snr_is_swerling_value():
    sc = from_db_spec(10, 10, 20, 10, N=8)
    assert sc.total_radar_energy == pytest.approx(math.log(1e-4) / math.log(0.9) - 1, rel=1e-12)
    assert lin2db(sc.total_radar_energy) == pytest.approx(19.37, abs=0.01)


def test_explicit_cumulated_snr():
    sc = from_db_spec(10, 10, 20, 10, cum_radar_snr_db=19.416, N=4)
    assert sc.total_radar_energy == pytest.approx(87.42, abs=0.01)


def test_db_round_trip():
    sc = from_db_spec(7.3, -4.1, 13.2, 2.5, cum_radar_snr_db=18.0, N=3)
    assert lin2db(sc.h2 * sc.P_c / sc.var_v) == pytest.approx(7.3, abs=1e-12)
    assert lin2db(sc.var_f / sc.var_v) == pytest.approx(-4.1, abs=1e-12)
    assert lin2db(sc.var_a / sc.var_c) == pytest.approx(13.2, abs=1e-12)
    assert lin2db(sc.rho_min) == pytest.approx(2.5, abs=1e-12)
    assert lin2db(sc.total_radar_energy / sc.var_w) == pytest.approx(18.0, abs=1e-12)
    assert db2lin(lin2db(3.7)) == pytest.approx(3.7, rel=1e-14)


@pytest.mark.parametrize("pd,pfa,expected", [(0.5, 0.25, 1.0), (0.5, 0.5 ** 10, 9.0)])
def test_swerling_exact_cases(pd, pfa, expected):
    assert swerling1_required_snr(pd, pfa) == pytest.approx(expected, rel=1e-12)


def test_swerling_identity_holds():
    snr = swerling1_required_snr(0.9, 1e-4)
    assert 1e-4 ** (1 / (1 + snr)) == pytest.approx(0.9, rel=1e-12)
    assert snr == pytest.approx(86.42, abs=0.005)


def test_swerling_rejects_bad_order():
    with pytest.raises(DomainError):
        swerling1_required_snr(0.1, 0.2)


def test_n_below_two_rejected():
    with pytest.raises(DomainError):
        from_db_spec(10, 10, 20, 10, N=1)


def test_validate_names_noise_field():
    sc = from_db_spec(10, 10, 20, 10, N=3)
    bad = sc.replace(noise=np.diag([1.0, 2.0, 1.0]).astype(complex))
    with pytest.raises(DomainError, match="noise"):
        validate(bad)


def test_validate_papr_range():
    with pytest.raises(DomainError, match="papr_delta"):
        from_db_spec(10, 10, 20, 10, N=4, papr_delta=0.5)


def test_validate_collects_multiple_errors():
    sc = from_db_spec(10, 10, 20, 10, N=3)
    with pytest.raises(DomainError) as exc:
        validate(sc.replace(beta=1.5, P_c=-1.0))
    assert "beta" in str(exc.value) and "P_c" in str(exc.value)


def test_interference_models():
    assert np.allclose(InterferenceModel.parse("coherent").covariance(3, 2.0), 2 * np.ones((3, 3)))
    assert np.allclose(InterferenceModel.parse("INCOHERENT").covariance(3, 2.0), 2 * np.eye(3))
    with pytest.raises(DomainError):
        InterferenceModel.parse("general")
    with pytest.raises(DomainError):
        InterferenceModel.parse("bogus")


def test_general_model_diagonal_checked():
    R = np.array([[10, 3], [3, 10]], dtype=complex)
    sc = from_db_spec(10, 10, 20, 10, N=2, model=InterferenceModel.general(R))
    assert sc.model is InterferenceKind.GENERAL
    with pytest.raises(DomainError, match="diagonal"):
        from_db_spec(10, 10, 20, 10, N=2, model=InterferenceModel.general(np.eye(2)))


def test_exp_corr_noise():
    M = exp_corr_noise(4, 0.5, var_w=2.0)
    assert M[0, 3] == pytest.approx(2 * 0.125)
    sc = from_db_spec(10, 10, 20, 10, N=4, noise=exp_corr_noise(4, 0.5))
    assert not sc.is_white and sc.var_w == pytest.approx(1.0)


def test_design_power_check():
    sc = from_db_spec(10, 10, 20, 10, N=2)
    ok = Design(sc.P_c * np.eye(2), np.sqrt(sc.total_radar_energy) * np.array([1, 0]))
    assert ok.power_ok(sc)
    too_loud = Design(1.01 * sc.P_c * np.eye(2), np.zeros(2))
    assert not too_loud.power_ok(sc)

import numpy as np
import pytest

from coexist.config import load_config, parse_config
from coexist.errors import ConfigError
from coexist.scenario import InterferenceKind, swerling1_required_snr


def test_defaults():
    cfg = parse_config("scenario: {N: 4}\n")
    sc = cfg.scenario()
    assert sc.N == 4 and sc.beta == 0.5
    assert sc.model is InterferenceKind.COHERENT
    assert cfg.solver == "optimal" and cfg.sweep is None


def test_pd_pfa_matches_swerling():
    cfg = parse_config("scenario: {N: 4, pd: 0.9, pfa: 1.0e-4}\n")
    sc = cfg.scenario()
    assert sc.total_radar_energy == pytest.approx(swerling1_required_snr(0.9, 1e-4) * sc.var_w,
                                                  rel=1e-12)


@pytest.mark.parametrize("text,line,fragment", [
    ("scenario:\n  N: 4\n  bogus: 1\n", 3, "unknown key"),
    ("scenario:\n  N: 1\n", 2, "N must be >= 2"),
    ("scenario:\n  N: 4\nsolver: magic\n", 3, "unknown solver"),
    ("scenario:\n  N: 4\nsweep:\n  axis: N\n  values: [2, 2]\n", 5, "strictly monotone"),
    ("scenario:\n  N: 4\n  noise: {exp_corr: 1.5}\n", 3, "correlation"),
    ("scenario:\n  N: 4\n  beta: [0.5\n  model: x\n", 4, "YAML syntax error"),
    ("scenario:\n  N: 4\n  R_f: [[1, 0], [0, 1]]\n", 3, "R_f requires model: general"),
])
def test_errors_carry_line(text, line, fragment):
    with pytest.raises(ConfigError) as exc:
        parse_config(text, source="x.yaml")
    msg = str(exc.value)
    assert msg.startswith(f"x.yaml:{line}")
    assert fragment in msg


def test_sweep_ranges():
    cfg = parse_config("sweep:\n  axis: rho_min_db\n  values: {start: 0, stop: 2, step: 0.5}\n")
    assert cfg.sweep.values == pytest.approx([0, 0.5, 1, 1.5, 2])
    cfg = parse_config("sweep:\n  axis: beta\n  values: {start: 1, stop: 0, num: 3}\n")
    assert cfg.sweep.values == pytest.approx([1, 0.5, 0])
    assert cfg.sweep.solvers == ["optimal"]


def test_general_model_and_noise_forms():
    text = ("scenario:\n  N: 2\n  model: general\n"
            "  R_f: [['10', '1+1j'], ['1-1j', '10']]\n"
            "  noise: {entries: [[1, 0.5], [0.5, 1]]}\n")
    sc = parse_config(text).scenario()
    assert sc.model is InterferenceKind.GENERAL
    assert sc.R_f[0, 1] == pytest.approx(1 + 1j)
    assert np.allclose(sc.noise, [[1, 0.5], [0.5, 1]])


def test_overrides_and_domain_errors():
    cfg = parse_config("scenario: {N: 4, model: incoherent}\n")
    assert cfg.scenario(delta=2.0).papr_delta == 2.0
    assert cfg.scenario(noise=0.5).noise[0, 1] == pytest.approx(0.5)
    with pytest.raises(ConfigError):
        cfg.scenario(beta=1.5)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "none.yaml")


def test_shipped_configs_parse():
    import pathlib
    root = pathlib.Path(__file__).resolve().parents[1] / "configs"
    files = sorted(root.glob("*.yaml"))
    assert files
    for f in files:
        load_config(f).scenario()

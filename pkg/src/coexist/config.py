"""
YAML experiment configuration.

Example::

    scenario:
      N: 8
      snr_db: 10          # |h|^2 P_c / var_v
      inr_db: 10          # var_f / var_v
      scr_db: 20          # var_a / var_c
      rho_min_db: 10
      pd: 0.9             # or cum_radar_snr_db: 19.4
      pfa: 1.0e-4
      beta: 0.5
      alpha: 0.5          # defaults to beta
      model: coherent     # coherent | incoherent | general (needs R_f)
      noise: {exp_corr: 0.5}   # or {entries: [[...], ...]}
      papr_delta: 1.5
    solver: optimal
    sweep:
      axis: rho_min_db
      values: {start: 0, stop: 16, step: 1}
      solvers: [optimal, disjoint, orthogonal]
    region: {n_samples: 2000, models: [coherent, incoherent]}
    verify: {trials: 100000, seed: 42}

Complex matrix entries (``noise.entries``, ``R_f``) may be numbers or
strings such as ``"0.5-0.2j"``.  Errors carry the line of the offending key.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from .errors import ConfigError, DomainError
from .scenario import (DEFAULT_PD, DEFAULT_PFA, InterferenceModel, Scenario, exp_corr_noise,
                       from_db_spec, lin2db, swerling1_required_snr)
from .solvers import SOLVERS

__all__ = [
    "ScenarioConfig",
    "SweepConfig",
    "load_config",
    "parse_config",
    "SWEEP_AXES",
]

SWEEP_AXES = ("rho_min_db", "beta", "inr_db", "N", "delta", "alpha")

_SCENARIO_KEYS = {
    "N", "snr_db", "inr_db", "scr_db", "rho_min_db", "cum_radar_snr_db", "pd", "pfa",
    "beta", "alpha", "model", "noise", "R_f", "papr_delta",
}
_TOP_KEYS = {"scenario", "solver", "sweep", "region", "verify"}

DEFAULTS = {
    "N": 8,
    "snr_db": 10.0,
    "inr_db": 10.0,
    "scr_db": 20.0,
    "rho_min_db": 10.0,
    "beta": 0.5,
    "model": "coherent",
}


def _lines(node, path=()) -> Dict[Tuple, int]:
    """Map each key path of a composed YAML tree to its 1-based line."""
    out = {path: node.start_mark.line + 1}
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            key = k.value
            out[path + (key,)] = k.start_mark.line + 1
            for p, line in _lines(v, path + (key,)).items():
                out.setdefault(p, line)
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            out.update(_lines(v, path + (i,)))
    return out


class _Ctx:
    def __init__(self, source: str, lines: Dict[Tuple, int]):
        self.source = source
        self.lines = lines

    def error(self, path: Sequence, msg: str) -> ConfigError:
        path = tuple(path)
        line = None
        for k in range(len(path), -1, -1):
            if path[:k] in self.lines:
                line = self.lines[path[:k]]
                break
        where = ".".join(str(p) for p in path) or "<root>"
        prefix = f"{self.source}:{line}" if line else self.source
        return ConfigError(f"{prefix}: {where}: {msg}")


def _number(ctx, path, value, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ctx.error(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ctx.error(path, "must be finite")
    if integer:
        if int(value) != value:
            raise ctx.error(path, f"expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _complex_matrix(ctx, path, value) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ctx.error(path, "expected a list of rows")
    n = len(value)
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(value):
        if len(row) != n:
            raise ctx.error(path + (i,), f"row has {len(row)} entries, expected {n}")
        for j, v in enumerate(row):
            try:
                out[i, j] = complex(str(v).replace(" ", "")) if isinstance(v, str) else complex(v)
            except (TypeError, ValueError):
                raise ctx.error(path + (i, j), f"not a complex number: {v!r}") from None
    return out


def _values(ctx, path, spec) -> List[float]:
    if isinstance(spec, list):
        vals = [_number(ctx, path + (i,), v) for i, v in enumerate(spec)]
    elif isinstance(spec, dict):
        unknown = set(spec) - {"start", "stop", "step", "num"}
        if unknown:
            raise ctx.error(path + (sorted(unknown)[0],), "unknown range key")
        if "start" not in spec or "stop" not in spec:
            raise ctx.error(path, "range needs start and stop")
        a = _number(ctx, path + ("start",), spec["start"])
        b = _number(ctx, path + ("stop",), spec["stop"])
        if "num" in spec:
            num = _number(ctx, path + ("num",), spec["num"], integer=True)
            if num < 1:
                raise ctx.error(path + ("num",), "must be >= 1")
            vals = list(np.linspace(a, b, num))
        elif "step" in spec:
            step = _number(ctx, path + ("step",), spec["step"])
            if step == 0 or (b - a) * step < 0:
                raise ctx.error(path + ("step",), "step must move from start towards stop")
            count = int(math.floor((b - a) / step + 1e-9)) + 1
            vals = [a + k * step for k in range(count)]
        else:
            raise ctx.error(path, "range needs step or num")
    else:
        raise ctx.error(path, "expected a list or a {start, stop, step|num} range")
    if not vals:
        raise ctx.error(path, "no values")
    diffs = np.diff(vals)
    if len(vals) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ctx.error(path, "values must be strictly monotone")
    return [float(v) for v in vals]


@dataclass
class SweepConfig:
    axis: str
    values: List[float]
    solvers: List[str]


@dataclass
class ScenarioConfig:
    """Parsed configuration; ``scenario()`` builds the linear-unit scenario."""

    params: Dict[str, Any]
    solver: str = "optimal"
    sweep: Optional[SweepConfig] = None
    region: Dict[str, Any] = field(default_factory=dict)
    verify: Dict[str, Any] = field(default_factory=dict)
    source: str = "<config>"

    def scenario(self, **overrides) -> Scenario:
        """Build the scenario, optionally overriding dB-domain parameters.

        ``overrides`` uses the config names (``rho_min_db``, ``N``, ...);
        ``delta`` is accepted as an alias of ``papr_delta``.
        """
        p = dict(self.params)
        if "delta" in overrides:
            overrides["papr_delta"] = overrides.pop("delta")
        p.update(overrides)
        N = int(p["N"])
        noise = p.get("noise")
        if isinstance(noise, float):
            noise = exp_corr_noise(N, noise)
        model = p.get("model", "coherent")
        if p.get("R_f") is not None:
            model = InterferenceModel.general(p["R_f"])
        try:
            return from_db_spec(
                snr_comm_db=p["snr_db"], inr_db=p["inr_db"], scr_db=p["scr_db"],
                rho_min_db=p["rho_min_db"], cum_radar_snr_db=p.get("cum_radar_snr_db"),
                N=N, beta=p["beta"], alpha=p.get("alpha"), model=model, noise=noise,
                papr_delta=p.get("papr_delta"))
        except DomainError as exc:
            raise ConfigError(f"{self.source}: scenario: {exc}") from exc


def _parse_scenario(ctx, raw) -> Dict[str, Any]:
    path = ("scenario",)
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ctx.error(path, "expected a mapping")
    unknown = set(raw) - _SCENARIO_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ctx.error(path + (key,), f"unknown key {key!r}")
    p = dict(DEFAULTS)
    for key in ("snr_db", "inr_db", "scr_db", "rho_min_db", "cum_radar_snr_db",
                "beta", "alpha", "papr_delta"):
        if raw.get(key) is not None:
            p[key] = _number(ctx, path + (key,), raw[key])
    if "N" in raw:
        p["N"] = _number(ctx, path + ("N",), raw["N"], integer=True)
        if p["N"] < 2:
            raise ctx.error(path + ("N",), "N must be >= 2")

    if "pd" in raw or "pfa" in raw:
        if "cum_radar_snr_db" in raw:
            raise ctx.error(path + ("pd",), "give either pd/pfa or cum_radar_snr_db")
        pd = _number(ctx, path + ("pd",), raw.get("pd", DEFAULT_PD))
        pfa = _number(ctx, path + ("pfa",), raw.get("pfa", DEFAULT_PFA))
        try:
            p["cum_radar_snr_db"] = lin2db(swerling1_required_snr(pd, pfa))
        except DomainError as exc:
            raise ctx.error(path + ("pd",), str(exc)) from None

    if "model" in raw:
        model = str(raw["model"]).lower()
        if model not in ("coherent", "incoherent", "general"):
            raise ctx.error(path + ("model",), f"unknown interference model {raw['model']!r}")
        p["model"] = model
    if p["model"] == "general" or "R_f" in raw:
        if "R_f" not in raw:
            raise ctx.error(path + ("model",), "general interference needs R_f")
        if p["model"] != "general":
            raise ctx.error(path + ("R_f",), "R_f requires model: general")
        p["R_f"] = _complex_matrix(ctx, path + ("R_f",), raw["R_f"])

    noise = raw.get("noise")
    if noise is not None:
        npath = path + ("noise",)
        if not isinstance(noise, dict) or len(noise) != 1:
            raise ctx.error(npath, "expected {exp_corr: r} or {entries: [[...]]}")
        (kind, value), = noise.items()
        if kind == "exp_corr":
            r = _number(ctx, npath + (kind,), value)
            if not 0 <= r < 1:
                raise ctx.error(npath + (kind,), "correlation must lie in [0, 1)")
            p["noise"] = r
        elif kind == "entries":
            p["noise"] = _complex_matrix(ctx, npath + (kind,), value)
        else:
            raise ctx.error(npath + (kind,), f"unknown noise form {kind!r}")
    return p


def parse_config(text: str, source: str = "<config>") -> ScenarioConfig:
    """Parse and validate configuration text."""
    try:
        root = yaml.compose(text)
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = f":{mark.line + 1}" if mark is not None else ""
        raise ConfigError(f"{source}{line}: YAML syntax error: "
                          f"{getattr(exc, 'problem', None) or exc}") from None
    if raw is None:
        raw = {}
    ctx = _Ctx(source, _lines(root) if root is not None else {})
    if not isinstance(raw, dict):
        raise ctx.error((), "top level must be a mapping")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ctx.error((key,), f"unknown section {key!r}")

    params = _parse_scenario(ctx, raw.get("scenario"))
    solver = str(raw.get("solver", "optimal"))
    if solver not in SOLVERS:
        raise ctx.error(("solver",), f"unknown solver {solver!r}; choose from {sorted(SOLVERS)}")

    sweep = None
    if raw.get("sweep") is not None:
        s = raw["sweep"]
        if not isinstance(s, dict):
            raise ctx.error(("sweep",), "expected a mapping")
        axis = s.get("axis")
        if axis not in SWEEP_AXES:
            raise ctx.error(("sweep", "axis"), f"axis must be one of {SWEEP_AXES}, got {axis!r}")
        if "values" not in s:
            raise ctx.error(("sweep",), "missing values")
        values = _values(ctx, ("sweep", "values"), s["values"])
        if axis == "N" and any(int(v) != v or v < 2 for v in values):
            raise ctx.error(("sweep", "values"), "N values must be integers >= 2")
        solvers = s.get("solvers", [solver])
        if isinstance(solvers, str):
            solvers = [solvers]
        for i, name in enumerate(solvers):
            if name not in SOLVERS:
                raise ctx.error(("sweep", "solvers", i), f"unknown solver {name!r}")
        sweep = SweepConfig(axis, values, list(solvers))

    region = raw.get("region") or {}
    verify = raw.get("verify") or {}
    for name, sec in (("region", region), ("verify", verify)):
        if not isinstance(sec, dict):
            raise ctx.error((name,), "expected a mapping")
    for key in ("n_samples", "trials", "seed"):
        for name, sec in (("region", region), ("verify", verify)):
            if key in sec:
                sec[key] = _number(ctx, (name, key), sec[key], integer=True)

    cfg = ScenarioConfig(params, solver, sweep, dict(region), dict(verify), source)
    cfg.scenario()
    return cfg


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    return parse_config(text, str(path))

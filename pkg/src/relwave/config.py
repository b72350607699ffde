"""Run configuration: INI-style ``.cfg`` files parsed with :mod:`configparser`.

Schema (section / key, default)::

    [system]   kind = rotor | hydrogen            (required)
               R = 1000         ring radius, bohr (rotor)
               c = 137.035999037
               m0 = 1
               j = 0.5, l = 1   (hydrogen)
    [packet]   nbar, sigma0, theta0 = 0, window = auto
    [run]      outputs = comma list of energies, timescales, breakdown,
                         rotor-moments, rotor-density, autocorr, compare
               grid_size = 2048
    [energies] n_min, n_max     (hydrogen defaults 1..300 with j only;
                                 rotor defaults -10..10)
    [peaks]    min_height = 0.02
               min_separation = 0.125 t_cl
    [window:<name>]  center, half_width, step   (each "<expr> <unit>")

Dimensioned values are an arithmetic expression (numbers, ``pi``,
``+ - * / **``) followed by a unit: ``au``, ``s``, ``ms``, ``ns``, ``ps``
or one of the model timescales ``t_cl``, ``t_rev``, ``t_sup`` (relativistic,
at ``nbar``).
"""
from __future__ import annotations

import ast
import configparser
import hashlib
import math
import operator
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .units import TIME_UNITS

OUTPUTS = ("energies", "timescales", "breakdown", "rotor-moments", "rotor-density", "autocorr", "compare")
MODEL_TIME_UNITS = ("t_cl", "t_rev", "t_sup")

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def eval_expr(text: str) -> float:
    """Evaluate a restricted arithmetic expression such as ``4*pi*1e6``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise ConfigError(f"unsupported expression {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError:
        raise ConfigError(f"cannot parse number {text!r}") from None


@dataclass(frozen=True)
class Quantity:
    value: float
    unit: str


def parse_quantity(text: str) -> Quantity:
    parts = text.strip().rsplit(None, 1)
    if len(parts) != 2 or parts[1] not in TIME_UNITS + MODEL_TIME_UNITS:
        raise ConfigError(f"{text!r} needs a unit tag ({', '.join(TIME_UNITS + MODEL_TIME_UNITS)})")
    return Quantity(eval_expr(parts[0]), parts[1])


@dataclass(frozen=True)
class WindowSpec:
    name: str
    center: Quantity
    half_width: Quantity
    step: Quantity


@dataclass
class RunConfig:
    system: str
    R: float = 1000.0
    c: float = 137.035999037
    m0: float = 1.0
    j: float = 0.5
    l: int = 1
    nbar: float | None = None
    sigma0: float | None = None
    theta0: float = 0.0
    window: int | None = None
    outputs: tuple = ()
    grid_size: int = 2048
    n_min: int | None = None
    n_max: int | None = None
    min_height: float = 0.02
    min_separation: Quantity = field(default_factory=lambda: Quantity(0.125, "t_cl"))
    windows: list = field(default_factory=list)
    source_text: str = ""

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.source_text.encode("utf-8")).hexdigest()


def _positive(name, v):
    if not v > 0:
        raise ConfigError(f"{name} must be positive, got {v}")
    return v


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if not cp.has_section("system") or "kind" not in cp["system"]:
        raise ConfigError("[system] kind is required")
    sysv = cp["system"]
    kind = sysv["kind"].strip().lower()
    if kind not in ("rotor", "hydrogen"):
        raise ConfigError(f"unknown system kind {kind!r}")
    cfg = RunConfig(system=kind, source_text=text)
    for key in ("R", "c", "m0"):
        if key in sysv:
            setattr(cfg, key, _positive(key, eval_expr(sysv[key])))
    if "j" in sysv:
        cfg.j = eval_expr(sysv["j"])
    if "l" in sysv:
        cfg.l = int(eval_expr(sysv["l"]))
    if cp.has_section("packet"):
        pk = cp["packet"]
        if "nbar" in pk:
            cfg.nbar = eval_expr(pk["nbar"])
        if "sigma0" in pk:
            cfg.sigma0 = _positive("sigma0", eval_expr(pk["sigma0"]))
        if "theta0" in pk:
            cfg.theta0 = eval_expr(pk["theta0"])
        if "window" in pk and pk["window"].strip() != "auto":
            cfg.window = int(_positive("window", eval_expr(pk["window"])))
    if cp.has_section("run"):
        run = cp["run"]
        outs = tuple(o.strip() for o in run.get("outputs", "").split(",") if o.strip())
        for o in outs:
            if o not in OUTPUTS:
                raise ConfigError(f"unknown output {o!r}")
        cfg.outputs = outs
        if "grid_size" in run:
            cfg.grid_size = int(_positive("grid_size", eval_expr(run["grid_size"])))
    if cp.has_section("energies"):
        en = cp["energies"]
        if "n_min" in en:
            cfg.n_min = int(eval_expr(en["n_min"]))
        if "n_max" in en:
            cfg.n_max = int(eval_expr(en["n_max"]))
    if cp.has_section("peaks"):
        pk = cp["peaks"]
        if "min_height" in pk:
            cfg.min_height = eval_expr(pk["min_height"])
        if "min_separation" in pk:
            cfg.min_separation = parse_quantity(pk["min_separation"])
    for sec in cp.sections():
        if sec.startswith("window:"):
            w = cp[sec]
            try:
                spec = WindowSpec(sec.split(":", 1)[1].strip(), parse_quantity(w["center"]),
                                  parse_quantity(w["half_width"]), parse_quantity(w["step"]))
            except KeyError as exc:
                raise ConfigError(f"[{sec}] missing {exc.args[0]}") from None
            if not spec.step.value > 0 or spec.half_width.value < 0:
                raise ConfigError(f"[{sec}] needs step > 0 and half_width >= 0")
            cfg.windows.append(spec)
    dynamic = {"rotor-moments", "rotor-density", "autocorr", "compare", "timescales", "breakdown"}
    if dynamic & set(cfg.outputs) and cfg.nbar is None:
        raise ConfigError("[packet] nbar is required for the requested outputs")
    if {"rotor-moments", "rotor-density", "autocorr", "compare"} & set(cfg.outputs):
        if cfg.sigma0 is None:
            raise ConfigError("[packet] sigma0 is required for dynamics outputs")
        if not cfg.windows:
            raise ConfigError("dynamics outputs need at least one [window:<name>] section")
    if kind == "hydrogen" and {"rotor-moments", "rotor-density"} & set(cfg.outputs):
        raise ConfigError("rotor outputs requested for a hydrogen system")
    return cfg


def bundled_configs() -> list[str]:
    return sorted(p.name for p in resources.files("relwave.configs").iterdir() if p.name.endswith(".cfg"))


def load_config(path) -> RunConfig:
    """Read a config file; bare names of bundled configs (``fig1.cfg``) also resolve."""
    p = Path(path)
    if p.exists():
        return parse_config(p.read_text(encoding="utf-8"))
    if p.name in bundled_configs() and p.parent == Path("."):
        return parse_config(resources.files("relwave.configs").joinpath(p.name).read_text(encoding="utf-8"))
    raise ConfigError(f"config file not found: {path}")

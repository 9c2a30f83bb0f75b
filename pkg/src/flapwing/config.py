"""Scenario files: an INI-style text format with unit-suffixed values.

    [scenario]
    name = fig2-stroke
    model = stroke            # stroke | pitch | none
    mode = simulate           # simulate | sweep | design | pivot

    [params]
    m_r = 2 mg
    k_t = 20 uNm/rad
    f = 200 Hz                # alias for omega; 'natural' means sqrt(k_t/I_x)
    b = calibrated            # or a value such as 2.2e-4 Ns/m

    [integration]
    dt = 0.0005 cycle         # durations take s/ms/us or drive periods
    t_end = 100 cycle

Parsing converts every value to SI and keeps symbolic tokens
(``natural``, ``calibrated``, ``resonant``) as strings. Unknown sections and
keys are errors, and all problems are reported together.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .model import ValidationError
from .units import UnitError, format_quantity, parse_list, parse_quantity

MODELS = ("stroke", "pitch", "none")
MODES = ("simulate", "sweep", "design", "pivot")
TOPOLOGIES = ("parallel-bending", "serial-torsion", "parallel-torsion", "all")


@dataclass(frozen=True)
class Key:
    kind: str                      # a units dimension, or str/int/float/bool/choice/list
    tokens: tuple[str, ...] = ()   # symbolic values accepted verbatim
    choices: tuple[str, ...] = ()
    list_dim: str | None = None
    cycles: bool = False


STROKE_KEYS = {
    "m_r": Key("mass", tokens=("resonant",)),
    "L": Key("length"),
    "k_t": Key("stiffness"),
    "L_w": Key("length"),
    "z_max": Key("length"),
    "omega": Key("angular_frequency", tokens=("natural",)),
    "b": Key("damping", tokens=("calibrated",)),
    "b_scale": Key("float"),
    "peak_force": Key("force"),
    "phase": Key("angle"),
    "linearized": Key("bool"),
}

PITCH_KEYS = {
    "m": Key("mass"),
    "l": Key("length"),
    "k": Key("stiffness"),
    "p": Key("length"),
    "L_w": Key("length"),
    "A": Key("angle"),
    "omega": Key("angular_frequency"),
    "b": Key("damping", tokens=("calibrated",)),
    "aero_force": Key("force"),
}

SECTIONS = {
    "scenario": {
        "name": Key("str"),
        "description": Key("str"),
        "model": Key("choice", choices=MODELS),
        "mode": Key("choice", choices=MODES),
    },
    "integration": {
        "method": Key("choice", choices=("rk4", "euler-oracle")),
        "dt": Key("time", cycles=True),
        "t_end": Key("time", cycles=True),
        "dt_out": Key("time", cycles=True),
    },
    "analysis": {
        "n_cycles": Key("int"),
        "settle_tol": Key("float"),
        "steady_fraction": Key("float"),
    },
    "sweep": {
        "ratios": Key("list"),
        "freqs": Key("list", list_dim="angular_frequency"),
        "workers": Key("int"),
    },
    "design": {
        "target_amplitude": Key("angle"),
        "L_min": Key("length"),
        "L_max": Key("length"),
        "k_t_min": Key("stiffness"),
        "k_t_max": Key("stiffness"),
        "tolerance": Key("float"),
        "grid_L": Key("int"),
        "grid_k_t": Key("int"),
        "cycles": Key("int"),
        "steps": Key("int"),
        "workers": Key("int"),
    },
    "pivot": {
        "n_beams": Key("int"),
        "beam_length": Key("length"),
        "beam_width": Key("length"),
        "beam_thickness": Key("length"),
        "elastic_modulus": Key("pressure"),
        "shear_modulus": Key("pressure"),
        "stress_budget": Key("pressure"),
        "topology": Key("choice", choices=TOPOLOGIES),
        "max_angle": Key("angle"),
        "torque": Key("torque"),
        "k_t": Key("stiffness"),
    },
    "output": {
        "trajectory": Key("str"),
        "summary": Key("str"),
    },
}

SECTION_ORDER = ("scenario", "params", "integration", "analysis", "sweep", "design", "pivot", "output")

STROKE_REQUIRED = ("m_r", "L", "k_t", "L_w", "z_max")
PITCH_REQUIRED = ("m", "l", "k", "p", "L_w", "A", "omega")
DESIGN_PARAMS_REQUIRED = ("m_r", "L_w", "z_max")
DESIGN_REQUIRED = ("target_amplitude", "L_min", "L_max", "k_t_min", "k_t_max")
PIVOT_REQUIRED = ("n_beams", "beam_length", "beam_width", "beam_thickness")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    model: str
    mode: str
    description: str = ""
    params: dict = field(default_factory=dict)
    integration: dict = field(default_factory=dict)
    analysis: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    design: dict = field(default_factory=dict)
    pivot: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def section(self, name: str) -> dict:
        if name == "scenario":
            return {"name": self.name, "description": self.description,
                    "model": self.model, "mode": self.mode}
        return getattr(self, name)


def _keys_for(section: str, model: str) -> dict:
    if section == "params":
        return {"stroke": STROKE_KEYS, "pitch": PITCH_KEYS}.get(model, {})
    return SECTIONS[section]


def _parse_value(raw: str, key: Key):
    raw = raw.strip()
    if raw in key.tokens:
        return raw
    if key.kind == "str":
        return raw
    if key.kind == "choice":
        if raw not in key.choices:
            raise ValueError(f"expected one of {', '.join(key.choices)}, got {raw!r}")
        return raw
    if key.kind == "int":
        return int(raw)
    if key.kind == "float":
        return float(raw)
    if key.kind == "bool":
        low = raw.lower()
        if low not in ("true", "false", "yes", "no", "1", "0"):
            raise ValueError(f"expected true/false, got {raw!r}")
        return low in ("true", "yes", "1")
    if key.kind == "list":
        return tuple(parse_list(raw, key.list_dim))
    return parse_quantity(raw, key.kind, allow_cycles=key.cycles)


def _format_value(value, key: Key) -> str:
    if isinstance(value, str):
        return value
    if key.kind in ("int", "float"):
        return repr(value)
    if key.kind == "bool":
        return "true" if value else "false"
    if key.kind == "list":
        unit = "" if key.list_dim is None else " " + format_quantity(1.0, key.list_dim).split()[1]
        return ", ".join(repr(float(v)) for v in value) + unit
    return format_quantity(value, key.kind)


def parse_config(text: str) -> ScenarioConfig:
    """Parse scenario text; raises ValidationError listing every problem."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"),
                                   comment_prefixes=("#", ";"), strict=True,
                                   default_section="__unused__")
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ValidationError([("file", str(exc).splitlines()[0])]) from None

    bad: list[tuple[str, str]] = []
    if not cp.sections():
        raise ValidationError([("file", "empty scenario: no sections"),
                               ("scenario", "missing [scenario] section")])
    for sec in cp.sections():
        if sec not in SECTION_ORDER:
            bad.append((sec, "unknown section"))

    head = dict(cp["scenario"]) if cp.has_section("scenario") else {}
    if not cp.has_section("scenario"):
        bad.append(("scenario", "missing [scenario] section"))
    model = head.get("model", "").strip()
    mode = head.get("mode", "").strip()
    for k in ("name", "model", "mode"):
        if cp.has_section("scenario") and k not in head:
            bad.append((f"scenario.{k}", "required"))

    values: dict[str, dict] = {s: {} for s in SECTION_ORDER}
    for sec in SECTION_ORDER:
        if not cp.has_section(sec):
            continue
        keys = _keys_for(sec, model)
        for k, raw in cp[sec].items():
            name = k
            if sec == "params" and k == "f":
                name = "omega"
                if "omega" in cp[sec]:
                    bad.append(("params.f", "give either f or omega, not both"))
                    continue
            if name not in keys:
                bad.append((f"{sec}.{k}", "unknown key" + ("" if sec != "params" else f" for model {model!r}")))
                continue
            try:
                values[sec][name] = _parse_value(raw, keys[name])
            except (ValueError, UnitError) as exc:
                bad.append((f"{sec}.{k}", str(exc)))

    if bad:
        raise ValidationError(bad)
    cfg = ScenarioConfig(
        name=values["scenario"]["name"], model=model, mode=mode,
        description=values["scenario"].get("description", ""),
        **{s: values[s] for s in SECTION_ORDER if s != "scenario"})
    bad = check_config(cfg)
    if bad:
        raise ValidationError(bad)
    return cfg


def check_config(cfg: ScenarioConfig) -> list[tuple[str, str]]:
    """Cross-field requirements that depend on model and mode."""
    bad = []
    p = cfg.params

    def need(section, keys, where):
        for k in keys:
            if k not in where:
                bad.append((f"{section}.{k}", f"required for model={cfg.model} mode={cfg.mode}"))

    if cfg.mode == "pivot":
        need("pivot", PIVOT_REQUIRED, cfg.pivot)
        if "torque" in cfg.pivot and "k_t" in cfg.pivot:
            bad.append(("pivot.torque", "give either torque or k_t, not both"))
    elif cfg.mode == "simulate":
        if cfg.model == "stroke":
            need("params", STROKE_REQUIRED, p)
        elif cfg.model == "pitch":
            need("params", PITCH_REQUIRED, p)
        else:
            bad.append(("scenario.model", "simulate needs model stroke or pitch"))
    elif cfg.mode == "sweep":
        if cfg.model != "stroke":
            bad.append(("scenario.model", "sweep is defined for the stroke model"))
        need("params", STROKE_REQUIRED, p)
        if ("ratios" in cfg.sweep) == ("freqs" in cfg.sweep):
            bad.append(("sweep.ratios", "give exactly one of ratios or freqs"))
    elif cfg.mode == "design":
        if cfg.model != "stroke":
            bad.append(("scenario.model", "design is defined for the stroke model"))
        need("params", DESIGN_PARAMS_REQUIRED, p)
        need("design", DESIGN_REQUIRED, cfg.design)
    if cfg.model == "stroke" and p.get("m_r") == "resonant" and not isinstance(p.get("omega"), float):
        bad.append(("params.m_r", "'resonant' needs a numeric f or omega"))
    if cfg.model == "stroke" and p.get("omega") == "natural" and p.get("m_r") == "resonant":
        bad.append(("params.omega", "cannot be 'natural' when m_r is 'resonant'"))
    return bad


def dump_config(cfg: ScenarioConfig) -> str:
    """Canonical SI text; ``parse_config(dump_config(c)) == c``."""
    lines = []
    for sec in SECTION_ORDER:
        vals = cfg.section(sec)
        if sec == "scenario":
            vals = {k: v for k, v in vals.items() if v != "" or k != "description"}
        if not vals:
            continue
        keys = _keys_for(sec, cfg.model)
        if lines:
            lines.append("")
        lines.append(f"[{sec}]")
        for k, v in vals.items():
            lines.append(f"{k} = {_format_value(v, keys[k])}")
    return "\n".join(lines) + "\n"


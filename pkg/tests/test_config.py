import math

import pytest
from hypothesis import given, strategies as st

from flapwing.config import dump_config, parse_config
from flapwing.model import ValidationError
from flapwing.scenarios import _TEXT, load_scenario
from flapwing.units import Cycles, UnitError, format_quantity, parse_list, parse_quantity


@pytest.mark.parametrize("text,dim,si", [
    ("2 mg", "mass", 2e-6),
    ("2.5 mm", "length", 2.5e-3),
    ("20 uNm/rad", "stiffness", 20e-6),
    ("20 µNm/rad", "stiffness", 20e-6),
    ("20 µN·m", "torque", 20e-6),
    ("70 Hz", "angular_frequency", 2 * math.pi * 70),
    ("45 deg", "angle", math.pi / 4),
    ("45°", "angle", math.pi / 4),
    ("193 GPa", "pressure", 193e9),
    ("1.5 mN", "force", 1.5e-3),
    ("3e-4", "damping", 3e-4),
])
def test_parse_quantity(text, dim, si):
    assert parse_quantity(text, dim) == pytest.approx(si, rel=1e-15)


def test_cycles_only_for_durations():
    assert parse_quantity("100 cycles", "time", allow_cycles=True) == Cycles(100.0)
    with pytest.raises(UnitError):
        parse_quantity("100 cycle", "time")


def test_wrong_dimension_unit():
    with pytest.raises(UnitError, match="mass"):
        parse_quantity("2 mm", "mass")


def test_list_unit_applies_to_all():
    assert parse_list("60, 70, 80 Hz", "angular_frequency") == pytest.approx(
        [2 * math.pi * f for f in (60, 70, 80)])
    assert parse_list("0.8, 1, 1.2", None) == [0.8, 1.0, 1.2]


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_parse_round_trip(x):
    for dim in ("length", "angular_frequency", "stiffness"):
        assert parse_quantity(format_quantity(x, dim), dim) == x


@pytest.mark.parametrize("name", sorted(_TEXT))
def test_builtin_round_trip(name):
    cfg = load_scenario(name)
    text = dump_config(cfg)
    assert parse_config(text) == cfg
    assert dump_config(parse_config(text)) == text


def test_empty_config_rejected():
    with pytest.raises(ValidationError) as exc:
        parse_config("")
    assert len(exc.value.violations) >= 1


def test_unknown_keys_and_sections_all_reported():
    text = """\
[scenario]
name = x
model = stroke
mode = simulate

[params]
m_r = 2 mg
L = 2.5 mm
k_t = 20 uNm/rad
L_w = 4.4 mm
z_max = 0.8 mm
mass = 3 mg

[integraton]
dt = 1 us
"""
    with pytest.raises(ValidationError) as exc:
        parse_config(text)
    assert set(exc.value.fields) == {"params.mass", "integraton"}


def test_bad_unit_and_missing_required_params():
    text = """\
[scenario]
name = x
model = stroke
mode = simulate

[params]
m_r = 2 mm
"""
    with pytest.raises(ValidationError) as exc:
        parse_config(text)
    assert exc.value.fields == ["params.m_r"]
    with pytest.raises(ValidationError) as exc:
        parse_config(text.replace("2 mm", "2 mg"))
    assert {"params.L", "params.k_t", "params.L_w", "params.z_max"} <= set(exc.value.fields)


def test_f_alias_and_tokens():
    text = """\
[scenario]
name = tuned
model = stroke
mode = simulate

[params]
m_r = resonant
L = 2.5 mm
k_t = 20 uNm/rad
L_w = 4.4 mm
z_max = 0.8 mm
f = 70 Hz
b = calibrated
"""
    cfg = parse_config(text)
    assert cfg.params["omega"] == pytest.approx(2 * math.pi * 70)
    assert cfg.params["m_r"] == "resonant"
    with pytest.raises(ValidationError):
        parse_config(text.replace("f = 70 Hz", "omega = natural"))

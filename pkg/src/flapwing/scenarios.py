"""Built-in scenarios reproducing the reference design numbers."""
from __future__ import annotations

from .config import ScenarioConfig, parse_config

_STROKE_DESIGN_POINT = """\
[params]
m_r = 2 mg
L = 2.5 mm
k_t = 20 uNm/rad
L_w = 4.4 mm
z_max = 0.8 mm
omega = natural
b = calibrated
peak_force = 1.5 mN
"""

_PITCH_DESIGN_POINT = """\
[params]
m = 4 mg
l = 5 mm
k = 20 uNm/rad
p = 2.5 mm
L_w = 4 mm
A = 45 deg
f = 70 Hz
b = calibrated
aero_force = 1 mN
"""

_TEXT = {
    "fig2-stroke": """\
[scenario]
name = fig2-stroke
description = Stroke pendulum at the 200 Hz design point; expect a 60 deg steady stroke
model = stroke
mode = simulate
""" + _STROKE_DESIGN_POINT + """
[integration]
method = rk4
dt = 0.0005 cycle
t_end = 100 cycle
dt_out = 0.01 cycle
""",

    "exp-70hz-mass-tuning": """\
[scenario]
name = exp-70hz-mass-tuning
description = Resonant mass retuned for a 70 Hz drive; amplitude at 0.8, 1.0, 1.2 x natural
model = stroke
mode = sweep

[params]
m_r = resonant
f = 70 Hz
L = 2.5 mm
k_t = 20 uNm/rad
L_w = 4.4 mm
z_max = 0.8 mm
b = calibrated

[sweep]
ratios = 0.8, 1.0, 1.2
""",

    "pitch-design-point": """\
[scenario]
name = pitch-design-point
description = Passive pitch at 70 Hz, +-45 deg stroke, 4 mg magnet at 5 mm; torque split
model = pitch
mode = simulate
""" + _PITCH_DESIGN_POINT + """
[integration]
dt = 0.0005 cycle
t_end = 100 cycle
dt_out = 0.01 cycle
""",

    "pitch-phase-check": """\
[scenario]
name = pitch-phase-check
description = Pitch design point sampled 500 times per cycle to locate pitch peaks against stroke phase
model = pitch
mode = simulate
""" + _PITCH_DESIGN_POINT + """
[integration]
dt = 0.0005 cycle
t_end = 100 cycle
dt_out = 0.002 cycle

[analysis]
n_cycles = 10
""",

    "pivot-table1": """\
[scenario]
name = pivot-table1
description = 16-beam steel flexure stiffness and stress at 60 deg under 20 uNm, all topologies
model = none
mode = pivot

[pivot]
n_beams = 16
beam_length = 1 mm
beam_width = 0.1 mm
beam_thickness = 38 um
elastic_modulus = 193 GPa
shear_modulus = 75 GPa
stress_budget = 0.8 GPa
topology = all
max_angle = 60 deg
torque = 20 uNm
""",

    "resonance-sweep": """\
[scenario]
name = resonance-sweep
description = Stroke resonance curve around the 200 Hz design point with fixed damping
model = stroke
mode = sweep
""" + _STROKE_DESIGN_POINT + """
[sweep]
ratios = 0.6, 0.8, 0.9, 1.0, 1.1, 1.2, 1.4
""",

    "stroke-low-damping": """\
[scenario]
name = stroke-low-damping
description = Design-point stroke with one tenth of the calibrated damping
model = stroke
mode = simulate
""" + _STROKE_DESIGN_POINT + """b_scale = 0.1
""",

    "stroke-design": """\
[scenario]
name = stroke-design
description = Search L in 1-5 mm and k_t in 5-50 uNm/rad for a 60 deg resonant stroke
model = stroke
mode = design

[params]
m_r = 2 mg
L_w = 4.4 mm
z_max = 0.8 mm
peak_force = 1.5 mN

[design]
target_amplitude = 60 deg
L_min = 1 mm
L_max = 5 mm
k_t_min = 5 uNm/rad
k_t_max = 50 uNm/rad
tolerance = 0.02
""",
}


def scenario_text(name: str) -> str:
    try:
        return _TEXT[name]
    except KeyError:
        raise KeyError(f"no built-in scenario {name!r}") from None


def is_builtin(name: str) -> bool:
    return name in _TEXT


def load_scenario(name: str) -> ScenarioConfig:
    return parse_config(scenario_text(name))


def list_scenarios() -> list[tuple[str, str]]:
    return [(name, load_scenario(name).description) for name in _TEXT]

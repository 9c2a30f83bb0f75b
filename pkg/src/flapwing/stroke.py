"""Linearly driven torsional pendulum that produces the wing stroke.

    I_x th'' = -k_t th - b L_w^2 th' - b L_w z' cos(th) - m_r L cos(th) z''

with the pivot driven as z(t) = z_max sin(omega t + phase).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .integrator import IntegrationConfig, integrate
from .model import SimState, StrokeParams, Trajectory, validate_stroke_params

# Peak force per wing: 3x the average lift of a 100 mg vehicle, shared by two wings.
DEFAULT_PEAK_FORCE = 1.5e-3


@dataclass(frozen=True)
class StrokeDrive:
    z_max: float
    omega: float
    phase: float = 0.0

    def __post_init__(self):
        if not (self.z_max >= 0 and self.omega > 0 and math.isfinite(self.phase)):
            raise ValueError(f"invalid drive {self!r}: need z_max >= 0, omega > 0")

    @classmethod
    def of(cls, p: StrokeParams, phase: float = 0.0) -> "StrokeDrive":
        return cls(p.z_max, p.omega, phase)


def make_stroke_rhs(p: StrokeParams, d: StrokeDrive, linearized: bool = False):
    """Return ``f(t, angle, rate)`` for the stroke model.

    `linearized` replaces cos(theta) by 1; it exists for analytic oracles.
    """
    validate_stroke_params(p)
    inv_i = 1.0 / p.inertia
    k, c = p.k_t, p.b * p.L_w ** 2
    bl, ml = p.b * p.L_w, p.m_r * p.L
    zw, zw2, w, ph = d.z_max * d.omega, d.z_max * d.omega ** 2, d.omega, d.phase
    cos, sin = math.cos, math.sin

    def rhs(t, th, om):
        s = w * t + ph
        zd = zw * cos(s)
        zdd = -zw2 * sin(s)
        ct = 1.0 if linearized else cos(th)
        return om, (-k * th - c * om - bl * zd * ct - ml * ct * zdd) * inv_i

    return rhs


def stroke_rhs(state: SimState, p: StrokeParams, d: StrokeDrive,
               linearized: bool = False) -> tuple[float, float]:
    out = make_stroke_rhs(p, d, linearized)(state.t, state.angle, state.rate)
    if not all(math.isfinite(v) for v in out):
        raise ArithmeticError(f"non-finite stroke derivative at {state!r}")
    return out


def calibrate_damping(L_w: float, omega: float, z_max: float,
                      peak_force: float = DEFAULT_PEAK_FORCE) -> float:
    """Damping coefficient that makes `peak_force` the peak wing force.

    The wing tip speed at 60 degrees of stroke, L_w*omega*pi/3, plus the
    pivot speed z_max*omega, sets the denominator.
    """
    if not (L_w > 0 and omega > 0 and z_max > 0 and peak_force >= 0):
        raise ValueError("L_w, omega, z_max must be > 0 and peak_force >= 0")
    return peak_force / (L_w * omega * math.pi / 3 + z_max * omega)


def resonant_design(m_r: float, L: float, k_t: float, L_w: float, z_max: float,
                    peak_force: float = DEFAULT_PEAK_FORCE, damping_scale: float = 1.0) -> StrokeParams:
    """StrokeParams driven at resonance with b calibrated at that frequency."""
    omega = math.sqrt(k_t / (m_r * L * L))
    b = damping_scale * calibrate_damping(L_w, omega, z_max, peak_force)
    return validate_stroke_params(StrokeParams(m_r=m_r, L=L, k_t=k_t, L_w=L_w, b=b,
                                               z_max=z_max, omega=omega))


# Design point: z_max 0.8 mm, m_r 2 mg, L_w 4.4 mm, L 2.5 mm, k_t 20 uNm/rad.
DESIGN_POINT = resonant_design(m_r=2e-6, L=2.5e-3, k_t=20e-6, L_w=4.4e-3, z_max=0.8e-3)


def inertial_force(p: StrokeParams) -> float:
    return p.m_r * p.omega ** 2 * p.L


def inertial_torque(p: StrokeParams) -> float:
    return inertial_force(p) * p.L


def simulate_stroke(p: StrokeParams, cfg: IntegrationConfig | None = None,
                    drive: StrokeDrive | None = None, initial: SimState | None = None,
                    linearized: bool = False) -> Trajectory:
    """Integrate the stroke model from rest (default 100 cycles at period/2000)."""
    drive = drive or StrokeDrive.of(p)
    cfg = cfg or IntegrationConfig.per_period(2 * math.pi / drive.omega)
    initial = initial or SimState(0.0, 0.0, 0.0)
    rhs = make_stroke_rhs(p, drive, linearized)
    return integrate(rhs, initial, cfg, label="stroke")


def linear_steady_amplitude(p: StrokeParams, drive: StrokeDrive | None = None) -> float:
    """Closed-form steady amplitude of the linearized (cos th = 1) model.

    The drive enters as the torque m_r L z_max w^2 sin(wt) - b L_w z_max w cos(wt),
    whose magnitude over |k_t - I w^2 + i b L_w^2 w| gives the response.
    """
    drive = drive or StrokeDrive.of(p)
    w = drive.omega
    force = math.hypot(p.m_r * p.L * drive.z_max * w * w, p.b * p.L_w * drive.z_max * w)
    return force / abs(complex(p.k_t - p.inertia * w * w, p.b * p.L_w ** 2 * w))

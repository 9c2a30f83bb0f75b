"""Passive wing pitch driven by a prescribed sinusoidal stroke.

    m l^2 phi'' = -k phi + b L_w A w cos(wt) p + m l^2 sin(phi) cos(phi) (A w cos(wt))^2

The stroke is theta(t) = A sin(wt); its rate A w cos(wt) feeds both the
aerodynamic term and the centripetal term on the offset mass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .integrator import IntegrationConfig, integrate
from .model import PitchParams, SimState, Trajectory, validate_pitch_params


def make_pitch_rhs(p: PitchParams):
    validate_pitch_params(p)
    inv_i = 1.0 / p.inertia
    k, aero = p.k, p.b * p.L_w * p.A * p.omega * p.p
    ml2, aw, w = p.inertia, p.A * p.omega, p.omega
    cos, sin = math.cos, math.sin

    def rhs(t, phi, om):
        c = cos(w * t)
        v = aw * c
        return om, (-k * phi + aero * c + ml2 * sin(phi) * cos(phi) * v * v) * inv_i

    return rhs


def pitch_rhs(state: SimState, p: PitchParams) -> tuple[float, float]:
    out = make_pitch_rhs(p)(state.t, state.angle, state.rate)
    if not all(math.isfinite(v) for v in out):
        raise ArithmeticError(f"non-finite pitch derivative at {state!r}")
    return out


def pitch_natural_frequency(p: PitchParams) -> float:
    validate_pitch_params(p)
    return math.sqrt(p.k / p.inertia)


# Pitch design point: 4 mg magnet at l = 5 mm on a 20 uNm/rad spring,
# wing c-p at p = 2.5 mm and L_w = 4 mm, +-45 deg stroke at 70 Hz,
# b chosen so that b*L_w*A*w = 1 mN.
PITCH_DESIGN_POINT = PitchParams.from_aero_force(
    m=4e-6, l=5e-3, k=20e-6, p=2.5e-3, L_w=4e-3, A=math.pi / 4, omega=2 * math.pi * 70,
    aero_force=1e-3)


def simulate_pitch(p: PitchParams, cfg: IntegrationConfig | None = None,
                   initial: SimState | None = None) -> Trajectory:
    """Integrate from rest; default 100 stroke cycles at period/2000."""
    cfg = cfg or IntegrationConfig.per_period(p.period)
    initial = initial or SimState(0.0, 0.0, 0.0)
    traj = integrate(make_pitch_rhs(p), initial, cfg, label="pitch")
    return Trajectory(traj.t, traj.angle, traj.rate, label="pitch", extra={"params": p})


@dataclass(frozen=True)
class PitchTorques:
    """Right-hand-side torque terms at one sample, N*m."""

    t: float
    spring: float
    aerodynamic: float
    centripetal: float


@dataclass(frozen=True, eq=False)
class TorqueDecomposition:
    t: np.ndarray
    spring: np.ndarray
    aerodynamic: np.ndarray
    centripetal: np.ndarray
    peak_spring: float
    peak_aerodynamic: float
    peak_centripetal: float
    window_start: float

    def __len__(self) -> int:
        return int(self.t.size)

    def __getitem__(self, i: int) -> PitchTorques:
        return PitchTorques(float(self.t[i]), float(self.spring[i]),
                            float(self.aerodynamic[i]), float(self.centripetal[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def torque_terms(t, phi, p: PitchParams):
    """Spring, aerodynamic and centripetal terms evaluated on arrays."""
    t = np.asarray(t, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c = np.cos(p.omega * t)
    spring = -p.k * phi
    aero = p.b * p.L_w * p.A * p.omega * p.p * c
    centripetal = p.inertia * np.sin(phi) * np.cos(phi) * (p.A * p.omega * c) ** 2
    return spring, aero, centripetal


def pitch_torque_decomposition(traj: Trajectory, p: PitchParams,
                               steady_fraction: float = 0.25) -> TorqueDecomposition:
    """Per-sample torque terms, with peaks taken over the last `steady_fraction` of the run."""
    source = traj.extra.get("params")
    if traj.label != "pitch" or (source is not None and source != p):
        raise ValueError("trajectory was not produced by the pitch model with these parameters")
    if not 0 < steady_fraction <= 1:
        raise ValueError("steady_fraction must be in (0, 1]")
    spring, aero, cent = torque_terms(traj.t, traj.angle, p)
    t0 = traj.t[0] + (1 - steady_fraction) * (traj.t[-1] - traj.t[0])
    win = traj.t >= t0 - 1e-12 * abs(traj.t[-1])
    return TorqueDecomposition(
        t=traj.t, spring=spring, aerodynamic=aero, centripetal=cent,
        peak_spring=float(np.max(np.abs(spring[win]))),
        peak_aerodynamic=float(np.max(np.abs(aero[win]))),
        peak_centripetal=float(np.max(np.abs(cent[win]))),
        window_start=float(t0))

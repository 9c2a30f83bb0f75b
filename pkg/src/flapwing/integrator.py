"""Fixed-step integration of second-order scalar ODEs.

The right-hand side is any callable ``rhs(t, angle, rate) -> (d_angle, d_rate)``.
Times are computed as ``t0 + i*dt`` rather than accumulated, so repeated
runs are bit-identical and output samples sit exactly on the grid.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import SimState, Trajectory, ValidationError
from .units import Cycles

Rhs = Callable[[float, float, float], "tuple[float, float]"]

METHODS = ("rk4", "euler-oracle")


class BlowUpError(ArithmeticError):
    """The state became non-finite during integration."""

    def __init__(self, t: float):
        self.t = t
        super().__init__(f"non-finite state at t = {t!r} s")


@dataclass(frozen=True)
class IntegrationConfig:
    dt: float
    t_end: float
    dt_out: float
    method: str = "rk4"

    def violations(self) -> list[tuple[str, str]]:
        bad = []
        vals = (self.dt, self.t_end, self.dt_out)
        if not all(math.isfinite(v) for v in vals):
            return [("dt", "dt, t_end and dt_out must be finite")]
        if not 0 < self.dt <= self.dt_out <= self.t_end:
            bad.append(("dt", "require 0 < dt <= dt_out <= t_end"))
        elif abs(self.dt_out / self.dt - round(self.dt_out / self.dt)) > 1e-6:
            bad.append(("dt_out", "must be an integer multiple of dt"))
        if self.method not in METHODS:
            bad.append(("method", f"unknown method {self.method!r}, expected one of {METHODS}"))
        return bad

    def validate(self) -> "IntegrationConfig":
        bad = self.violations()
        if bad:
            raise ValidationError(bad)
        return self

    @property
    def stride(self) -> int:
        return int(round(self.dt_out / self.dt))

    @property
    def n_out(self) -> int:
        """Number of output samples after the initial one."""
        return int(math.floor(self.t_end / self.dt_out * (1 + 1e-12)))

    @classmethod
    def per_period(cls, period: float, cycles: float = 100, steps: int = 2000,
                   stride: int = 1, method: str = "rk4") -> "IntegrationConfig":
        """Config with step ``period/steps`` running for ``cycles`` periods."""
        dt = period / steps
        return cls(dt=dt, t_end=cycles * period, dt_out=stride * dt, method=method)


@dataclass(frozen=True)
class PeriodScaledConfig:
    """Integration settings whose durations may be given in drive periods.

    Each of dt, t_end and dt_out is seconds (float) or a Cycles count.
    """

    dt: float | Cycles = Cycles(1 / 2000)
    t_end: float | Cycles = Cycles(100.0)
    dt_out: float | Cycles = Cycles(1 / 100)
    method: str = "rk4"

    def for_period(self, period: float) -> IntegrationConfig:
        def sec(v):
            return v.seconds(period) if isinstance(v, Cycles) else float(v)

        return IntegrationConfig(sec(self.dt), sec(self.t_end), sec(self.dt_out),
                                 self.method).validate()


def _rk4_step(rhs, t, x, v, h):
    k1x, k1v = rhs(t, x, v)
    hh = 0.5 * h
    k2x, k2v = rhs(t + hh, x + hh * k1x, v + hh * k1v)
    k3x, k3v = rhs(t + hh, x + hh * k2x, v + hh * k2v)
    k4x, k4v = rhs(t + h, x + h * k3x, v + h * k3v)
    return (x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v))


def _euler_step(rhs, t, x, v, h):
    dx, dv = rhs(t, x, v)
    return x + h * dx, v + h * dv


def integrate(rhs: Rhs, initial: SimState, cfg: IntegrationConfig, label: str = "") -> Trajectory:
    """Integrate from `initial` to ``initial.t + cfg.t_end``, sampling every ``cfg.dt_out``.

    Raises BlowUpError with the failing time if the state goes non-finite.
    """
    cfg.validate()
    step = _rk4_step if cfg.method == "rk4" else _euler_step
    stride = cfg.stride
    n_out = cfg.n_out
    t0, h = initial.t, cfg.dt_out / stride
    ts = np.empty(n_out + 1)
    xs = np.empty(n_out + 1)
    vs = np.empty(n_out + 1)
    x, v = initial.angle, initial.rate
    ts[0], xs[0], vs[0] = t0, x, v
    isfinite = math.isfinite
    i = 0
    for j in range(1, n_out + 1):
        for _ in range(stride):
            x, v = step(rhs, t0 + i * h, x, v, h)
            i += 1
        if not (isfinite(x) and isfinite(v)):
            raise BlowUpError(t0 + i * h)
        ts[j], xs[j], vs[j] = t0 + i * h, x, v
    return Trajectory(ts, xs, vs, label=label)


@dataclass(frozen=True)
class ConvergenceEstimate:
    order: float
    orders: tuple[float, float]
    errors: tuple[float, float, float]
    reliable: bool


def convergence_order(rhs: Rhs, initial: SimState, dt_coarse: float, t_end: float,
                      method: str = "rk4", sample_every: int = 1) -> ConvergenceEstimate:
    """Estimate the observed order from runs at dt, dt/2, dt/4 against a dt/64 reference.

    Errors are the max angle deviation at the coarse grid points
    (every `sample_every` coarse steps). The estimate is flagged unreliable
    when the two successive ratios disagree by more than 0.5.
    """
    dt_out = dt_coarse * sample_every

    def run(div):
        cfg = IntegrationConfig(dt=dt_coarse / div, t_end=t_end, dt_out=dt_out, method=method)
        return integrate(rhs, initial, cfg).angle

    ref = run(64)
    errs = tuple(float(np.max(np.abs(run(d) - ref))) for d in (1, 2, 4))
    if min(errs) <= 0.0:
        warnings.warn("zero error at some resolution; order estimate is meaningless")
        return ConvergenceEstimate(float("nan"), (float("nan"),) * 2, errs, False)
    o1 = math.log2(errs[0] / errs[1])
    o2 = math.log2(errs[1] / errs[2])
    reliable = abs(o1 - o2) <= 0.5
    if not reliable:
        warnings.warn(f"inconsistent convergence ratios ({o1:.2f}, {o2:.2f}); rhs may be non-smooth")
    return ConvergenceEstimate(0.5 * (o1 + o2), (o1, o2), errs, reliable)

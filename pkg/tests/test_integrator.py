import math

import numpy as np
import pytest

from flapwing.integrator import (BlowUpError, IntegrationConfig, PeriodScaledConfig,
                                 convergence_order, integrate)
from flapwing.model import SimState, ValidationError
from flapwing.units import Cycles
from flapwing.pitch import PITCH_DESIGN_POINT, make_pitch_rhs
from flapwing.stroke import DESIGN_POINT, StrokeDrive, make_stroke_rhs

W = 2 * math.pi * 5.0


def oscillator(t, x, v):
    return v, -W * W * x


def test_linear_oscillator_matches_cosine():
    period = 2 * math.pi / W
    cfg = IntegrationConfig(dt=period / 1000, t_end=10 * period, dt_out=period / 100)
    tr = integrate(oscillator, SimState(0.0, 1.0, 0.0), cfg)
    assert np.max(np.abs(tr.angle - np.cos(W * tr.t))) < 1e-6


def test_zero_rhs_gives_constant():
    cfg = IntegrationConfig(dt=0.01, t_end=1.0, dt_out=0.05)
    for method in ("rk4", "euler-oracle"):
        tr = integrate(lambda t, x, v: (0.0, 0.0), SimState(0.5, 0.3, 0.0), cfg.__class__(
            cfg.dt, cfg.t_end, cfg.dt_out, method))
        assert np.all(tr.angle == 0.3) and np.all(tr.rate == 0.0)
        assert tr.t[0] == 0.5


def test_output_grid_and_row_count():
    cfg = IntegrationConfig(dt=1e-3, t_end=0.1005, dt_out=5e-3)
    tr = integrate(oscillator, SimState(0.0, 1.0, 0.0), cfg)
    assert len(tr) == math.floor(0.1005 / 5e-3) + 1
    assert tr.dt_out == pytest.approx(5e-3, rel=1e-12)


@pytest.mark.parametrize("kw", [
    dict(dt=0.0, t_end=1.0, dt_out=0.1),
    dict(dt=0.2, t_end=1.0, dt_out=0.1),
    dict(dt=0.03, t_end=1.0, dt_out=0.1),
    dict(dt=0.01, t_end=1.0, dt_out=0.1, method="rk45"),
])
def test_invalid_configs(kw):
    with pytest.raises(ValidationError):
        IntegrationConfig(**kw).validate()


def test_blow_up_reports_time():
    cfg = IntegrationConfig(dt=0.1, t_end=1000.0, dt_out=0.1)
    with pytest.raises(BlowUpError) as exc:
        integrate(lambda t, x, v: (v, 1e3 * x * abs(x)), SimState(0.0, 1.0, 0.0), cfg)
    assert 0 < exc.value.t < 1000.0


def test_rk4_vs_euler_oracle_design_point():
    p = DESIGN_POINT
    rhs = make_stroke_rhs(p, StrokeDrive.of(p))
    T = p.period
    a = integrate(rhs, SimState(0, 0, 0), IntegrationConfig(T / 2000, 5 * T, T / 100, "rk4"))
    b = integrate(rhs, SimState(0, 0, 0), IntegrationConfig(T / 200000, 5 * T, T / 100, "euler-oracle"))
    assert np.max(np.abs(a.angle - b.angle)) < 1e-3


def test_halving_dt_does_not_increase_error():
    p = DESIGN_POINT
    rhs = make_stroke_rhs(p, StrokeDrive.of(p))
    T = p.period
    # the Euler oracle's own error (~1e-4) would mask RK4 at fine steps
    ref = integrate(rhs, SimState(0, 0, 0), IntegrationConfig(T / 32000, 3 * T, T / 50))
    errs = []
    for steps in (250, 500, 1000, 2000):
        tr = integrate(rhs, SimState(0, 0, 0), IntegrationConfig(T / steps, 3 * T, T / 50))
        errs.append(np.max(np.abs(tr.angle - ref.angle)))
    assert all(a >= b for a, b in zip(errs, errs[1:]))


def test_convergence_linear_oscillator():
    period = 2 * math.pi / W
    est = convergence_order(oscillator, SimState(0.0, 1.0, 0.0), period / 20, 2 * period)
    assert est.order == pytest.approx(4.0, abs=0.3)
    assert est.reliable


def test_convergence_euler_oracle():
    period = 2 * math.pi / W
    est = convergence_order(oscillator, SimState(0.0, 1.0, 0.0), period / 2000, period,
                            method="euler-oracle")
    assert est.order == pytest.approx(1.0, abs=0.2)


def test_convergence_stroke_and_pitch():
    p = DESIGN_POINT
    est = convergence_order(make_stroke_rhs(p, StrokeDrive.of(p)), SimState(0, 0, 0),
                            p.period / 50, 2 * p.period)
    assert est.order >= 3.7
    q = PITCH_DESIGN_POINT
    est = convergence_order(make_pitch_rhs(q), SimState(0, 0, 0), q.period / 50, 2 * q.period)
    assert est.order >= 3.7


def test_non_smooth_rhs_is_flagged():
    # a sign() forcing makes the error ratios erratic
    rhs = lambda t, x, v: (v, -x + 50.0 * math.copysign(1.0, math.sin(37.3 * t)))
    with pytest.warns(UserWarning):
        est = convergence_order(rhs, SimState(0.0, 0.0, 0.0), 0.013, 1.0)
    assert not est.reliable


def test_bit_identical_repeat_runs():
    p = DESIGN_POINT
    cfg = IntegrationConfig.per_period(p.period, cycles=5)
    rhs = make_stroke_rhs(p, StrokeDrive.of(p))
    a = integrate(rhs, SimState(0, 0, 0), cfg)
    b = integrate(make_stroke_rhs(p, StrokeDrive.of(p)), SimState(0, 0, 0), cfg)
    assert a.equals(b)
    assert a.angle.tobytes() == b.angle.tobytes()


def test_period_scaled_config():
    cfg = PeriodScaledConfig(dt=Cycles(0.001), t_end=0.5, dt_out=Cycles(0.01)).for_period(0.01)
    assert cfg.dt == pytest.approx(1e-5)
    assert cfg.t_end == 0.5
    assert cfg.stride == 10

import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from flapwing.integrator import IntegrationConfig
from flapwing.model import PitchParams, SimState, Trajectory
from flapwing.pitch import (PITCH_DESIGN_POINT, make_pitch_rhs, pitch_natural_frequency,
                            pitch_rhs, pitch_torque_decomposition, simulate_pitch, torque_terms)

P = PITCH_DESIGN_POINT


def sympy_pitch_terms(p, t, phi):
    """Each torque term of the pitch equation, evaluated symbolically."""
    T, PHI = sp.symbols("t phi")
    stroke = p.A * sp.sin(p.omega * T)
    stroke_rate = sp.diff(stroke, T)
    spring = -p.k * PHI
    aero = p.b * p.L_w * stroke_rate * p.p
    cent = p.m * p.l * sp.sin(PHI) * stroke_rate ** 2 * p.l * sp.cos(PHI)
    subs = {T: t, PHI: phi}
    return [float(e.subs(subs).evalf(30)) for e in (spring, aero, cent)]


def test_design_point_aero_product():
    assert P.aero_force == pytest.approx(1e-3, rel=1e-14)
    assert P.A == pytest.approx(math.pi / 4)
    assert P.omega == pytest.approx(2 * math.pi * 70)


def test_rest_at_stroke_extreme():
    t = P.period / 4   # cos(wt) = 0
    rate, acc = pitch_rhs(SimState(t, 0.0, 0.0), P)
    assert rate == 0.0
    assert acc == pytest.approx(0.0, abs=1e-6)


def test_rest_at_mid_stroke_only_aero_drives():
    _, acc = pitch_rhs(SimState(0.0, 0.0, 0.0), P)
    assert acc == pytest.approx(P.b * P.L_w * P.A * P.omega * P.p / P.inertia, rel=1e-14)
    assert acc == pytest.approx(2.5e-6 / 1e-10, rel=1e-12)


def test_45deg_mid_stroke_term_by_term():
    spring, aero, cent = sympy_pitch_terms(P, 0.0, math.pi / 4)
    s, a, c = torque_terms(0.0, math.pi / 4, P)
    assert float(s) == pytest.approx(spring, rel=1e-12)
    assert float(a) == pytest.approx(aero, rel=1e-12)
    assert float(c) == pytest.approx(cent, rel=1e-12)
    _, acc = pitch_rhs(SimState(0.0, math.pi / 4, 0.0), P)
    assert acc == pytest.approx((spring + aero + cent) / P.inertia, rel=1e-12)
    # the plain centripetal term at 45 deg and mid-stroke
    assert cent == pytest.approx(5.966e-6, rel=1e-3)


@given(t=st.floats(0, 0.1), phi=st.floats(-3, 3), om=st.floats(-500, 500))
def test_rhs_closure_consistent_with_terms(t, phi, om):
    rate, acc = make_pitch_rhs(P)(t, phi, om)
    s, a, c = torque_terms(t, phi, P)
    assert rate == om
    assert acc == pytest.approx(float(s + a + c) / P.inertia, rel=1e-9, abs=1e-3)


@given(t=st.floats(0, 0.1), phi=st.floats(-3, 3))
def test_centripetal_term_is_odd(t, phi):
    _, _, c_pos = torque_terms(t, phi, P)
    _, _, c_neg = torque_terms(t, -phi, P)
    assert float(c_neg) == -float(c_pos)


def test_pitch_natural_frequency():
    w = pitch_natural_frequency(P)
    assert w == pytest.approx(math.sqrt(2e5), rel=1e-12)   # 447.21 rad/s
    assert w / (2 * math.pi) == pytest.approx(71.2, rel=1e-3)
    assert pitch_natural_frequency(P.with_(k=4 * P.k)) == pytest.approx(2 * w, rel=1e-14)
    assert pitch_natural_frequency(P.with_(l=2 * P.l)) == pytest.approx(w / 2, rel=1e-14)


def test_free_oscillation_conserves_energy():
    p = P.with_(b=0.0, A=0.0)
    cfg = IntegrationConfig.per_period(2 * math.pi / pitch_natural_frequency(p), cycles=100)
    tr = simulate_pitch(p, cfg, SimState(0.0, 0.4, 0.0))
    e = 0.5 * p.inertia * tr.rate ** 2 + 0.5 * p.k * tr.angle ** 2
    assert np.max(np.abs(e - e[0])) / e[0] < 1e-6


def short_run(p=P, cycles=20):
    return simulate_pitch(p, IntegrationConfig.per_period(p.period, cycles=cycles, steps=1000))


def test_torque_decomposition_peaks():
    tr = short_run()
    dec = pitch_torque_decomposition(tr, P)
    assert dec.peak_aerodynamic == pytest.approx(2.5e-6, rel=1e-6)
    assert len(dec) == len(tr)
    row = dec[5]
    assert row.t == tr.t[5]
    assert row.spring == pytest.approx(-P.k * tr.angle[5])


def test_zero_damping_has_no_aero_torque():
    p = P.with_(b=0.0)
    dec = pitch_torque_decomposition(short_run(p), p)
    assert np.all(dec.aerodynamic == 0.0)
    assert dec.peak_aerodynamic == 0.0


def test_mismatched_trajectory_rejected():
    tr = short_run()
    with pytest.raises(ValueError):
        pitch_torque_decomposition(tr, P.with_(k=2 * P.k))
    plain = Trajectory(tr.t, tr.angle, tr.rate, label="stroke")
    with pytest.raises(ValueError):
        pitch_torque_decomposition(plain, P)

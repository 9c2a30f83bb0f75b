"""Execute a parsed ScenarioConfig and write its CSV/JSON outputs."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import analysis
from .config import ScenarioConfig
from .design import (pivot_stiffness, pivot_stress_check, solve_resonant_mass,
                     solve_stroke_design)
from .integrator import IntegrationConfig, PeriodScaledConfig
from .model import (PitchParams, PivotSpec, StrokeParams, Topology, validate_pitch_params,
                    validate_stroke_params)
from .pitch import pitch_torque_decomposition, simulate_pitch
from .stroke import DEFAULT_PEAK_FORCE, StrokeDrive, calibrate_damping, simulate_stroke

DEFAULT_INTEGRATION = PeriodScaledConfig()


@dataclass
class RunResult:
    summary: dict
    files: list[Path]


def stroke_params(cfg: ScenarioConfig) -> StrokeParams:
    p = cfg.params
    m_r, omega = p["m_r"], p.get("omega", "natural")
    if m_r == "resonant":
        m_r = solve_resonant_mass(p["k_t"], p["L"], omega / (2 * math.pi))
    if omega == "natural":
        omega = math.sqrt(p["k_t"] / (m_r * p["L"] ** 2))
    b = p.get("b", "calibrated")
    if b == "calibrated":
        b = calibrate_damping(p["L_w"], omega, p["z_max"], p.get("peak_force", DEFAULT_PEAK_FORCE))
    b *= p.get("b_scale", 1.0)
    return validate_stroke_params(StrokeParams(m_r=m_r, L=p["L"], k_t=p["k_t"], L_w=p["L_w"],
                                               b=b, z_max=p["z_max"], omega=omega))


def pitch_params(cfg: ScenarioConfig) -> PitchParams:
    p = dict(cfg.params)
    aero = p.pop("aero_force", 1e-3)
    b = p.pop("b", "calibrated")
    if b == "calibrated":
        return validate_pitch_params(PitchParams.from_aero_force(aero_force=aero, **p))
    return validate_pitch_params(PitchParams(b=b, **p))


def period_scaled(cfg: ScenarioConfig) -> PeriodScaledConfig:
    return replace(DEFAULT_INTEGRATION, **cfg.integration)


def integration_config(cfg: ScenarioConfig, period: float) -> IntegrationConfig:
    return period_scaled(cfg).for_period(period)


def _analysis_opts(cfg: ScenarioConfig) -> dict:
    a = cfg.analysis
    return {"n_cycles": a.get("n_cycles", analysis.DEFAULT_CYCLES),
            "tol": a.get("settle_tol", analysis.DEFAULT_SETTLE_TOL),
            "steady_fraction": a.get("steady_fraction", 0.25)}


def _fmt(v) -> str:
    return repr(float(v))


def _write_csv(path: Path, header: list[str], columns: list) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([v if isinstance(v, (str, bool)) else _fmt(v) for v in row])


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return _clean(obj.item())
    return obj


def _write_json(path: Path, obj: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n")


def _paths(cfg: ScenarioConfig, out_dir: Path) -> tuple[Path, Path]:
    o = cfg.output
    return (out_dir / o.get("trajectory", f"{cfg.name}.csv"),
            out_dir / o.get("summary", f"{cfg.name}.json"))


def _stroke_param_json(p: StrokeParams) -> dict:
    return {"m_r_kg": p.m_r, "L_m": p.L, "k_t_N_m_per_rad": p.k_t, "L_w_m": p.L_w,
            "b_N_s_per_m": p.b, "z_max_m": p.z_max, "omega_rad_s": p.omega,
            "frequency_Hz": p.omega / (2 * math.pi)}


def _pitch_param_json(p: PitchParams) -> dict:
    return {"m_kg": p.m, "l_m": p.l, "k_N_m_per_rad": p.k, "p_m": p.p, "L_w_m": p.L_w,
            "b_N_s_per_m": p.b, "A_rad": p.A, "omega_rad_s": p.omega,
            "frequency_Hz": p.omega / (2 * math.pi)}


def run_simulate(cfg: ScenarioConfig, out_dir: Path) -> RunResult:
    opts = _analysis_opts(cfg)
    traj_path, sum_path = _paths(cfg, out_dir)
    if cfg.model == "stroke":
        p = stroke_params(cfg)
        drive = StrokeDrive(p.z_max, p.omega, cfg.params.get("phase", 0.0))
        icfg = integration_config(cfg, p.period)
        traj = simulate_stroke(p, icfg, drive, linearized=cfg.params.get("linearized", False))
        summ = analysis.summarize(traj, p.omega, drive.phase, opts["n_cycles"], opts["tol"],
                                  opts["steady_fraction"])
        header, cols = ["t", "angle_rad", "rate_rad_s"], [traj.t, traj.angle, traj.rate]
        extra = {"params": _stroke_param_json(p),
                 "natural_frequency_rad_s": math.sqrt(p.k_t / p.inertia),
                 "inertial_force_N": p.m_r * p.omega ** 2 * p.L,
                 "inertial_torque_N_m": p.m_r * p.omega ** 2 * p.L ** 2}
    else:
        p = pitch_params(cfg)
        icfg = integration_config(cfg, p.period)
        traj = simulate_pitch(p, icfg)
        dec = pitch_torque_decomposition(traj, p, opts["steady_fraction"])
        peaks = {"spring": dec.peak_spring, "aerodynamic": dec.peak_aerodynamic,
                 "centripetal": dec.peak_centripetal}
        summ = analysis.summarize(traj, p.omega, 0.0, opts["n_cycles"], opts["tol"],
                                  opts["steady_fraction"], peak_torques=peaks)
        max_off, min_off = analysis.extremum_offsets(traj, p.omega, 0.0, opts["n_cycles"])
        header = ["t", "angle_rad", "rate_rad_s", "spring_torque_N_m",
                  "aerodynamic_torque_N_m", "centripetal_torque_N_m"]
        cols = [traj.t, traj.angle, traj.rate, dec.spring, dec.aerodynamic, dec.centripetal]
        extra = {"params": _pitch_param_json(p),
                 "natural_frequency_rad_s": math.sqrt(p.k / p.inertia),
                 "max_peak_offset_from_midstroke_rad": float(np.max(np.abs(max_off))),
                 "max_dip_offset_from_stroke_extreme_rad": float(np.max(np.abs(min_off))),
                 "torque_window_start_s": dec.window_start}
    _write_csv(traj_path, header, cols)
    summary = {"scenario": cfg.name, "model": cfg.model, "mode": cfg.mode,
               "rows": len(traj), "dt_s": icfg.dt, "dt_out_s": icfg.dt_out,
               "t_end_s": icfg.t_end, "method": icfg.method,
               **summ.to_json(), **extra}
    _write_json(sum_path, summary)
    return RunResult(summary, [traj_path, sum_path])


def run_sweep(cfg: ScenarioConfig, out_dir: Path) -> RunResult:
    opts = _analysis_opts(cfg)
    p = stroke_params(cfg)
    w_n = math.sqrt(p.k_t / p.inertia)
    if "ratios" in cfg.sweep:
        freqs = [r * w_n for r in cfg.sweep["ratios"]]
    else:
        freqs = list(cfg.sweep["freqs"])
    icfg = period_scaled(cfg)
    pts = analysis.resonance_curve(p, freqs, icfg, opts["n_cycles"], opts["tol"],
                                   workers=cfg.sweep.get("workers", 1))
    traj_path, sum_path = _paths(cfg, out_dir)
    _write_csv(traj_path, ["omega_rad_s", "frequency_Hz", "ratio_to_natural", "steady_amplitude_rad",
                           "settled", "valid"],
               [[q.omega for q in pts], [q.omega / (2 * math.pi) for q in pts],
                [q.omega / w_n for q in pts], [q.amplitude for q in pts],
                [str(q.settled).lower() for q in pts], [str(q.valid).lower() for q in pts]])
    good = [q for q in pts if q.valid]
    peak = max(good, key=lambda q: q.amplitude) if good else None
    summary = {
        "scenario": cfg.name, "model": cfg.model, "mode": cfg.mode,
        "params": _stroke_param_json(p), "natural_frequency_rad_s": w_n,
        "points": [{"omega_rad_s": q.omega, "steady_amplitude_rad": q.amplitude,
                    "settled": q.settled, "valid": q.valid, "error": q.error} for q in pts],
        "peak_omega_rad_s": peak.omega if peak else None,
        "peak_amplitude_rad": peak.amplitude if peak else None,
    }
    _write_json(sum_path, summary)
    return RunResult(summary, [traj_path, sum_path])


def run_design(cfg: ScenarioConfig, out_dir: Path) -> RunResult:
    p, d = cfg.params, cfg.design
    numerics = {k: d[k] for k in ("cycles", "steps") if k in d}
    res = solve_stroke_design(
        z_max=p["z_max"], m_r=p["m_r"], L_w=p["L_w"], target_amplitude=d["target_amplitude"],
        L_bounds=(d["L_min"], d["L_max"]), k_t_bounds=(d["k_t_min"], d["k_t_max"]),
        tol=d.get("tolerance", 0.02), grid=(d.get("grid_L", 5), d.get("grid_k_t", 6)),
        peak_force=p.get("peak_force", DEFAULT_PEAK_FORCE), workers=d.get("workers", 1),
        **numerics)
    _, sum_path = _paths(cfg, out_dir)
    summary = {"scenario": cfg.name, "model": cfg.model, "mode": cfg.mode,
               "L_m": res.L, "k_t_N_m_per_rad": res.k_t,
               "steady_amplitude_rad": res.amplitude,
               "target_amplitude_rad": d["target_amplitude"],
               "relative_residual": res.residual, "evaluations": res.evaluations,
               "params": _stroke_param_json(res.params)}
    _write_json(sum_path, summary)
    return RunResult(summary, [sum_path])


def run_pivot(cfg: ScenarioConfig, out_dir: Path) -> RunResult:
    v = cfg.pivot
    base = PivotSpec(**{k: v[k] for k in ("n_beams", "beam_length", "beam_width",
                                          "beam_thickness", "elastic_modulus",
                                          "shear_modulus", "stress_budget") if k in v})
    topo = v.get("topology", "all")
    topos = list(Topology) if topo == "all" else [Topology(topo)]
    max_angle = v.get("max_angle", math.pi / 3)
    rows = {}
    for t in topos:
        spec = base.with_(topology=t)
        k_model = pivot_stiffness(spec)
        if "torque" in v:
            k_t = v["torque"] / max_angle if max_angle > 0 else 0.0
        else:
            k_t = v.get("k_t", k_model)
        chk = pivot_stress_check(spec, max_angle, k_t)
        rows[t.value] = {"stiffness_N_m_per_rad": k_model, "applied_torque_N_m": chk.torque,
                         "beam_torque_N_m": chk.beam_torque, "peak_stress_Pa": chk.peak_stress,
                         "within_budget": chk.within_budget}
    _, sum_path = _paths(cfg, out_dir)
    summary = {"scenario": cfg.name, "mode": cfg.mode, "max_angle_rad": max_angle,
               "stress_budget_Pa": base.stress_budget, "topologies": rows}
    _write_json(sum_path, summary)
    return RunResult(summary, [sum_path])


RUNNERS = {"simulate": run_simulate, "sweep": run_sweep, "design": run_design, "pivot": run_pivot}


def run_config(cfg: ScenarioConfig, out_dir: str | Path = ".") -> RunResult:
    return RUNNERS[cfg.mode](cfg, Path(out_dir))

"""Inverse design: resonant-mass tuning, stroke (L, k_t) search, pivot sizing."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analysis import DEFAULT_CYCLES, DEFAULT_SETTLE_TOL, steady_amplitude
from .integrator import IntegrationConfig
from .model import PivotSpec, StrokeParams, Topology, validate_pivot_spec
from .stroke import DEFAULT_PEAK_FORCE, resonant_design, simulate_stroke


def solve_resonant_mass(k_t: float, L: float, f_target: float) -> float:
    """Mass at radius L that puts the stroke resonance at `f_target` Hz."""
    if not (k_t > 0 and L > 0 and f_target > 0):
        raise ValueError("k_t, L and f_target must be positive")
    return k_t / ((2 * math.pi * f_target) ** 2 * L * L)


class NoSolutionError(ValueError):
    def __init__(self, msg: str, best: "StrokeDesign"):
        self.best = best
        super().__init__(f"{msg}; best residual {best.residual:+.4f} at "
                         f"L={best.L:.4g} m, k_t={best.k_t:.4g} N*m/rad")


@dataclass(frozen=True)
class StrokeDesign:
    L: float
    k_t: float
    amplitude: float
    residual: float          # (amplitude - target) / target
    params: StrokeParams
    evaluations: int = 0


@dataclass(frozen=True)
class DesignSearch:
    """Fixed inputs and numerics shared by every candidate of a stroke design search."""

    z_max: float
    m_r: float
    L_w: float
    target: float
    peak_force: float = DEFAULT_PEAK_FORCE
    cycles: int = 40
    steps: int = 1000
    n_cycles: int = DEFAULT_CYCLES
    settle_tol: float = DEFAULT_SETTLE_TOL

    def params(self, L: float, k_t: float) -> StrokeParams:
        return resonant_design(self.m_r, L, k_t, self.L_w, self.z_max, self.peak_force)

    def amplitude(self, L: float, k_t: float) -> float:
        p = self.params(L, k_t)
        cfg = IntegrationConfig.per_period(p.period, cycles=self.cycles, steps=self.steps)
        return steady_amplitude(simulate_stroke(p, cfg), p.omega, self.n_cycles, self.settle_tol)[0]

    def evaluate(self, L: float, k_t: float, evaluations: int = 0) -> StrokeDesign:
        a = self.amplitude(L, k_t)
        return StrokeDesign(L, k_t, a, (a - self.target) / self.target,
                            self.params(L, k_t), evaluations)


def _eval_point(args):
    search, L, k = args
    return search.amplitude(L, k)


def solve_stroke_design(z_max: float, m_r: float, L_w: float, target_amplitude: float,
                        L_bounds: tuple[float, float], k_t_bounds: tuple[float, float],
                        tol: float = 0.02, grid: tuple[int, int] = (5, 6),
                        peak_force: float = DEFAULT_PEAK_FORCE, max_iter: int = 40,
                        workers: int = 1, **numerics) -> StrokeDesign:
    """Find (L, k_t) whose resonant stroke, with recalibrated damping, reaches `target_amplitude`.

    A coarse grid over the bounds picks the L row whose k_t line brackets the
    target with the smallest residual; bisection on k_t along that row then
    refines until |residual| <= tol/4. Raises NoSolutionError carrying the
    best candidate when no grid row brackets the target and no grid point is
    already within `tol`.
    """
    if not target_amplitude > 0:
        raise ValueError("target_amplitude must be > 0")
    (L_lo, L_hi), (k_lo, k_hi) = L_bounds, k_t_bounds
    if not (0 < L_lo <= L_hi and 0 < k_lo <= k_hi):
        raise ValueError("bounds must be positive and ordered (lo <= hi)")
    search = DesignSearch(z_max, m_r, L_w, target_amplitude, peak_force, **numerics)

    Ls = np.linspace(L_lo, L_hi, grid[0]) if L_hi > L_lo else np.array([L_lo])
    ks = np.linspace(k_lo, k_hi, grid[1]) if k_hi > k_lo else np.array([k_lo])
    jobs = [(search, float(L), float(k)) for L in Ls for k in ks]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            flat = list(ex.map(_eval_point, jobs))
    else:
        flat = [_eval_point(j) for j in jobs]
    amps = np.array(flat).reshape(Ls.size, ks.size)
    res = (amps - target_amplitude) / target_amplitude
    evals = amps.size

    i_best, j_best = np.unravel_index(int(np.argmin(np.abs(res))), res.shape)
    best = StrokeDesign(float(Ls[i_best]), float(ks[j_best]), float(amps[i_best, j_best]),
                        float(res[i_best, j_best]), search.params(Ls[i_best], ks[j_best]), evals)

    # rows whose k_t line changes sign, ranked by their smallest |residual|
    rows = [i for i in range(Ls.size)
            if np.any(np.sign(res[i, :-1]) * np.sign(res[i, 1:]) <= 0)]
    if not rows:
        if abs(best.residual) <= tol:
            return best
        raise NoSolutionError("target not bracketed inside the bounds", best)
    i = min(rows, key=lambda r: float(np.min(np.abs(res[r]))))
    j = int(np.argmin(np.abs(res[i])))
    L = float(Ls[i])
    if abs(res[i, j]) <= tol / 4:
        return StrokeDesign(L, float(ks[j]), float(amps[i, j]), float(res[i, j]),
                            search.params(L, ks[j]), evals)

    cells = [c for c in range(ks.size - 1)
             if np.sign(res[i, c]) * np.sign(res[i, c + 1]) <= 0]
    c = min(cells, key=lambda c: min(abs(res[i, c]), abs(res[i, c + 1])))
    lo, hi = float(ks[c]), float(ks[c + 1])
    r_lo = float(res[i, c])
    cand = StrokeDesign(L, float(ks[j]), float(amps[i, j]), float(res[i, j]),
                        search.params(L, ks[j]), evals)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        trial = search.evaluate(L, mid, evals + 1)
        evals += 1
        if abs(trial.residual) < abs(cand.residual):
            cand = trial
        if abs(trial.residual) <= tol / 4:
            break
        if np.sign(trial.residual) == np.sign(r_lo):
            lo, r_lo = mid, trial.residual
        else:
            hi = mid
    cand = StrokeDesign(cand.L, cand.k_t, cand.amplitude, cand.residual, cand.params, evals)
    if abs(cand.residual) > tol:
        raise NoSolutionError("bisection did not reach the tolerance", cand)
    return cand


def _section(spec: PivotSpec):
    w, t = spec.beam_width, spec.beam_thickness
    return w * t ** 3 / 12.0, w * t ** 3 / 3.0


def pivot_stiffness(spec: PivotSpec) -> float:
    """Rotational stiffness (N*m/rad) of the beam flexure under its topology model.

    parallel-bending: n * E*I/l with I = w t^3/12
    serial-torsion:   G*J/(l n)    with J = w t^3/3 (thin rectangle)
    parallel-torsion: n * G*J/l
    """
    validate_pivot_spec(spec)
    I, J = _section(spec)
    n, l = spec.n_beams, spec.beam_length
    if spec.topology is Topology.PARALLEL_BENDING:
        return n * spec.elastic_modulus * I / l
    if spec.topology is Topology.SERIAL_TORSION:
        return spec.shear_modulus * J / (l * n)
    return n * spec.shear_modulus * J / l


@dataclass(frozen=True)
class StressCheck:
    peak_stress: float
    within_budget: bool
    torque: float
    beam_torque: float


def pivot_stress_check(spec: PivotSpec, max_angle: float, k_t: float) -> StressCheck:
    """Peak beam stress for the torque k_t*max_angle.

    Parallel topologies split the torque evenly across beams; in series every
    beam carries all of it. Bending uses sigma = M (t/2)/I, torsion the
    thin-rectangle estimate tau = 3T/(w t^2).
    """
    validate_pivot_spec(spec)
    if max_angle < 0 or k_t < 0:
        raise ValueError("max_angle and k_t must be non-negative")
    torque = k_t * max_angle
    share = torque if spec.topology is Topology.SERIAL_TORSION else torque / spec.n_beams
    w, t = spec.beam_width, spec.beam_thickness
    if spec.topology is Topology.PARALLEL_BENDING:
        I, _ = _section(spec)
        stress = share * (t / 2) / I
    else:
        stress = 3.0 * share / (w * t * t)
    return StressCheck(stress, stress < spec.stress_budget, torque, share)

"""Amplitude, phase and resonance-curve extraction from trajectories."""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .integrator import BlowUpError, IntegrationConfig, PeriodScaledConfig
from .model import StrokeParams, Trajectory, ValidationError

DEFAULT_CYCLES = 10
DEFAULT_SETTLE_TOL = 0.02


class UnsettledWarning(UserWarning):
    pass


def _refine(y: np.ndarray, i: int) -> float:
    """Extremum value from a parabola through samples i-1, i, i+1."""
    if i <= 0 or i >= y.size - 1:
        return float(y[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    den = y0 - 2.0 * y1 + y2
    if den == 0.0:
        return float(y1)
    d = 0.5 * (y0 - y2) / den
    if abs(d) > 1.0:
        return float(y1)
    return float(y1 - 0.25 * (y0 - y2) * d)


def _cycle_bounds(traj: Trajectory, period: float, n: int) -> list[tuple[int, int]]:
    """Index ranges [lo, hi] of the last n whole periods, oldest first."""
    t, t_end = traj.t, traj.t[-1]
    eps = 1e-9 * traj.dt_out
    out = []
    for j in range(n, 0, -1):
        lo = int(np.searchsorted(t, t_end - j * period - eps))
        hi = int(np.searchsorted(t, t_end - (j - 1) * period + eps, side="right")) - 1
        out.append((lo, hi))
    return out


def cycle_amplitudes(traj: Trajectory, omega: float, n_cycles: int | None = None) -> np.ndarray:
    """Half peak-to-peak of the angle in each drive period, counted back from the end.

    With `n_cycles` None every whole period in the trajectory is used.
    """
    period = 2 * math.pi / omega
    span = traj.t[-1] - traj.t[0]
    n_all = int(math.floor(span / period * (1 + 1e-12)))
    n = n_all if n_cycles is None else n_cycles
    if n < 1 or n > n_all:
        raise ValueError(f"trajectory spans {n_all} periods, cannot take {n}")
    y = traj.angle
    amps = np.empty(n)
    for k, (lo, hi) in enumerate(_cycle_bounds(traj, period, n)):
        seg = y[lo:hi + 1]
        top = _refine(y, lo + int(np.argmax(seg)))
        bot = _refine(y, lo + int(np.argmin(seg)))
        amps[k] = 0.5 * (top - bot)
    return amps


def _is_settled(amps: np.ndarray, tol: float) -> bool:
    ref = float(np.mean(amps))
    if ref == 0.0:
        return bool(np.all(amps == 0.0))
    return bool((amps.max() - amps.min()) / ref < tol)


def steady_amplitude(traj: Trajectory, omega: float, n_cycles: int = DEFAULT_CYCLES,
                     tol: float = DEFAULT_SETTLE_TOL) -> tuple[float, bool]:
    """Mean half peak-to-peak over the last `n_cycles` drive periods.

    `settled` is true when those per-cycle amplitudes spread by less than
    `tol` relative to their mean. The trajectory must cover at least
    3*n_cycles periods.
    """
    period = 2 * math.pi / omega
    if traj.t[-1] - traj.t[0] < 3 * n_cycles * period * (1 - 1e-9):
        raise ValueError(f"trajectory shorter than {3 * n_cycles} drive periods")
    amps = cycle_amplitudes(traj, omega, n_cycles)
    return float(np.mean(amps)), _is_settled(amps, tol)


def settle_time(traj: Trajectory, omega: float, n_cycles: int = DEFAULT_CYCLES,
                tol: float = DEFAULT_SETTLE_TOL) -> float:
    """Start of the first period after which every period's amplitude stays
    within `tol` of the final steady amplitude; NaN if that never happens."""
    amps = cycle_amplitudes(traj, omega)
    final = float(np.mean(amps[-n_cycles:]))
    if final == 0.0:
        ok = amps == 0.0
    else:
        ok = np.abs(amps - final) <= tol * final
    if not ok[-1]:
        return float("nan")
    bad = np.flatnonzero(~ok)
    first = 0 if bad.size == 0 else int(bad[-1]) + 1
    period = 2 * math.pi / omega
    return float(traj.t[-1] - (amps.size - first) * period)


def _window(traj: Trajectory, omega: float, n_cycles: int):
    period = 2 * math.pi / omega
    lo, _ = _cycle_bounds(traj, period, n_cycles)[0]
    # drop the closing sample so the window covers whole periods exactly once
    return traj.t[lo:-1], traj.angle[lo:-1]


def fundamental(traj: Trajectory, omega: float, phase: float = 0.0,
                n_cycles: int = DEFAULT_CYCLES) -> tuple[float, float]:
    """Amplitude and phase of the component at `omega`, relative to sin(omega t + phase).

    Single-bin projection over the last `n_cycles` whole periods; the phase
    is in (-pi, pi], negative when the signal lags the reference.
    """
    t, y = _window(traj, omega, n_cycles)
    s = omega * t + phase
    a_sin = 2.0 * float(np.mean(y * np.sin(s)))
    a_cos = 2.0 * float(np.mean(y * np.cos(s)))
    lag = math.atan2(a_cos, a_sin)
    if lag <= -math.pi:
        lag = math.pi
    return math.hypot(a_sin, a_cos), lag


def phase_lag(traj: Trajectory, drive_omega: float, drive_phase: float = 0.0,
              n_cycles: int = DEFAULT_CYCLES, tol: float = DEFAULT_SETTLE_TOL) -> float:
    """Phase of the angle's fundamental relative to the drive sine.

    Warns with UnsettledWarning if the last `n_cycles` have not settled.
    """
    amps = cycle_amplitudes(traj, drive_omega, n_cycles)
    if not _is_settled(amps, tol):
        warnings.warn("phase taken from an unsettled trajectory", UnsettledWarning, stacklevel=2)
    return fundamental(traj, drive_omega, drive_phase, n_cycles)[1]


def _wrap(x: np.ndarray, half: float) -> np.ndarray:
    return (x + half) % (2 * half) - half


def extremum_offsets(traj: Trajectory, omega: float, phase: float = 0.0,
                     n_cycles: int = DEFAULT_CYCLES) -> tuple[np.ndarray, np.ndarray]:
    """Where |angle| peaks and dips relative to the drive's stroke positions.

    For a drive A sin(s), s = omega t + phase, mid-stroke is s = k*pi and the
    stroke extremes are s = pi/2 + k*pi. Returns the drive-phase offsets (rad)
    of each half-period's |angle| maximum from the nearest mid-stroke, and of
    each half-period's |angle| minimum from the nearest extreme, both over the
    last `n_cycles` periods.
    """
    period = 2 * math.pi / omega
    lo, _ = _cycle_bounds(traj, period, n_cycles)[0]
    t, y = traj.t[lo:], np.abs(traj.angle[lo:])
    s = omega * t + phase
    s0 = s[0]

    def offsets(center: float, pick):
        # half-period windows centred on s = center + k*pi
        k = np.floor((s - center + 0.5 * math.pi) / math.pi)
        out = []
        for kk in np.unique(k):
            idx = np.flatnonzero(k == kk)
            c = center + kk * math.pi
            # only complete windows
            if c - 0.5 * math.pi < s0 - 1e-12 or c + 0.5 * math.pi > s[-1] + 1e-12:
                continue
            j = idx[pick(y[idx])]
            out.append(s[j] - c)
        return _wrap(np.array(out), 0.5 * math.pi)

    return offsets(0.0, np.argmax), offsets(0.5 * math.pi, np.argmin)


@dataclass(frozen=True)
class SimSummary:
    steady_amplitude: float
    settled: bool
    settle_time: float
    phase_lag_vs_drive: float
    peak_rate: float
    max_cycle_amplitude: float
    peak_torques: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.steady_amplitude >= 0:
            raise ValidationError([("steady_amplitude", "must be >= 0")])
        if not -math.pi < self.phase_lag_vs_drive <= math.pi:
            raise ValidationError([("phase_lag_vs_drive", "must be in (-pi, pi]")])

    def to_json(self) -> dict:
        """Flat mapping with SI units in the key names; NaN becomes None."""

        def clean(v):
            return None if isinstance(v, float) and not math.isfinite(v) else v

        out = {
            "steady_amplitude_rad": self.steady_amplitude,
            "steady_amplitude_deg": math.degrees(self.steady_amplitude),
            "settled": self.settled,
            "settle_time_s": self.settle_time,
            "phase_lag_vs_drive_rad": self.phase_lag_vs_drive,
            "peak_rate_rad_s": self.peak_rate,
            "max_cycle_amplitude_rad": self.max_cycle_amplitude,
        }
        for name, val in self.peak_torques.items():
            out[f"peak_{name}_torque_N_m"] = val
        return {k: clean(v) for k, v in out.items()}


def summarize(traj: Trajectory, omega: float, phase: float = 0.0,
              n_cycles: int = DEFAULT_CYCLES, tol: float = DEFAULT_SETTLE_TOL,
              steady_fraction: float = 0.25, peak_torques: dict | None = None) -> SimSummary:
    amp, settled = steady_amplitude(traj, omega, n_cycles, tol)
    n_steady = max(1, int(round(steady_fraction * (traj.t[-1] - traj.t[0]) * omega / (2 * math.pi))))
    lo, _ = _cycle_bounds(traj, 2 * math.pi / omega, n_cycles)[0]
    return SimSummary(
        steady_amplitude=amp,
        settled=settled,
        settle_time=settle_time(traj, omega, n_cycles, tol),
        phase_lag_vs_drive=fundamental(traj, omega, phase, n_cycles)[1],
        peak_rate=float(np.max(np.abs(traj.rate[lo:]))),
        max_cycle_amplitude=float(np.max(cycle_amplitudes(traj, omega, n_steady))),
        peak_torques=dict(peak_torques or {}),
    )


@dataclass(frozen=True)
class SweepPoint:
    omega: float
    amplitude: float
    settled: bool
    valid: bool = True
    error: str = ""


def _sweep_point(args) -> SweepPoint:
    from .stroke import simulate_stroke

    p, omega, cfg, n_cycles, tol = args
    try:
        q = p.with_(omega=omega)
        if cfg is None:
            run_cfg = IntegrationConfig.per_period(2 * math.pi / omega)
        elif isinstance(cfg, PeriodScaledConfig):
            run_cfg = cfg.for_period(2 * math.pi / omega)
        else:
            run_cfg = cfg
        amp, settled = steady_amplitude(simulate_stroke(q, run_cfg), omega, n_cycles, tol)
        return SweepPoint(omega, amp, settled)
    except (BlowUpError, ValidationError, ValueError, ArithmeticError) as exc:
        return SweepPoint(omega, float("nan"), False, valid=False, error=str(exc))


def resonance_curve(p: StrokeParams, freqs,
                    cfg: IntegrationConfig | PeriodScaledConfig | None = None,
                    n_cycles: int = DEFAULT_CYCLES, tol: float = DEFAULT_SETTLE_TOL,
                    workers: int = 1) -> list[SweepPoint]:
    """Steady stroke amplitude at each drive frequency in `freqs` (rad/s).

    Everything except omega is held fixed, including b. With `cfg` None each
    point runs 100 periods at period/2000; a PeriodScaledConfig is resolved
    against each point's own drive period. Failed points come back with
    ``valid=False`` instead of aborting the sweep. Output order follows input.
    """
    freqs = [float(w) for w in freqs]
    if any(not w > 0 for w in freqs):
        raise ValueError("sweep frequencies must be positive")
    jobs = [(p, w, cfg, n_cycles, tol) for w in freqs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_sweep_point, jobs))
    return [_sweep_point(j) for j in jobs]

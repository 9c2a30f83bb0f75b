"""Shared value types for the stroke and pitch models.

Everything here is in SI base units with angles in radians.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields, replace
from typing import Iterator

import numpy as np


class ValidationError(ValueError):
    """Raised with every violated constraint, not just the first one."""

    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = list(violations)
        msg = "; ".join(f"{name}: {why}" for name, why in self.violations)
        super().__init__(msg)

    @property
    def fields(self) -> list[str]:
        return [name for name, _ in self.violations]


def _check(obj, positive=(), non_negative=()) -> list[tuple[str, str]]:
    bad = []
    for f in fields(obj):
        v = getattr(obj, f.name)
        if isinstance(v, (bool, str, enum.Enum)):
            continue
        if not math.isfinite(v):
            bad.append((f.name, f"must be finite, got {v!r}"))
        elif f.name in positive and v <= 0:
            bad.append((f.name, f"must be > 0, got {v!r}"))
        elif f.name in non_negative and v < 0:
            bad.append((f.name, f"must be >= 0, got {v!r}"))
    return bad


@dataclass(frozen=True)
class StrokeParams:
    """Parameters of the linearly driven torsional pendulum."""

    m_r: float      # resonant mass, kg
    L: float        # radius of the resonant mass, m
    k_t: float      # torsional stiffness, N*m/rad
    L_w: float      # wing centre-of-pressure radius, m
    b: float        # lumped damping coefficient, N*s/m
    z_max: float    # drive displacement amplitude, m
    omega: float    # drive angular frequency, rad/s

    @property
    def inertia(self) -> float:
        return self.m_r * self.L ** 2

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def violations(self) -> list[tuple[str, str]]:
        bad = _check(self, positive=("m_r", "L", "k_t", "L_w", "z_max", "omega"),
                     non_negative=("b",))
        if not bad and not self.inertia > 0:
            bad.append(("m_r", "derived inertia m_r*L**2 underflows to zero"))
        return bad

    def with_(self, **changes) -> "StrokeParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class PitchParams:
    """Parameters of the centripetally driven pitch oscillator."""

    m: float        # pitch resonant mass, kg
    l: float        # mass distance from the pitch axis, m
    k: float        # pitch torsional stiffness, N*m/rad
    p: float        # wing c-p distance from the stroke (z) axis, m
    L_w: float      # wing c-p distance from the pitch (y) axis, m
    b: float        # damping coefficient, N*s/m
    A: float        # stroke amplitude, rad
    omega: float    # stroke angular frequency, rad/s

    @classmethod
    def from_aero_force(cls, m: float, l: float, k: float, p: float, L_w: float,
                        A: float, omega: float, aero_force: float = 1e-3) -> "PitchParams":
        """Pick b so that the peak aerodynamic force b*L_w*A*omega equals `aero_force`."""
        return cls(m=m, l=l, k=k, p=p, L_w=L_w, b=aero_force / (L_w * A * omega),
                   A=A, omega=omega)

    @property
    def inertia(self) -> float:
        return self.m * self.l ** 2

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def aero_force(self) -> float:
        return self.b * self.L_w * self.A * self.omega

    def violations(self) -> list[tuple[str, str]]:
        # A = 0 (no stroke) is allowed so the free pitch oscillator can be studied
        bad = _check(self, positive=("m", "l", "k", "p", "L_w", "omega"),
                     non_negative=("b", "A"))
        if math.isfinite(self.A) and self.A > math.pi:
            bad.append(("A", f"stroke amplitude must be <= pi, got {self.A!r}"))
        if not bad and not self.inertia > 0:
            bad.append(("m", "derived inertia m*l**2 underflows to zero"))
        return bad

    def with_(self, **changes) -> "PitchParams":
        return replace(self, **changes)


def validate_stroke_params(p: StrokeParams) -> StrokeParams:
    bad = p.violations()
    if bad:
        raise ValidationError(bad)
    return p


def validate_pitch_params(p: PitchParams) -> PitchParams:
    bad = p.violations()
    if bad:
        raise ValidationError(bad)
    return p


def natural_frequency(p: StrokeParams) -> float:
    """Undamped small-angle natural frequency sqrt(k_t / I_x), rad/s."""
    validate_stroke_params(p)
    return math.sqrt(p.k_t / p.inertia)


@dataclass(frozen=True)
class SimState:
    t: float
    angle: float
    rate: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.t, self.angle, self.rate)):
            raise ValidationError([("state", f"non-finite value in {self!r}")])


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled solution of a single-degree-of-freedom model.

    Arrays are copied and frozen on construction.
    """

    t: np.ndarray
    angle: np.ndarray
    rate: np.ndarray
    label: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        angle = np.array(self.angle, dtype=float)
        rate = np.array(self.rate, dtype=float)
        bad = []
        if t.ndim != 1 or t.size < 2:
            bad.append(("t", "need at least 2 samples"))
        elif not (angle.shape == t.shape and rate.shape == t.shape):
            bad.append(("angle", "t, angle and rate lengths differ"))
        else:
            steps = np.diff(t)
            if not np.all(steps > 0):
                bad.append(("t", "timestamps must be strictly increasing"))
            else:
                dt = (t[-1] - t[0]) / (t.size - 1)
                if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, abs(t[-1])):
                    bad.append(("t", "sampling is not uniform"))
            if not (np.all(np.isfinite(angle)) and np.all(np.isfinite(rate))):
                bad.append(("angle", "non-finite samples"))
        if bad:
            raise ValidationError(bad)
        for name, arr in (("t", t), ("angle", angle), ("rate", rate)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def dt_out(self) -> float:
        return float((self.t[-1] - self.t[0]) / (self.t.size - 1))

    def __len__(self) -> int:
        return int(self.t.size)

    def __getitem__(self, i: int) -> SimState:
        return SimState(float(self.t[i]), float(self.angle[i]), float(self.rate[i]))

    def __iter__(self) -> Iterator[SimState]:
        for i in range(len(self)):
            yield self[i]

    def equals(self, other: "Trajectory") -> bool:
        """Bit-level equality of all samples."""
        return (self.label == other.label
                and all(np.array_equal(getattr(self, n), getattr(other, n))
                        for n in ("t", "angle", "rate")))


class Topology(str, enum.Enum):
    PARALLEL_BENDING = "parallel-bending"
    SERIAL_TORSION = "serial-torsion"
    PARALLEL_TORSION = "parallel-torsion"


# 301 stainless handbook moduli; the 0.8 GPa budget is the cold-rolled limit.
STEEL_E = 193e9
STEEL_G = 75e9
STEEL_STRESS_BUDGET = 0.8e9


@dataclass(frozen=True)
class PivotSpec:
    n_beams: int
    beam_length: float
    beam_width: float
    beam_thickness: float
    elastic_modulus: float = STEEL_E
    shear_modulus: float = STEEL_G
    stress_budget: float = STEEL_STRESS_BUDGET
    topology: Topology = Topology.SERIAL_TORSION

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology(self.topology))

    def violations(self) -> list[tuple[str, str]]:
        bad = _check(self, positive=("beam_length", "beam_width", "beam_thickness",
                                     "elastic_modulus", "shear_modulus"),
                     non_negative=("stress_budget",))
        if int(self.n_beams) != self.n_beams or self.n_beams < 1:
            bad.append(("n_beams", f"must be an integer >= 1, got {self.n_beams!r}"))
        return bad

    def with_(self, **changes) -> "PivotSpec":
        return replace(self, **changes)


def validate_pivot_spec(spec: PivotSpec) -> PivotSpec:
    bad = spec.violations()
    if bad:
        raise ValidationError(bad)
    return spec


# Reference flexure: 16 steel beams, 1 mm x 0.1 mm x 38 um.
REFERENCE_PIVOT = PivotSpec(n_beams=16, beam_length=1e-3, beam_width=0.1e-3,
                         beam_thickness=38e-6)

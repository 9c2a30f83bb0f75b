"""Unit-suffixed scalar parsing for scenario files.

A quantity is ``<number> [unit]``. A bare number is taken as the SI base
unit of the expected dimension. ``u`` and ``µ`` both mean micro.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

# dimension -> {unit: factor to SI}; the first entry is the canonical spelling.
UNITS: dict[str, dict[str, float]] = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6},
    "mass": {"kg": 1.0, "g": 1e-3, "mg": 1e-6, "ug": 1e-9},
    "stiffness": {"N*m/rad": 1.0, "Nm/rad": 1.0, "Nm": 1.0, "mNm/rad": 1e-3, "mNm": 1e-3,
                  "uNm/rad": 1e-6, "uNm": 1e-6},
    "torque": {"N*m": 1.0, "Nm": 1.0, "mNm": 1e-3, "uNm": 1e-6},
    "force": {"N": 1.0, "mN": 1e-3, "uN": 1e-6},
    "damping": {"N*s/m": 1.0, "Ns/m": 1.0, "kg/s": 1.0, "mNs/m": 1e-3, "uNs/m": 1e-6},
    "angular_frequency": {"rad/s": 1.0, "Hz": TWO_PI, "kHz": TWO_PI * 1e3},
    "angle": {"rad": 1.0, "deg": math.pi / 180.0},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6},
    "pressure": {"Pa": 1.0, "kPa": 1e3, "MPa": 1e6, "GPa": 1e9},
}

_ALIASES = {"µ": "u", "μ": "u", "·": "*", "°": "deg", "degrees": "deg", "cycles": "cycle",
            "period": "cycle", "periods": "cycle"}

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?inf|nan"
_QTY = re.compile(rf"^\s*(?P<num>{_NUM})\s*(?P<unit>[^\s\d].*?)?\s*$")


class UnitError(ValueError):
    pass


@dataclass(frozen=True)
class Cycles:
    """A duration measured in drive periods, resolved once the period is known."""

    n: float

    def seconds(self, period: float) -> float:
        return self.n * period


def _normalize(unit: str) -> str:
    u = unit.strip()
    for a, b in _ALIASES.items():
        if a in ("µ", "μ", "·", "°"):
            u = u.replace(a, b)
    return _ALIASES.get(u, u)


def parse_quantity(text: str, dimension: str, allow_cycles: bool = False):
    """Parse ``text`` into an SI float (or Cycles when `allow_cycles` and unit is cycle)."""
    m = _QTY.match(text)
    if not m:
        raise UnitError(f"cannot parse quantity {text!r}")
    value = float(m.group("num"))
    unit = m.group("unit")
    if unit is None:
        return value
    unit = _normalize(unit)
    if unit == "cycle":
        if allow_cycles:
            return Cycles(value)
        raise UnitError(f"'cycle' is only valid for durations, got {text!r}")
    table = UNITS[dimension]
    if unit not in table and unit.replace("*", "") in table:
        unit = unit.replace("*", "")      # uN*m is uNm
    if unit not in table:
        raise UnitError(f"unit {unit!r} is not a {dimension.replace('_', ' ')} unit "
                        f"(expected one of {', '.join(table)})")
    return value * table[unit]


def format_quantity(value, dimension: str) -> str:
    """Canonical SI text that parses back to exactly `value`."""
    if isinstance(value, Cycles):
        return f"{value.n!r} cycle"
    unit = next(iter(UNITS[dimension]))
    return f"{float(value)!r} {unit}"


def parse_list(text: str, dimension: str | None) -> list[float]:
    """Comma-separated numbers; a unit on the last item applies to all of them."""
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise UnitError("empty list")
    m = _QTY.match(items[-1])
    unit = m.group("unit") if m else None
    out = []
    for s in items:
        if dimension is None:
            out.append(float(s))
        else:
            mm = _QTY.match(s)
            has_unit = bool(mm and mm.group("unit"))
            out.append(parse_quantity(s if has_unit or unit is None else f"{s} {unit}", dimension))
    return out

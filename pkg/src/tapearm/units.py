"""Angle parsing and formatting shared by the CLI and scenario checks.

The library works in radians; user-facing text defaults to degrees with an
explicit ``deg``/``rad`` suffix always taking precedence.
"""

from __future__ import annotations

import math


def parse_angle(text, default_unit: str = "deg") -> float:
    """Parse '16.7deg', '0.29rad', or a bare number in the default unit.

    Returns radians. Raises ValueError on malformed input.
    """
    s = str(text).strip().lower()
    unit = default_unit
    if s.endswith("deg"):
        s = s[:-3]
        unit = "deg"
    elif s.endswith("rad"):
        s = s[:-3]
        unit = "rad"
    if unit not in ("deg", "rad"):
        raise ValueError(f"unknown angle unit {unit!r}")
    value = float(s)
    return math.radians(value) if unit == "deg" else value


def format_angle(value_rad: float, unit: str = "deg") -> str:
    """Format an angle (given in radians) in the requested unit."""
    if unit == "deg":
        return f"{math.degrees(value_rad):.12g}"
    if unit == "rad":
        return f"{value_rad:.12g}"
    raise ValueError(f"unknown angle unit {unit!r}")

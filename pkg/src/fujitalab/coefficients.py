"""Named radial coefficient presets.

Config files refer to coefficients as ``name:param[,param]`` strings; there
is deliberately no expression parser.  Each preset carries an analytic
derivative so operator diagnostics do not have to fall back to finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


def _match(r, out):
    # keep scalars scalar, arrays arrays
    if np.ndim(r) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class RadialCoefficient:
    """Radial function with an attached derivative, serializable by name."""

    name: str
    params: tuple[float, ...]
    fn: Callable = field(repr=False, compare=False)
    deriv: Callable = field(repr=False, compare=False)

    def __call__(self, r):
        rr = np.asarray(r, dtype=float)
        return _match(r, self.fn(rr))

    def derivative(self, r):
        rr = np.asarray(r, dtype=float)
        return _match(r, self.deriv(rr))

    def spec_string(self) -> str:
        return f"{self.name}:{','.join(repr(p) for p in self.params)}"


def constant(value: float) -> RadialCoefficient:
    """a(r) = value."""
    v = float(value)
    return RadialCoefficient(
        "constant", (v,),
        fn=lambda r: np.full(r.shape, v),
        deriv=lambda r: np.zeros(r.shape),
    )


def rational_decay(c: float) -> RadialCoefficient:
    """a(r) = r^2 / (r^2 + c), i.e. 1 / (1 + c r^-2); stays in (0, 1] for c >= 0."""
    c = float(c)
    if c < 0.0:
        raise ValueError(f"rational_decay needs c >= 0, got {c}")
    return RadialCoefficient(
        "rational_decay", (c,),
        fn=lambda r: r * r / (r * r + c),
        deriv=lambda r: 2.0 * r * c / (r * r + c) ** 2,
    )


def boundary_dip(d: float) -> RadialCoefficient:
    """a(r) = 1 - d/r; dips near the hole, must satisfy d < R to stay positive."""
    d = float(d)
    if d < 0.0:
        raise ValueError(f"boundary_dip needs d >= 0, got {d}")
    return RadialCoefficient(
        "boundary_dip", (d,),
        fn=lambda r: 1.0 - d / r,
        deriv=lambda r: d / (r * r),
    )


def power_drift(k: float) -> RadialCoefficient:
    """b(r) = k/r; inward drift for k < 0."""
    k = float(k)
    return RadialCoefficient(
        "power_drift", (k,),
        fn=lambda r: k / r,
        deriv=lambda r: -k / (r * r),
    )


_PRESETS = {
    "constant": (constant, 1),
    "rational_decay": (rational_decay, 1),
    "boundary_dip": (boundary_dip, 1),
    "power_drift": (power_drift, 1),
}


def parse_coefficient(text: str) -> RadialCoefficient:
    """Build a preset from a ``name:param[,param]`` string."""
    text = text.strip()
    name, sep, tail = text.partition(":")
    name = name.strip()
    if name not in _PRESETS:
        raise ValueError(
            f"unknown coefficient preset {name!r}; known presets: {sorted(_PRESETS)}"
        )
    maker, arity = _PRESETS[name]
    if not sep or not tail.strip():
        raise ValueError(f"preset {name!r} needs {arity} numeric parameter(s), e.g. '{name}:1.0'")
    try:
        params = [float(p) for p in tail.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad numeric parameter in coefficient {text!r}: {exc}") from None
    if len(params) != arity:
        raise ValueError(f"preset {name!r} takes {arity} parameter(s), got {len(params)}")
    return maker(*params)

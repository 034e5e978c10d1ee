"""Initial-data profiles.

Three families cover the experiments: a centered Gaussian parameterized
like the majorant (width plays the role of the time shift), a compactly
supported smooth bump, and the exact t = 0 trace of a certified
super-solution at a chosen fraction of the largest certifiable amplitude.
All are non-negative, bounded, and vanish at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .supersolution import SuperSolutionParams, gaussian_value


def gaussian(amplitude: float, width: float):
    """phi(r) = amplitude * exp(-r^2 / (4 width))."""
    amplitude = float(amplitude)
    width = float(width)
    if amplitude < 0.0:
        raise ValueError(f"amplitude must be >= 0, got {amplitude}")
    if width <= 0.0:
        raise ValueError(f"width must be > 0, got {width}")
    return lambda r: amplitude * np.exp(-np.asarray(r, dtype=float) ** 2 / (4.0 * width))


def bump(amplitude: float, center: float, width: float):
    """Smooth bump supported on |r - center| < width, peak value = amplitude."""
    amplitude = float(amplitude)
    center = float(center)
    width = float(width)
    if amplitude < 0.0:
        raise ValueError(f"amplitude must be >= 0, got {amplitude}")
    if width <= 0.0:
        raise ValueError(f"width must be > 0, got {width}")

    def phi(r):
        xi = (np.asarray(r, dtype=float) - center) / width
        out = np.zeros_like(xi)
        inside = np.abs(xi) < 1.0
        with np.errstate(divide="ignore", over="ignore"):
            out[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - xi[inside] ** 2))
        return out

    return phi


def supersolution_matched(params: SuperSolutionParams):
    """The t = 0 trace of the majorant itself; admissible by construction."""
    return lambda r: gaussian_value(params, r, 0.0)


@dataclass(frozen=True)
class ProfileSpec:
    """Serializable profile choice: name + numeric parameters.

    gaussian: (amplitude, width); bump: (amplitude, center, width);
    supersolution: (fraction,) of the certifiable amplitude, resolved
    against the operator at experiment-setup time.
    """

    name: str
    params: tuple[float, ...]

    _ARITY = {"gaussian": 2, "bump": 3, "supersolution": 1}

    def __post_init__(self) -> None:
        if self.name not in self._ARITY:
            raise ValueError(
                f"unknown profile {self.name!r}; known profiles: {sorted(self._ARITY)}"
            )
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.params) != self._ARITY[self.name]:
            raise ValueError(
                f"profile {self.name!r} takes {self._ARITY[self.name]} parameter(s), "
                f"got {len(self.params)}"
            )

    def spec_string(self) -> str:
        return f"{self.name}:{','.join(repr(p) for p in self.params)}"

    def with_amplitude(self, amplitude: float) -> "ProfileSpec":
        """Same shape, new leading parameter (amplitude or fraction)."""
        return ProfileSpec(self.name, (float(amplitude),) + self.params[1:])


def parse_profile(text: str) -> ProfileSpec:
    text = text.strip()
    name, sep, tail = text.partition(":")
    if not sep or not tail.strip():
        raise ValueError(f"profile needs parameters, e.g. 'gaussian:0.2,1.0'; got {text!r}")
    try:
        params = tuple(float(p) for p in tail.split(","))
    except ValueError as exc:
        raise ValueError(f"bad numeric parameter in profile {text!r}: {exc}") from None
    return ProfileSpec(name.strip(), params)

"""Radial grids on domains with a hole.

The spatial setting is an unbounded domain whose boundary is a sphere:
either the exterior of a ball in dimension N >= 2, or the two rays
``(-inf, -R) u (R, +inf)`` in one dimension.  Every field handled here is
radial, so a computation lives on a single truncated ray ``[R, R_max]``:
the hole boundary sits at the left end and a homogeneous Dirichlet wall at
the right end stands in for the far field.  Families of nested truncations
(growing ``R_max``) are how the unbounded problem is approached; solutions
on the truncated domains increase monotonically toward the exterior-domain
solution, which is what the harness checks.

Conventions used throughout the package:

* ``r`` is the radial coordinate, ``r >= R > 0``.
* The outward normal on the hole boundary points toward the origin, so
  ``x . nu = -R`` there.  One consequence: a Robin condition
  ``du/dnu + alpha u = 0`` reads ``du/dr = alpha u`` at ``r = R``.
* Grids store the domain they were built for; downstream assembly reads
  the dimension and hole radius from the grid.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

EXTERIOR_BALL = "exterior_ball"
ONE_DIM_TWO_RAY = "one_dim_two_ray"

_KINDS = (EXTERIOR_BALL, ONE_DIM_TWO_RAY)

UNIFORM = "uniform"
GEOMETRIC = "geometric"

#: default mesh ratio when geometric stretching is requested without one
DEFAULT_GEOMETRIC_RATIO = 1.02


@dataclass(frozen=True)
class DomainSpec:
    """Unbounded domain with a spherical hole of radius ``inner_radius``."""

    kind: str
    dimension: int
    inner_radius: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}; expected one of {_KINDS}")
        object.__setattr__(self, "dimension", int(self.dimension))
        object.__setattr__(self, "inner_radius", float(self.inner_radius))
        if not np.isfinite(self.inner_radius) or self.inner_radius <= 0.0:
            raise ValueError(f"inner_radius must be finite and > 0, got {self.inner_radius}")
        if self.kind == EXTERIOR_BALL and self.dimension < 2:
            raise ValueError(
                f"exterior_ball needs dimension >= 2, got {self.dimension}; "
                "use one_dim_two_ray for N=1"
            )
        if self.kind == ONE_DIM_TWO_RAY and self.dimension != 1:
            raise ValueError(f"one_dim_two_ray is one-dimensional, got dimension {self.dimension}")

    @property
    def x_dot_nu(self) -> float:
        """``x . nu`` on the hole boundary (negative: the normal points inward)."""
        return -self.inner_radius


def exterior_ball(dimension: int, inner_radius: float = 1.0) -> DomainSpec:
    return DomainSpec(EXTERIOR_BALL, dimension, inner_radius)


def two_ray(inner_radius: float = 1.0) -> DomainSpec:
    return DomainSpec(ONE_DIM_TWO_RAY, 1, inner_radius)


@dataclass(frozen=True)
class Grid:
    """Strictly increasing radial nodes ``r_0 = R < ... < r_M = R_max``.

    ``M`` counts intervals, so there are ``M + 1`` nodes.  The node array is
    frozen after construction; so is everything derived from it.
    """

    domain: DomainSpec
    nodes: np.ndarray
    stretch: str = UNIFORM
    ratio: float = 1.0

    def __post_init__(self) -> None:
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 1:
            raise ValueError(f"nodes must be one-dimensional, got shape {nodes.shape}")
        if nodes.size < 3:
            raise ValueError(f"need at least 2 intervals (3 nodes), got {nodes.size} nodes")
        if not np.isfinite(nodes).all():
            raise ValueError("grid nodes must be finite")
        if not (np.diff(nodes) > 0.0).all():
            raise ValueError("grid nodes must be strictly increasing")
        if nodes[0] != self.domain.inner_radius:
            raise ValueError(
                f"first node {nodes[0]} must equal the hole radius {self.domain.inner_radius}"
            )
        if self.stretch not in (UNIFORM, GEOMETRIC):
            raise ValueError(f"unknown stretch {self.stretch!r}")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "ratio", float(self.ratio))

    @property
    def num_intervals(self) -> int:
        return self.nodes.size - 1

    @property
    def inner_radius(self) -> float:
        return float(self.nodes[0])

    @property
    def outer_radius(self) -> float:
        return float(self.nodes[-1])

    @property
    def spacings(self) -> np.ndarray:
        return np.diff(self.nodes)


def build_grid(
    spec: DomainSpec,
    r_max: float,
    intervals: int,
    stretch: str = UNIFORM,
    ratio: float | None = None,
) -> Grid:
    """Mesh ``[R, r_max]`` with ``intervals`` cells.

    Uniform stretching spaces nodes evenly.  Geometric stretching grows each
    cell by a fixed ratio (>= 1) moving away from the hole, which buys
    resolution near the boundary layer at ``r = R`` without wasting nodes in
    the far field; the default ratio is 1.02.
    """
    r_max = float(r_max)
    intervals = int(intervals)
    if not np.isfinite(r_max) or r_max <= spec.inner_radius:
        raise ValueError(f"r_max must exceed the hole radius {spec.inner_radius}, got {r_max}")
    if intervals < 2:
        raise ValueError(f"need at least 2 intervals, got {intervals}")

    R = spec.inner_radius
    if stretch == UNIFORM:
        if ratio is not None and ratio != 1.0:
            raise ValueError("ratio only applies to geometric stretching")
        nodes = np.linspace(R, r_max, intervals + 1)
        return Grid(spec, nodes, UNIFORM, 1.0)
    if stretch == GEOMETRIC:
        ratio = DEFAULT_GEOMETRIC_RATIO if ratio is None else float(ratio)
        if ratio < 1.0:
            raise ValueError(f"geometric ratio must be >= 1, got {ratio}")
        if ratio == 1.0:
            nodes = np.linspace(R, r_max, intervals + 1)
        else:
            # first cell width such that the geometric sum spans [R, r_max]
            h0 = (r_max - R) * (ratio - 1.0) / (ratio**intervals - 1.0)
            k = np.arange(intervals + 1, dtype=float)
            nodes = R + h0 * (ratio**k - 1.0) / (ratio - 1.0)
            nodes[0] = R
            nodes[-1] = r_max
        return Grid(spec, nodes, GEOMETRIC, ratio)
    raise ValueError(f"unknown stretch {stretch!r}")


@dataclass(frozen=True)
class TruncationFamily:
    """Nested outer radii ``base * growth**i`` for ``i = 0 .. count-1``."""

    base_radius: float
    growth: float
    count: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "base_radius", float(self.base_radius))
        object.__setattr__(self, "growth", float(self.growth))
        object.__setattr__(self, "count", int(self.count))
        if not np.isfinite(self.base_radius) or self.base_radius <= 0.0:
            raise ValueError(f"base_radius must be finite and > 0, got {self.base_radius}")
        if not self.growth > 1.0:
            raise ValueError(f"growth must exceed 1, got {self.growth}")
        if self.count < 2:
            raise ValueError(f"a truncation family needs >= 2 members, got {self.count}")

    @property
    def outer_radii(self) -> tuple[float, ...]:
        return tuple(self.base_radius * self.growth**i for i in range(self.count))


def truncation_family(spec: DomainSpec, base_radius: float, growth: float, count: int) -> TruncationFamily:
    """Validated family of nested truncations of ``spec``."""
    fam = TruncationFamily(base_radius, growth, count)
    if fam.base_radius <= spec.inner_radius:
        raise ValueError(
            f"smallest outer radius {fam.base_radius} must lie outside the hole "
            f"(radius {spec.inner_radius})"
        )
    return fam


@dataclass(frozen=True)
class Field:
    """Non-negative nodal values on a grid at one instant.

    The outer node belongs to the Dirichlet wall and is expected to be 0;
    constructors that sample initial data enforce that, the time stepper
    re-pins it after every solve.
    """

    values: np.ndarray
    t: float
    grid: Grid = field(repr=False)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        object.__setattr__(self, "t", float(self.t))
        if values.shape != self.grid.nodes.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid with "
                f"{self.grid.nodes.size} nodes"
            )
        if not np.isfinite(values).all():
            raise ValueError("field values must be finite")
        if values.min(initial=0.0) < 0.0:
            raise ValueError(f"field values must be >= 0, min is {values.min()}")
        if not (np.isfinite(self.t) and self.t >= 0.0):
            raise ValueError(f"time stamp must be finite and >= 0, got {self.t}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def sup_norm(self) -> float:
        return float(self.values.max())


def restrict_initial_data(phi, grid: Grid) -> Field:
    """Sample ``phi`` at the grid nodes and pin the outer node to zero.

    ``phi`` may be vectorized over numpy arrays or scalar-only.  Samples must
    come out finite and non-negative; anything else is rejected rather than
    clamped, since silently repaired initial data would poison every
    comparison built on top of it.
    """
    r = grid.nodes
    try:
        values = np.asarray(phi(r), dtype=float)
        if values.shape != r.shape:
            raise TypeError
    except TypeError:
        values = np.array([float(phi(float(ri))) for ri in r])
    if not np.isfinite(values).all():
        raise ValueError("initial data produced non-finite samples")
    if values.min() < 0.0:
        raise ValueError(f"initial data must be >= 0, min sample is {values.min()}")
    values = values.copy()
    values[-1] = 0.0
    return Field(values, 0.0, grid)

"""Manufactured-solution convergence ladders for the linear marcher.

Both ladders run the pure diffusion problem (nonlin=None) with a forcing
term chosen so that a known smooth profile solves the discrete-in-nothing
equation exactly.  Errors are measured in the nodal max norm at the final
time and the observed order is the base-2 log of successive error ratios.
"""

from __future__ import annotations

import math

import numpy as np

from fujitalab.domain import Field, build_grid, exterior_ball
from fujitalab.integrator import step
from fujitalab.operators import OperatorSpec, assemble_diffusion, dirichlet

N = 3
R = 1.0
R_MAX = 2.0


def _laplacian_spec() -> OperatorSpec:
    return OperatorSpec(a=lambda r: np.ones_like(r), b=lambda r: np.zeros_like(r), p=2.0)


def _march_linear(grid, forcing, initial, t_end, dt):
    op = _laplacian_spec()
    disc = assemble_diffusion(grid, op, dirichlet())
    vals = np.maximum(initial(grid.nodes), 0.0)
    vals[0] = 0.0
    vals[-1] = 0.0
    state = Field(vals, 0.0, grid)
    steps = int(round(t_end / dt))
    assert abs(steps * dt - t_end) < 1e-12 * t_end
    for _ in range(steps):
        state = step(state, dt, disc, nonlin=None, theta=1.0, forcing=forcing)
    return state


def test_spatial_order_two():
    # sine profile vanishing at both walls; dt ~ h^2 keeps the time error
    # at the same order as the spatial one
    k = math.pi / (R_MAX - R)
    spec = exterior_ball(N, R)

    def u_ex(r, t):
        return math.exp(-t) * np.sin(k * (r - R))

    def forcing(r, t):
        return (k * k - 1.0) * u_ex(r, t) - (N - 1) / r * k * math.exp(-t) * np.cos(k * (r - R))

    t_end = 0.1
    errors = []
    for m in (20, 40, 80):
        grid = build_grid(spec, R_MAX, m)
        h = (R_MAX - R) / m
        dt = t_end / int(round(t_end / (0.05 * h * h)))
        final = _march_linear(grid, forcing, lambda r: u_ex(r, 0.0), t_end, dt)
        errors.append(float(np.abs(final.values - u_ex(grid.nodes, t_end)).max()))

    rates = [math.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]
    assert min(rates) >= 1.8, f"spatial rates {rates} from errors {errors}"


def test_temporal_order_one():
    # quadratic-in-r profile: the central stencils differentiate it exactly
    # on a uniform grid, so all remaining error is the backward Euler O(dt)
    spec = exterior_ball(N, R)
    grid = build_grid(spec, R_MAX, 64)

    def u_ex(r, t):
        return math.exp(-t) * (r - R) * (R_MAX - r)

    def forcing(r, t):
        g = (r - R) * (R_MAX - r)
        return math.exp(-t) * (-g + 2.0 - (N - 1) / r * (R_MAX + R - 2.0 * r))

    t_end = 0.5
    errors = []
    for steps in (8, 16, 32, 64):
        dt = t_end / steps
        final = _march_linear(grid, forcing, lambda r: u_ex(r, 0.0), t_end, dt)
        errors.append(float(np.abs(final.values - u_ex(grid.nodes, t_end)).max()))

    rates = [math.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]
    assert min(rates) >= 0.9, f"temporal rates {rates} from errors {errors}"
    # first order, not accidentally more: the ratio should hover near 2
    assert max(rates) <= 1.3, f"temporal rates {rates} look superconvergent"

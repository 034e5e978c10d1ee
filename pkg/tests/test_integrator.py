from __future__ import annotations

import numpy as np
import pytest

from fujitalab import (
    BLOWUP,
    GLOBAL,
    UNDETERMINED,
    EstimateError,
    Field,
    OperatorSpec,
    SchemeError,
    SolverConfig,
    TimeSeries,
    adapt_dt,
    assemble_diffusion,
    build_grid,
    constant,
    estimate_blowup_time,
    exterior_ball,
    gaussian,
    ode_blowup_time,
    ode_envelope,
    restrict_initial_data,
    robin,
    run,
)
from fujitalab.integrator import step


def laplacian(p, q=0.0, s=0.0) -> OperatorSpec:
    return OperatorSpec(a=constant(1.0), b=constant(0.0), p=p, q=q, s=s)


# ---------------------------------------------------------------------------
# configuration and step-size control


def test_solver_config_validation():
    SolverConfig()
    with pytest.raises(ValueError):
        SolverConfig(theta=0.7)
    with pytest.raises(ValueError):
        SolverConfig(dt0=0.0)
    with pytest.raises(ValueError):
        SolverConfig(dt_min=1e-3, dt0=1e-6)
    with pytest.raises(ValueError):
        SolverConfig(t_max=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(output_interval=0.0)


def test_adapt_dt_tracks_nonlinear_timescale():
    grid = build_grid(exterior_ball(3), 5.0, 10)
    cfg = SolverConfig(dt0=1e-3, dt_min=1e-12, sigma=0.1)
    values = np.zeros(grid.nodes.size)

    values[0] = 10.0
    small = Field(values.copy(), 0.0, grid)
    assert adapt_dt(small, cfg, 2.0) == pytest.approx(1e-3)  # capped by dt0

    values[0] = 1000.0
    big = Field(values.copy(), 0.0, grid)
    assert adapt_dt(big, cfg, 2.0) == pytest.approx(0.1 / 2000.0)

    values[0] = 1e12
    huge = Field(values.copy(), 0.0, grid)
    assert adapt_dt(huge, cfg, 3.0) == pytest.approx(1e-12)  # floored at dt_min


# ---------------------------------------------------------------------------
# reaction envelope


def test_ode_blowup_time_closed_form():
    assert ode_blowup_time(2.0, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert ode_blowup_time(3.0, 2.0) == pytest.approx(1.0 / (2.0 * 4.0), abs=1e-15)


def test_ode_envelope_values_and_blowup():
    assert ode_envelope(2.0, 1.0, 0.5) == pytest.approx(2.0, abs=1e-12)
    assert ode_envelope(2.0, 1.0, 1.0) == np.inf
    z = ode_envelope(2.0, 1.0, np.array([0.0, 0.5, 2.0]))
    assert z[0] == 1.0 and z[1] == pytest.approx(2.0) and z[2] == np.inf


def test_envelope_rejects_bad_exponent():
    with pytest.raises(ValueError):
        ode_blowup_time(1.0, 1.0)


# ---------------------------------------------------------------------------
# blow-up time estimation


def _envelope_series(p: float, t_star: float, ts) -> TimeSeries:
    rows = [(float(t), float((t_star - t) ** (1.0 / (1.0 - p))), 1e-4, 0.0) for t in ts]
    return TimeSeries.from_rows(rows)


def test_estimate_exact_envelope_recovers_time():
    # log-spaced distances from the blow-up instant put half the samples
    # inside the top norm decade that the fit uses
    ts = 1.0 - np.geomspace(0.1, 0.001, 24)
    series = _envelope_series(2.0, 1.0, ts)
    assert estimate_blowup_time(series, 2.0) == pytest.approx(1.0, abs=1e-6)


def test_estimate_tolerates_small_noise(rng):
    ts = np.linspace(0.9, 0.999, 40)
    clean = (1.0 - ts) ** -1.0
    noisy = clean * (1.0 + 0.01 * rng.uniform(-1.0, 1.0, ts.size))
    order = np.argsort(noisy)  # enforce a strictly increasing tail
    rows = [(float(t), float(v), 1e-4, 0.0) for t, v in zip(np.sort(ts), np.sort(noisy))]
    series = TimeSeries.from_rows(rows)
    assert estimate_blowup_time(series, 2.0) == pytest.approx(1.0, abs=0.02)
    del order


def test_estimate_rejects_flat_tail():
    rows = [(float(t), 5.0, 1e-4, 0.0) for t in np.linspace(0.0, 1.0, 10)]
    with pytest.raises(EstimateError):
        estimate_blowup_time(TimeSeries.from_rows(rows), 2.0)


def test_estimate_needs_enough_tail_samples():
    rows = [(0.0, 1.0, 1e-4, 0.0), (0.5, 2.0, 1e-4, 0.0), (0.9, 10.0, 1e-4, 0.0)]
    with pytest.raises(EstimateError):
        estimate_blowup_time(TimeSeries.from_rows(rows), 2.0)


def test_estimate_never_before_last_sample():
    # a tail whose transform bends upward extrapolates to a root before the
    # last observed time; the estimate must clamp to that last time
    y = np.array([0.01, 0.002, 0.0015, 0.0014])  # LS root at ~2.92 < 3
    rows = [(float(t), float(1.0 / yi), 1e-4, 0.0) for t, yi in zip([0.0, 1.0, 2.0, 3.0], y)]
    series = TimeSeries.from_rows(rows)
    assert estimate_blowup_time(series, 2.0) == 3.0


# ---------------------------------------------------------------------------
# single steps


def test_step_reduces_to_explicit_reaction_without_diffusion():
    # a ~ 0 makes the implicit solve the identity, leaving u + dt u^p
    grid = build_grid(exterior_ball(3), 11.0, 100)
    op = OperatorSpec(a=constant(1e-12), b=constant(0.0), p=2.0)
    disc = assemble_diffusion(grid, op, robin(1.0))
    values = np.ones(grid.nodes.size)
    values[-1] = 0.0
    out = step(Field(values, 0.0, grid), 0.01, disc, op)
    assert np.abs(out.values[:-1] - 1.01).max() < 1e-11
    assert out.values[-1] == 0.0
    assert out.t == 0.01


def test_step_pure_diffusion_contracts_sup_norm():
    grid = build_grid(exterior_ball(3), 10.0, 100)
    disc = assemble_diffusion(grid, laplacian(2.0), robin(1.0))
    phi = restrict_initial_data(gaussian(1.0, 1.0), grid)
    out = step(phi, 0.01, disc, None)
    assert out.sup_norm < phi.sup_norm
    assert out.values.min() >= 0.0


def test_step_positivity_contract_violation_raises():
    grid = build_grid(exterior_ball(3), 10.0, 50)
    disc = assemble_diffusion(grid, laplacian(2.0), robin(1.0))
    values = np.ones(grid.nodes.size)
    values[-1] = 0.0
    sink = lambda r, t: np.full(r.shape, -1000.0)
    with pytest.raises(SchemeError):
        step(Field(values, 0.0, grid), 0.5, disc, None, forcing=sink)


def test_step_rejects_bad_dt():
    grid = build_grid(exterior_ball(3), 10.0, 50)
    disc = assemble_diffusion(grid, laplacian(2.0), robin(1.0))
    phi = restrict_initial_data(gaussian(1.0, 1.0), grid)
    with pytest.raises(ValueError):
        step(phi, 0.0, disc, None)


# ---------------------------------------------------------------------------
# time series


def test_series_csv_lines_use_repr_floats():
    series = TimeSeries.from_rows([(0.0, 1.0, 0.0, 0.5), (0.25, 2.0, 0.001, 0.125)])
    lines = series.csv_lines()
    assert lines[0] == "t,sup_norm,dt,boundary_value"
    assert lines[1] == "0.0,1.0,0.0,0.5"
    assert lines[2] == "0.25,2.0,0.001,0.125"


# ---------------------------------------------------------------------------
# full runs


def test_run_global_decay():
    grid = build_grid(exterior_ball(3), 10.0, 100)
    phi = restrict_initial_data(gaussian(0.2, 1.0), grid)
    out = run(phi, laplacian(2.0), robin(1.0), SolverConfig(t_max=2.0, output_interval=0.5))
    assert out.kind == GLOBAL
    assert out.t_final == 2.0
    assert out.sup_final < 0.2
    assert out.t_blowup is None


def test_run_records_exact_checkpoints():
    grid = build_grid(exterior_ball(3), 10.0, 100)
    phi = restrict_initial_data(gaussian(0.2, 1.0), grid)
    cfg = SolverConfig(t_max=1.0, output_interval=0.25, dt0=0.03)
    out = run(phi, laplacian(2.0), robin(1.0), cfg, record_fields=True)
    times = [s.t for s in out.snapshots]
    assert times == [0.0, 0.25, 0.5, 0.75, 1.0]
    # checkpoint rows appear in the series at the same exact times
    for t in times:
        assert t in out.series.t


def test_run_blowup_detection_and_envelope():
    grid = build_grid(exterior_ball(2), 20.0, 200)
    phi = restrict_initial_data(gaussian(1.0, 4.0), grid)
    cfg = SolverConfig(t_max=20.0, output_interval=0.5)
    out = run(phi, laplacian(1.5), robin(1.0), cfg)
    assert out.kind == BLOWUP
    assert out.t_blowup is not None
    assert out.t_blowup >= out.series.t[-1]
    assert out.sup_final >= cfg.m_blow

    # discrete sup stays below the reaction envelope up to its blow-up time
    s_star = ode_blowup_time(1.5, phi.sup_norm)
    mask = out.series.t < s_star
    env = ode_envelope(1.5, phi.sup_norm, out.series.t[mask])
    assert np.all(out.series.sup_norm[mask] <= env * (1.0 + 1e-12))


def test_run_stiff_reaction_still_classified():
    # p = 3.2 collapses dt to the floor long before the sup ceiling
    grid = build_grid(exterior_ball(2), 20.0, 200)
    phi = restrict_initial_data(gaussian(1.0, 4.0), grid)
    cfg = SolverConfig(t_max=40.0, output_interval=1.0, dt0=1e-2)
    out = run(phi, laplacian(3.2), robin(1.0), cfg)
    assert out.kind == BLOWUP
    assert out.t_blowup is not None


def test_run_requires_fresh_initial_field():
    grid = build_grid(exterior_ball(3), 10.0, 50)
    values = np.zeros(grid.nodes.size)
    with pytest.raises(ValueError):
        run(Field(values, 1.0, grid), laplacian(2.0), robin(1.0), SolverConfig(t_max=2.0))
    values2 = np.ones(grid.nodes.size)
    with pytest.raises(ValueError):
        run(Field(values2, 0.0, grid), laplacian(2.0), robin(1.0), SolverConfig(t_max=2.0))


def test_run_zero_data_stays_zero():
    grid = build_grid(exterior_ball(3), 10.0, 50)
    phi = Field(np.zeros(grid.nodes.size), 0.0, grid)
    out = run(phi, laplacian(2.0), robin(1.0), SolverConfig(t_max=1.0, output_interval=0.5))
    assert out.kind == GLOBAL
    assert out.sup_final == 0.0


def test_run_time_dependent_alpha_reassembles():
    grid = build_grid(exterior_ball(3), 10.0, 100)
    phi = restrict_initial_data(gaussian(0.2, 1.0), grid)
    bc = robin(lambda t: 1.0 + 0.5 * t, c_lower=1.0)
    out = run(phi, laplacian(2.0), bc, SolverConfig(t_max=1.0, output_interval=0.25))
    assert out.kind == GLOBAL
    assert np.all(np.isfinite(out.series.boundary_value))


def test_run_crank_nicolson_variant():
    grid = build_grid(exterior_ball(3), 10.0, 100)
    phi = restrict_initial_data(gaussian(0.2, 1.0), grid)
    cfg = SolverConfig(t_max=1.0, output_interval=0.25, theta=0.5, dt0=1e-3)
    out = run(phi, laplacian(2.0), robin(1.0), cfg)
    assert out.kind in (GLOBAL, UNDETERMINED)
    assert out.kind == GLOBAL

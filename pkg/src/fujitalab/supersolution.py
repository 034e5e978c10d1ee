"""Closed-form Gaussian super-solutions and their certificates.

The candidate majorant is

    U(r, t) = A (t + t0)^(-mu) exp(-r^2 / (4 (t + t0)))

with decay rate ``mu = (2 + 2q + s) / (2p - 2)``.  Everything needed to
check that U dominates the nonlinear flow is available in closed form:

    dU/dt           = (-mu/tau + r^2/(4 tau^2)) U
    L U             = (a r^2/(4 tau^2) - (N a + l*)/(2 tau)) U
    dU/dnu at r = R = (R/(2 tau)) U                      (tau = t + t0)

so the normalized interior residual (dU/dt - LU - t^q r^s U^p) / U never
requires a division by U: it is

    (1 - a) r^2/(4 tau^2) + (N a + l* - 2 mu)/(2 tau) - t^q r^s U^(p-1),

bounded below by ((gamma0 - mu) - A^(p-1) C_s)/tau with the tail constant
``C_s = (2s/(p-1))^(s/2) e^(-s/2)``.  That bound is what picks the largest
certifiable amplitude ``A_max = ((gamma0 - mu)/C_s)^(1/(p-1))``.  A
certificate here is *verified numerically anyway* on a dense sample box:
the closed form supplies the candidate, the sweep supplies the evidence.

Because the hole boundary has x . nu = -R < 0, the boundary inequality
``dU/dnu + alpha U >= 0`` holds for every alpha >= 0 and every t0 > 0; the
general coercive-boundary branch (t0 large enough against sup x . nu) is
implemented for completeness but only synthetic geometries exercise it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .domain import DomainSpec, Field, Grid
from .operators import (
    DIRICHLET,
    BoundaryCondition,
    HypothesisError,
    OperatorSpec,
    a_values,
    gamma0,
    l_and_lstar,
    _rational,
)

logger = logging.getLogger(__name__)

#: default residual tolerance for closed-form certificates
CERT_TOL = 1e-10

_DEFAULT_NR = 400
_DEFAULT_NT = 200


def mu(p, q=0, s=0):
    """Decay rate (2 + 2q + s) / (2p - 2); exact for rational inputs."""
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    if min(q, s) < 0:
        raise ValueError(f"need q >= 0 and s >= 0, got q={q}, s={s}")
    if _rational(p) and _rational(q) and _rational(s):
        return (2 + 2 * Fraction(q) + Fraction(s)) / (2 * Fraction(p) - 2)
    return (2.0 + 2.0 * float(q) + float(s)) / (2.0 * float(p) - 2.0)


@dataclass(frozen=True)
class SuperSolutionParams:
    """Amplitude, time shift, and decay rate of one Gaussian majorant.

    p, q, s are optional so that pure heat-kernel probes (mu = N/2, no
    source) can be expressed; when present they must be consistent with mu,
    i.e. mu (p-1) = 1 + q + s/2 up to roundoff.
    """

    amplitude: float
    t0: float
    mu: float
    p: float | None = None
    q: float = 0.0
    s: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitude", float(self.amplitude))
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "mu", float(self.mu))
        if not (np.isfinite(self.amplitude) and self.amplitude > 0.0):
            raise ValueError(f"amplitude must be finite and > 0, got {self.amplitude}")
        if not (np.isfinite(self.t0) and self.t0 > 0.0):
            raise ValueError(f"t0 must be finite and > 0, got {self.t0}")
        if not self.mu > 0.0:
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if self.p is not None:
            object.__setattr__(self, "p", float(self.p))
            target = 1.0 + self.q + self.s / 2.0
            got = self.mu * (self.p - 1.0)
            if abs(got - target) > 1e-12 * max(1.0, target):
                raise ValueError(
                    f"inconsistent parameters: mu (p-1) = {got:g} but 1 + q + s/2 = {target:g}"
                )


def gaussian_value(params: SuperSolutionParams, r, t):
    """U(r, t) itself; shared by the certificates and the matched profile."""
    tau = np.asarray(t, dtype=float) + params.t0
    rr = np.asarray(r, dtype=float)
    return params.amplitude * tau ** (-params.mu) * np.exp(-(rr * rr) / (4.0 * tau))


def select_t0(spec: DomainSpec, bc: BoundaryCondition | None = None, sup_xnu: float | None = None) -> float:
    """Time shift making the boundary inequality hold.

    Both supported geometries have x . nu = -R < 0 on the hole boundary, so
    every t0 > 0 works and 1.0 is returned.  The general branch (boundary
    patches where x . nu > 0) needs a strictly positive alpha floor and
    returns max(1, sup_xnu / (2 c_lower)); it exists for synthetic inputs
    only, there is no supported geometry that reaches it.
    """
    if sup_xnu is None:
        sup_xnu = spec.x_dot_nu
    if sup_xnu <= 0.0:
        return 1.0
    if bc is None or not bc.c_lower > 0.0:
        raise HypothesisError(
            f"boundary has sup x . nu = {sup_xnu:g} > 0; a strictly positive alpha floor "
            "is required to certify the boundary inequality"
        )
    return max(1.0, sup_xnu / (2.0 * bc.c_lower))


def source_tail_constant(p: float, s: float) -> float:
    """C_s = (2s/(p-1))^(s/2) e^(-s/2): sharp bound for r^s exp(-(p-1) r^2 / (4 tau)) / tau^(s/2)."""
    if not p > 1.0:
        raise ValueError(f"p must exceed 1, got {p}")
    if s < 0.0:
        raise ValueError(f"s must be >= 0, got {s}")
    if s == 0.0:
        return 1.0
    return (2.0 * s / (p - 1.0)) ** (s / 2.0) * math.exp(-s / 2.0)


def amplitude_bound(gamma0_value: float, mu_value: float, p: float, s: float = 0.0) -> float:
    """Largest certifiable amplitude ((gamma0 - mu) / C_s)^(1/(p-1))."""
    g0 = float(gamma0_value)
    muv = float(mu_value)
    if g0 <= muv:
        raise HypothesisError(
            f"no certifiable amplitude: gamma0 = {g0:g} must exceed mu = {muv:g}"
        )
    cs = source_tail_constant(p, s)
    return ((g0 - muv) / cs) ** (1.0 / (p - 1.0))


def select_params(
    op: OperatorSpec,
    spec: DomainSpec,
    grid: Grid,
    fraction: float,
    bc: BoundaryCondition | None = None,
    t0: float | None = None,
) -> SuperSolutionParams:
    """Build params at a fraction (in (0, 1]) of the certifiable amplitude."""
    fraction = float(fraction)
    if not (0.0 < fraction <= 1.0):
        raise ValueError(f"fraction must lie in (0, 1], got {fraction}")
    muv = float(mu(op.p, op.q, op.s))
    g0 = gamma0(op, spec, grid)
    a_max = amplitude_bound(g0, muv, op.p, op.s)
    shift = select_t0(spec, bc) if t0 is None else float(t0)
    return SuperSolutionParams(fraction * a_max, shift, muv, op.p, op.q, op.s)


@dataclass(frozen=True)
class Certificate:
    """Outcome of one residual sweep; pass means min residual >= -tolerance."""

    kind: str
    min_residual: float
    n_space: int
    n_time: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.min_residual >= -self.tolerance

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "min_residual": self.min_residual,
            "n_space": self.n_space,
            "n_time": self.n_time,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _time_samples(t0: float, t_probe: float, nt: int) -> np.ndarray:
    # geometric in tau = t + t0 so early times are resolved; endpoints exact
    tau = np.geomspace(t0, t0 + t_probe, nt)
    t = tau - t0
    t[0] = 0.0
    t[-1] = t_probe
    return t


def evaluate(params: SuperSolutionParams, op: OperatorSpec, spec: DomainSpec, r, t):
    """Closed forms (U, dU/dt, LU, dU/dnu) at radii r and time t.

    r may be an array (r >= 0; the r = 0 limit is finite), t a scalar or an
    array broadcastable against r.  dU/dnu is the derivative along the
    hole-pointing normal, (r / (2 tau)) U; it equals the boundary normal
    derivative when evaluated at r = R.
    """
    rr = np.asarray(r, dtype=float)
    tau = np.asarray(t, dtype=float) + params.t0
    U = params.amplitude * tau ** (-params.mu) * np.exp(-(rr * rr) / (4.0 * tau))
    r2_4tau2 = rr * rr / (4.0 * tau * tau)
    dU_dt = (-params.mu / tau + r2_4tau2) * U
    a = a_values(op, rr)
    _, lstar = l_and_lstar(op, rr)
    LU = (a * r2_4tau2 - (spec.dimension * a + lstar) / (2.0 * tau)) * U
    dU_dnu = (rr / (2.0 * tau)) * U
    return U, dU_dt, LU, dU_dnu


def verify_interior(
    params: SuperSolutionParams,
    op: OperatorSpec,
    spec: DomainSpec,
    r_probe: float | None = None,
    t_probe: float | None = None,
    n_space: int = _DEFAULT_NR,
    n_time: int = _DEFAULT_NT,
    tolerance: float = CERT_TOL,
    include_source: bool = True,
) -> Certificate:
    """Sweep the normalized interior residual over [R, r_probe] x [0, t_probe].

    Samples are geometric along both axes (in tau for time); defaults cover
    ten hole radii and ten time shifts with 400 x 200 points.  The residual
    is evaluated without ever dividing by U:

        (1 - a) r^2/(4 tau^2) + (N a + l* - 2 mu)/(2 tau) - t^q r^s U^(p-1)

    include_source=False drops the last term; with a = 1, b = 0 and
    mu = N/2 the remainder cancels identically, which is the heat-kernel
    exactness check.
    """
    if include_source and params.p is None:
        raise ValueError("params carry no (p, q, s); build them via select_params "
                         "or pass include_source=False")
    R = spec.inner_radius
    r_hi = 10.0 * R if r_probe is None else float(r_probe)
    t_hi = 10.0 * params.t0 if t_probe is None else float(t_probe)
    if r_hi <= R:
        raise ValueError(f"r_probe must exceed the hole radius {R}, got {r_hi}")

    r = np.geomspace(R, r_hi, n_space)
    t = _time_samples(params.t0, t_hi, n_time)
    tau = (t + params.t0)[:, None]  # (nt, 1) against (nr,)

    a = a_values(op, r)
    _, lstar = l_and_lstar(op, r)
    coercive = spec.dimension * a + lstar

    residual = (1.0 - a) * r * r / (4.0 * tau * tau) + (coercive - 2.0 * params.mu) / (2.0 * tau)
    if include_source:
        U = params.amplitude * tau ** (-params.mu) * np.exp(-(r * r) / (4.0 * tau))
        source = U ** (params.p - 1.0)
        if params.s != 0.0:
            source = source * r ** params.s
        if params.q != 0.0:
            source = source * t[:, None] ** params.q
        residual = residual - source

    return Certificate("interior", float(residual.min()), n_space, n_time, tolerance)


def verify_boundary(
    params: SuperSolutionParams,
    bc: BoundaryCondition,
    spec: DomainSpec,
    t_probe: float | None = None,
    n_time: int = _DEFAULT_NT,
    tolerance: float = CERT_TOL,
) -> Certificate:
    """Sweep the boundary residual R/(2 tau) + alpha(t) over [0, t_probe].

    Positive for every alpha >= 0 on these geometries; the sweep documents
    the margin rather than re-proving the sign.  Dirichlet is rejected: the
    comparison there is 0 <= U, no alpha-form residual exists.
    """
    if bc.kind == DIRICHLET:
        raise ValueError("boundary certificate applies to robin/neumann conditions")
    R = spec.inner_radius
    t_hi = 10.0 * params.t0 if t_probe is None else float(t_probe)
    t = _time_samples(params.t0, t_hi, n_time)
    alpha = np.array([bc.alpha_at(float(ti)) for ti in t])
    residual = R / (2.0 * (t + params.t0)) + alpha
    return Certificate("boundary", float(residual.min()), 1, n_time, tolerance)


def admissible_initial_data(phi: Field, params: SuperSolutionParams) -> bool:
    """True when phi <= U(., 0) at every node (equality allowed)."""
    return bool((phi.values <= gaussian_value(params, phi.grid.nodes, 0.0)).all())


def initial_data_certificate(phi: Field, params: SuperSolutionParams) -> Certificate:
    """Nodewise margin min(U(., 0) - phi); passes when no node overshoots."""
    margin = gaussian_value(params, phi.grid.nodes, 0.0) - phi.values
    return Certificate("initial_data", float(margin.min()), phi.values.size, 1, 0.0)

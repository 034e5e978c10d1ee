"""Radial operators: divergence-form diffusion, drift, and theory thresholds.

The operator acting on radial functions is

    L u = a(r) u'' + (a'(r) + (N-1) a(r)/r + b(r)) u'

which is the radial reduction of ``div(A grad u) + B . grad u`` with an
isotropic matrix ``A = a(r) I`` and a radial drift ``B = b(r) x/r``.  The
normalization used throughout: ``a`` stays in ``(0, 1]``.

Two scalar combinations of the coefficients steer the whole theory:

    l(r)  = r (a'(r) - b(r))        -- drift seen by the blow-up estimates
    l*(r) = r (a'(r) + b(r))        -- drift seen by the decay estimates

and the coercivity constant ``gamma0 = inf (N a + l*) / 2`` controls how
fast the closed-form super-solutions decay.  Exponent thresholds follow:
all positive solutions of ``u_t = L u + t^q r^s u^p`` blow up for
``1 < p < 1 + (2 + 2q + s)/N`` (N >= 2), while global solutions from small
data exist for ``p > 1 + (2 + 2q + s)/(2 gamma0)``.  For the plain heat
operator both bounds collapse to the classical ``1 + 2/N``.

Threshold helpers return exact ``fractions.Fraction`` values when their
inputs are rational, so identity checks between thresholds need no
tolerances.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .domain import EXTERIOR_BALL, ONE_DIM_TWO_RAY, DomainSpec, Grid

logger = logging.getLogger(__name__)

GUARANTEED_BLOWUP = "GuaranteedBlowUp"
GLOBAL_POSSIBLE = "GlobalExistencePossible"
OUTSIDE_THEORY = "OutsideTheory"

ROBIN = "robin"
NEUMANN = "neumann"
DIRICHLET = "dirichlet"

#: relative change of alpha(t) that forces re-assembly of the inner row
ALPHA_RTOL = 1e-12

_FD_STEP = 1e-6  # relative step for fallback coefficient derivatives


class HypothesisError(ValueError):
    """A structural hypothesis of the theory fails for these coefficients."""


@dataclass(frozen=True)
class BoundaryCondition:
    """Inner-boundary condition at the hole ``r = R``.

    Robin means ``du/dnu + alpha(t) u = 0`` with the outward normal pointing
    into the hole, i.e. ``du/dr = alpha(t) u`` at ``r = R``.  Neumann is the
    same thing with ``alpha = 0``; Dirichlet pins the node to zero (the
    ``alpha -> inf`` limit).  ``c_lower`` is a caller-supplied lower bound
    for ``inf_t alpha(t)``, used by the coercive-boundary diagnostics.
    """

    kind: str
    alpha: object = None  # callable t -> alpha, None for dirichlet
    c_lower: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in (ROBIN, NEUMANN, DIRICHLET):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == DIRICHLET:
            if self.alpha is not None:
                raise ValueError("dirichlet takes no alpha")
            object.__setattr__(self, "c_lower", math.inf)
        else:
            if not callable(self.alpha):
                raise ValueError("alpha must be callable; use robin()/neumann() factories")
            object.__setattr__(self, "c_lower", float(self.c_lower))
            if self.c_lower < 0.0:
                raise ValueError(f"c_lower must be >= 0, got {self.c_lower}")

    def alpha_at(self, t: float) -> float:
        if self.kind == DIRICHLET:
            raise ValueError("dirichlet boundary has no finite alpha")
        a = float(self.alpha(t))
        if not np.isfinite(a):
            raise ValueError(f"alpha({t}) is not finite")
        return a


def robin(alpha, c_lower: float | None = None) -> BoundaryCondition:
    """Robin condition; ``alpha`` is a constant or a function of time."""
    if callable(alpha):
        return BoundaryCondition(ROBIN, alpha, 0.0 if c_lower is None else c_lower)
    value = float(alpha)
    if value < 0.0:
        raise ValueError(f"alpha must be >= 0, got {value}")
    return BoundaryCondition(ROBIN, lambda t, _v=value: _v, value if c_lower is None else c_lower)


def neumann() -> BoundaryCondition:
    return BoundaryCondition(NEUMANN, lambda t: 0.0, 0.0)


def dirichlet() -> BoundaryCondition:
    return BoundaryCondition(DIRICHLET, None)


@dataclass(frozen=True)
class OperatorSpec:
    """Coefficients and nonlinearity exponents of ``u_t = L u + t^q r^s u^p``.

    ``a`` and ``b`` must accept numpy arrays.  Analytic derivative handles
    are picked up automatically from coefficient presets; otherwise a central
    difference with step ``1e-6 * max(1, r)`` fills in.
    """

    a: object
    b: object
    p: float
    q: float = 0.0
    s: float = 0.0
    a_prime: object = field(default=None, repr=False)
    b_prime: object = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if not callable(self.a) or not callable(self.b):
            raise ValueError("coefficients a and b must be callable")
        # Fraction exponents stay exact so critical equalities can be
        # decided without rounding; everything else is coerced to float
        for name in ("p", "q", "s"):
            v = getattr(self, name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, name, float(v))
        if not self.p > 1:
            raise ValueError(f"exponent p must exceed 1, got {self.p}")
        if self.q < 0 or self.s < 0:
            raise ValueError(f"weights need q >= 0 and s >= 0, got q={self.q}, s={self.s}")


def _sample(fn, r: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(fn(r), dtype=float)
        if out.shape != r.shape:
            raise TypeError
        return out
    except TypeError:
        return np.array([float(fn(float(ri))) for ri in r])


def _sample_derivative(fn, handle, r: np.ndarray) -> np.ndarray:
    if handle is not None:
        return _sample(handle, r)
    if hasattr(fn, "derivative"):
        return _sample(fn.derivative, r)
    h = _FD_STEP * np.maximum(1.0, np.abs(r))
    return (_sample(fn, r + h) - _sample(fn, r - h)) / (2.0 * h)


def a_values(op: OperatorSpec, r) -> np.ndarray:
    return _sample(op.a, np.asarray(r, dtype=float))


def a_prime_values(op: OperatorSpec, r) -> np.ndarray:
    return _sample_derivative(op.a, op.a_prime, np.asarray(r, dtype=float))


def b_values(op: OperatorSpec, r) -> np.ndarray:
    return _sample(op.b, np.asarray(r, dtype=float))


def b_prime_values(op: OperatorSpec, r) -> np.ndarray:
    return _sample_derivative(op.b, op.b_prime, np.asarray(r, dtype=float))


def rho(op: OperatorSpec, r) -> np.ndarray:
    """Diffusion strength ``a(r)``, validated against the (0, 1] normalization."""
    vals = a_values(op, r)
    lo, hi = float(vals.min()), float(vals.max())
    if lo <= 0.0:
        raise HypothesisError(f"diffusion coefficient must be > 0, min sampled value {lo}")
    if hi > 1.0:
        raise HypothesisError(f"diffusion coefficient must be <= 1, max sampled value {hi}")
    return vals


def l_and_lstar(op: OperatorSpec, r) -> tuple[np.ndarray, np.ndarray]:
    """The drift functionals ``l = r(a' - b)`` and ``l* = r(a' + b)``."""
    rr = np.asarray(r, dtype=float)
    ap = _sample_derivative(op.a, op.a_prime, rr)
    b = _sample(op.b, rr)
    return rr * (ap - b), rr * (ap + b)


def div_b(op: OperatorSpec, spec: DomainSpec, r) -> np.ndarray:
    """Divergence of the drift field ``b(r) x / r``: ``b' + (N-1) b / r``."""
    rr = np.asarray(r, dtype=float)
    bp = _sample_derivative(op.b, op.b_prime, rr)
    if spec.dimension == 1:
        return bp
    return bp + (spec.dimension - 1) * _sample(op.b, rr) / rr


def _coercivity_scan(op: OperatorSpec, spec: DomainSpec, grid: Grid):
    """min over nodes of N a + l*, with the minimizing node's neighborhood."""
    r = grid.nodes
    _, lstar = l_and_lstar(op, r)
    vals = spec.dimension * a_values(op, r) + lstar
    i = int(np.argmin(vals))
    lo, hi = max(0, i - 1), min(r.size, i + 2)
    neighborhood = tuple((float(r[j]), float(vals[j])) for j in range(lo, hi))
    return float(vals[i]), float(r[i]), neighborhood


def gamma0(op: OperatorSpec, spec: DomainSpec, grid: Grid) -> float:
    """Coercivity constant: half the grid minimum of ``N a + l*``.

    Raises HypothesisError when that minimum is not positive, because every
    decay estimate downstream divides by it.  The error message carries the
    minimizing radius and its neighbors so a near-miss is distinguishable
    from a structural failure.
    """
    vmin, r_at, around = _coercivity_scan(op, spec, grid)
    g = 0.5 * vmin
    if g <= 0.0:
        detail = ", ".join(f"({rj:g}, {vj:g})" for rj, vj in around)
        raise HypothesisError(
            f"gamma0 = {g:g} <= 0: N a + l* attains {vmin:g} at r = {r_at:g} "
            f"(neighborhood: {detail})"
        )
    return g


def gamma0_report(op: OperatorSpec, spec: DomainSpec, grid: Grid) -> dict:
    """Like gamma0 but never raises; returns value + minimizer neighborhood."""
    vmin, r_at, around = _coercivity_scan(op, spec, grid)
    return {
        "gamma0": 0.5 * vmin,
        "r_at_min": r_at,
        "neighborhood": around,
        "positive": 0.5 * vmin > 0.0,
    }


# ---------------------------------------------------------------------------
# exponent thresholds (exact arithmetic when inputs are rational)

def _rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _as_int_dimension(dimension) -> int:
    d = int(dimension)
    if d != dimension:
        raise ValueError(f"dimension must be an integer, got {dimension}")
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return d


def fujita_exponent(dimension) -> Fraction:
    """Classical cutoff ``1 + 2/N`` as an exact fraction."""
    d = _as_int_dimension(dimension)
    return 1 + Fraction(2, d)


def blowup_threshold(dimension, q=0, s=0):
    """Upper exponent bound ``1 + (2 + 2q + s)/N`` for guaranteed blow-up, N >= 2.

    Exact Fraction for rational q, s; float otherwise.  Dimension one is
    rejected on purpose: the one-dimensional statement is not a bare
    threshold, use one_dim_blowup_condition.
    """
    d = _as_int_dimension(dimension)
    if d < 2:
        raise ValueError(
            "blowup_threshold applies to N >= 2; for N = 1 use one_dim_blowup_condition"
        )
    if min(q, s) < 0:
        raise ValueError(f"need q >= 0 and s >= 0, got q={q}, s={s}")
    if _rational(q) and _rational(s):
        return 1 + Fraction(2 + 2 * Fraction(q) + Fraction(s), d)
    return 1.0 + (2.0 + 2.0 * float(q) + float(s)) / d


def global_threshold(gamma0_value, q=0, s=0):
    """Lower exponent bound ``1 + (2 + 2q + s)/(2 gamma0)`` for global existence."""
    if gamma0_value <= 0:
        raise HypothesisError(f"global_threshold needs gamma0 > 0, got {gamma0_value}")
    if min(q, s) < 0:
        raise ValueError(f"need q >= 0 and s >= 0, got q={q}, s={s}")
    if _rational(gamma0_value) and _rational(q) and _rational(s):
        return 1 + (2 + 2 * Fraction(q) + Fraction(s)) / (2 * Fraction(gamma0_value))
    return 1.0 + (2.0 + 2.0 * float(q) + float(s)) / (2.0 * float(gamma0_value))


def is_pure_laplacian(op: OperatorSpec, grid: Grid, tol: float = 1e-14) -> bool:
    r = grid.nodes
    return (
        float(np.abs(a_values(op, r) - 1.0).max()) <= tol
        and float(np.abs(b_values(op, r)).max()) <= tol
    )


@dataclass(frozen=True)
class Clause:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class OneDimRule:
    satisfied: bool
    clauses: tuple[Clause, ...]

    def failing(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.clauses if not c.passed)

    def to_dict(self) -> dict:
        return {"satisfied": self.satisfied, "clauses": [c.to_dict() for c in self.clauses]}


def one_dim_blowup_condition(op: OperatorSpec, grid: Grid) -> OneDimRule:
    """Sufficient blow-up condition on the two-ray line.

    Three clauses, all required: ``p < 3 + 2q + s``; the drift-coercivity
    minimum ``((2+2q+s)/(p-1) - 2) a + l > 0`` strictly on the grid;
    ``div b <= 0`` on the grid.  The report names whichever clause fails.
    """
    if grid.domain.kind != ONE_DIM_TWO_RAY:
        raise ValueError("one_dim_blowup_condition applies to one_dim_two_ray domains")
    p, q, s = op.p, op.q, op.s
    r = grid.nodes
    kappa = 2.0 + 2.0 * q + s

    range_ok = p < 3.0 + 2.0 * q + s
    range_clause = Clause(
        "exponent_range", range_ok, f"p = {float(p):g} vs upper bound {3.0 + 2.0 * float(q) + float(s):g}"
    )

    l, _ = l_and_lstar(op, r)
    coer = (kappa / (p - 1.0) - 2.0) * a_values(op, r) + l
    cmin = float(coer.min())
    coercivity_clause = Clause(
        "drift_coercivity", cmin > 0.0,
        f"min of ((2+2q+s)/(p-1) - 2) a + l over the grid = {cmin:g} (needs > 0)",
    )

    dmax = float(div_b(op, grid.domain, r).max())
    divergence_clause = Clause(
        "divergence_sign", dmax <= 0.0, f"max div b over the grid = {dmax:g} (needs <= 0)"
    )

    clauses = (range_clause, coercivity_clause, divergence_clause)
    return OneDimRule(all(c.passed for c in clauses), clauses)


@dataclass(frozen=True)
class HypothesisReport:
    """Where a configuration sits relative to the proven regimes."""

    classification: str
    clauses: tuple[Clause, ...]
    gamma0: float | None
    thresholds: dict

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "clauses": [c.to_dict() for c in self.clauses],
            "gamma0": self.gamma0,
            "thresholds": dict(self.thresholds),
        }


def _exact(x) -> Fraction:
    # floats convert exactly (binary expansion), so comparisons are sharp
    return x if isinstance(x, Fraction) else Fraction(x)


def hypothesis_report(
    op: OperatorSpec,
    spec: DomainSpec,
    grid: Grid,
    bc: BoundaryCondition,
    t_probe: float = 10.0,
    n_alpha_samples: int = 64,
) -> HypothesisReport:
    """Classify (operator, domain, boundary, exponents) against the theory.

    GuaranteedBlowUp when the sufficient blow-up conditions all verify on the
    grid; GlobalExistencePossible when the decay-side conditions hold and p
    clears the global threshold; OutsideTheory otherwise.  Every clause that
    was checked is reported with the number that decided it, so a failing
    configuration names its own obstruction.

    The critical equality ``p = 1 + 2/N`` counts as blow-up only for the
    plain heat operator with q = s = 0 in dimension >= 3; the comparison is
    exact (Fraction), not tolerance-based.
    """
    p, q, s = op.p, op.q, op.s
    N = spec.dimension
    r = grid.nodes
    clauses: list[Clause] = []

    # (H0) alpha >= 0, sampled over [0, t_probe]
    if bc.kind == DIRICHLET:
        alpha_ok = True
        alpha_detail = "dirichlet boundary (absorbing limit)"
    else:
        ts = np.linspace(0.0, t_probe, n_alpha_samples)
        avals = np.array([bc.alpha_at(float(t)) for t in ts])
        alpha_ok = bool((avals >= 0.0).all())
        alpha_detail = f"min alpha over [0, {t_probe:g}] = {avals.min():g}"
    clauses.append(Clause("alpha_nonnegative", alpha_ok, alpha_detail))

    a = a_values(op, r)
    norm_ok = bool(a.min() > 0.0 and a.max() <= 1.0)
    clauses.append(
        Clause("normalization", norm_ok, f"a(r) in [{a.min():g}, {a.max():g}], needs (0, 1]")
    )

    fuj = fujita_exponent(N)
    thresholds: dict = {"fujita": float(fuj)}

    # --- blow-up side -------------------------------------------------
    if N >= 2:
        dmax = float(div_b(op, spec, r).max())
        div_ok = dmax <= 0.0
        clauses.append(
            Clause("divergence_sign", div_ok, f"max div b = {dmax:g} (needs <= 0)")
        )

        l, _ = l_and_lstar(op, r)
        balance = (N * a + l) / 2.0 - a
        bal_min = float(balance.min())
        bal_ok = bal_min >= 0.0
        clauses.append(
            Clause(
                "diffusion_drift_balance", bal_ok,
                f"min of (N a + l)/2 - a = {bal_min:g} (needs >= 0)",
            )
        )

        # floats are exact binary rationals, so the threshold and the
        # comparison below are exact for the given q, s
        bu_threshold = blowup_threshold(N, _exact(q), _exact(s))
        thresholds["blowup"] = float(bu_threshold)
        p_exact = _exact(p)
        subcritical = p_exact < _exact(bu_threshold)
        critical_case = (
            p_exact == _exact(fuj)
            and N >= 3
            and q == 0.0
            and s == 0.0
            and is_pure_laplacian(op, grid)
        )
        range_ok = subcritical or critical_case
        range_detail = f"p = {float(p):g} vs blow-up threshold {float(bu_threshold):g}"
        if critical_case:
            range_detail += " (critical equality, plain heat operator, N >= 3)"
        clauses.append(Clause("subcritical_range", range_ok, range_detail))

        blowup_ok = alpha_ok and norm_ok and div_ok and bal_ok and range_ok
    else:
        rule = one_dim_blowup_condition(op, grid)
        clauses.extend(rule.clauses)
        thresholds["blowup"] = None
        blowup_ok = alpha_ok and norm_ok and rule.satisfied

    # --- global side ---------------------------------------------------
    geometry_coercive = spec.x_dot_nu <= 0.0
    bdry_ok = geometry_coercive or bc.c_lower > 0.0
    if geometry_coercive:
        bdry_detail = f"x . nu = {spec.x_dot_nu:g} <= 0 on the hole boundary (any alpha >= 0 works)"
    else:
        bdry_detail = f"c_lower = {bc.c_lower:g} (needs > 0)"
    clauses.append(Clause("boundary_coercive", bdry_ok, bdry_detail))

    g0rep = gamma0_report(op, spec, grid)
    g0 = g0rep["gamma0"]
    clauses.append(
        Clause(
            "gamma0_positive", g0rep["positive"],
            f"gamma0 = {g0:g} (min of N a + l* at r = {g0rep['r_at_min']:g})",
        )
    )

    if g0rep["positive"]:
        gl_threshold = global_threshold(g0, q, s)
        thresholds["global"] = float(gl_threshold)
        super_ok = _exact(p) > _exact(gl_threshold)
        clauses.append(
            Clause(
                "supercritical_range", super_ok,
                f"p = {float(p):g} vs global threshold {float(gl_threshold):g}",
            )
        )
        global_ok = alpha_ok and norm_ok and bdry_ok and super_ok
    else:
        thresholds["global"] = None
        global_ok = False

    if blowup_ok:
        classification = GUARANTEED_BLOWUP
    elif global_ok:
        classification = GLOBAL_POSSIBLE
    else:
        classification = OUTSIDE_THEORY

    return HypothesisReport(classification, tuple(clauses), g0, thresholds)


# ---------------------------------------------------------------------------
# discretization

class AssemblyError(ValueError):
    """The requested mesh/coefficients cannot produce a sign-safe operator."""


@dataclass(frozen=True)
class DiscreteOperator:
    """Tridiagonal discretization of L with boundary rows folded in.

    Row ``i`` of the operator is ``sub[i], diag[i], sup[i]`` acting on nodes
    ``i-1, i, i+1``.  Pinned rows (Dirichlet nodes: always the outer wall,
    plus the hole for an inner Dirichlet condition) are all-zero rows, so
    ``I - dt * Op`` has a plain identity row there and the solve leaves the
    pinned value untouched.

    The sign structure is checked at assembly: off-diagonals of Op must be
    >= 0 and interior row sums <= 0 (up to roundoff), which makes
    ``I - dt * Op`` an M-matrix for every dt > 0.  That property is what the
    positivity guarantee of the time stepper stands on, so violating it is an
    assembly error, not a warning.
    """

    grid: Grid
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    pinned: np.ndarray
    bc_kind: str
    alpha_value: float
    assembled_t: float

    def __post_init__(self) -> None:
        for name in ("sub", "diag", "sup", "pinned"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    @property
    def size(self) -> int:
        return self.diag.size

    def apply(self, u: np.ndarray) -> np.ndarray:
        out = self.diag * u
        out[1:] += self.sub[1:] * u[:-1]
        out[:-1] += self.sup[:-1] * u[1:]
        return out

    def implicit_bands(self, dt: float, theta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Bands of ``I - theta dt Op`` for the tridiagonal solve."""
        c = theta * dt
        return -c * self.sub, 1.0 - c * self.diag, -c * self.sup

    def m_matrix_report(self, dt: float, theta: float = 1.0) -> dict:
        lsub, ldiag, lsup = self.implicit_bands(dt, theta)
        scale = np.maximum.reduce([np.abs(lsub), np.abs(ldiag), np.abs(lsup), np.ones_like(ldiag)])
        tol = 1e-12 * scale
        offdiag_ok = bool((lsub <= tol).all() and (lsup <= tol).all())
        diag_pos = bool((ldiag > 0.0).all())
        dominance = ldiag - np.abs(lsub) - np.abs(lsup)
        dominance_ok = bool((dominance >= -tol).all())
        return {
            "offdiag_nonpositive": offdiag_ok,
            "diag_positive": diag_pos,
            "weakly_dominant": dominance_ok,
            "ok": offdiag_ok and diag_pos and dominance_ok,
        }


def assemble_diffusion(grid: Grid, op: OperatorSpec, bc: BoundaryCondition, t: float = 0.0) -> DiscreteOperator:
    """Second-order tridiagonal assembly of L on the grid at time ``t``.

    Interior rows use central differences on the (possibly non-uniform)
    mesh.  The inner Robin/Neumann row eliminates a ghost node at
    ``R - h0`` through the boundary relation ``u_r(R) = alpha(t) u(R)``,
    keeping the row second-order consistent; written out for uniform local
    spacing ``h``:

        (L u)_0 = a0 (2 (u1 - u0)/h^2 - 2 alpha u0 / h) + c0 alpha u0,
        c0 = a'(R) + (N-1) a(R)/R + b(R).

    The outer node and an inner Dirichlet node become pinned zero rows.

    Parameters
    ----------
    grid : Grid
        Carries the domain (dimension, hole radius) it was built for.
    op : OperatorSpec
        Coefficients; only a and b are read here.
    bc : BoundaryCondition
        Inner condition; alpha is evaluated at ``t``.
    t : float
        Assembly time, relevant only for time-dependent alpha.
    """
    spec = grid.domain
    N = spec.dimension
    r = grid.nodes
    M = grid.num_intervals

    a = _sample(op.a, r)
    if a.min() <= 0.0:
        i = int(np.argmin(a))
        raise AssemblyError(f"a(r) must be > 0; a({r[i]:g}) = {a[i]:g}")
    ap = _sample_derivative(op.a, op.a_prime, r)
    b = _sample(op.b, r)
    c = ap + b if N == 1 else ap + (N - 1) * a / r + b

    sub = np.zeros(M + 1)
    diag = np.zeros(M + 1)
    sup = np.zeros(M + 1)
    pinned = np.zeros(M + 1, dtype=bool)
    pinned[M] = True

    h = np.diff(r)
    hm, hp = h[:-1], h[1:]
    span = hm + hp
    ai, ci = a[1:M], c[1:M]
    sub[1:M] = (2.0 * ai - ci * hp) / (hm * span)
    diag[1:M] = (-2.0 * ai + ci * (hp - hm)) / (hm * hp)
    sup[1:M] = (2.0 * ai + ci * hm) / (hp * span)

    alpha_value = 0.0
    if bc.kind == DIRICHLET:
        pinned[0] = True
    else:
        alpha_value = bc.alpha_at(t)
        if alpha_value < 0.0:
            raise AssemblyError(f"alpha({t:g}) = {alpha_value:g} < 0 violates the sign hypothesis")
        h0 = h[0]
        diag[0] = a[0] * (-2.0 / h0**2 - 2.0 * alpha_value / h0) + c[0] * alpha_value
        sup[0] = a[0] * 2.0 / h0**2

    disc = DiscreteOperator(grid, sub, diag, sup, pinned, bc.kind, alpha_value, float(t))
    _check_sign_structure(disc)
    return disc


def _check_sign_structure(disc: DiscreteOperator) -> None:
    sub, diag, sup = disc.sub, disc.diag, disc.sup
    scale = np.maximum.reduce([np.abs(sub), np.abs(diag), np.abs(sup), np.ones_like(diag)])
    tol = 1e-12 * scale
    rowsum = sub + diag + sup
    bad = (sub < -tol) | (sup < -tol) | (rowsum > tol)
    bad &= ~disc.pinned
    if bad.any():
        i = int(np.argmax(bad))
        raise AssemblyError(
            f"operator row {i} (r = {disc.grid.nodes[i]:g}) breaks the M-matrix sign "
            f"structure: sub = {sub[i]:g}, diag = {diag[i]:g}, sup = {sup[i]:g}; "
            "the drift is too strong for this mesh spacing, refine the grid"
        )

"""Flat sectioned key-value configs for experiments.

A config is an INI file with five sections: [domain], [operator], [bc],
[solver], [experiment].  Coefficients and profiles are named presets with
numeric parameters (``constant:1.0``, ``gaussian:0.2,1.0``); there is no
expression language.  Unknown sections or keys are hard errors naming the
offender, so a typo cannot silently fall back to a default.

Internally a config is a plain nested dict of scalars, which is what gets
embedded verbatim into experiment records; the same validator accepts both
freshly parsed INI text and a dict recovered from a record, so any record
can be re-run from its own snapshot.
"""

from __future__ import annotations

import configparser
import hashlib
import json
from typing import Any

from .coefficients import parse_coefficient
from .domain import DomainSpec, Grid, build_grid
from .integrator import SolverConfig
from .operators import BoundaryCondition, OperatorSpec, dirichlet, neumann, robin
from .profiles import ProfileSpec, parse_profile

EXPERIMENT_KINDS = (
    "single",
    "sweep_p",
    "compare_bc",
    "truncation",
    "bisect",
    "verify_supersolution",
    "thresholds",
)

_REQUIRED = object()


def _float(x) -> float:
    return float(x)


def _int(x) -> int:
    if isinstance(x, float) and x != int(x):
        raise ValueError(f"expected an integer, got {x}")
    return int(x)


def _str(x) -> str:
    return str(x)


def _choice(*options):
    def convert(x):
        s = str(x)
        if s not in options:
            raise ValueError(f"expected one of {options}, got {s!r}")
        return s
    return convert


def _float_list(x) -> list[float]:
    if isinstance(x, (list, tuple)):
        return [float(v) for v in x]
    parts = [p.strip() for p in str(x).split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of numbers")
    return [float(p) for p in parts]


def _coefficient_string(x) -> str:
    s = str(x)
    parse_coefficient(s)  # validated here, built again at use
    return s


def _profile_string(x) -> str:
    s = str(x)
    parse_profile(s)
    return s


# (converter, default); _REQUIRED means the key must be present
_SCHEMA: dict[str, dict[str, tuple]] = {
    "domain": {
        "kind": (_choice("exterior_ball", "one_dim_two_ray"), "exterior_ball"),
        "dimension": (_int, 3),
        "inner_radius": (_float, 1.0),
        "r_max": (_float, 20.0),
        "intervals": (_int, 400),
        "stretch": (_choice("uniform", "geometric"), "uniform"),
        "ratio": (_float, None),
    },
    "operator": {
        "a": (_coefficient_string, "constant:1.0"),
        "b": (_coefficient_string, "constant:0.0"),
        "p": (_float, _REQUIRED),
        "q": (_float, 0.0),
        "s": (_float, 0.0),
    },
    "bc": {
        "kind": (_choice("robin", "neumann", "dirichlet"), "robin"),
        "alpha": (_float, None),
        "c_lower": (_float, None),
    },
    "solver": {
        "dt0": (_float, 1e-3),
        "dt_min": (_float, 1e-12),
        "sigma": (_float, 0.1),
        "m_blow": (_float, 1e8),
        "t_max": (_float, 100.0),
        "theta": (_float, 1.0),
        "output_interval": (_float, 0.1),
    },
    "experiment": {
        "kind": (_choice(*EXPERIMENT_KINDS), "single"),
        "label": (_str, ""),
        "profile": (_profile_string, "gaussian:0.2,1.0"),
        "p_values": (_float_list, None),
        "ordering_tol": (_float, 1e-2),
        "family_base": (_float, None),
        "family_growth": (_float, 2.0),
        "family_count": (_int, 3),
        "monotonicity_tol": (_float, 1e-10),
        "amplitude_lo": (_float, None),
        "amplitude_hi": (_float, None),
        "iterations": (_int, 12),
        "fraction": (_float, 0.9),
        "r_probe": (_float, None),
        "t_probe": (_float, None),
        "n_space": (_int, 400),
        "n_time": (_int, 200),
        "cert_tol": (_float, 1e-10),
    },
}


def validate_config(raw: dict) -> dict:
    """Normalize a nested config dict against the schema.

    Unknown sections/keys raise; missing optional keys pick up defaults;
    values are coerced to their declared types.  Idempotent, so records can
    be validated again on re-run.
    """
    if not isinstance(raw, dict):
        raise ValueError(f"config must be a mapping of sections, got {type(raw).__name__}")
    for section in raw:
        if section not in _SCHEMA:
            raise ValueError(
                f"unknown config section [{section}]; expected {sorted(_SCHEMA)}"
            )
    out: dict[str, dict[str, Any]] = {}
    for section, keys in _SCHEMA.items():
        given = raw.get(section, {})
        if not isinstance(given, dict):
            raise ValueError(f"section [{section}] must be a mapping")
        for key in given:
            if key not in keys:
                raise ValueError(
                    f"unknown key '{section}.{key}'; known keys in [{section}]: {sorted(keys)}"
                )
        normalized = {}
        for key, (convert, default) in keys.items():
            if key in given and given[key] is not None:
                try:
                    normalized[key] = convert(given[key])
                except (ValueError, TypeError) as exc:
                    raise ValueError(f"bad value for '{section}.{key}': {exc}") from None
            elif default is _REQUIRED:
                raise ValueError(f"missing required key '{section}.{key}'")
            elif default is not None:
                normalized[key] = default
        out[section] = normalized
    return out


def parse_config_text(text: str) -> dict:
    """Parse INI text into a validated config dict."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        # configparser errors carry line numbers for malformed content
        raise ValueError(f"config parse error: {exc}") from None
    raw = {section: dict(cp.items(section)) for section in cp.sections()}
    return validate_config(raw)


def load_config(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def canonical_json(cfg: dict) -> str:
    return json.dumps(cfg, sort_keys=True, separators=(",", ":"))


def config_digest(cfg: dict) -> str:
    """Stable 12-hex id of a validated config; names record and CSV files."""
    return hashlib.sha256(canonical_json(cfg).encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# builders: config dict -> domain objects

def build_domain(cfg: dict) -> DomainSpec:
    d = cfg["domain"]
    dimension = d["dimension"] if d["kind"] == "exterior_ball" else 1
    return DomainSpec(d["kind"], dimension, d["inner_radius"])


def build_grid_from(cfg: dict, spec: DomainSpec | None = None) -> Grid:
    d = cfg["domain"]
    spec = build_domain(cfg) if spec is None else spec
    return build_grid(spec, d["r_max"], d["intervals"], d["stretch"], d.get("ratio"))


def build_operator(cfg: dict) -> OperatorSpec:
    o = cfg["operator"]
    return OperatorSpec(
        a=parse_coefficient(o["a"]),
        b=parse_coefficient(o["b"]),
        p=o["p"],
        q=o["q"],
        s=o["s"],
    )


def build_bc(cfg: dict) -> BoundaryCondition:
    b = cfg["bc"]
    if b["kind"] == "dirichlet":
        if b.get("alpha") is not None:
            raise ValueError("'bc.alpha' does not apply to a dirichlet boundary")
        return dirichlet()
    if b["kind"] == "neumann":
        if b.get("alpha") not in (None, 0.0):
            raise ValueError("'bc.alpha' does not apply to a neumann boundary (alpha is 0)")
        return neumann()
    alpha = b.get("alpha")
    if alpha is None:
        alpha = 1.0
    return robin(alpha, b.get("c_lower"))


def build_solver(cfg: dict) -> SolverConfig:
    s = cfg["solver"]
    return SolverConfig(
        dt0=s["dt0"],
        dt_min=s["dt_min"],
        sigma=s["sigma"],
        m_blow=s["m_blow"],
        t_max=s["t_max"],
        theta=s["theta"],
        output_interval=s["output_interval"],
    )


def build_profile_spec(cfg: dict) -> ProfileSpec:
    return parse_profile(cfg["experiment"]["profile"])

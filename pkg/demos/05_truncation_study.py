"""Grow the outer wall and watch the truncated solutions increase to a limit.

The exterior problem is approximated on [R, R_k] with a zero outer wall.
Walls further out absorb less, so solutions increase pointwise with R_k,
and successive sup-differences on shared nodes contract once the wall
stops mattering.  Same engine as the truncation experiment in the harness.
"""

from __future__ import annotations

import tempfile

from fujitalab import run_experiment

CONFIG = {
    "domain": {"dimension": 3, "r_max": 4.0, "intervals": 60},
    "operator": {"p": 2.0},
    "bc": {"kind": "robin", "alpha": 1.0},
    "solver": {"dt0": 1e-2, "t_max": 5.0, "output_interval": 0.5},
    "experiment": {
        "kind": "truncation",
        "profile": "gaussian:0.3,1.0",
        "family_base": 4.0,
        "family_growth": 2.0,
        "family_count": 4,
    },
}


def main():
    with tempfile.TemporaryDirectory() as out:
        record, code = run_experiment(CONFIG, out)

    ex = record.extras
    print(f"outer radii: {ex['radii']} (shared spacing h = {ex['spacing']:g})")
    print(f"max pointwise monotonicity violation: {ex['max_monotonicity_violation']:.3e}")
    print("\nfinal sup-norms and successive differences:")
    for o in record.outcomes:
        print(f"   R = {o['outer_radius']:5g}: sup {o['sup_final']:.6f}")
    for (d, rat) in zip(ex["pair_differences"], ex["cauchy_ratios"] + [None]):
        note = f"(contracted {rat:.1f}x)" if rat is not None else ""
        print(f"   diff {d:.3e} {note}")
    print(f"\nexit code: {code}")


if __name__ == "__main__":
    main()

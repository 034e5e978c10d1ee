"""Pin down the amplitude where global existence tips into blow-up.

For supercritical p both outcomes occur: small data decay under the Gaussian
barrier, large data outrun diffusion.  Bisecting the initial amplitude
between a global lower endpoint and a blowing-up upper endpoint brackets the
threshold; each halving costs one full run.
"""

from __future__ import annotations

import tempfile

from fujitalab import run_experiment

CONFIG = {
    "domain": {"dimension": 3, "r_max": 15.0, "intervals": 150},
    "operator": {"p": 2.0},
    "bc": {"kind": "robin", "alpha": 1.0},
    "solver": {"dt0": 1e-2, "t_max": 40.0, "output_interval": 0.5},
    "experiment": {
        "kind": "bisect",
        "profile": "gaussian:1.0,1.0",
        "amplitude_lo": 0.1,
        "amplitude_hi": 8.0,
        "iterations": 8,
    },
}


def main():
    with tempfile.TemporaryDirectory() as out:
        record, code = run_experiment(CONFIG, out)

    print("iteration  amplitude  outcome")
    for o in record.outcomes:
        t_b = f"  (t_blowup ~ {o['t_blowup']:.3f})" if o.get("t_blowup") else ""
        print(f"   {o['iteration']:3d}     {o['amplitude']:8.5f}  {o['kind']}{t_b}")

    ex = record.extras
    print(f"\nthreshold amplitude ~ {ex['threshold_estimate']:.5f}")
    print(f"bracket [{ex['bracket_lo']:.5f}, {ex['bracket_hi']:.5f}], "
          f"width {ex['bracket_width']:.2e} after {ex['iterations_done']} halvings")
    print(f"exit code: {code}")


if __name__ == "__main__":
    main()

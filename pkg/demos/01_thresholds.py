"""Where do the exponent fences sit for a few operators?

The classification is exact: thresholds come out as rationals whenever the
inputs are rational, so the critical case p = 1 + 2/N can be recognized as
an equality instead of a float near-miss.
"""

from __future__ import annotations

from fractions import Fraction

from fujitalab import (
    OperatorSpec,
    build_grid,
    constant,
    exterior_ball,
    hypothesis_report,
    rational_decay,
    robin,
    two_ray,
)


def show(title, op, spec, grid, bc=robin(1.0)):
    report = hypothesis_report(op, spec, grid, bc)
    print(f"\n== {title} ==")
    print(f"   gamma0 = {report.gamma0:g}")
    for name, value in sorted(report.thresholds.items()):
        print(f"   threshold[{name}] = {value if value is not None else 'undefined'}")
    print(f"   p = {op.p} -> {report.classification}")
    for clause in report.clauses:
        mark = "ok " if clause.passed else "FAIL"
        print(f"   [{mark}] {clause.name}")


def main():
    ball = exterior_ball(3, 1.0)
    grid = build_grid(ball, 20.0, 200)

    lap = lambda p: OperatorSpec(a=constant(1.0), b=constant(0.0), p=p)

    show("Laplacian, N = 3, subcritical p = 1.5", lap(1.5), ball, grid)
    show("Laplacian, N = 3, critical p = 5/3 (exact)", lap(Fraction(5, 3)), ball, grid)
    show("Laplacian, N = 3, supercritical p = 2", lap(2.0), ball, grid)

    # a decaying diffusion coefficient moves gamma0, hence the upper fence
    decaying = OperatorSpec(a=rational_decay(1.0), b=constant(0.0), p=2.0)
    show("decaying diffusion a = r^2/(1 + r^2), N = 3, p = 2", decaying, ball, grid)

    # dimension one swaps the threshold for a three-clause rule
    line = two_ray(1.0)
    line_grid = build_grid(line, 21.0, 200)
    inward = OperatorSpec(a=constant(1.0), b=constant(-0.2), p=2.0)
    show("two rays, constant inward drift b = -0.2, p = 2", inward, line, line_grid)


if __name__ == "__main__":
    main()

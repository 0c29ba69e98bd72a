"""Walk a small atlas of surfaces and print their exact smoothing data.

For each surface/kernel pair this prints the sublevel growth exponent s0
(an exact rational), the log power d0, the sharpness claim, and the
polygon of (1/p, beta) pairs where smoothing is asserted. Everything here
is exact arithmetic; nothing is sampled.

Run:  python3 demos/exponent_atlas.py
"""

from fractions import Fraction

from smoothing_lab.exponents import (compute_s0_d0, membership,
                                     region_of_boundedness)
from smoothing_lab.surfaces import KernelSpec, SurfaceSpec

ATLAS = [
    ("parabola (t, t^2)",
     SurfaceSpec.power_curve((1, 2)), KernelSpec(a=(0.0,))),
    ("cubic curve (t, t^2, t^3)",
     SurfaceSpec.power_curve((1, 2, 3)), KernelSpec(a=(0.0,))),
    ("bilinear (t1^2, t1 t2)",
     SurfaceSpec.monomial_family(((2, 0), (1, 1)), (1.0, 1.0)),
     KernelSpec(a=(0.0, 0.0))),
    ("weighted curve (t, t^2), |t|^(-3/4) kernel",
     SurfaceSpec.power_curve((1, 2)), KernelSpec(a=(0.75,))),
    ("tied monomials (t1 t2, t1^2 t2^2)",
     SurfaceSpec.monomial_family(((1, 1), (2, 2)), (1.0, 1.0)),
     KernelSpec(a=(0.0, 0.0))),
    ("diagonal sums, degrees (2, 4, 6), two variables",
     SurfaceSpec.diagonal_sums((2, 4, 6), ((1.0, 1.0),) * 3),
     KernelSpec(a=(0.5, 0.25))),
]


def describe(title, spec, kernel):
    report = compute_s0_d0(spec, kernel)
    region = region_of_boundedness(report.s0, spec.n)
    print(title)
    print(f"  m = {spec.m}, n = {spec.n}, weights a = {kernel.a}")
    print(f"  s0 = {report.s0} (= {float(report.s0):.4f}), d0 = {report.d0}")
    print(f"  sharpness claim: {report.sharpness_claim}")
    verts = ", ".join(f"({x}, {y})" for x, y in region.vertices)
    print(f"  region: open {region.shape} with vertices {verts}")
    # Probe two points: the centroid-ish interior and a boundary vertex.
    inside = membership(region, Fraction(1, 2), report.s0 / 2)
    on_edge = membership(region, Fraction(0), Fraction(0))
    print(f"  membership: (1/2, s0/2) -> {inside}, vertex (0, 0) -> {on_edge}")
    print()


def main():
    for title, spec, kernel in ATLAS:
        describe(title, spec, kernel)


if __name__ == "__main__":
    main()

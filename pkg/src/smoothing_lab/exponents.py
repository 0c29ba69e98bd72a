"""Closed-form smoothing exponents and the boundedness region polygon.

Everything here is exact rational arithmetic (``fractions.Fraction``).
Floats enter only through kernel weight exponents, which convert exactly to
binary rationals, and leave only when a caller asks for float renditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .surfaces import (
    DIAGONAL_SUMS,
    MONOMIAL_FAMILY,
    POWER_CURVE,
    KernelSpec,
    SurfaceSpec,
)

SHARPNESS_BETA_AT_MOST_S0 = "beta_at_most_s0"
SHARPNESS_NONE = "none"

TRIANGLE = "triangle"
TRAPEZOID = "trapezoid"


@dataclass(frozen=True)
class ExponentReport:
    """Predicted growth exponent s0 and log power d0 for one surface.

    ``argmin_coordinates`` lists the parameter coordinates attaining the
    defining minimum (monomial family) or entering the defining formula
    (the other families, where no minimum is taken).
    ``sharpness_claim`` is ``beta_at_most_s0`` exactly when s0 < 1 and the
    kernel is lower bounded; then decay exponents above s0 contradict the
    theory.
    """

    s0: Fraction
    d0: int
    argmin_coordinates: tuple
    sharpness_claim: str

    def to_dict(self) -> dict:
        return {
            "s0": {"num": self.s0.numerator, "den": self.s0.denominator},
            "s0_float": float(self.s0),
            "d0": self.d0,
            "argmin_coordinates": list(self.argmin_coordinates),
            "sharpness_claim": self.sharpness_claim,
        }


@dataclass(frozen=True)
class RegionSpec:
    """Open polygon of (1/p, beta) pairs where smoothing is claimed.

    ``vertices`` are exact rationals, listed base edge first. The polygon
    is always open: boundary points are excluded by :func:`membership`.
    """

    shape: str
    vertices: tuple
    open: bool = True

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "open": self.open,
            "vertices": [
                {
                    "x": {"num": x.numerator, "den": x.denominator},
                    "y": {"num": y.numerator, "den": y.denominator},
                    "x_float": float(x),
                    "y_float": float(y),
                }
                for x, y in self.vertices
            ],
        }


def compute_s0_d0(spec: SurfaceSpec, kernel: KernelSpec) -> ExponentReport:
    """Exponent formulas per family.

    monomial_family: s0 = min over {j: alpha_nj > 0} of (1 - a_j)/alpha_nj,
    d0 = multiplicity of the minimum - 1. power_curve: s0 = (1 - a)/b_n,
    d0 = 0. diagonal_sums: s0 = sum_j (1 - a_j)/d_n, d0 = 0.

    The weighted monomial formula reduces to 1/max_j alpha_nj at a = 0 and
    to the curve formula at m = 1; for a > 0 it is additionally pinned to
    the sublevel estimator by the acceptance suite.
    """
    if kernel.m != spec.m:
        raise ValueError("kernel dimension does not match the surface")
    a = [Fraction(x) for x in kernel.a]
    if spec.family == MONOMIAL_FAMILY:
        alpha_n = spec.exponents[-1]
        vals = {
            j: (1 - a[j]) / alpha_n[j]
            for j in range(spec.m)
            if alpha_n[j] > 0
        }
        s0 = min(vals.values())
        argmin = tuple(sorted(j for j, v in vals.items() if v == s0))
        d0 = len(argmin) - 1
    elif spec.family == POWER_CURVE:
        s0 = (1 - a[0]) / spec.exponents[-1]
        argmin = (0,)
        d0 = 0
    else:
        s0 = sum((1 - aj) for aj in a) / Fraction(spec.exponents[-1])
        argmin = tuple(range(spec.m))
        d0 = 0
    claim = (SHARPNESS_BETA_AT_MOST_S0
             if s0 < 1 and kernel.lower_bounded else SHARPNESS_NONE)
    return ExponentReport(s0=s0, d0=d0, argmin_coordinates=argmin,
                          sharpness_claim=claim)


def region_of_boundedness(s0, n: int) -> RegionSpec:
    """Open region of claimed (1/p, beta) smoothing pairs.

    For s0 >= 1/n the region is the open triangle with vertices (0,0),
    (1,0), (1/2, 1/n); below that threshold the triangle is cut at height
    s0, giving the open trapezoid (0,0), (1,0), (n*s0/2, s0),
    (1 - n*s0/2, s0). The s0 = 1/n boundary is routed to the triangle
    branch; the two formulas agree there.
    """
    s0 = Fraction(s0)
    if s0 <= 0:
        raise ValueError("s0 must be positive")
    if n < 2:
        raise ValueError("n must exceed 1")
    if s0 >= Fraction(1, n):
        vertices = (
            (Fraction(0), Fraction(0)),
            (Fraction(1), Fraction(0)),
            (Fraction(1, 2), Fraction(1, n)),
        )
        return RegionSpec(TRIANGLE, vertices)
    x = n * s0 / 2
    vertices = (
        (Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(0)),
        (x, s0),
        (1 - x, s0),
    )
    return RegionSpec(TRAPEZOID, vertices)


def membership(region: RegionSpec, x, y) -> bool:
    """True iff (x, y) lies strictly inside the region polygon."""
    x = Fraction(x)
    y = Fraction(y)
    for (px, py), (qx, qy) in _ccw_edges(region):
        cross = (qx - px) * (y - py) - (qy - py) * (x - px)
        if cross <= 0:
            return False
    return True


def _ccw_edges(region: RegionSpec):
    v = region.vertices
    if region.shape == TRIANGLE:
        ring = (v[0], v[1], v[2])
    else:
        ring = (v[0], v[1], v[3], v[2])
    return zip(ring, ring[1:] + ring[:1])

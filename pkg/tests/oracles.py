"""Independent numerical oracles for the test suite.

Everything here is deliberately built from different machinery than the
package under test: composite Gauss-Legendre panels (not Gauss-Kronrod),
closed forms from scipy.special, and direct area formulas. Oracles report
their own convergence gap so tests can fail loudly on a bad oracle rather
than silently trusting it.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import fresnel, sici

_GL_ORDER = 20
_GL_CACHE: dict = {}


def _gl_rule(order: int):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def _gl_panels(fn, lo: float, hi: float, panels: int, order: int) -> complex:
    x, w = _gl_rule(order)
    edges = np.linspace(lo, hi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.exp(1j * fn(nodes))
    return complex(np.sum((vals @ w) * half))


def oscillatory_integral(phase_fn, lo: float, hi: float,
                         min_panels: int = 64,
                         tol: float = 1e-11,
                         max_panels: int = 1 << 22) -> tuple:
    """integral of exp(i phase) by doubling composite Gauss-Legendre.

    min_panels should already resolve the oscillation (about one radian
    of phase per panel); doubling then verifies convergence. Returns
    (value, gap between the last two refinements).
    """
    panels = max(8, int(min_panels))
    prev = _gl_panels(phase_fn, lo, hi, panels, _GL_ORDER)
    while panels <= max_panels:
        panels *= 2
        cur = _gl_panels(phase_fn, lo, hi, panels, _GL_ORDER)
        gap = abs(cur - prev)
        if gap <= tol * max(1.0, abs(cur)):
            return cur, gap
        prev = cur
    raise RuntimeError(f"oracle quadrature failed to converge (gap {gap:g})")


def phase_resolved_panels(total_phase: float) -> int:
    return max(64, int(math.ceil(abs(total_phase))))


def weighted_phase_magnitude(exponents, coefficients, b: float,
                             delta: float) -> float:
    """|integral_0^delta y^(-b) exp(i sum c y^rho) dy| by substitution.

    u = y^(1-b) removes the amplitude singularity exactly; the oracle then
    integrates a unimodular integrand on (0, delta^(1-b)].
    """
    e = 1.0 - b
    expo = [rho / e for rho in exponents]

    def ph(u):
        acc = 0.0
        for q, c in zip(expo, coefficients):
            acc = acc + c * u ** q
        return acc

    span = sum(2.0 * abs(c) * delta ** rho
               for rho, c in zip(exponents, coefficients))
    val, _ = oscillatory_integral(ph, 0.0, delta ** e,
                                  min_panels=phase_resolved_panels(span))
    return abs(val) / e


# -- closed forms ------------------------------------------------------------

LN2 = math.log(2.0)


def mu_line(eps: float) -> float:
    """mu(|t| < eps) on (-1, 1), unit weight."""
    return 2.0 * min(eps, 1.0)


def mu_parabola(eps: float) -> float:
    """mu(t^2 < eps) on (-1, 1), unit weight."""
    return 2.0 * min(math.sqrt(eps), 1.0)


def mu_bilinear(eps: float) -> float:
    """mu(|t1 t2| < eps) on (-1, 1)^2, unit weight."""
    if eps >= 1.0:
        return 4.0
    return 4.0 * eps * (1.0 - math.log(eps))


def bilinear_shell_mass(k: int) -> float:
    """mu(2^-k-1 <= |t1 t2| < 2^-k) on (-1, 1)^2, k >= 0."""
    return 4.0 * 2.0 ** (-k - 1) * (1.0 + (k - 1) * LN2)


def u_line(tau: float) -> complex:
    """integral of exp(i tau t) over (-1, 1)."""
    if tau == 0.0:
        return 2.0 + 0.0j
    return complex(2.0 * math.sin(tau) / tau)


def u_parabola(tau: float) -> complex:
    """integral of exp(i tau t^2) over (-1, 1), tau > 0 (Fresnel)."""
    z = math.sqrt(2.0 * tau / math.pi)
    s, c = fresnel(z)
    return 2.0 * math.sqrt(math.pi / (2.0 * tau)) * complex(c, s)


def u_bilinear(tau: float) -> complex:
    """integral of exp(i tau t1 t2) over (-1, 1)^2."""
    if tau == 0.0:
        return 4.0 + 0.0j
    return complex(4.0 * sici(tau)[0] / tau)

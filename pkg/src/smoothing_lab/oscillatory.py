"""Extension-operator multiplier profiles and their decay rates.

The profile is U(tau) = integral of exp(i tau gamma_n(t)) against the
power weight over the box. The weight-flattening substitution
t_j = sign(u) r |u|^(1/(1-a_j)) absorbs each |t_j|^(-a_j) into a constant,
leaving a smooth-phase unimodular integrand handled by panel quadrature
with an embedded error estimate. Envelope regression over dyadic blocks
of tau recovers the decay exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import quad
from .errors import BudgetExceededError
from .parallel import pmap
from .surfaces import KernelSpec, SurfaceSpec, gamma_component, gamma_partial_sup

# Desk-scale magnitude caps: one dyadic block above the largest block the
# decay experiments use. Beyond these the node count stops being
# interactive.
TAU_CAP_EXPONENT = {1: 21, 2: 15}

DEFAULT_NODE_BUDGET = 5e10

# Outer-dimension panels advance 8/pi times more phase than inner ones
# (4.0 rad at the default pi/2 innermost setting).
OUTER_PHASE_STRETCH = 8.0 / math.pi

DEFAULT_SAMPLES_PER_BLOCK = 8
MIN_BLOCKS_FOR_FIT = 10
MIN_SAMPLES_PER_BLOCK = 8

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class DecaySample:
    """One profile evaluation: value with a rigorous-style error bound."""

    tau: float
    value: complex
    error: float

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "re": self.value.real,
            "im": self.value.imag,
            "abs": abs(self.value),
            "err": self.error,
        }


@dataclass(frozen=True)
class DecayFit:
    """Envelope regression result |U| ~ C tau^(-exponent) log(tau)^log_power."""

    exponent: float
    log_power: int
    amplitude: float
    residual: float
    block_range: tuple
    candidates: tuple

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "log_power": self.log_power,
            "amplitude": self.amplitude,
            "residual": self.residual,
            "block_range": list(self.block_range),
            "candidates": [list(c) for c in self.candidates],
        }


def _flatten_1d(u: np.ndarray, a: float, r: float) -> np.ndarray:
    if a == 0.0:
        return r * u
    return np.sign(u) * r * np.abs(u) ** (1.0 / (1.0 - a))


def _phase_terms(theta: Sequence[float]):
    return [(i, float(th)) for i, th in enumerate(theta) if th != 0.0]


def _dim_bound(spec: SurfaceSpec, kernel: KernelSpec, terms, j: int,
               coord_sups: Sequence[float]) -> float:
    """Sup of |d phase / d u_j| over the flattened box."""
    slope = sum(abs(th) * gamma_partial_sup(spec, i, j, coord_sups)
                for i, th in terms)
    return slope * kernel.r / (1.0 - kernel.a[j])


def _oscillatory_value(spec: SurfaceSpec, kernel: KernelSpec,
                       theta: Sequence[float], node_budget: float,
                       phase_per_panel: float,
                       cap_magnitude: float | None) -> tuple:
    m = spec.m
    if m > 2:
        raise BudgetExceededError(
            "iterated quadrature supports m <= 2; "
            f"m = {m} exceeds the desk-scale budget",
            max_feasible_tau=0.0)
    if cap_magnitude is not None:
        cap = 2.0 ** TAU_CAP_EXPONENT[m]
        if cap_magnitude > cap:
            raise BudgetExceededError(
                f"|tau| = {cap_magnitude:g} exceeds the desk-scale cap "
                f"2^{TAU_CAP_EXPONENT[m]} for m = {m}",
                max_feasible_tau=cap)
    scale = 1.0
    for aj in kernel.a:
        scale *= kernel.r ** (1.0 - aj) / (1.0 - aj)
    terms = _phase_terms(theta)
    if not terms:
        return scale * 2.0 ** m + 0.0j, 0.0
    magnitude = cap_magnitude if cap_magnitude is not None else max(
        abs(th) for _, th in terms)
    sups = [kernel.r] * m
    r = kernel.r
    a = kernel.a

    if m == 1:
        bound = _dim_bound(spec, kernel, terms, 0, sups)
        geo = a[0] > 0.0
        panels = quad.edge_count(-1.0, 1.0, bound, phase_per_panel, geo)
        nodes = panels * quad.NODES_PER_PANEL
        if nodes > node_budget:
            raise BudgetExceededError(
                f"{nodes:.3g} nodes needed at |tau| = {magnitude:g}, "
                f"budget {node_budget:.3g}",
                max_feasible_tau=magnitude * node_budget / nodes)
        edges = quad.build_edges(-1.0, 1.0, bound, phase_per_panel, geo)

        def phase(u):
            t = _flatten_1d(u, a[0], r)
            acc = 0.0
            for i, th in terms:
                acc = acc + th * gamma_component(spec, i, [t])
            return acc

        value, err = quad.integrate_exp_phase(phase, edges)
        return scale * value, scale * err

    # The phase-per-panel contract binds the innermost variable; the outer
    # dimension runs coarser and is audited by the embedded Kronrod estimate.
    outer_phase = phase_per_panel * OUTER_PHASE_STRETCH
    bound_outer = _dim_bound(spec, kernel, terms, 0, sups)
    outer_edges = quad.build_edges(-1.0, 1.0, bound_outer, outer_phase,
                                   a[0] > 0.0)

    def inner_bound(sup_abs_u1: float) -> float:
        t1_sup = r * sup_abs_u1 ** (1.0 / (1.0 - a[0])) if sup_abs_u1 > 0 else 0.0
        return _dim_bound(spec, kernel, terms, 1, [t1_sup, r])

    def inner_edges_fn(sup_abs_u1: float) -> np.ndarray:
        return quad.build_edges(-1.0, 1.0, inner_bound(sup_abs_u1),
                                phase_per_panel, a[1] > 0.0)

    def inner_count_fn(sup_abs_u1: float) -> int:
        return quad.edge_count(-1.0, 1.0, inner_bound(sup_abs_u1),
                               phase_per_panel, a[1] > 0.0)

    plan = quad.plan_inner_nodes(outer_edges, inner_count_fn)
    if plan > node_budget:
        raise BudgetExceededError(
            f"{plan:.3g} nodes planned at |tau| = {magnitude:g}, "
            f"budget {node_budget:.3g}",
            max_feasible_tau=magnitude * math.sqrt(node_budget / plan))

    def phase2(u1, u2):
        t1 = _flatten_1d(u1, a[0], r)
        t2 = _flatten_1d(u2, a[1], r)
        acc = 0.0
        for i, th in terms:
            acc = acc + th * gamma_component(spec, i, [t1, t2])
        return acc

    value, err = quad.integrate_exp_phase_2d(phase2, outer_edges,
                                             inner_edges_fn, node_budget)
    return scale * value, scale * err


def evaluate_U(spec: SurfaceSpec, kernel: KernelSpec, tau: float,
                     phase_per_panel: float = quad.DEFAULT_PHASE_PER_PANEL,
                     node_budget: float = DEFAULT_NODE_BUDGET) -> DecaySample:
    """U(tau) for the last surface component, with an error bound.

    tau = 0 returns the total weight mass exactly. Negative tau is the
    complex conjugate and costs the same.
    """
    theta = [0.0] * spec.n
    theta[spec.n - 1] = float(tau)
    value, err = _oscillatory_value(spec, kernel, theta, node_budget,
                                    phase_per_panel, abs(float(tau)))
    return DecaySample(tau=float(tau), value=value, error=err)


def evaluate_sigma_hat(spec: SurfaceSpec, kernel: KernelSpec,
                    lam: Sequence[float],
                    phase_per_panel: float = quad.DEFAULT_PHASE_PER_PANEL,
                    node_budget: float = DEFAULT_NODE_BUDGET) -> DecaySample:
    """Full multiplier symbol at frequency lam: phase -lam . gamma(t).

    Returned with tau set to the sup-norm of lam for bookkeeping.
    """
    if len(lam) != spec.n:
        raise ValueError(f"frequency vector needs {spec.n} entries")
    theta = [-float(x) for x in lam]
    value, err = _oscillatory_value(spec, kernel, theta, node_budget,
                                    phase_per_panel, None)
    tau = max(abs(float(x)) for x in lam) if lam else 0.0
    return DecaySample(tau=tau, value=value, error=err)


def block_taus(block_min: int, block_max: int,
               samples_per_block: int = DEFAULT_SAMPLES_PER_BLOCK) -> list:
    """Log-spaced tau grid, samples_per_block per dyadic block."""
    if block_max < block_min:
        raise ValueError("empty block range")
    if samples_per_block < 1:
        raise ValueError("samples_per_block must be positive")
    out = []
    for j in range(block_min, block_max + 1):
        for i in range(samples_per_block):
            out.append(2.0 ** (j + i / samples_per_block))
    return out


def collect_decay_samples(
        spec: SurfaceSpec, kernel: KernelSpec, block_min: int, block_max: int,
        samples_per_block: int = DEFAULT_SAMPLES_PER_BLOCK,
        phase_per_panel: float = quad.DEFAULT_PHASE_PER_PANEL,
        node_budget: float = DEFAULT_NODE_BUDGET) -> list:
    taus = block_taus(block_min, block_max, samples_per_block)
    return pmap(
        lambda tau: evaluate_U(spec, kernel, tau,
                                     phase_per_panel=phase_per_panel,
                                     node_budget=node_budget),
        taus)


def fit_decay_exponent(samples: Iterable[DecaySample],
                       allowed_log_powers: Sequence[int] = (0,),
                       min_blocks: int = MIN_BLOCKS_FOR_FIT,
                       min_per_block: int = MIN_SAMPLES_PER_BLOCK) -> DecayFit:
    """Regress the block envelope max |U| on log tau.

    Model: log M_j = log C - exponent * (j ln 2) + d * log(j ln 2) with d
    drawn from allowed_log_powers; the residual picks d, ties to the
    smaller power. Blocks below tau = 2 are discarded: the log factor
    degenerates at j = 0.
    """
    blocks: dict = {}
    for s in samples:
        if s.tau <= 0.0:
            continue
        j = int(math.floor(math.log2(s.tau)))
        if j < 1:
            continue
        blocks.setdefault(j, []).append(abs(s.value))
    usable = {j: vals for j, vals in blocks.items()
              if len(vals) >= min_per_block}
    if len(usable) < min_blocks:
        raise ValueError(
            f"decay fit needs at least {min_blocks} dyadic blocks with "
            f"{min_per_block} samples each; got {len(usable)} usable blocks")
    js = np.array(sorted(usable), dtype=float)
    envelope = np.array([max(usable[int(j)]) for j in js])
    if np.any(envelope <= 0.0):
        raise ValueError("block envelope hit zero; cannot take logs")
    x = js * _LN2
    y = np.log(envelope)
    design = np.column_stack([np.ones_like(x), -x])
    best = None
    candidates = []
    for d in sorted(set(int(p) for p in allowed_log_powers)):
        target = y - d * np.log(x)
        coef, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
        rms = float(np.sqrt(np.mean((design @ coef - target) ** 2)))
        candidates.append((d, rms))
        if best is None or rms < best[2]:
            best = (d, coef, rms)
    d, coef, rms = best
    return DecayFit(exponent=float(coef[1]), log_power=d,
                    amplitude=float(math.exp(coef[0])), residual=rms,
                    block_range=(int(js[0]), int(js[-1])),
                    candidates=tuple(candidates))

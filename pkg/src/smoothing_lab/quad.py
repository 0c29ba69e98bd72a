"""Panel quadrature for unimodular oscillatory integrands.

Panels are sized so the phase advances a bounded amount per panel; each
panel is integrated with the Gauss-Kronrod 7/15 pair, whose embedded Gauss
rule supplies a conservative error estimate from the same evaluations. The
QUADPACK abscissae and weights are inlined below.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetExceededError

# Gauss-Kronrod 7/15: Kronrod abscissae (nonnegative half), Kronrod
# weights, and the embedded 7-point Gauss weights.
_XGK = np.array([
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
])
_WGK = np.array([
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
])
_WG = np.array([
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694,
])

# Full 15-node layout, sorted ascending; Gauss nodes sit at odd indices.
NODES_15 = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
WEIGHTS_K15 = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
WEIGHTS_G7 = np.concatenate([_WG[:3], [_WG[3]], _WG[2::-1]])
_G_SLICE = slice(1, 15, 2)

NODES_PER_PANEL = 15

# Phase advance per panel for the innermost variable. The Kronrod pair
# leaves orders of magnitude of accuracy margin here; the embedded
# Gauss-Kronrod discrepancy audits every panel regardless.
DEFAULT_PHASE_PER_PANEL = math.pi / 2

_PANEL_CHUNK = 1 << 16


def build_edges(lo: float, hi: float, deriv_bound: float,
                phase_per_panel: float = DEFAULT_PHASE_PER_PANEL,
                geometric: bool = False, min_panels: int = 4) -> np.ndarray:
    """Panel edges on [lo, hi] resolving |phase'| <= deriv_bound.

    ``geometric`` adds dyadically shrinking edges toward 0, isolating the
    kink the weight-flattening substitution leaves there for fractional
    weight exponents.
    """
    if hi <= lo:
        raise ValueError("empty panel range")
    span = hi - lo
    count = max(min_panels, math.ceil(span * deriv_bound / phase_per_panel))
    edges = np.linspace(lo, hi, count + 1)
    if geometric:
        g = 2.0 ** -np.arange(1, 49)
        extra = np.concatenate([-g, [0.0], g])
        extra = extra[(extra > lo) & (extra < hi)]
        edges = np.unique(np.concatenate([edges, extra]))
    return edges


def edge_count(lo: float, hi: float, deriv_bound: float,
               phase_per_panel: float = DEFAULT_PHASE_PER_PANEL,
               geometric: bool = False, min_panels: int = 4) -> int:
    """Panel count build_edges would produce (budget planning)."""
    count = max(min_panels,
                math.ceil((hi - lo) * deriv_bound / phase_per_panel))
    if geometric:
        count += 97
    return count


def integrate_exp_phase(phase_fn: Callable[[np.ndarray], np.ndarray],
                        edges: np.ndarray) -> tuple:
    """integral of exp(i * phase(u)) du over the panels; (value, err)."""
    total = 0.0 + 0.0j
    err = 0.0
    mids = 0.5 * (edges[1:] + edges[:-1])
    halfs = 0.5 * (edges[1:] - edges[:-1])
    for start in range(0, len(mids), _PANEL_CHUNK):
        mid = mids[start:start + _PANEL_CHUNK, None]
        half = halfs[start:start + _PANEL_CHUNK, None]
        f = np.exp(1j * phase_fn(mid + half * NODES_15[None, :]))
        k15 = (f @ WEIGHTS_K15) * half[:, 0]
        g7 = (f[:, _G_SLICE] @ WEIGHTS_G7) * half[:, 0]
        total += k15.sum()
        err += float(np.abs(k15 - g7).sum())
    return total, err


def integrate_exp_phase_2d(phase_fn, outer_edges: np.ndarray,
                           inner_edges_fn, node_budget: float,
                           inner_chunk_nodes: int = 1 << 22) -> tuple:
    """Iterated 2-D version; inner panels adapt to the outer coordinate.

    ``phase_fn(u1, u2)`` must broadcast; ``inner_edges_fn(sup_abs_u1)``
    returns the inner panel edges valid while |u1| <= sup_abs_u1. The
    inner error is propagated through the outer weights and added to the
    outer Gauss-Kronrod discrepancy.
    """
    o_mid = 0.5 * (outer_edges[1:] + outer_edges[:-1])
    o_half = 0.5 * (outer_edges[1:] - outer_edges[:-1])
    u1 = (o_mid[:, None] + o_half[:, None] * NODES_15[None, :]).ravel()
    n_outer = u1.size
    val_in = np.empty(n_outer, dtype=complex)
    err_in = np.empty(n_outer)
    spent = 0
    pos = 0
    while pos < n_outer:
        # Contiguous outer nodes share inner panels sized for the chunk's
        # largest |u1|; contiguity keeps the bound locally tight.
        probe_end = min(n_outer, pos + 4 * NODES_PER_PANEL)
        sup_u1 = float(np.max(np.abs(u1[pos:probe_end])))
        inner_edges = inner_edges_fn(sup_u1)
        n_inner = (len(inner_edges) - 1) * NODES_PER_PANEL
        take = max(1, int(inner_chunk_nodes // max(1, n_inner)))
        end = min(n_outer, pos + take)
        sup_u1 = float(np.max(np.abs(u1[pos:end])))
        inner_edges = inner_edges_fn(sup_u1)
        n_inner = (len(inner_edges) - 1) * NODES_PER_PANEL
        spent += (end - pos) * n_inner
        if spent > node_budget:
            raise BudgetExceededError(
                f"node budget {node_budget:.3g} exhausted in 2-D quadrature")
        i_mid = 0.5 * (inner_edges[1:] + inner_edges[:-1])
        i_half = 0.5 * (inner_edges[1:] - inner_edges[:-1])
        u2 = (i_mid[:, None] + i_half[:, None] * NODES_15[None, :]).ravel()
        f = np.exp(1j * phase_fn(u1[pos:end, None], u2[None, :]))
        f = f.reshape(end - pos, len(i_mid), NODES_PER_PANEL)
        k15 = f @ WEIGHTS_K15
        g7 = f[:, :, _G_SLICE] @ WEIGHTS_G7
        val_in[pos:end] = k15 @ i_half
        err_in[pos:end] = np.abs(k15 - g7) @ i_half
        pos = end
    val_in = val_in.reshape(-1, NODES_PER_PANEL)
    err_in = err_in.reshape(-1, NODES_PER_PANEL)
    k15_out = (val_in @ WEIGHTS_K15) * o_half
    g7_out = (val_in[:, _G_SLICE] @ WEIGHTS_G7) * o_half
    value = k15_out.sum()
    err = float(np.abs(k15_out - g7_out).sum())
    err += float(((err_in @ WEIGHTS_K15) * o_half).sum())
    return value, err


def plan_inner_nodes(outer_edges: np.ndarray, inner_count_fn) -> int:
    """Estimated total node count for the 2-D scheme (budget planning).

    ``inner_count_fn(sup_abs_u1)`` returns the inner panel count; every
    outer node evaluates the full inner rule.
    """
    o_mid = 0.5 * (outer_edges[1:] + outer_edges[:-1])
    o_half = 0.5 * (outer_edges[1:] - outer_edges[:-1])
    sup_per_panel = np.abs(o_mid) + np.abs(o_half)
    total = 0
    for sup in sup_per_panel:
        total += NODES_PER_PANEL * inner_count_fn(float(sup)) * NODES_PER_PANEL
    return total

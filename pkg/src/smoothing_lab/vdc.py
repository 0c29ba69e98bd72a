"""Certified upper bounds for 1-D oscillatory integrals.

Phases are generalized polynomials g(y) = sum c_i y^(rho_i) on (0, 1].
A falling-factorial gap constant guarantees that at every point some
derivative order dominates; dyadic intervals are split where the
dominance ratio crosses the certification threshold, and each certified
piece feeds a Van der Corput lemma with an explicit admissible constant.
Pieces that fail certification, and intervals where plain mass is
smaller, fall back to the triangle inequality, so the assembled total is
an upper bound by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import ConditioningError
from .parallel import pmap

LEMMA_VDC_HIGHER = "VdC_k>=2"
LEMMA_VDC_CURVATURE = "VdC_k=1_curvature"
LEMMA_TRIANGLE = "triangle_inequality"

DYADIC_DEPTH = 60

_DENSE_SAMPLES = 256
_CHECK_SAMPLES = 64
_BISECT_STEPS = 60
# Strictness margin for the k=1 curvature ratio precondition.
_CURVATURE_SLACK = 1e-9


@dataclass(frozen=True)
class PhaseSpec:
    """g(y) = sum c_i y^(rho_i), exponents strictly increasing positive."""

    exponents: Tuple[float, ...]
    coefficients: Tuple[float, ...]

    def __init__(self, exponents: Sequence[float],
                 coefficients: Sequence[float]):
        rho = tuple(float(e) for e in exponents)
        c = tuple(float(v) for v in coefficients)
        if len(rho) != len(c) or not rho:
            raise ValueError("need matching nonempty exponent and "
                             "coefficient lists")
        if any(e <= 0.0 for e in rho):
            raise ValueError("phase exponents must be positive")
        if any(b <= a for a, b in zip(rho, rho[1:])):
            raise ValueError("phase exponents must be strictly increasing")
        if all(v == 0.0 for v in c):
            raise ValueError("phase coefficients must not all vanish")
        object.__setattr__(self, "exponents", rho)
        object.__setattr__(self, "coefficients", c)

    @property
    def n(self) -> int:
        return len(self.exponents)

    def evaluate(self, y):
        acc = 0.0
        for e, v in zip(self.exponents, self.coefficients):
            acc = acc + v * np.asarray(y, dtype=float) ** e
        return acc

    def derivative(self, y, order: int):
        """g^(order)(y) for y > 0."""
        acc = 0.0
        for e, v in zip(self.exponents, self.coefficients):
            acc = acc + v * _falling(e, order) * np.asarray(y, float) ** (e - order)
        return acc

    def term_mass(self, y):
        """S(y) = sum |c_i| y^(rho_i)."""
        acc = 0.0
        for e, v in zip(self.exponents, self.coefficients):
            acc = acc + abs(v) * np.asarray(y, dtype=float) ** e
        return acc

    def to_dict(self) -> dict:
        return {"exponents": list(self.exponents),
                "coefficients": list(self.coefficients)}


@dataclass(frozen=True)
class AmplitudeSpec:
    """|y|^(-b) amplitude; the smooth factor is identically one here."""

    b: float = 0.0
    derivative_bound: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.b < 1.0:
            raise ValueError("amplitude exponent must satisfy 0 <= b < 1")
        if self.derivative_bound < 0.0:
            raise ValueError("derivative bound must be nonnegative")

    def mass(self, lo: float, hi: float) -> float:
        """integral of y^(-b) over [lo, hi], lo >= 0."""
        e = 1.0 - self.b
        return (hi ** e - lo ** e) / e

    def sup(self, lo: float, hi: float) -> float:
        if self.b == 0.0:
            return 1.0
        if lo <= 0.0:
            raise ValueError("singular amplitude needs lo > 0")
        return lo ** -self.b

    def end_value(self, hi: float) -> float:
        return 1.0 if self.b == 0.0 else hi ** -self.b

    def derivative_mass(self, lo: float, hi: float) -> float:
        """integral of |d/dy y^(-b)| over [lo, hi]."""
        if self.b == 0.0:
            return 0.0
        if lo <= 0.0:
            raise ValueError("singular amplitude needs lo > 0")
        return lo ** -self.b - hi ** -self.b

    def to_dict(self) -> dict:
        return {"b": self.b, "derivative_bound": self.derivative_bound}


@dataclass(frozen=True)
class DyadicPiece:
    """One audited subinterval of the assembled bound."""

    lo: float
    hi: float
    order: int
    lower_bound: float
    lemma: str
    bound: float

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "order": self.order,
                "lower_bound": self.lower_bound, "lemma": self.lemma,
                "bound": self.bound}


@dataclass(frozen=True)
class CertifiedPiece:
    """decompose_dyadic output: dominance claim before lemma application."""

    lo: float
    hi: float
    order: int
    lower_bound: float
    certified: bool


@dataclass(frozen=True)
class VdcBound:
    total: float
    pieces: Tuple[DyadicPiece, ...]

    def to_dict(self) -> dict:
        return {"total": self.total,
                "pieces": [p.to_dict() for p in self.pieces]}


def _falling(rho: float, order: int) -> float:
    out = 1.0
    for q in range(order):
        out *= rho - q
    return out


def falling_factorial_matrix(rho: Sequence[float]) -> np.ndarray:
    """Row p-1 holds the order-p falling factorials of each exponent."""
    rho = [float(e) for e in rho]
    if len(set(rho)) != len(rho):
        raise ValueError("exponents must be distinct")
    n = len(rho)
    return np.array([[_falling(e, p) for e in rho]
                     for p in range(1, n + 1)])


def gap_constant(rho: Sequence[float]) -> float:
    """epsilon with max_p |w_p . v| >= epsilon |v|_2 for all v.

    Uses the smallest singular value of the falling-factorial matrix
    scaled by sqrt(n): the max norm of the image dominates its Euclidean
    norm divided by sqrt(n).
    """
    w = falling_factorial_matrix(rho)
    sing = np.linalg.svd(w, compute_uv=False)
    sigma_min = float(sing[-1])
    sigma_max = float(sing[0])
    if sigma_min < 1e-12 * sigma_max:
        raise ConditioningError(
            f"falling-factorial matrix numerically singular for "
            f"exponents {tuple(rho)}", sigma_min=sigma_min)
    return sigma_min / math.sqrt(len(w))


def _dominance_ratios(phase: PhaseSpec, y: np.ndarray) -> np.ndarray:
    """F_p(y) = y^p |g^(p)(y)| / S(y), stacked over p = 1..n."""
    s = phase.term_mass(y)
    rows = []
    for p in range(1, phase.n + 1):
        rows.append(np.abs(y ** p * phase.derivative(y, p)) / s)
    return np.stack(rows)


def _endpoint_sum(coeffs: Sequence[float], expos: Sequence[float],
                  lo: float, hi: float, largest: bool) -> float:
    """sum |c_i| y^(e_i) bounded over [lo, hi] via endpoint monotonicity."""
    acc = 0.0
    for v, e in zip(coeffs, expos):
        lo_p, hi_p = lo ** e, hi ** e
        acc += abs(v) * (max(lo_p, hi_p) if largest else min(lo_p, hi_p))
    return acc


def _ratio_lipschitz(phase: PhaseSpec, p: int, lo: float, hi: float) -> float:
    """Upper bound for |F_p'| on [lo, hi] subset (0, 1]."""
    rho = phase.exponents
    c = phase.coefficients
    ff = [_falling(e, p) for e in rho]
    g_num = [v * f for v, f in zip(c, ff)]
    # d/dy of y^p g^(p) = sum c_i ff_p(rho_i) rho_i y^(rho_i - 1)
    num_deriv = _endpoint_sum([v * e for v, e in zip(g_num, rho)],
                              [e - 1.0 for e in rho], lo, hi, largest=True)
    num_sup = _endpoint_sum(g_num, rho, lo, hi, largest=True)
    s_inf = _endpoint_sum(c, rho, lo, hi, largest=False)
    s_deriv = _endpoint_sum([v * e for v, e in zip(c, rho)],
                            [e - 1.0 for e in rho], lo, hi, largest=True)
    if s_inf <= 0.0:
        return math.inf
    return num_deriv / s_inf + (num_sup / s_inf) * (s_deriv / s_inf)


def _certified_floor(phase: PhaseSpec, p: int, lo: float, hi: float,
                     epsilon: float) -> float:
    """A = (eps/2) inf over the piece of y^(-p) S(y), endpoint-rigorous."""
    rho = phase.exponents
    shifted = _endpoint_sum(phase.coefficients,
                            [e - p for e in rho], lo, hi, largest=False)
    return 0.5 * epsilon * shifted


def _decompose(phase: PhaseSpec, lo: float, hi: float,
               epsilon: float) -> List[CertifiedPiece]:
    half = 0.5 * epsilon
    n = phase.n
    grid = np.linspace(lo, hi, _DENSE_SAMPLES)
    ratios = _dominance_ratios(phase, grid)
    cuts = [lo, hi]
    for p_idx in range(n):
        level = ratios[p_idx] - half
        signs = np.sign(level)
        for k in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
            a, b = float(grid[k]), float(grid[k + 1])
            fa = float(level[k])
            for _ in range(_BISECT_STEPS):
                mid = 0.5 * (a + b)
                ratio = _dominance_ratios(phase, np.array([mid]))[p_idx, 0]
                if (ratio - half) * fa <= 0.0:
                    b = mid
                else:
                    a = mid
                    fa = ratio - half
            cuts.append(0.5 * (a + b))
    cuts = sorted(cuts)
    merged = [cuts[0]]
    for c in cuts[1:]:
        if c - merged[-1] > 1e-13 * (hi - lo):
            merged.append(c)
    merged[-1] = hi
    pieces = []
    for u, v in zip(merged[:-1], merged[1:]):
        probes = u + (v - u) * (np.arange(_CHECK_SAMPLES) + 0.5) / _CHECK_SAMPLES
        mins = _dominance_ratios(phase, probes).min(axis=1)
        p = int(np.argmax(mins)) + 1
        lip = _ratio_lipschitz(phase, p, u, v)
        certified = bool(
            mins[p - 1] - lip * (v - u) / (2 * _CHECK_SAMPLES) >= half)
        floor = _certified_floor(phase, p, u, v, epsilon) if certified else 0.0
        pieces.append(CertifiedPiece(lo=u, hi=v, order=p,
                                     lower_bound=floor, certified=certified))
    return pieces


def decompose_dyadic(phase: PhaseSpec, q: int) -> List[CertifiedPiece]:
    """Partition [2^-q-1, 2^-q) with per-piece dominance certificates."""
    if q < 0:
        raise ValueError("dyadic index must be nonnegative")
    eps = gap_constant(phase.exponents)
    return _decompose(phase, 2.0 ** (-q - 1), 2.0 ** -q, eps)


def vdc_constant(k: int) -> float:
    """Admissible Van der Corput constant, c_1 = 3, c_k = 2 c_(k-1) + 2."""
    if k < 1:
        raise ValueError("order must be at least 1")
    return 5.0 * 2.0 ** (k - 1) - 2.0


def vdc_interval_bound(lower_bound: float, order: int,
                       interval: Tuple[float, float],
                       amplitude: AmplitudeSpec,
                       curvature_ratio: float | None = None) -> float:
    """Certified bound for |integral of e^(i h) amplitude| on the interval.

    ``lower_bound`` is A with |h^(order)| >= A throughout; order 1
    additionally needs curvature_ratio = B with |h''| < (B / length) A.
    """
    a, b = interval
    if not 0.0 <= a < b:
        raise ValueError("interval must satisfy 0 <= a < b")
    if lower_bound <= 0.0:
        raise ValueError("derivative floor A must be positive")
    phi_end = amplitude.end_value(b)
    phi_var = amplitude.derivative_mass(a, b) if amplitude.b else 0.0
    if order >= 2:
        return (vdc_constant(order) * lower_bound ** (-1.0 / order)
                * (phi_end + phi_var))
    if curvature_ratio is None or curvature_ratio < 0.0:
        raise ValueError("order 1 needs a nonnegative curvature ratio B")
    phi_sup = amplitude.sup(a, b)
    return ((curvature_ratio + 2.0) * phi_sup + phi_var) / lower_bound


def _second_derivative_sup(phase: PhaseSpec, lo: float, hi: float) -> float:
    return _endpoint_sum(
        [v * _falling(e, 2) for v, e in zip(phase.coefficients,
                                            phase.exponents)],
        [e - 2.0 for e in phase.exponents], lo, hi, largest=True)


def _bound_one_interval(phase: PhaseSpec, amplitude: AmplitudeSpec,
                        lo: float, hi: float,
                        epsilon: float) -> List[DyadicPiece]:
    out = []
    for piece in _decompose(phase, lo, hi, epsilon):
        mass = amplitude.mass(piece.lo, piece.hi)
        if not piece.certified:
            out.append(DyadicPiece(piece.lo, piece.hi, piece.order, 0.0,
                                   LEMMA_TRIANGLE, mass))
            continue
        if piece.order >= 2:
            lemma = LEMMA_VDC_HIGHER
            val = vdc_interval_bound(piece.lower_bound, piece.order,
                                     (piece.lo, piece.hi), amplitude)
        else:
            lemma = LEMMA_VDC_CURVATURE
            span = piece.hi - piece.lo
            curv = (_second_derivative_sup(phase, piece.lo, piece.hi)
                    * span / piece.lower_bound) * (1.0 + _CURVATURE_SLACK)
            val = vdc_interval_bound(piece.lower_bound, 1,
                                     (piece.lo, piece.hi), amplitude,
                                     curvature_ratio=curv)
        if mass < val:
            out.append(DyadicPiece(piece.lo, piece.hi, piece.order, 0.0,
                                   LEMMA_TRIANGLE, mass))
        else:
            out.append(DyadicPiece(piece.lo, piece.hi, piece.order,
                                   piece.lower_bound, lemma, val))
    whole_mass = amplitude.mass(lo, hi)
    if whole_mass < sum(p.bound for p in out):
        return [DyadicPiece(lo, hi, 0, 0.0, LEMMA_TRIANGLE, whole_mass)]
    return out


def bound_oscillatory_integral(phase: PhaseSpec, amplitude: AmplitudeSpec,
                               delta: float = 1.0) -> VdcBound:
    """Assembled certified bound for |int_0^delta e^(i g(y)) y^(-b) dy|.

    Dyadic intervals down to 2^-61 get the better of the Van der Corput
    piece bounds and plain mass; the remaining stub near zero is counted
    as pure mass.
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    eps = gap_constant(phase.exponents)
    jobs = []
    for q in range(DYADIC_DEPTH + 1):
        lo = 2.0 ** (-q - 1)
        hi = min(2.0 ** -q, delta)
        if hi > lo:
            jobs.append((lo, hi))
    piece_lists = pmap(
        lambda span: _bound_one_interval(phase, amplitude, span[0], span[1],
                                         eps),
        jobs)
    pieces: List[DyadicPiece] = []
    for plist in piece_lists:
        pieces.extend(plist)
    tail_hi = min(2.0 ** -(DYADIC_DEPTH + 1), delta)
    pieces.append(DyadicPiece(0.0, tail_hi, 0, 0.0, LEMMA_TRIANGLE,
                              amplitude.mass(0.0, tail_hi)))
    pieces.sort(key=lambda p: p.lo)
    total = float(sum(p.bound for p in pieces))
    return VdcBound(total=total, pieces=tuple(pieces))

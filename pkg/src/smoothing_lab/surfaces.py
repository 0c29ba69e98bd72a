"""Admissible surface and kernel classes, and the nesting-ratio validator.

A surface is a map gamma: R^m -> R^n, n > 1, whose components vanish at the
origin and are nonconstant. Three families are admitted, each parameterized
by integer exponent data plus real coefficients:

``monomial_family``
    gamma_i(t) = c_i * t^alpha_i with alpha_i a multi-index in m variables.
``power_curve``
    m = 1 and gamma_i(t) = c_i * t^{b_i} with strictly increasing positive
    integer exponents.
``diagonal_sums``
    gamma_i(t) = sum_j c_ij * t_j^{d_i} with strictly increasing even
    exponents and positive coefficients.

The weight is always the canonical product kernel prod_j |t_j|^{-a_j} on the
box (-r, r)^m. General analytic surfaces and kernels are rejected by design:
these are exactly the families for which the nesting condition and the
smoothing exponent are decidable without desingularization machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import SingularPointError

MONOMIAL_FAMILY = "monomial_family"
POWER_CURVE = "power_curve"
DIAGONAL_SUMS = "diagonal_sums"

_FAMILIES = (MONOMIAL_FAMILY, POWER_CURVE, DIAGONAL_SUMS)

# Square-root-of-prime increments for the deterministic low-discrepancy
# probe points. Eight coordinates is plenty for desk-scale m.
_WEYL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)

PROBE_SHELL_RANGE = range(4, 21)
PROBE_POINTS_PER_DIM = 1000


@dataclass(frozen=True)
class SurfaceSpec:
    """One surface from the three admitted families.

    Do not call the constructor directly; use :meth:`monomial_family`,
    :meth:`power_curve` or :meth:`diagonal_sums`, which validate the
    family-specific constraints.
    """

    family: str
    m: int
    n: int
    # monomial_family: n rows of m nonnegative ints (multi-indices)
    # power_curve:     n strictly increasing positive ints
    # diagonal_sums:   n strictly increasing even positive ints
    exponents: tuple
    # monomial_family, power_curve: n nonzero reals
    # diagonal_sums: n rows of m positive reals
    coefficients: tuple

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown surface family {self.family!r}")
        if self.m < 1:
            raise ValueError("parameter dimension m must be >= 1")
        if self.n < 2:
            raise ValueError("ambient dimension n must be > 1")

    @classmethod
    def monomial_family(cls, alphas: Sequence[Sequence[int]],
                        coefficients: Sequence[float]) -> "SurfaceSpec":
        alphas = tuple(tuple(int(a) for a in row) for row in alphas)
        coefficients = tuple(float(c) for c in coefficients)
        n = len(alphas)
        if n < 2:
            raise ValueError("need n > 1 components")
        if len(coefficients) != n:
            raise ValueError("one coefficient per component required")
        m = len(alphas[0])
        for row in alphas:
            if len(row) != m:
                raise ValueError("all multi-indices must share the length m")
            if any(a < 0 for a in row):
                raise ValueError("multi-index entries must be nonnegative")
            if all(a == 0 for a in row):
                raise ValueError("each component must be nonconstant")
        if any(c == 0 for c in coefficients):
            raise ValueError("coefficients must be nonzero")
        return cls(MONOMIAL_FAMILY, m, n, alphas, coefficients)

    @classmethod
    def power_curve(cls, b: Sequence[int],
                    coefficients: Sequence[float] | None = None) -> "SurfaceSpec":
        b = tuple(int(x) for x in b)
        n = len(b)
        if n < 2:
            raise ValueError("need n > 1 components")
        if coefficients is None:
            coefficients = (1.0,) * n
        coefficients = tuple(float(c) for c in coefficients)
        if len(coefficients) != n:
            raise ValueError("one coefficient per component required")
        if b[0] < 1:
            raise ValueError("exponents must be positive integers")
        if any(b2 <= b1 for b1, b2 in zip(b, b[1:])):
            raise ValueError("exponents must be strictly increasing")
        if any(c == 0 for c in coefficients):
            raise ValueError("coefficients must be nonzero")
        return cls(POWER_CURVE, 1, n, b, coefficients)

    @classmethod
    def diagonal_sums(cls, d: Sequence[int],
                      coefficients: Sequence[Sequence[float]]) -> "SurfaceSpec":
        d = tuple(int(x) for x in d)
        coefficients = tuple(tuple(float(c) for c in row) for row in coefficients)
        n = len(d)
        if n < 2:
            raise ValueError("need n > 1 components")
        if len(coefficients) != n:
            raise ValueError("one coefficient row per component required")
        m = len(coefficients[0])
        if any(len(row) != m for row in coefficients):
            raise ValueError("all coefficient rows must share the length m")
        if any(x < 2 or x % 2 != 0 for x in d):
            raise ValueError("exponents must be positive even integers")
        if any(d2 <= d1 for d1, d2 in zip(d, d[1:])):
            raise ValueError("exponents must be strictly increasing")
        if any(c <= 0 for row in coefficients for c in row):
            raise ValueError("coefficients must be positive")
        return cls(DIAGONAL_SUMS, m, n, d, coefficients)


@dataclass(frozen=True)
class KernelSpec:
    """Canonical product weight prod_j |t_j|^{-a_j} supported on (-r, r)^m.

    ``lower_bounded`` asserts the two-sided comparability near 0 that the
    sharpness direction of the theory requires; for the canonical
    representative it is simply a flag the caller may switch off to model
    kernels without a lower bound.
    """

    a: tuple
    r: float = 1.0
    lower_bounded: bool = True

    def __init__(self, a: Sequence[float], r: float = 1.0,
                 lower_bounded: bool = True):
        object.__setattr__(self, "a", tuple(float(x) for x in a))
        object.__setattr__(self, "r", float(r))
        object.__setattr__(self, "lower_bounded", bool(lower_bounded))
        if any(not (0.0 <= x < 1.0) for x in self.a):
            raise ValueError("weight exponents must lie in [0, 1)")
        if not self.r > 0:
            raise ValueError("support radius must be positive")

    @property
    def m(self) -> int:
        return len(self.a)

    def total_mass(self) -> float:
        """Z = integral of the weight over its support box."""
        z = 1.0
        for aj in self.a:
            z *= 2.0 * self.r ** (1.0 - aj) / (1.0 - aj)
        return z


def evaluate_gamma(spec: SurfaceSpec, t) -> tuple:
    """Evaluate (gamma_1(t), ..., gamma_n(t)) with exact scalar arithmetic.

    Accepts a scalar for m = 1 or a length-m sequence. Integer and Fraction
    inputs propagate exactly when the coefficients are integral floats.
    """
    coords = _as_coords(spec, t)
    out = []
    if spec.family == MONOMIAL_FAMILY:
        for alpha, c in zip(spec.exponents, spec.coefficients):
            v = _exactify(c)
            for tj, aj in zip(coords, alpha):
                v = v * tj ** aj
            out.append(v)
    elif spec.family == POWER_CURVE:
        t1 = coords[0]
        for b, c in zip(spec.exponents, spec.coefficients):
            out.append(_exactify(c) * t1 ** b)
    else:
        for d, row in zip(spec.exponents, spec.coefficients):
            out.append(sum(_exactify(c) * tj ** d for c, tj in zip(row, coords)))
    return tuple(out)


def evaluate_kernel(kernel: KernelSpec, t) -> float:
    """prod_j |t_j|^{-a_j} inside the support box, 0 outside."""
    coords = [float(x) for x in _as_coords_m(kernel.m, t)]
    if any(abs(x) >= kernel.r for x in coords):
        return 0.0
    v = 1.0
    for x, aj in zip(coords, kernel.a):
        if aj > 0.0:
            if x == 0.0:
                raise SingularPointError(
                    "kernel is singular at coordinate zero (a > 0)")
            v *= abs(x) ** (-aj)
    return v


def _int_power(x: np.ndarray, k: int) -> np.ndarray:
    # numpy's pow loop is ~5x slower than multiplies for small exponents
    if k == 1:
        return x
    half = _int_power(x, k // 2)
    sq = half * half
    return sq if k % 2 == 0 else sq * x


def gamma_component(spec: SurfaceSpec, i: int, coords: Sequence[np.ndarray]) -> np.ndarray:
    """Vectorized gamma_i over arrays of coordinates (broadcasting allowed)."""
    if spec.family == MONOMIAL_FAMILY:
        alpha = spec.exponents[i]
        v = np.asarray(spec.coefficients[i], dtype=float)
        acc = None
        for tj, aj in zip(coords, alpha):
            if aj == 0:
                continue
            term = _int_power(np.asarray(tj, dtype=float), aj)
            acc = term if acc is None else acc * term
        return v * acc
    if spec.family == POWER_CURVE:
        return spec.coefficients[i] * _int_power(
            np.asarray(coords[0], dtype=float), spec.exponents[i])
    d = spec.exponents[i]
    row = spec.coefficients[i]
    acc = row[0] * _int_power(np.asarray(coords[0], dtype=float), d)
    for c, tj in zip(row[1:], coords[1:]):
        acc = acc + c * _int_power(np.asarray(tj, dtype=float), d)
    return acc


def gamma_sup(spec: SurfaceSpec, i: int, coord_sups: Sequence[float]) -> float:
    """Upper bound for |gamma_i| on the box |t_j| <= coord_sups[j]."""
    if spec.family == MONOMIAL_FAMILY:
        v = abs(spec.coefficients[i])
        for s, aj in zip(coord_sups, spec.exponents[i]):
            v *= s ** aj
        return v
    if spec.family == POWER_CURVE:
        return abs(spec.coefficients[i]) * coord_sups[0] ** spec.exponents[i]
    d = spec.exponents[i]
    return sum(c * s ** d for c, s in zip(spec.coefficients[i], coord_sups))


def gamma_partial_sup(spec: SurfaceSpec, i: int, j: int,
                      coord_sups: Sequence[float]) -> float:
    """Upper bound for |d gamma_i / d t_j| on the box |t_l| <= coord_sups[l]."""
    if spec.family == MONOMIAL_FAMILY:
        alpha = spec.exponents[i]
        if alpha[j] == 0:
            return 0.0
        v = abs(spec.coefficients[i]) * alpha[j]
        for l, (s, al) in enumerate(zip(coord_sups, alpha)):
            e = al - 1 if l == j else al
            v *= s ** e
        return v
    if spec.family == POWER_CURVE:
        b = spec.exponents[i]
        return abs(spec.coefficients[i]) * b * coord_sups[0] ** (b - 1)
    d = spec.exponents[i]
    return spec.coefficients[i][j] * d * coord_sups[j] ** (d - 1)


@dataclass(frozen=True)
class WitnessPath:
    """Curve t(s) = (s^{p_1}, ..., s^{p_m}) exhibiting a non-vanishing ratio.

    ``ratio_exponent`` is the power of s in |gamma_{i+1}/gamma_i| along the
    path; <= 0 means the ratio does not tend to zero as s -> 0.
    """

    powers: tuple
    ratio_exponent: int

    def describe(self) -> str:
        coords = ", ".join(f"s^{p}" if p != 1 else "s" for p in self.powers)
        return (f"t(s) = ({coords}): ratio scales like s^{self.ratio_exponent}"
                " as s -> 0")


@dataclass(frozen=True)
class PairCheck:
    """Outcome of the nesting test for one adjacent component pair."""

    index: int              # pair (index, index + 1), zero-based
    passed: bool
    detail: str
    witness: WitnessPath | None = None


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    pairs: tuple
    # advisory probe: shell_suprema[pair][k_pos] = sup |gamma_{i+1}/gamma_i|
    # over the deterministic sample of the shell |t| = 2^{-k}
    shell_exponents: tuple = field(default_factory=tuple)
    shell_suprema: tuple = field(default_factory=tuple)


def validate_ratio_condition(spec: SurfaceSpec) -> ValidationReport:
    """Check gamma_{i+1}/gamma_i -> 0 at the origin for each adjacent pair.

    The decision is exact per family: a monomial pair passes iff the
    exponent difference is componentwise >= 0 and not identically 0; the
    other two families pass by construction (strictly increasing exponent
    ladders). A deterministic low-discrepancy probe additionally samples
    sup |gamma_{i+1}/gamma_i| on the shells |t| = 2^{-k}, k = 4..20; the
    probe is advisory and never overrides the exact rule.
    """
    pairs = []
    for i in range(spec.n - 1):
        pairs.append(_check_pair(spec, i))
    shells = tuple(PROBE_SHELL_RANGE)
    sups = _probe_shell_suprema(spec, shells)
    return ValidationReport(
        passed=all(p.passed for p in pairs),
        pairs=tuple(pairs),
        shell_exponents=shells,
        shell_suprema=sups,
    )


def _check_pair(spec: SurfaceSpec, i: int) -> PairCheck:
    if spec.family == POWER_CURVE:
        return PairCheck(i, True, "power exponents strictly increase")
    if spec.family == DIAGONAL_SUMS:
        return PairCheck(i, True, "diagonal exponents strictly increase")
    lo = spec.exponents[i]
    hi = spec.exponents[i + 1]
    delta = tuple(h - l for h, l in zip(hi, lo))
    if all(d == 0 for d in delta):
        witness = WitnessPath(powers=(1,) * spec.m, ratio_exponent=0)
        return PairCheck(i, False,
                         "identical multi-indices give a constant ratio",
                         witness)
    if all(d >= 0 for d in delta):
        return PairCheck(i, True,
                         f"exponent difference {delta} is componentwise >= 0")
    witness = _monomial_witness(delta)
    return PairCheck(
        i, False,
        f"exponent difference {delta} has a negative component", witness)


def _monomial_witness(delta: Sequence[int]) -> WitnessPath:
    # Walk to 0 fast along the coordinates where the ratio loses powers.
    neg = sum(d for d in delta if d < 0)
    pos = sum(d for d in delta if d > 0)
    big = pos // (-neg) + 1
    powers = tuple(big if d < 0 else 1 for d in delta)
    exponent = sum(p * d for p, d in zip(powers, delta))
    return WitnessPath(powers=powers, ratio_exponent=exponent)


def _probe_shell_suprema(spec: SurfaceSpec, shells: Sequence[int]) -> tuple:
    coords0 = _weyl_box_points(spec.m, PROBE_POINTS_PER_DIM * spec.m)
    scale = np.max(np.abs(coords0), axis=0)
    out = []
    for i in range(spec.n - 1):
        row = []
        for k in shells:
            coords = [(2.0 ** -k) * c / scale for c in coords0]
            lo = np.abs(gamma_component(spec, i, coords))
            hi = np.abs(gamma_component(spec, i + 1, coords))
            ok = lo > 0
            row.append(float(np.max(hi[ok] / lo[ok])) if ok.any() else math.inf)
        out.append(tuple(row))
    return tuple(out)


def _weyl_box_points(m: int, count: int) -> list:
    """Deterministic low-discrepancy points in [-1,1]^m, no zero coordinates."""
    idx = np.arange(1, count + 1, dtype=float)
    cols = []
    for j in range(m):
        alpha = math.sqrt(_WEYL_PRIMES[j % len(_WEYL_PRIMES)])
        v = np.modf(idx * alpha + 0.5)[0]
        w = 2.0 * v - 1.0
        w[w == 0.0] = 1e-9
        cols.append(w)
    return cols


# -- schema ------------------------------------------------------------------

def surface_to_dict(spec: SurfaceSpec) -> dict:
    if spec.family == MONOMIAL_FAMILY:
        exps = [list(row) for row in spec.exponents]
        coeffs = list(spec.coefficients)
    elif spec.family == POWER_CURVE:
        exps = list(spec.exponents)
        coeffs = list(spec.coefficients)
    else:
        exps = list(spec.exponents)
        coeffs = [list(row) for row in spec.coefficients]
    return {
        "class": spec.family,
        "m": spec.m,
        "n": spec.n,
        "exponents": exps,
        "coefficients": coeffs,
    }


def surface_from_dict(doc: dict) -> SurfaceSpec:
    try:
        family = doc["class"]
        exps = doc["exponents"]
        coeffs = doc["coefficients"]
    except KeyError as exc:
        raise ValueError(f"surface table is missing field {exc.args[0]!r}") from None
    if family == MONOMIAL_FAMILY:
        spec = SurfaceSpec.monomial_family(exps, coeffs)
    elif family == POWER_CURVE:
        spec = SurfaceSpec.power_curve(exps, coeffs)
    elif family == DIAGONAL_SUMS:
        spec = SurfaceSpec.diagonal_sums(exps, coeffs)
    else:
        raise ValueError(f"unknown surface class {family!r}")
    for key in ("m", "n"):
        if key in doc and int(doc[key]) != getattr(spec, key):
            raise ValueError(
                f"declared {key}={doc[key]} disagrees with the exponent data "
                f"({key}={getattr(spec, key)})")
    return spec


def kernel_to_dict(kernel: KernelSpec) -> dict:
    return {
        "a": list(kernel.a),
        "r": kernel.r,
        "lower_bounded": kernel.lower_bounded,
    }


def kernel_from_dict(doc: dict) -> KernelSpec:
    try:
        a = doc["a"]
        r = doc["r"]
    except KeyError as exc:
        raise ValueError(f"kernel table is missing field {exc.args[0]!r}") from None
    return KernelSpec(a=a, r=r, lower_bounded=bool(doc.get("lower_bounded", True)))


# -- helpers -----------------------------------------------------------------

def _as_coords(spec: SurfaceSpec, t):
    return _as_coords_m(spec.m, t)


def _as_coords_m(m: int, t):
    if np.isscalar(t) or isinstance(t, (int, float, Fraction)):
        coords = [t]
    else:
        coords = list(t)
    if len(coords) != m:
        raise ValueError(f"expected a point in R^{m}, got {len(coords)} coordinates")
    return coords


def _exactify(c: float):
    # Keep integer-valued coefficients exact so integer/Fraction inputs
    # evaluate without rounding.
    return int(c) if float(c).is_integer() else c

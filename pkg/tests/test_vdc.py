"""Tests for the certified oscillatory bound machinery."""

import json
import math

import numpy as np
import pytest

import oracles
from smoothing_lab.errors import ConditioningError
from smoothing_lab.vdc import (
    LEMMA_TRIANGLE,
    LEMMA_VDC_CURVATURE,
    LEMMA_VDC_HIGHER,
    AmplitudeSpec,
    PhaseSpec,
    bound_oscillatory_integral,
    decompose_dyadic,
    falling_factorial_matrix,
    gap_constant,
    vdc_constant,
    vdc_interval_bound,
)

GAP_ONE_TWO = 0.4841854633561013


def _random_phase(rng, max_terms=3, coeff_scale=1e3):
    nterm = int(rng.integers(1, max_terms + 1))
    expos = np.sort(rng.choice(np.arange(1, 7), size=nterm, replace=False))
    coeffs = rng.uniform(-coeff_scale, coeff_scale, size=nterm)
    if not np.any(coeffs):
        coeffs[0] = coeff_scale
    return PhaseSpec(tuple(float(e) for e in expos),
                     tuple(float(c) for c in coeffs))


# -- falling-factorial matrix and gap constant -------------------------------


def test_falling_factorial_matrix_pair():
    w = falling_factorial_matrix((1.0, 2.0))
    assert np.array_equal(w, [[1.0, 2.0], [0.0, 2.0]])


def test_falling_factorial_matrix_triple():
    w = falling_factorial_matrix((1.0, 2.0, 3.0))
    assert np.array_equal(w, [[1.0, 2.0, 3.0],
                              [0.0, 2.0, 6.0],
                              [0.0, 0.0, 6.0]])
    assert np.linalg.det(w) == pytest.approx(12.0, rel=1e-12)


def test_falling_factorial_determinant_identity():
    # det W = (prod rho_i) * prod_{i<j} (rho_j - rho_i): pulling the common
    # factor rho out of each column leaves a monic degree basis, so the
    # remaining determinant is Vandermonde.
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        rho = np.sort(rng.choice(np.arange(1, 9), size=n, replace=False))
        rho = [float(e) for e in rho]
        expected = math.prod(rho)
        for i in range(n):
            for j in range(i + 1, n):
                expected *= rho[j] - rho[i]
        det = np.linalg.det(falling_factorial_matrix(rho))
        assert det == pytest.approx(expected, rel=1e-10)


def test_falling_factorial_rejects_duplicates():
    with pytest.raises(ValueError):
        falling_factorial_matrix((1.0, 2.0, 2.0))


def test_gap_constant_single_exponent():
    assert gap_constant((3.0,)) == 3.0


def test_gap_constant_pair_value():
    assert gap_constant((1.0, 2.0)) == pytest.approx(GAP_ONE_TWO, abs=1e-15)


def test_gap_certificate_on_unit_vectors():
    # The defining property: some row of W sees every unit vector at
    # magnitude >= epsilon.  Checked on integer and non-integer exponents.
    rng = np.random.default_rng(101)
    for rho in ((1.0, 2.0), (0.5, 1.7, 3.2)):
        w = falling_factorial_matrix(rho)
        eps = gap_constant(rho)
        v = rng.normal(size=(10_000, len(rho)))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        row_hits = np.abs(v @ w.T).max(axis=1)
        assert row_hits.min() >= eps * (1.0 - 1e-12)


def test_gap_constant_conditioning_error():
    with pytest.raises(ConditioningError) as info:
        gap_constant((1.0, 1.0 + 1e-13))
    assert 0.0 < info.value.sigma_min < 1e-12
    # A gap of 1e-11 is tight but still above the relative threshold.
    assert gap_constant((1.0, 1.0 + 1e-11)) > 0.0


# -- phase and amplitude specs -----------------------------------------------


def test_phase_spec_validation():
    with pytest.raises(ValueError):
        PhaseSpec((), ())
    with pytest.raises(ValueError):
        PhaseSpec((1.0, 2.0), (1.0,))
    with pytest.raises(ValueError):
        PhaseSpec((0.0, 2.0), (1.0, 1.0))
    with pytest.raises(ValueError):
        PhaseSpec((2.0, 1.0), (1.0, 1.0))
    with pytest.raises(ValueError):
        PhaseSpec((1.0, 2.0), (0.0, 0.0))


def test_phase_spec_evaluation():
    g = PhaseSpec((1.0, 2.0), (1.0, -1.0))
    assert g.n == 2
    assert g.evaluate(0.5) == pytest.approx(0.25, abs=1e-15)
    assert g.derivative(0.5, 1) == pytest.approx(0.0, abs=1e-15)
    assert g.derivative(0.25, 2) == pytest.approx(-2.0, abs=1e-15)
    assert g.term_mass(0.5) == pytest.approx(0.75, abs=1e-15)
    assert g.to_dict() == {"exponents": [1.0, 2.0],
                           "coefficients": [1.0, -1.0]}


def test_amplitude_validation_and_mass():
    with pytest.raises(ValueError):
        AmplitudeSpec(b=-0.1)
    with pytest.raises(ValueError):
        AmplitudeSpec(b=1.0)
    with pytest.raises(ValueError):
        AmplitudeSpec(derivative_bound=-1.0)
    amp = AmplitudeSpec(b=0.3)
    assert amp.mass(0.0, 1.0) == pytest.approx(1.0 / 0.7, rel=1e-15)
    assert amp.sup(0.25, 1.0) == pytest.approx(0.25 ** -0.3, rel=1e-15)
    assert amp.end_value(0.5) == pytest.approx(0.5 ** -0.3, rel=1e-15)
    assert amp.derivative_mass(0.25, 1.0) == pytest.approx(
        0.25 ** -0.3 - 1.0, rel=1e-14)
    with pytest.raises(ValueError):
        amp.sup(0.0, 1.0)
    flat = AmplitudeSpec()
    assert flat.mass(0.0, 1.0) == 1.0
    assert flat.sup(0.0, 1.0) == 1.0
    assert flat.derivative_mass(0.0, 1.0) == 0.0


# -- interval lemmas ---------------------------------------------------------


def test_vdc_constant_recursion():
    assert vdc_constant(1) == 3.0
    for k in range(2, 9):
        assert vdc_constant(k) == 2.0 * vdc_constant(k - 1) + 2.0
    with pytest.raises(ValueError):
        vdc_constant(0)


def test_interval_bound_linear_phase():
    # h = A y has no curvature, so B = 0 and the bound is 2 / A, which
    # dominates the exact value |e^(iA) - 1| / A.
    for big_a in (10.0, 250.0):
        bound = vdc_interval_bound(big_a, 1, (0.0, 1.0), AmplitudeSpec(),
                                   curvature_ratio=0.0)
        assert bound == pytest.approx(2.0 / big_a, rel=1e-15)
        exact = abs(np.exp(1j * big_a) - 1.0) / big_a
        assert exact <= bound


def test_interval_bound_order_one_example():
    # h = 100 y^2 on [1/2, 1]: |h'| >= 100 and |h''| = 200 = (B/len) A
    # with B = 1, so the first-order bound is (1 + 2) / 100.
    bound = vdc_interval_bound(100.0, 1, (0.5, 1.0), AmplitudeSpec(),
                               curvature_ratio=1.0)
    assert bound == pytest.approx(0.03, rel=1e-15)
    truth, gap = oracles.oscillatory_integral(lambda y: 100.0 * y * y,
                                              0.5, 1.0, min_panels=200)
    assert abs(truth) + gap <= bound


def test_interval_bound_order_two_example():
    # h = 100 y^2 on [0, 1]: |h''| = 200 and c_2 = 8 give 8 / sqrt(200).
    bound = vdc_interval_bound(200.0, 2, (0.0, 1.0), AmplitudeSpec())
    assert bound == pytest.approx(0.565685424949238, abs=1e-14)
    truth, gap = oracles.oscillatory_integral(lambda y: 100.0 * y * y,
                                              0.0, 1.0, min_panels=200)
    assert abs(truth) + gap <= bound


def test_interval_bound_weighted_amplitude():
    bound = vdc_interval_bound(200.0, 2, (0.25, 1.0), AmplitudeSpec(b=0.3))
    expected = 8.0 * 200.0 ** -0.5 * (1.0 + (0.25 ** -0.3 - 1.0))
    assert bound == pytest.approx(expected, rel=1e-15)


def test_interval_bound_validation():
    amp = AmplitudeSpec()
    with pytest.raises(ValueError):
        vdc_interval_bound(0.0, 2, (0.0, 1.0), amp)
    with pytest.raises(ValueError):
        vdc_interval_bound(1.0, 2, (0.5, 0.5), amp)
    with pytest.raises(ValueError):
        vdc_interval_bound(1.0, 2, (-0.1, 1.0), amp)
    with pytest.raises(ValueError):
        vdc_interval_bound(1.0, 1, (0.0, 1.0), amp)
    with pytest.raises(ValueError):
        vdc_interval_bound(1.0, 1, (0.0, 1.0), amp, curvature_ratio=-1.0)


# -- dyadic decomposition ----------------------------------------------------


def test_decompose_square_phase_single_piece():
    # g = y^2: the only dominance ratio is F_1 = 2, always above eps/2 = 1,
    # so each dyadic interval is one certified order-1 piece with floor
    # A = inf y^(-1) y^2 = left endpoint.
    pieces = decompose_dyadic(PhaseSpec((2.0,), (1.0,)), 3)
    assert len(pieces) == 1
    piece = pieces[0]
    assert (piece.lo, piece.hi) == (2.0 ** -4, 2.0 ** -3)
    assert piece.order == 1
    assert piece.certified
    assert piece.lower_bound == pytest.approx(2.0 ** -4, rel=1e-15)


def test_decompose_breakpoint_matches_threshold_crossing():
    # g = y - y^2 on [1/4, 1/2): F_1 = (1 - 2y) / (1 + y) falls through
    # eps/2 at y = (1 - eps/2) / (2 + eps/2); the bisected cut must land
    # on that root.
    phase = PhaseSpec((1.0, 2.0), (1.0, -1.0))
    pieces = decompose_dyadic(phase, 1)
    assert len(pieces) == 2
    half = 0.5 * gap_constant((1.0, 2.0))
    root = (1.0 - half) / (2.0 + half)
    assert pieces[0].hi == pytest.approx(root, abs=1e-12)
    assert pieces[0].hi == pytest.approx(0.338036, abs=1e-5)
    assert pieces[0].lo == 0.25
    assert pieces[1].hi == 0.5
    assert pieces[0].hi == pieces[1].lo
    for piece in pieces:
        assert piece.certified
        assert piece.order == 2


def test_decompose_negative_index_raises():
    with pytest.raises(ValueError):
        decompose_dyadic(PhaseSpec((2.0,), (1.0,)), -1)


def test_certified_dominance_holds_pointwise():
    rng = np.random.default_rng(23)
    cases = [(PhaseSpec((1.0, 2.0), (1.0, -1.0)), (1, 2, 3))]
    for _ in range(2):
        cases.append((_random_phase(rng, max_terms=3), (0, 3)))
    checked = 0
    for phase, qs in cases:
        eps = gap_constant(phase.exponents)
        for q in qs:
            for piece in decompose_dyadic(phase, q):
                if not piece.certified:
                    continue
                y = rng.uniform(piece.lo, piece.hi, size=1000)
                floor = 0.5 * eps * y ** -piece.order * phase.term_mass(y)
                deriv = np.abs(phase.derivative(y, piece.order))
                assert np.all(deriv >= floor * (1.0 - 1e-9))
                assert np.all(floor >= piece.lower_bound * (1.0 - 1e-12))
                checked += 1
    assert checked >= 6


def test_piece_count_stays_small():
    # Regression guard: three-term phases with exponents up to 6 have at
    # most a handful of threshold crossings per dyadic interval.
    rng = np.random.default_rng(0)
    worst = 0
    for _ in range(100):
        phase = _random_phase(rng, max_terms=3)
        for q in (0, 2, 5):
            worst = max(worst, len(decompose_dyadic(phase, q)))
    assert worst <= 12


# -- assembled bounds --------------------------------------------------------


def test_assembled_bound_tiny_phase_is_pure_mass():
    # Dominance ratios are scale invariant, so the pieces certify, but the
    # Van der Corput values blow up like A^(-1/k) and plain mass wins
    # everywhere: the total collapses to the amplitude mass of (0, 1].
    result = bound_oscillatory_integral(PhaseSpec((2.0,), (1e-9,)),
                                        AmplitudeSpec())
    assert result.total == pytest.approx(1.0, rel=1e-12)
    assert {p.lemma for p in result.pieces} == {LEMMA_TRIANGLE}


def test_assembled_bound_fresnel():
    result = bound_oscillatory_integral(PhaseSpec((2.0,), (1e4,)),
                                        AmplitudeSpec())
    truth = oracles.weighted_phase_magnitude((2.0,), (1e4,), 0.0, 1.0)
    assert truth <= result.total <= 20.0 / math.sqrt(1e4)
    assert result.total == pytest.approx(0.0560500000124, rel=1e-9)
    lemmas = {p.lemma for p in result.pieces}
    assert LEMMA_VDC_CURVATURE in lemmas
    # A single exponent offers only first derivatives, so no k >= 2 piece.
    assert LEMMA_VDC_HIGHER not in lemmas


def test_assembled_bound_uses_all_three_lemmas():
    # 1e4 (y - y^2) has a stationary point at 1/2 where only the second
    # derivative is bounded below: both lemma orders and the mass fallback
    # appear in one assembly.
    result = bound_oscillatory_integral(PhaseSpec((1.0, 2.0), (1e4, -1e4)),
                                        AmplitudeSpec())
    lemmas = {p.lemma for p in result.pieces}
    assert lemmas == {LEMMA_TRIANGLE, LEMMA_VDC_CURVATURE, LEMMA_VDC_HIGHER}
    truth = oracles.weighted_phase_magnitude((1.0, 2.0), (1e4, -1e4),
                                             0.0, 1.0)
    assert result.total >= truth


def test_assembled_bound_soundness_random():
    rng = np.random.default_rng(42)
    for _ in range(10):
        phase = _random_phase(rng)
        for b in (0.0, 0.3):
            amp = AmplitudeSpec(b=b)
            result = bound_oscillatory_integral(phase, amp)
            truth = oracles.weighted_phase_magnitude(
                phase.exponents, phase.coefficients, b, 1.0)
            assert result.total >= truth * (1.0 - 1e-9)
            assert result.total <= amp.mass(0.0, 1.0) * (1.0 + 1e-12)


def test_assembled_bound_improves_with_scale():
    # Dominance cuts are scale invariant while every certified lemma value
    # shrinks with the coefficient, so the total is nonincreasing.
    totals = []
    for lam in (1.0, 2.0, 10.0, 100.0, 1e4):
        result = bound_oscillatory_integral(
            PhaseSpec((1.0, 2.0), (lam, -lam)), AmplitudeSpec())
        totals.append(result.total)
    for prev, cur in zip(totals, totals[1:]):
        assert cur <= prev * (1.0 + 1e-9)
    assert totals[-1] < 0.5 * totals[0]


def test_assembled_bound_partition_and_total():
    result = bound_oscillatory_integral(PhaseSpec((1.0, 3.0), (50.0, 2.0)),
                                        AmplitudeSpec(b=0.25), delta=0.7)
    pieces = result.pieces
    assert pieces[0].lo == 0.0
    assert pieces[-1].hi == 0.7
    for left, right in zip(pieces, pieces[1:]):
        assert left.hi == right.lo
    assert result.total == pytest.approx(sum(p.bound for p in pieces),
                                         rel=1e-15)
    with pytest.raises(ValueError):
        bound_oscillatory_integral(PhaseSpec((2.0,), (1.0,)),
                                   AmplitudeSpec(), delta=0.0)
    with pytest.raises(ValueError):
        bound_oscillatory_integral(PhaseSpec((2.0,), (1.0,)),
                                   AmplitudeSpec(), delta=1.5)


def test_bound_audit_serialization():
    result = bound_oscillatory_integral(PhaseSpec((2.0,), (100.0,)),
                                        AmplitudeSpec())
    payload = result.to_dict()
    assert set(payload) == {"total", "pieces"}
    assert payload["total"] == result.total
    first = payload["pieces"][0]
    assert set(first) == {"lo", "hi", "order", "lower_bound", "lemma",
                          "bound"}
    json.dumps(payload)

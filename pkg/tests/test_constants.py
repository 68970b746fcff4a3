import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meanscope.errors import DegenerateBoundsError, HypothesisError, InputError
from meanscope.constants import (
    certify_hadamard_constants,
    chord,
    chord_constants,
    chord_gap_on_grid,
    derived_constants,
    golden_max,
    greub_rheinboldt_classical,
    hadamard_constants,
    bounds_form_mu,
    bounds_form_nu,
    rev_ando_constant,
    shisha_constant,
    variance_bound,
)
from meanscope.means import arithmetic, geometric, representing_fn, right_trivial

SQRT = geometric(0.5)


def _box(rng):
    b1, b2 = np.exp(rng.uniform(np.log(0.25), np.log(4), 2))
    a1, a2 = np.array([b1, b2]) * np.exp(rng.uniform(np.log(1.2), np.log(10), 2))
    return float(a1), float(b1), float(a2), float(b2)


def test_sqrt_symmetric_box():
    cc = chord_constants(SQRT, 4, 1, 4, 1, 0.5)
    assert (cc.u, cc.v) == (0.25, 4.0)
    assert cc.mu == pytest.approx(0.4, abs=1e-12)
    assert cc.nu == pytest.approx(0.4, abs=1e-12)
    assert cc.omega == pytest.approx(1.0, abs=1e-12)
    # the same numbers from the Diaz-Metcalf form with m1=m2=1, M1=M2=2
    assert cc.omega == pytest.approx(2 * 1 / (2 * 1))
    assert cc.right_factor == pytest.approx((2 / 1 + 1 / 2) / 2, abs=1e-12)


def test_sqrt_shifted_box():
    cc = chord_constants(SQRT, 4, 1, 1, 0.25, 0.5)
    assert cc.mu == pytest.approx(0.8, abs=1e-12)
    assert cc.nu == pytest.approx(0.2, abs=1e-12)
    assert cc.omega == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("f", [right_trivial(), arithmetic(1.0)], ids=["right-trivial", "arith1"])
def test_identity_chord(f):
    cc = chord_constants(f, 3, 0.5, 2, 0.7, 0.3)
    assert cc.mu == pytest.approx(1.0)
    assert cc.nu == pytest.approx(0.0, abs=1e-14)
    assert cc.omega_undefined and cc.omega is None and cc.omega_eff == 0.0


def test_derived_values():
    dc = derived_constants(chord_constants(SQRT, 4, 1, 4, 1, 0.5))
    assert dc.rev_ando_add == pytest.approx(1 / (4 * 0.4) - 0.4, abs=1e-12)
    assert dc.rev_ando_add == pytest.approx(0.225, abs=1e-12)
    assert dc.shisha == pytest.approx(0.5, abs=1e-12)
    assert dc.shisha == pytest.approx((math.sqrt(2) - math.sqrt(0.5)) ** 2, abs=1e-12)
    assert dc.greub_factor == pytest.approx(1.25, abs=1e-12)


def test_shisha_at_unit_omega():
    cc = chord_constants(SQRT, 4, 1, 4, 1, 0.5)
    assert shisha_constant(cc.mu, cc.nu) == pytest.approx(1 / cc.mu - 2)


def test_variance_bound_and_classical_greub():
    assert variance_bound(1, 4) == 2.25
    assert greub_rheinboldt_classical(1, 4) == pytest.approx(1.5625)


def test_alpha_must_be_open():
    for a in (0.0, 1.0, 1.5):
        with pytest.raises(InputError):
            chord_constants(SQRT, 4, 1, 4, 1, a)


def test_degenerate_box():
    with pytest.raises(DegenerateBoundsError):
        chord_constants(SQRT, 1, 1, 2, 2, 0.5)


def test_bounds_form_matches_chord_on_random_boxes():
    rng = np.random.default_rng(3)
    for f in (geometric(0.25), SQRT, geometric(0.75), arithmetic(0.4)):
        for _ in range(100):
            box = _box(rng)
            cc = chord_constants(f, *box, 0.5)
            assert bounds_form_mu(f, *box) == pytest.approx(cc.mu, rel=1e-12, abs=1e-12)
            assert bounds_form_nu(f, *box) == pytest.approx(cc.nu, rel=1e-12, abs=1e-12)


@settings(max_examples=100)
@given(st.floats(0.05, 0.95), st.floats(0.01, 10), st.floats(1.01, 100))
def test_half_weight_reduction(alpha, u, ratio):
    mu, nu = chord(SQRT, u, u * ratio)
    assert rev_ando_constant(mu, nu, 0.5) == pytest.approx(1 / (4 * mu) - nu, rel=1e-12, abs=1e-12)


@settings(max_examples=100)
@given(st.floats(0.1, 3), st.floats(1.05, 10))
def test_shisha_matches_ratio_parametrization(m, r):
    M = m * r
    mu, nu = chord(SQRT, m * m, M * M)
    assert shisha_constant(mu, nu) == pytest.approx((math.sqrt(M) - math.sqrt(m)) ** 2, rel=1e-10, abs=1e-12)


@settings(max_examples=60)
@given(st.floats(0.05, 0.95), st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10))
def test_scaling_covariance(alpha, s1, s2, s3):
    # scaling A by s1 and B by s2 moves [u, v] by s2/s1; f = t^a gives mu ~ (s2/s1)^(a-1)
    f = geometric(alpha)
    base = chord_constants(f, 4, 1, 3, 0.5, alpha)
    k = s2 / s1
    sc = chord_constants(f, 4 * s1, s1, 3 * s2, 0.5 * s2, alpha)
    assert sc.mu == pytest.approx(base.mu * k ** (alpha - 1), rel=1e-10)
    assert sc.nu == pytest.approx(base.nu * k ** alpha, rel=1e-10)
    assert sc.omega == pytest.approx(base.omega * k, rel=1e-10)
    # a common scaling leaves everything unchanged
    same = chord_constants(f, 4 * s3, s3, 3 * s3, 0.5 * s3, alpha)
    assert same.mu == pytest.approx(base.mu, rel=1e-10)


def test_constants_monotone_in_box_width():
    # widening the ratio interval makes the chord a worse fit: alpha/mu grows
    prev = 0
    for a in (1.5, 2, 4, 8, 16):
        cc = chord_constants(SQRT, a, 1, a, 1, 0.5)
        assert cc.right_factor > prev
        prev = cc.right_factor


@pytest.mark.parametrize("kind", ["arithmetic:0.3", "geometric:0.25", "geometric:0.5", "geometric:0.75",
                                  "right-trivial"])
def test_chord_certificate_on_random_boxes(kind):
    f = representing_fn(kind)
    rng = np.random.default_rng(17)
    for _ in range(100):
        box = _box(rng)
        cc = chord_constants(f, *box, 0.5)
        gap = chord_gap_on_grid(f, cc.u, cc.v, cc.mu, cc.nu, 10_000)
        assert gap.min() >= -1e-12
        assert abs(gap[0]) <= 1e-9 and abs(gap[-1]) <= 1e-9


def test_golden_max_finds_interior_peak():
    assert golden_max(lambda t: -(t - 1.3) ** 2, 0.0, 5.0) == pytest.approx(1.3, abs=1e-6)


def test_hadamard_constants_all_four_one():
    hc = hadamard_constants(SQRT, (4, 1) * 4, 0.5)
    assert (hc.u, hc.v) == (1 / 16, 16)
    assert hc.mu == pytest.approx(4 / 17, abs=1e-9)
    assert hc.nu == pytest.approx(4 / 17, abs=1e-9)
    assert hc.c == pytest.approx(1.0, abs=1e-9)
    assert hc.K == pytest.approx(2.125, abs=1e-9)
    assert hc.t0 == pytest.approx(289 / 64, abs=1e-9)
    assert -hc.g_at_t0 == pytest.approx(0.827206, abs=1e-6)


def test_hadamard_constants_closed_form_excess():
    # sqrt(t) - mu t - nu peaks where 1/(2 sqrt t) = mu, i.e. t0 = 1/(4 mu^2); value 1/(4 mu) - nu
    hc = hadamard_constants(SQRT, (4, 1) * 4, 0.5)
    mu = 4 / 17
    assert hc.t0 == pytest.approx(1 / (4 * mu * mu), rel=1e-12)
    assert -hc.g_at_t0 == pytest.approx(1 / (4 * mu) - mu, rel=1e-12)


def test_hadamard_grid_certificates():
    rng = np.random.default_rng(4)
    for alpha in (0.25, 0.5, 0.75):
        f = geometric(alpha)
        for _ in range(20):
            bounds = _box(rng) + _box(rng)
            hc = hadamard_constants(f, bounds, alpha)
            cert = certify_hadamard_constants(hc)
            assert cert["ratio"] and cert["excess"]
            assert hc.u <= hc.c <= hc.v and hc.u <= hc.t0 <= hc.v
            assert cert["grid_max_ratio"] <= hc.K * (1 + 1e-12)
            assert cert["grid_max_excess"] <= -hc.g_at_t0 + 1e-12
            # two-sided check against a grid fine enough to resolve the peak
            fine = certify_hadamard_constants(hc, points=1_000_000)
            assert abs(fine["grid_max_excess"] + hc.g_at_t0) < 1e-9
            assert abs(fine["grid_max_ratio"] - hc.K) < 1e-9 * hc.K
            # at an interior optimum f(c)/(mu c + nu) = f'(c)/mu
            if hc.u < hc.c < hc.v:
                assert cert["K_vs_derivative"] < 1e-9


def test_hadamard_degenerate_and_hypotheses():
    with pytest.raises(DegenerateBoundsError):
        hadamard_constants(SQRT, [1 + 1e-9, 1] * 4, 0.5)
    with pytest.raises(InputError):
        hadamard_constants(geometric(1.0), (4, 1) * 4, 1.0)
    with pytest.raises(HypothesisError):
        hadamard_constants(arithmetic(0.5), (4, 1) * 4, 0.5)

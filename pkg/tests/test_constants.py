"""Special constants and prediction formulas.

The elliptic integral and the oscillatory ratio constant are cross-checked
against quadrature of their defining integrals, done here with the package
quadrature engine but on the raw integrands (independent of the AGM route).
"""
import math

import numpy as np
import pytest

from vpsums.kernels import PoissonParams, VPParams
from vpsums.moduli import Modulus, make_holder, make_linear, make_log_modulus
from vpsums.quadrature import integrate
from vpsums.constants import (
    TheoremPrediction,
    delta_p,
    e_n,
    elliptic_k,
    k_pq_closed,
    k_pq_quadrature,
    theorem1_prediction,
    theorem2_prediction,
    theorem3_bracket,
)

Q_GRID = [round(0.1 * i, 1) for i in range(1, 10)]


def agm(a, b):
    for _ in range(40):
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        if abs(a - b) <= 1e-17 * a:
            break
    return a


class TestEllipticK:
    def test_at_zero(self):
        assert elliptic_k(0.0) == pytest.approx(math.pi / 2, rel=1e-15)

    def test_against_defining_integral(self):
        q = 0.5
        val = integrate(lambda t: 1.0 / np.sqrt(1.0 - q * q * np.sin(t) ** 2),
                        0.0, math.pi / 2, tol=1e-13)
        assert elliptic_k(q) == pytest.approx(val, abs=1e-12)

    def test_against_plain_agm(self):
        for q in Q_GRID:
            want = math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - q * q)))
            assert elliptic_k(q) == pytest.approx(want, rel=1e-15)

    def test_monotone(self):
        assert elliptic_k(0.9) > elliptic_k(0.5) > elliptic_k(0.1)

    def test_domain(self):
        with pytest.raises(ValueError):
            elliptic_k(1.0)
        with pytest.raises(ValueError):
            elliptic_k(-0.1)


class TestOscillationConstant:
    def test_small_q_limit(self):
        for p in (1, 3, 8):
            assert k_pq_quadrature(p, 1e-8) == pytest.approx(2.0 * math.pi, abs=1e-6)

    def test_p1_is_four_elliptic(self):
        assert k_pq_quadrature(1, 0.5) == pytest.approx(4.0 * elliptic_k(0.5), abs=1e-10)

    def test_quadrature_matches_closed(self):
        assert k_pq_quadrature(3, 0.6) == pytest.approx(k_pq_closed(3, 0.6), abs=1e-10)

    def test_closed_p1(self):
        for q in Q_GRID:
            assert k_pq_closed(1, q) == pytest.approx(4.0 * elliptic_k(q), rel=1e-15)

    def test_closed_p2_q_half(self):
        want = 5.0 * math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - 0.25**2)))
        assert k_pq_closed(2, 0.5) == pytest.approx(want, rel=1e-14)

    def test_large_p_asymptote(self):
        for q in Q_GRID:
            for p in range(1, 9):
                gap = abs(k_pq_closed(p, q) * (1.0 - q * q) / (2.0 * math.pi) - 1.0)
                assert gap <= 2.0 * q**p + 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            k_pq_closed(0, 0.5)
        with pytest.raises(ValueError):
            k_pq_quadrature(2, 1.0)


def test_delta_p():
    assert delta_p(1) == 2
    assert delta_p(2) == 3
    assert delta_p(17) == 3
    with pytest.raises(ValueError):
        delta_p(0)


class TestEn:
    def test_linear_closed_form(self):
        lin = make_linear()
        for n in (1, 2, 8, 32, 128, 1024):
            assert e_n(lin, n) == pytest.approx(2.0 / n, abs=1e-12)

    @pytest.mark.parametrize("n", [4, 64, 1024])
    def test_bounds(self, n):
        h = make_holder(0.5)
        val = e_n(h, n)
        top = h(math.pi / n)
        assert (2.0 / math.pi) * top - 1e-12 <= val <= top + 1e-12

    def test_holder_factorization(self):
        # e_n = (2/n)^alpha * integral of t^alpha sin t over the quarter period
        alpha, n = 0.3, 17
        i_alpha = integrate(lambda t: t**alpha * np.sin(t), 0.0, math.pi / 2,
                            tol=1e-13, grade_left=True)
        assert e_n(make_holder(alpha), n) == pytest.approx((2.0 / n) ** alpha * i_alpha, abs=1e-11)

    def test_monotone_in_n(self):
        m = make_log_modulus("inverse_log", 1.0)
        vals = [e_n(m, n) for n in (2, 4, 8, 16, 32, 64)]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_rejects_non_convex(self):
        bad = Modulus("square", lambda t: t * t, convex_upwards=False)
        with pytest.raises(ValueError):
            e_n(bad, 8)

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            e_n(make_holder(0.5), 0)


class TestTheorem1:
    def test_single_mode_form(self):
        # p = 1 collapses to q^n (4/pi^2) K(q) e_n
        h = make_holder(0.5)
        pp = PoissonParams(0.5, 0.0)
        pred = theorem1_prediction(h, pp, VPParams(30, 1))
        want = 0.5**30 * (4.0 / math.pi**2) * elliptic_k(0.5) * e_n(h, 30)
        assert pred.principal == pytest.approx(want, rel=1e-13)

    def test_reference_config(self):
        # q=0.5, p=2, n=130: remainder/principal evaluates to ~1.117, a
        # frozen pipeline value; the prediction is positive and finite
        pred = theorem1_prediction(make_holder(0.5), PoissonParams(0.5, 0.0), VPParams(130, 2))
        assert pred.principal > 0.0
        assert pred.remainder_scale / pred.principal == pytest.approx(1.11684, abs=1e-4)

    def test_doubling_structure(self):
        # principal(m') / principal(m) = q^(m'-m) * e_{m'}/e_m at fixed p
        h = make_holder(0.5)
        pp = PoissonParams(0.4, 0.0)
        p = 2
        pred_a = theorem1_prediction(h, pp, VPParams(41, p))   # m = 40
        pred_b = theorem1_prediction(h, pp, VPParams(81, p))   # m = 80
        want = 0.4**40 * e_n(h, 80) / e_n(h, 40)
        assert pred_b.principal / pred_a.principal == pytest.approx(want, rel=1e-12)

    def test_remainder_formula(self):
        h = make_holder(0.5)
        pred = theorem1_prediction(h, PoissonParams(0.3, 1.0), VPParams(25, 4))
        m_idx = 22
        want = 0.3**m_idx / 4.0 * h(math.pi) / ((1.0 - 0.3) ** 3 * m_idx)
        assert pred.remainder_scale == pytest.approx(want, rel=1e-13)

    def test_requires_p_below_n(self):
        with pytest.raises(ValueError):
            theorem1_prediction(make_holder(0.5), PoissonParams(0.5, 0.0), VPParams(5, 5))


class TestTheorem2:
    def test_matches_theorem1_on_holder(self):
        pp = PoissonParams(0.5, 0.0)
        vp = VPParams(65, 1)
        via_h = theorem1_prediction(make_holder(0.5), pp, vp)
        direct = theorem2_prediction(0.5, pp, vp)
        assert direct.principal == pytest.approx(via_h.principal, rel=1e-12)
        assert direct.remainder_scale == pytest.approx(via_h.remainder_scale, rel=1e-12)

    def test_elliptic_prefactor_form(self):
        # the same value written through 4(1-q^2p)/(1-q^2) K(q^p)
        alpha, q, p, n = 0.4, 0.6, 3, 40
        m_idx = n - p + 1
        i_alpha = integrate(lambda t: t**alpha * np.sin(t), 0.0, math.pi / 2,
                            tol=1e-13, grade_left=True)
        kpq = 4.0 * (1.0 - q ** (2 * p)) / (1.0 - q * q) * elliptic_k(q**p)
        want = q**m_idx / (p * m_idx**alpha) * 2.0**alpha / math.pi**2 * kpq * i_alpha
        pred = theorem2_prediction(alpha, PoissonParams(q, 0.0), VPParams(n, p))
        assert pred.principal == pytest.approx(want, rel=1e-11)

    def test_alpha_range(self):
        pp = PoissonParams(0.5, 0.0)
        for alpha in (0.0, 1.0):
            with pytest.raises(ValueError):
                theorem2_prediction(alpha, pp, VPParams(20, 1))


class TestTheorem3:
    def test_p1_bracket_collapses(self):
        pred = theorem3_bracket(make_holder(0.5), PoissonParams(0.5, 0.0), VPParams(30, 1))
        assert pred.bracket_low == pytest.approx(pred.bracket_high, rel=1e-15)

    def test_low_endpoint_is_theorem1_principal(self):
        h = make_holder(0.5)
        for q in (0.2, 0.5, 0.8):
            for p in (1, 2, 5):
                pp = PoissonParams(q, 0.0)
                vp = VPParams(40, p)
                t3 = theorem3_bracket(h, pp, vp)
                t1 = theorem1_prediction(h, pp, vp)
                assert t3.bracket_low == pytest.approx(t1.principal, rel=1e-12)
                assert t3.principal == t3.bracket_low

    def test_strict_bracket_for_p_above_one(self):
        pred = theorem3_bracket(make_holder(0.5), PoissonParams(0.7, 0.0), VPParams(100, 3))
        assert pred.bracket_low < pred.bracket_high

    def test_remainder_uses_small_argument(self):
        h = make_holder(0.5)
        pp = PoissonParams(0.4, 0.0)
        vp = VPParams(33, 2)
        m_idx = 32
        want = 0.4**m_idx / 2.0 * h(1.0 / m_idx) / ((1.0 - 0.4) ** 3 * m_idx)
        assert theorem3_bracket(h, pp, vp).remainder_scale == pytest.approx(want, rel=1e-13)


def test_prediction_type_validation():
    with pytest.raises(ValueError):
        TheoremPrediction(principal=-1.0, remainder_scale=1.0)
    with pytest.raises(ValueError):
        TheoremPrediction(principal=1.0, remainder_scale=0.0)
    with pytest.raises(ValueError):
        TheoremPrediction(principal=1.0, remainder_scale=1.0, bracket_low=2.0, bracket_high=1.0)

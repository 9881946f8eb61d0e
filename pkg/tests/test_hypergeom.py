import math
from fractions import Fraction

import pytest
from scipy.special import hyp2f1

from andreev import hypergeom as hg
from andreev import symfunc as sf
from andreev.partitions import enumerate_partitions
from andreev.quad import selberg_quadrature


class TestSeriesBasics:
    def test_zero_argument_is_one(self):
        res = hg.hfma1(1.3, 0.7, 2.1, Fraction(1, 2), [0.0, 0.0, 0.0])
        assert res.value == 1.0
        assert res.tail_estimate == 0.0
        assert res.converged

    def test_negative_integer_linear_polynomial(self):
        b, c, x = 1.7, 2.3, 0.45
        res = hg.hfma1(-1, b, c, 1, [x])
        assert res.value == pytest.approx(1 - b / c * x, rel=1e-14)
        assert res.tail_estimate == 0.0

    def test_classical_gauss_series(self):
        res = hg.hfma1(0.5, 1.5, 2.5, 2, [0.3],
                       hg.TruncationPolicy(rel_tol=1e-13))
        assert res.value == pytest.approx(float(hyp2f1(0.5, 1.5, 2.5, 0.3)),
                                          rel=1e-10)

    def test_tail_estimate_bounds_truncation_error(self):
        loose = hg.hfma1(1.2, 0.8, 2.0, 2, [0.4, 0.2],
                         hg.TruncationPolicy(max_weight=60, rel_tol=1e-6))
        tight = hg.hfma1(1.2, 0.8, 2.0, 2, [0.4, 0.2],
                         hg.TruncationPolicy(max_weight=120, rel_tol=1e-13))
        assert abs(loose.value - tight.value) <= 5 * loose.tail_estimate

    def test_non_convergence_raises(self):
        with pytest.raises(hg.NonConvergenceError):
            hg.hfma1(1.5, 2.5, 1.0, 2, [0.9], hg.TruncationPolicy(max_weight=5))

    def test_pochhammer_pole_raises(self):
        with pytest.raises(hg.PochhammerPoleError):
            hg.hfma1(1.0, 1.0, 0.0, 1, [0.3])


class TestHfma2:
    def test_identity_second_argument(self):
        a, b, c, alpha = 2.0, 1.5, 3.0, 2
        X = [0.2, 0.1]
        two = hg.hfma2(a, b, c, alpha, X, [1.0, 1.0])
        one = hg.hfma1(a, b, c, alpha, X)
        assert two.value == pytest.approx(one.value, rel=1e-12)

    def test_zero_argument(self):
        assert hg.hfma2(2.0, 1.5, 3.0, 2, [0.0, 0.0], [0.5, 0.2]).value == 1.0

    def test_brute_force_cross_check(self):
        # independent direct summation to weight 20
        a, b, c, alpha = 2.0, 1.5, 3.0, Fraction(2)
        X, Y = [0.2, 0.1], [0.3, 0.05]
        brute = 0.0
        for lam in enumerate_partitions(20, 2):
            hooks = sf.hook_coefficients(lam, alpha, 0)
            num = sf.gen_pochhammer(a, lam, alpha) * sf.gen_pochhammer(b, lam, alpha)
            coeff = (float(alpha) ** lam.weight / float(hooks.d_prime)
                     * num / sf.gen_pochhammer(c, lam, alpha))
            brute += (coeff * sf.jack_eval(lam, alpha, X) * sf.jack_eval(lam, alpha, Y)
                      / sf.jack_at_identity(lam, alpha, 2))
        res = hg.hfma2(a, b, c, alpha, X, Y)
        assert res.value == pytest.approx(brute, rel=1e-10)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            hg.hfma2(1.0, 1.0, 2.0, 2, [0.1], [0.1, 0.2])


class TestKummer:
    def test_zero_argument(self):
        assert hg.kummer_transform(1.5, 0.7, 2.0, 2, [0.0]).value == 1.0

    def test_classical_euler_identity(self):
        a, b, c, x = 1.2, 0.7, 2.4, 0.3
        res = hg.kummer_transform(a, b, c, 1, [x])
        assert res.value == pytest.approx(float(hyp2f1(a, b, c, x)), rel=1e-10)

    def test_quaternion_family_small_m(self):
        # parameters of the quaternion ensemble at n=1, m=1
        a, b, c = 4.0, 5.0, 2.0
        X = [0.2]
        direct = hg.hfma1(a, b, c, Fraction(1, 2), X)
        viak = hg.kummer_transform(a, b, c, Fraction(1, 2), X)
        assert abs(direct.value - viak.value) <= (
            direct.tail_estimate + viak.tail_estimate + 1e-10 * abs(direct.value)
        )


class TestSelbergClosedForms:
    def test_n1_is_beta_function(self):
        x, y = 0.5, 1.0
        expected = math.gamma(x + 1) * math.gamma(y + 1) / math.gamma(x + y + 2)
        assert hg.selberg_base(x, y, 2, 1) == pytest.approx(expected, rel=1e-14)

    def test_n1_flat(self):
        assert hg.selberg_base(0.0, 0.0, Fraction(1, 2), 1) == pytest.approx(1.0)

    def test_n2_quadrature(self):
        closed = hg.selberg_base(0.5, 1.0, 2, 2)
        quad = selberg_quadrature(2, 0.5, 1.0, 1, m=60)
        assert closed == pytest.approx(quad, rel=1e-8)

    def test_domain_violation(self):
        with pytest.raises(hg.ConditionViolatedError):
            hg.selberg_base(-1.5, 0.0, 2, 1)


class TestSelbergJack:
    def test_empty_partition_reduces(self):
        assert hg.selberg_jack(0.3, 0.7, 2, 2, ()) == pytest.approx(
            hg.selberg_base(0.3, 0.7, 2, 2), rel=1e-14)

    def test_n1_beta_shift(self):
        x, y = 0.3, 0.8
        expected = math.gamma(x + 2) * math.gamma(y + 1) / math.gamma(x + y + 3)
        assert hg.selberg_jack(x, y, 2, 1, (1,)) == pytest.approx(expected, rel=1e-13)

    def test_n2_quadrature_with_jack_factor(self):
        closed = hg.selberg_jack(0.0, 1.0, 2, 2, (1,))
        quad = selberg_quadrature(
            2, 0.0, 1.0, 1, lambda T: sf.jack_eval_batch((1,), 2, T), m=60)
        assert closed == pytest.approx(quad, rel=1e-8)

    def test_too_long_partition(self):
        with pytest.raises(hg.ConditionViolatedError):
            hg.selberg_jack(0.0, 1.0, 2, 1, (1, 1))


class TestZpAndDual:
    def test_p1_closed_form(self):
        # frozen: int_0^inf (1+y)^-3 dy = 1/2
        assert hg.zp_constant(0.0, 3.0, 1, 2) == pytest.approx(0.5, rel=1e-14)

    def test_p2_frozen_value(self):
        # frozen from direct quadrature of the two-point integral
        assert hg.zp_constant(1.0, 9.0, 2, Fraction(1, 2)) == pytest.approx(
            1.0 / 8400.0, rel=1e-12)

    def test_condition_violation(self):
        with pytest.raises(hg.ConditionViolatedError):
            hg.zp_constant(1.0, 2.0, 2, 2)

    def test_dual_empty_partition(self):
        assert hg.dual_selberg_jack((), 0.0, 6.0, 1, 2) == pytest.approx(
            hg.zp_constant(0.0, 6.0, 1, 2), rel=1e-14)

    def test_dual_p1_beta_integral(self):
        # int_0^inf y^(a+1) (1+y)^-b dy = B(a+2, b-a-2)
        a, b = 0.0, 6.0
        expected = math.gamma(a + 2) * math.gamma(b - a - 2) / math.gamma(b)
        assert hg.dual_selberg_jack((1,), a, b, 1, 2) == pytest.approx(
            expected, rel=1e-13)

    def test_dual_validity_condition(self):
        with pytest.raises(hg.ConditionViolatedError):
            hg.dual_selberg_jack((5,), 0.0, 6.0, 1, 2)


class TestIntegralRepresentation:
    def test_zero_argument(self):
        assert hg.hfma1_integral_rep(2, 3, 4.0, Fraction(1, 2), [0.0, 0.0]) == \
            pytest.approx(1.0, rel=1e-12)

    def test_scalar_polynomial_case(self):
        # 2F1(-1,-1;1|x) = 1 + x
        val = hg.hfma1_integral_rep(1, 1, 1.0, 2, [0.3])
        assert val == pytest.approx(1.3, rel=1e-12)

    def test_half_alpha_case(self):
        series = hg.hfma1(-2, -3, 4.0, Fraction(1, 2), [0.2, 0.1]).value
        rep = hg.hfma1_integral_rep(2, 3, 4.0, Fraction(1, 2), [0.2, 0.1])
        assert rep == pytest.approx(series, rel=1e-7)

    def test_condition_violated(self):
        with pytest.raises(hg.ConditionViolatedError):
            hg.hfma1_integral_rep(2, 3, 0.25, 2, [0.1, 0.2])

    def test_monte_carlo_fallback(self):
        # p = 4 routes through the sampling estimator
        series = hg.hfma1(-4, -4, 3.0, 1, [0.2]).value
        mc = hg.hfma1_integral_rep(4, 4, 3.0, 1, [0.2], mc_samples=400_000, rng=9)
        assert mc == pytest.approx(series, rel=0.05)

    def test_ztilde_consistency(self):
        # Ztilde equals Z_p shifted by the derived power of two
        p, q, c, ap = 2, 3, 4.0, 0.5
        a = ap * (q - p + 1) - 1
        b = ap * (c + p + q - 1) + 1
        z = hg.zp_constant(a, b, p, Fraction(2))  # alpha = 1/alpha' = 2
        assert hg.ztilde_constant(p, q, c, Fraction(1, 2)) == pytest.approx(
            z * 2.0 ** (p * ap * (c + q)), rel=1e-12)

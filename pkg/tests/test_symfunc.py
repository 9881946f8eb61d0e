from fractions import Fraction

import numpy as np
import pytest

from andreev import symfunc as sf
from andreev.partitions import enumerate_partitions

from oracles import jack_eval_oracle, jack_in_monomial_basis_oracle


class TestPochhammer:
    def test_empty_partition(self):
        assert sf.gen_pochhammer(3.7, (), 2) == 1.0

    def test_single_row(self):
        u = Fraction(5, 3)
        assert sf.gen_pochhammer(u, (2,), 2, exact=True) == u * (u + 1)

    def test_two_rows(self):
        u = Fraction(5, 3)
        alpha = Fraction(1, 2)
        assert sf.gen_pochhammer(u, (1, 1), alpha, exact=True) == u * (u - 2)

    def test_vanishing_is_exact_zero(self):
        # u = 0 makes the first rising factor zero
        assert sf.gen_pochhammer(0, (2,), 2, exact=True) == 0
        assert sf.gen_pochhammer(-1, (2,), 1) == 0.0


class TestHookCoefficients:
    def test_single_cell(self):
        for alpha in (Fraction(1, 2), Fraction(2)):
            h = sf.hook_coefficients((1,), alpha, 7, exact=True)
            assert h.d_prime == alpha
            assert h.h == 1
            assert h.b == 7

    def test_row_of_two_at_alpha_two(self):
        h = sf.hook_coefficients((2,), 2, 0, exact=True)
        assert h.d_prime == 8
        assert h.h == 3

    def test_e_prime_cross_check(self):
        # frozen: e'_(2)(2,3) = 2^2 [1+1]_(2)^(2) = 4 * (2*3) = 24
        h = sf.hook_coefficients((2,), 2, 3, exact=True)
        assert h.e_prime == 24
        assert h.e_prime == 4 * sf.gen_pochhammer(2, (2,), 2, exact=True)


class TestJackEval:
    def test_single_box_is_power_sum(self):
        x = [0.3, -0.7, 0.2]
        for alpha in (Fraction(1, 2), 1, 2):
            assert sf.jack_eval((1,), alpha, x) == pytest.approx(sum(x), abs=1e-14)

    def test_row_of_two_formula(self):
        # frozen from the Gram-Schmidt oracle: P_(2) = m_2 + 2/(1+alpha) m_11
        x = [0.3, 0.7]
        for alpha in (Fraction(1, 2), Fraction(2), Fraction(7, 3)):
            expected = x[0] ** 2 + x[1] ** 2 + 2.0 / (1 + float(alpha)) * x[0] * x[1]
            assert sf.jack_eval((2,), alpha, x) == pytest.approx(expected, rel=1e-14)

    def test_against_gram_schmidt_oracle(self):
        rng = np.random.default_rng(1)
        for lam in enumerate_partitions(5):
            if lam.weight == 0:
                continue
            for alpha in (Fraction(1, 2), Fraction(2), Fraction(5, 3)):
                table = sf.jack_monomial_coefficients(lam, alpha, exact=True)
                oracle = jack_in_monomial_basis_oracle(lam.parts, alpha)
                oracle = {mu: c for mu, c in oracle.items() if c != 0}
                mine = {mu: c for mu, c in table.items() if c != 0}
                assert mine == oracle
                x = list(rng.uniform(-1, 1, size=3))
                assert sf.jack_eval(lam, alpha, x) == pytest.approx(
                    jack_eval_oracle(lam.parts, alpha, x), rel=1e-12, abs=1e-12
                )

    def test_more_rows_than_variables(self):
        assert sf.jack_eval((1, 1, 1), 2, [0.5, 0.5]) == 0.0

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(2)
        X = rng.uniform(-1, 1, size=(20, 3))
        for lam in ((2,), (2, 1), (1, 1, 1)):
            batch = sf.jack_eval_batch(lam, Fraction(1, 2), X)
            single = [sf.jack_eval(lam, Fraction(1, 2), list(x)) for x in X]
            assert batch == pytest.approx(single, rel=1e-13)


class TestJackAtIdentity:
    def test_single_box(self):
        for alpha in (Fraction(1, 2), 1, 2):
            assert sf.jack_at_identity((1,), alpha, 3, exact=True) == 3

    def test_empty(self):
        assert sf.jack_at_identity((), 2, 5, exact=True) == 1

    def test_matches_direct_evaluation(self):
        val = sf.jack_at_identity((2, 1), 2, 4)
        direct = sf.jack_eval((2, 1), 2, [1.0] * 4)
        assert val == pytest.approx(direct, rel=1e-13)


class TestSchur:
    def test_single_box(self):
        assert sf.schur_eval((1,), [0.2, 0.3, -0.1]) == pytest.approx(0.4, abs=1e-14)

    def test_elementary(self):
        assert sf.schur_eval((1, 1), [0.4, 0.5]) == pytest.approx(0.2, rel=1e-13)

    def test_monomial_expansion_value(self):
        # S_(2)(2,3) = m_2 + m_11 = 4 + 9 + 6
        assert sf.schur_eval((2,), [2.0, 3.0]) == pytest.approx(19.0, rel=1e-14)

    def test_coincident_points_guard(self):
        # bialternant is 0/0 here; the monomial reroute must kick in
        val = sf.schur_eval((2, 1), [0.5, 0.5, 0.5])
        ident = sf.schur_at_identity((2, 1), 3, exact=True)
        assert val == pytest.approx(float(ident) * 0.5**3, rel=1e-12)

    def test_schur_at_identity_examples(self):
        assert sf.schur_at_identity((1,), 7, exact=True) == 7
        assert sf.schur_at_identity((1, 1), 2, exact=True) == 1
        direct = sf.schur_eval((2, 1), [1.0, 1.0, 1.0])
        assert float(sf.schur_at_identity((2, 1), 3, exact=True)) == pytest.approx(direct)

    def test_real_argument(self):
        # S_lam(1_a) continues to real a through the Pochhammer form
        val = sf.schur_at_identity((2,), 1.5)
        assert val == pytest.approx(1.5 * 2.5 / 2.0, rel=1e-14)


def test_alpha_must_be_positive():
    with pytest.raises(ValueError):
        sf.jack_eval((1,), 0, [0.5])
    with pytest.raises(ValueError):
        sf.gen_pochhammer(1.0, (1,), -2)

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cogrowth.qseries import (LaurentPoly, Q_PLUS_QINV, QSeries, RatSeries,
                              _kron_convolve, _schoolbook_convolve,
                              integer_coefficients, phi_map, rat_compose,
                              rat_div, rat_sqrt, read_coefficients,
                              substitute_reduced, write_coefficients)


coeff_lists = st.lists(st.integers(min_value=0, max_value=10**6),
                       min_size=1, max_size=40)


@given(coeff_lists, coeff_lists)
def test_kronecker_matches_schoolbook(a, b):
    assert _kron_convolve(a, b) == _schoolbook_convolve(a, b)


def test_kronecker_huge_coefficients():
    a = [10**50, 1, 10**40]
    assert _kron_convolve(a, a) == _schoolbook_convolve(a, a)


class TestLaurentPoly:
    def test_normalization(self):
        p = LaurentPoly(-2, [0, 1, 0, 3, 0])
        assert p.kmin == -1
        assert list(p.c) == [1, 0, 3]

    def test_mul_symmetric_square(self):
        # (q + 1/q)^2 = q^2 + 2 + q^-2
        sq = Q_PLUS_QINV * Q_PLUS_QINV
        assert sq == LaurentPoly(-2, [1, 0, 2, 0, 1])
        assert sq.is_symmetric()

    def test_signed_multiplication(self):
        p = LaurentPoly(0, [1, -1])
        assert p * p == LaurentPoly(0, [1, -2, 1])

    def test_constant_coefficient(self):
        assert (Q_PLUS_QINV * Q_PLUS_QINV).constant_coefficient() == 2
        assert Q_PLUS_QINV.constant_coefficient() == 0

    def test_phi_divisibility_projection(self):
        # q^2 + q^3 + q^4 under phi(2, 3): keep multiples of 2, rescale
        p = LaurentPoly(2, [1, 1, 1])
        assert p.phi(2, 3) == LaurentPoly(3, [1, 0, 0, 1])

    def test_phi_keeps_constant(self):
        p = LaurentPoly(0, [5])
        assert p.phi(3, 7) == p


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=9),
       st.integers(-3, 0), st.integers(1, 4), st.integers(1, 4))
def test_phi_is_linear(c, kmin, d, e):
    p = LaurentPoly(kmin, c)
    two_p = p + p
    assert phi_map(two_p, d, e) == phi_map(p, d, e) + phi_map(p, d, e)


def test_qseries_algebra():
    one = QSeries.one(4)
    z_q = QSeries.one(4).scale_z(1, Q_PLUS_QINV)
    sq = z_q * z_q
    # (z(q + 1/q))^2 = z^2 (q^2 + 2 + q^-2)
    assert sq.rows[2] == Q_PLUS_QINV * Q_PLUS_QINV
    assert (one + z_q).constant_term()[0] == 1


def test_qseries_truncates():
    s = QSeries.one(3).scale_z(2, Q_PLUS_QINV)
    assert (s * s).rows[3].is_zero()  # z^4 falls off the end


class TestRatSeries:
    def test_div_geometric(self):
        one = RatSeries.from_terms(6, {0: 1})
        denom = RatSeries.from_terms(6, {0: 1, 1: -2})
        q = rat_div(one, denom)
        assert [c for c in q.c] == [1, 2, 4, 8, 16, 32, 64]

    def test_div_with_valuation(self):
        num = RatSeries.from_terms(5, {2: 6})
        den = RatSeries.from_terms(5, {1: 2})
        q = rat_div(num, den)
        assert q.c[1] == 3 and q.c[0] == 0

    def test_div_rejects_singular(self):
        with pytest.raises((ZeroDivisionError, ValueError)):
            rat_div(RatSeries.from_terms(3, {0: 1}),
                    RatSeries.from_terms(3, {1: 1}))

    def test_sqrt_of_perfect_square(self):
        p = RatSeries.from_terms(6, {0: 1, 1: 2, 2: 1})
        assert rat_sqrt(p).c[:3] == [Fraction(1), Fraction(1), Fraction(0)]

    def test_sqrt_binomial_series(self):
        s = rat_sqrt(RatSeries.from_terms(6, {0: 1, 1: 1}))
        assert s.c[1] == Fraction(1, 2)
        assert s.c[2] == Fraction(-1, 8)
        assert (s * s).c[:2] == [Fraction(1), Fraction(1)]

    def test_sqrt_needs_square_constant(self):
        with pytest.raises(ValueError):
            rat_sqrt(RatSeries.from_terms(4, {0: 2}))

    def test_compose(self):
        f = RatSeries.from_terms(6, {0: 1, 1: 1, 2: 1})
        g = RatSeries.from_terms(6, {1: 2})
        h = rat_compose(f, g)
        assert [c for c in h.c[:3]] == [1, 2, 4]

    def test_compose_needs_zero_constant(self):
        f = RatSeries.from_terms(4, {0: 1})
        with pytest.raises(ValueError):
            rat_compose(f, RatSeries.from_terms(4, {0: 1}))


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=12))
@settings(max_examples=50)
def test_sqrt_squares_back(c):
    base = RatSeries(len(c) - 1, [Fraction(x) for x in c])
    sq = base * base
    if sq.c[0] == 0:
        return
    s = rat_sqrt(sq)
    signed = base if base.c[0] > 0 else RatSeries(base.n_max,
                                                 [-x for x in base.c])
    assert s.c == signed.c


def test_substitute_reduced_on_known_pair():
    # all-words count for one free generator: words in a, a^-1 equal to 1
    # are the balanced shuffles, binom(n, n/2); reduced count is just 1
    from math import comb
    f = RatSeries(10, [Fraction(comb(n, n // 2)) if n % 2 == 0 else Fraction(0)
                       for n in range(11)])
    h = substitute_reduced(f, 1)
    assert integer_coefficients(h) == [1] + [0] * 10


def test_integer_coefficients_rejects_fractions():
    with pytest.raises(ValueError):
        integer_coefficients(RatSeries(1, [Fraction(1), Fraction(1, 2)]))


def test_coefficient_file_roundtrip(tmp_path):
    path = tmp_path / "c.tsv"
    coeffs = [1, 0, 4, 0, 36]
    write_coefficients(path, coeffs, header="test sequence")
    assert read_coefficients(path) == coeffs
    text = path.read_text()
    assert text.startswith("# test sequence\n")
    assert "2\t4" in text

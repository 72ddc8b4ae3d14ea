import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidist.families import binomial, cyclotomic
from equidist.intpoly import (
    ONE,
    IntPolynomial,
    PolynomialError,
    derivative,
    discriminant,
    divides,
    exact_mean,
    factor_multiplicity,
    format_poly,
    is_squarefree,
    log_abs_int,
    parse_poly,
    power_sums,
    resultant,
    squarefree_decomposition,
)

from .oracles import mp_roots, sylvester_resultant

P = IntPolynomial
coeff_lists = st.lists(st.integers(-20, 20), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)


class TestConstruction:
    def test_trailing_zeros_normalized(self):
        assert P([1, 2, 0, 0]).coeffs == (1, 2)
        assert P([0, 0]).is_zero

    def test_zero_polynomial_has_no_degree(self):
        with pytest.raises(PolynomialError):
            P([]).degree

    def test_rejects_non_integers(self):
        with pytest.raises(PolynomialError):
            P([1, 0.5])

    def test_arithmetic(self):
        a, b = P([-1, 1]), P([1, 1])
        assert (a * b).coeffs == (-1, 0, 1)
        assert (a + b).coeffs == (0, 2)
        assert (a**3).coeffs == (-1, 3, -3, 1)
        assert a(3) == 2


class TestParse:
    @pytest.mark.parametrize(
        "text, coeffs",
        [
            ("−1, 0, 1", (-1, 0, 1)),
            ("-1,0,1", (-1, 0, 1)),
            ("z^3 − 1", (-1, 0, 0, 1)),
            ("2*z^2 − 2", (-2, 0, 2)),
            ("z^2 - 3z + 2", (2, -3, 1)),
            ("-z + z + 7", (7,)),
            ("x^2+1", (1, 0, 1)),
        ],
    )
    def test_examples(self, text, coeffs):
        assert parse_poly(text).coeffs == coeffs

    @pytest.mark.parametrize("bad", ["", "   ", "1.5, 2", "z^^2", "z**2", "2*y", "1,,2"])
    def test_rejects(self, bad):
        with pytest.raises(PolynomialError):
            parse_poly(bad)

    @given(coeff_lists)
    def test_format_round_trip(self, c):
        p = P(c)
        assert parse_poly(format_poly(p)) == p
        assert parse_poly(",".join(map(str, c))) == p


class TestDerivative:
    def test_examples(self):
        assert derivative(parse_poly("z^2 - 1")).coeffs == (0, 2)
        assert derivative(P([5])).is_zero
        assert derivative(parse_poly("z^3 - 1")).coeffs == (0, 0, 3)


class TestResultant:
    def test_examples(self):
        assert resultant(parse_poly("z^2 - 1"), P([0, 2])) == -4
        assert resultant(parse_poly("z - 1"), parse_poly("z + 1")) == 2

    def test_zero_input_rejected(self):
        with pytest.raises(PolynomialError):
            resultant(P([]), P([1, 1]))

    def test_random_pairs_match_sylvester(self):
        rng = random.Random(20240601)
        for _ in range(200):
            a = [rng.randint(-9, 9) for _ in range(rng.randint(2, 5))]
            b = [rng.randint(-9, 9) for _ in range(rng.randint(2, 5))]
            a[-1] = a[-1] or 1
            b[-1] = b[-1] or -1
            assert resultant(P(a), P(b)) == sylvester_resultant(a, b)

    def test_constant_argument(self):
        # Res(P, c) = c^deg P
        assert resultant(parse_poly("z^3 + 2"), P([3])) == 27
        assert resultant(P([3]), parse_poly("z^2 + 5")) == 9

    @given(coeff_lists, coeff_lists)
    @settings(max_examples=60)
    def test_antisymmetry(self, a, b):
        p, q = P(a), P(b)
        sign = -1 if (p.degree * q.degree) % 2 else 1
        assert resultant(p, q) == sign * resultant(q, p)


class TestDiscriminant:
    def test_examples(self):
        assert discriminant(parse_poly("z^2 - 1")) == 4
        assert discriminant(parse_poly("z^3 - 1")) == -27
        assert discriminant(parse_poly("z^2 - 2z + 1")) == 0
        assert discriminant(binomial(4)) == -256

    def test_degree_zero_rejected(self):
        with pytest.raises(PolynomialError):
            discriminant(P([5]))

    @pytest.mark.parametrize("n", range(2, 31))
    def test_binomial_is_plus_minus_n_to_the_n(self, n):
        assert abs(discriminant(binomial(n))) == n**n

    @given(coeff_lists.filter(lambda c: len(c) >= 3))
    @settings(max_examples=80)
    def test_resultant_identity(self, c):
        p = P(c)
        n = p.degree
        res = resultant(p, derivative(p))
        assert res % p.leading == 0
        assert discriminant(p) == (-1) ** (n * (n - 1) // 2) * res // p.leading

    def test_matches_root_product(self):
        p = parse_poly("3z^4 - 2z^3 + z - 5")
        roots = mp_roots(list(p.coeffs))
        prod = 1
        for j in range(4):
            for k in range(j + 1, 4):
                prod *= (roots[j] - roots[k]) ** 2
        assert abs(p.leading**6 * prod - discriminant(p)) < 1e-6 * abs(discriminant(p))


class TestSquarefree:
    def test_examples(self):
        assert is_squarefree(binomial(5))
        assert not is_squarefree(parse_poly("z - 1") ** 2 * parse_poly("z + 1"))

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 6, 12, 30, 105, 210])
    def test_cyclotomics(self, k):
        assert is_squarefree(cyclotomic(k))
        assert discriminant(cyclotomic(k)) != 0

    @given(coeff_lists, st.integers(1, 3))
    @settings(max_examples=60)
    def test_agrees_with_discriminant(self, c, m):
        p = P(c) ** m
        assert is_squarefree(p) == (discriminant(p) != 0)

    def test_decomposition_reassembles(self):
        p = parse_poly("z - 1") ** 3 * parse_poly("z^2 + 1") ** 2 * parse_poly("2z + 3")
        parts = squarefree_decomposition(p)
        assert sorted(m for _, m in parts) == [1, 2, 3]
        prod = ONE
        for s, m in parts:
            prod = prod * s**m
        assert prod == p


class TestMultiplicity:
    def test_examples(self):
        z1, z2 = parse_poly("z - 1"), parse_poly("z + 1")
        assert factor_multiplicity(z1**3 * z2, z1) == 3
        assert factor_multiplicity(binomial(4), parse_poly("z^2 + 1")) == 1
        assert factor_multiplicity(binomial(4), parse_poly("z - 2")) == 0

    def test_constant_factor_rejected(self):
        with pytest.raises(PolynomialError):
            factor_multiplicity(binomial(4), P([2]))

    @given(coeff_lists, st.sampled_from([1, 2, 3, 4, 6]), st.integers(0, 4))
    @settings(max_examples=60)
    def test_adds_up(self, c, k, m):
        p, q = P(c), cyclotomic(k)
        assert factor_multiplicity(p * q**m, q) == factor_multiplicity(p, q) + m


class TestPowerSums:
    def test_binomial(self):
        n = 6
        sums = power_sums(binomial(n), 2 * n)
        assert sums[: n - 1] == [0] * (n - 1)
        assert sums[n - 1] == n
        assert sums[2 * n - 1] == n

    def test_small(self):
        assert power_sums(parse_poly("z^2 - 3z + 2"), 2) == [3, 5]

    def test_mean(self):
        p = parse_poly("4z^3 - 6z^2 + 1")
        assert exact_mean(p) == Fraction(1, 2)
        assert power_sums(p, 1)[0] / 3 == exact_mean(p)

    @given(coeff_lists)
    @settings(max_examples=60)
    def test_newton_identities_exact(self, c):
        # sum_{i=0}^{m-1} a_{n-i} p_{m-i} + m a_{n-m} = 0 for m <= n
        p = P(c)
        n = p.degree
        sums = power_sums(p, n)
        for m in range(1, n + 1):
            total = sum(Fraction(p[n - i]) * sums[m - i - 1] for i in range(m)) + m * p[n - m]
            assert total == 0

    def test_against_roots(self):
        rng = random.Random(7)
        for _ in range(10):
            c = [rng.randint(-5, 5) for _ in range(rng.randint(3, 9))]
            c[-1] = c[-1] or 1
            roots = mp_roots(c)
            for m, s in enumerate(power_sums(P(c), 6), start=1):
                assert abs(sum(r**m for r in roots) - complex(s)) < 1e-8 * max(1, abs(float(s)))


class TestMisc:
    def test_log_abs_int_huge(self):
        x = 3**5000
        assert abs(log_abs_int(-x) - 5000 * 1.0986122886681098) < 1e-9

    def test_simple_zeros_give_integer_discriminant_at_least_one(self):
        for k in (5, 7, 9, 15):
            assert abs(discriminant(cyclotomic(k))) >= 1

    def test_divides(self):
        assert divides(cyclotomic(3), binomial(6))
        assert not divides(cyclotomic(5), binomial(6))

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ffmoments import DivideByZeroPoly, Poly, TooLarge, make_context
from ffmoments import polyring as pr

from . import _brute


def P(coeffs, q=7):
    return Poly(coeffs, q)


def monic_polys(q, max_deg=6):
    return st.integers(0, max_deg).flatmap(
        lambda d: st.lists(st.integers(0, q - 1), min_size=d, max_size=d).map(lambda low: Poly.monic_from_low(low, q)))


def test_basic_examples():
    T = Poly.T(7)
    assert pr.gcd(T**2 - 1, T - 1) == T - 1
    quo, rem = pr.divrem(T**3, T)
    assert quo == T**2 and rem.is_zero()
    for c in range(7):
        assert pr.powmod(T, 7, T - c) == Poly([c], 7)


def test_divide_by_zero():
    with pytest.raises(DivideByZeroPoly):
        pr.divrem(Poly.T(7), Poly([0], 7))


@settings(max_examples=200)
@given(monic_polys(7), monic_polys(7))
def test_divrem_identity(a, b):
    quo, rem = pr.divrem(a, b)
    assert quo * b + rem == a
    assert rem.deg < b.deg or rem.is_zero()


@settings(max_examples=100)
@given(monic_polys(5, 5), monic_polys(5, 5), monic_polys(5, 3))
def test_gcd_properties(a, b, c):
    g = pr.gcd(a * c, b * c)
    assert g.is_monic()
    assert ((a * c) % g).is_zero() and ((b * c) % g).is_zero()
    assert (g % c).is_zero()


@pytest.mark.parametrize("q,d,count", [(7, 1, 7), (5, 1, 5), (5, 2, 10), (7, 3, 112)])
def test_irreducible_counts(q, d, count):
    table = pr.irreducible_array(q, d)
    assert len(table) == count == pr.prime_count(q, d)
    # independent trial-multiplication sieve
    brute = sorted(_brute.irreducibles(q, d))
    got = sorted(tuple(int(x) for x in row) + (1,) for row in table)
    assert got == brute


def test_degree_one_primes_are_all_linear():
    ctx = make_context(7, 3)
    assert sorted(pr.irreducibles(ctx, 1)) == sorted(Poly.T(7) + c for c in range(7))


@pytest.mark.parametrize("q", [5, 7, 13])
def test_prime_tables_match_moebius(q):
    for d in range(1, 5):
        assert len(pr.irreducible_array(q, d)) == pr.prime_count(q, d)


def test_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("FFM_CACHE", str(tmp_path))
    pr.irreducible_array.cache_clear()
    first = pr.irreducible_array(5, 3)
    assert (tmp_path / "irr_q5_d3.bin").exists()
    pr.irreducible_array.cache_clear()
    assert np.array_equal(pr.irreducible_array(5, 3), first)
    pr.irreducible_array.cache_clear()


def test_too_large():
    with pytest.raises(TooLarge):
        pr.irreducible_array(31, 6)


def test_von_mangoldt_examples():
    T = Poly.T(7)
    assert pr.von_mangoldt(T**2) == 1
    assert pr.von_mangoldt(T * (T + 1)) == 0
    Q = pr.irreducibles(make_context(7, 3), 2)[3]
    assert pr.von_mangoldt(Q**2) == 2


@pytest.mark.parametrize("q,n", [(5, 1), (5, 2), (5, 3), (5, 4), (7, 1), (7, 2), (7, 3)])
def test_prime_polynomial_theorem(q, n):
    total = sum(pr.von_mangoldt(Poly.monic_from_low(low, q)) for low in pr.monic_coeff_array(q, n))
    assert total == q**n


def test_prime_power_sum_examples():
    assert pr.prime_power_sum(5, 1, 1) == 5
    assert pr.prime_power_sum(5, 1, 2) == 25
    assert pr.prime_power_sum(7, 2, 2) == 91


def test_factor_examples():
    T = Poly.T(7)
    assert sorted(pr.factor(T**2 + T).factors) == sorted([(T, 1), (T + 1, 1)])
    assert list(pr.factor(T**3).factors) == [(T, 3)]
    for p in pr.irreducibles(make_context(7, 3), 3)[:20]:
        assert list(pr.factor(p).factors) == [(p, 1)]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([5, 7, 13]).flatmap(lambda q: monic_polys(q, 8)))
def test_factor_round_trip(F):
    fac = pr.factor(F)
    assert fac.expand(F.q) == F
    assert all(pr.is_irreducible(p) for p, _ in fac.factors)


@pytest.mark.parametrize("q,r,N,size", [(7, 3, 2, 49), (7, 3, 4, 2352), (5, 2, 3, 100)])
def test_family_sizes(q, r, N, size):
    ctx = make_context(q, r)
    assert pr.count_family(ctx, N) == size == pr.family_size_formula(q, r, N)


@pytest.mark.parametrize("q,r,N", [(5, 2, 3), (7, 3, 4), (5, 2, 4)])
def test_family_sieve_matches_trial_division(q, r, N):
    ctx = make_context(q, r)
    sieve = {G.coeffs for G in pr.enumerate_family(ctx, N)}
    assert sieve == set(_brute.family(q, r, N))
    assert sieve == {G.coeffs for G in pr.enumerate_family_by_factoring(ctx, N)}


def test_enumerate_family_slices():
    ctx = make_context(7, 3)
    whole = list(pr.enumerate_family(ctx, 4))
    assert list(pr.enumerate_family(ctx, 4, 100, 250)) == whole[100:250]


def test_coprime_counts():
    # frozen from the pure-python trial-division family
    ctx5 = make_context(5, 2)
    T5 = Poly.T(5)
    assert pr.count_family_coprime(ctx5, 3, T5) == 84
    assert abs(84 - pr.coprime_count_prediction(ctx5, 3, T5)) <= 5
    assert pr.coprime_count_prediction(ctx5, 3, T5) == Fraction(250, 3)
    ctx7 = make_context(7, 3)
    assert pr.count_family_coprime(ctx7, 2, Poly.T(7)) == 42
    assert pr.count_family_coprime(ctx7, 4, Poly.T(7)) == 2022
    assert pr.count_family_coprime(ctx7, 4, Poly.one(7)) == 2352


def test_power_free_predicates():
    T = Poly.T(7)
    assert pr.is_power_free(T**2 * (T + 1), 3)
    assert not pr.is_power_free(T**3, 3)
    assert pr.is_rth_power((T + 1) ** 3 * T**6, 3)
    assert not pr.is_rth_power(T**3 * (T + 1), 3)


def test_multiplicative_functions():
    T = Poly.T(5)
    F = T**2 * (T + 1)
    assert pr.euler_phi(F) == (25 - 5) * 4
    assert pr.num_divisors(F) == 6


def test_random_poly_arithmetic_matches_brute():
    rng = random.Random(0)
    for _ in range(50):
        a = [rng.randrange(7) for _ in range(rng.randint(1, 6))] + [1]
        b = [rng.randrange(7) for _ in range(rng.randint(1, 6))] + [1]
        assert (Poly(a, 7) * Poly(b, 7)).coeffs == _brute.mul(tuple(a), tuple(b), 7)


@pytest.mark.parametrize("q", [5, 7, 13])
def test_factor_round_trip_grid(q):
    rng = random.Random(q)
    for d in range(1, 9):
        for _ in range(1000):
            F = Poly.monic_from_low([rng.randrange(q) for _ in range(d)], q)
            fac = pr.factor(F)
            assert fac.expand(q) == F
            primes = [p for p, _ in fac.factors]
            assert len(set(primes)) == len(primes)
            assert primes == sorted(primes, key=lambda p: p.sort_key())


@pytest.mark.parametrize("q", [5, 7, 13])
def test_prime_power_sum_error_shape(q):
    for k in (1, 2, 3):
        for n in range(1, 5):
            assert abs(pr.prime_power_sum(q, k, n) - n ** (k - 1) * q**n) <= 4 * n**k * q ** (n / 2)

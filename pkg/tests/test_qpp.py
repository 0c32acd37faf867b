import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qppldpc import Qpp, factorize, is_permutation_poly, min_f2
from qppldpc.qpp import Factorization

from conftest import brute_is_permutation


@pytest.mark.parametrize("N,expected", [
    (1512, ((2, 3), (3, 3), (7, 1))),
    (3024, ((2, 4), (3, 3), (7, 1))),
    (7, ((7, 1),)),
    (2, ((2, 1),)),
])
def test_factorize_examples(N, expected):
    fac = factorize(N)
    assert fac.factors == expected
    assert fac.value() == N


@pytest.mark.parametrize("N", [1, 0, -5])
def test_factorize_rejects_small(N):
    with pytest.raises(ValueError):
        factorize(N)


@given(st.integers(2, 10**6))
@settings(max_examples=200, deadline=None)
def test_factorize_product(N):
    fac = factorize(N)
    assert fac.value() == N
    ps = fac.primes
    assert list(ps) == sorted(set(ps))
    for p in ps:
        assert all(p % d for d in range(2, int(p**0.5) + 1))


@pytest.mark.parametrize("args,expected", [
    ((1512, 5, 210), True),
    ((3024, 29, 42), True),
    ((4, 1, 1), False),
    ((8, 1, 2), True),
])
def test_is_permutation_examples(args, expected):
    assert is_permutation_poly(*args) is expected


def test_is_permutation_matches_brute_force_small():
    bad = [(N, a, b) for N in range(2, 65) for a in range(N) for b in range(N)
           if is_permutation_poly(N, a, b) != brute_is_permutation(N, a, b)]
    assert bad == []


@pytest.mark.parametrize("N", [18, 50, 90])
def test_case_two_allows_even_f2(N):
    # N = 2 mod 4: f2 may carry the factor 2 as long as f1 + f2 is odd
    rad_odd = min_f2(N)
    assert rad_odd % 2 == 1
    f2 = 2 * rad_odd
    assert f2 % N != 0
    assert is_permutation_poly(N, 1, f2) is True
    assert brute_is_permutation(N, 1, f2)
    assert is_permutation_poly(N, 1, rad_odd) is False  # f1 + f2 even
    assert is_permutation_poly(N, 2, rad_odd) is True


def test_sampled_1512():
    rng = np.random.default_rng(3)
    for f1, f2 in rng.integers(0, 1512, size=(400, 2)):
        assert is_permutation_poly(1512, int(f1), int(f2)) == brute_is_permutation(1512, int(f1), int(f2))
    for f1 in range(1, 200):
        assert is_permutation_poly(1512, f1, 42) == brute_is_permutation(1512, f1, 42)


@pytest.mark.parametrize("N,expected", [(1512, 42), (3024, 42), (12288, 6), (6, 3), (90, 15), (8, 2)])
def test_min_f2(N, expected):
    assert min_f2(N) == expected


def test_eval_examples():
    f = Qpp(3024, 29, 42)
    assert f(12) == 348
    assert f.eval(0) == 0
    assert Qpp(1512, 5, 210)(1) == 215


def test_eval_wraps():
    f = Qpp(1512, 5, 210)
    for x in (0, 1, 17, 1511):
        assert f(x) == f(x + 1512) == f(x - 1512)


def test_eval_large_modulus_no_overflow():
    N = 2**30 * 3
    f = Qpp(N, 1, 6)
    x = N - 1
    assert f(x) == (x + 6 * x * x) % N
    tab = Qpp(98304, 7, 48).table()
    xs = np.array([0, 1, 98303, 50000])
    assert tab[xs].tolist() == [(7 * int(x) + 48 * int(x) ** 2) % 98304 for x in xs]


def test_coefficients_reduced_and_linear_flag():
    f = Qpp(16, 1 + 16, 32)
    assert (f.f1, f.f2) == (1, 0)
    assert f.linear
    assert not Qpp(1512, 5, 210).linear


def test_rejects_non_permutation():
    with pytest.raises(ValueError):
        Qpp(4, 1, 1)
    with pytest.raises(ValueError):
        Qpp(1, 0, 0)


@pytest.mark.parametrize("args", [(1512, 5, 210), (3024, 29, 42), (64, 3, 4), (90, 1, 30)])
def test_invert_round_trip(args):
    f = Qpp(*args)
    tab, g = f.table(), f.invert()
    idx = np.arange(f.N)
    assert np.array_equal(g[tab], idx)
    assert np.array_equal(tab[g], idx)


def test_factorization_exponent():
    fac = Factorization(((2, 3), (3, 3), (7, 1)))
    assert fac.exponent(2) == 3
    assert fac.exponent(5) == 0

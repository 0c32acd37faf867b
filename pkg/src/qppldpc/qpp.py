"""Quadratic permutation polynomials over the integer ring Z_N."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod

import numpy as np


@dataclass(frozen=True)
class Factorization:
    """Prime-power factorization as ``((p, e), ...)`` with increasing primes."""

    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def value(self) -> int:
        return prod(p**e for p, e in self.factors)

    def __iter__(self):
        return iter(self.factors)


def factorize(N: int) -> Factorization:
    """Factor ``N`` by trial division.

    >>> factorize(1512).factors
    ((2, 3), (3, 3), (7, 1))
    """
    if N < 2:
        raise ValueError(f"cannot factor N={N}; need N >= 2")
    out = []
    m = N
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return Factorization(tuple(out))


def is_permutation_poly(N: int, f1: int, f2: int) -> bool:
    """Return True iff ``f1*x + f2*x**2 (mod N)`` permutes ``{0, ..., N-1}``.

    Uses the closed-form divisibility conditions on the coefficients, split
    on whether 2 divides N exactly once. ``f2 = 0`` is the linear case and is
    a permutation iff ``gcd(f1, N) = 1``.
    """
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    f1 %= N
    f2 %= N
    if f2 == 0:
        return gcd(f1, N) == 1
    fac = factorize(N)
    if fac.exponent(2) == 1:
        if (f1 + f2) % 2 == 0 or gcd(f1, N // 2) != 1:
            return False
        return all(f2 % p == 0 for p in fac.primes if p != 2)
    if gcd(f1, N) != 1:
        return False
    return all(f2 % p == 0 for p in fac.primes)


def min_f2(N: int) -> int:
    """Smallest admissible quadratic coefficient: the radical of ``N``.

    When ``N = 2 (mod 4)`` the factor 2 is not required and is left out.
    """
    fac = factorize(N)
    skip_two = fac.exponent(2) == 1
    return prod(p for p in fac.primes if not (skip_two and p == 2))


@dataclass(frozen=True)
class Qpp:
    """The permutation ``x -> f1*x + f2*x**2 (mod N)``.

    Coefficients are stored reduced mod ``N``. Construction fails for
    polynomials that are not permutations.
    """

    N: int
    f1: int
    f2: int
    _table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"modulus N must be >= 2, got {self.N}")
        object.__setattr__(self, "f1", self.f1 % self.N)
        object.__setattr__(self, "f2", self.f2 % self.N)
        if not is_permutation_poly(self.N, self.f1, self.f2):
            raise ValueError(
                f"{self.f1}x + {self.f2}x^2 is not a permutation polynomial mod {self.N}"
            )
        object.__setattr__(self, "_table", None)

    @property
    def linear(self) -> bool:
        return self.f2 == 0

    def eval(self, x: int) -> int:
        x %= self.N
        return (self.f1 * x + self.f2 * x * x) % self.N

    def __call__(self, x: int) -> int:
        return self.eval(x)

    def table(self) -> np.ndarray:
        """``f(x)`` for every ``x`` in ``[0, N)`` as an int64 array (cached)."""
        if self._table is None:
            N = self.N
            x = np.arange(N, dtype=np.int64)
            if N < 2**31:
                # x*x < 2**62 and the products below stay within int64
                sq = (x * x) % N
                t = (self.f1 * x % N + self.f2 * sq % N) % N
            else:
                t = np.array([self.eval(int(v)) for v in x], dtype=np.int64)
            t.setflags(write=False)
            object.__setattr__(self, "_table", t)
        return self._table

    def invert(self) -> np.ndarray:
        """Inverse permutation ``g`` with ``g[f(x)] = x``."""
        g = np.empty(self.N, dtype=np.int64)
        g[self.table()] = np.arange(self.N, dtype=np.int64)
        return g

    def __str__(self) -> str:
        return f"{self.f1}x+{self.f2}x^2 mod {self.N}"

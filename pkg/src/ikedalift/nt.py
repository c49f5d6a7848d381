"""Elementary number theory used throughout the package.

Everything here works with Python integers and ``fractions.Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, isqrt

from sympy import isprime as _sympy_isprime


def is_prime(n: int) -> bool:
    return n > 1 and bool(_sympy_isprime(n))


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def factorize(n: int) -> dict[int, int]:
    """Full factorization of a nonzero integer by trial division (sign dropped)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(n, p: int) -> int:
    """p-adic valuation of a nonzero integer or Fraction."""
    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def moebius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def sigma(n: int, k: int) -> int:
    return sum(d**k for d in divisors(n))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_part(n: int) -> int:
    """The unique squarefree s with n = s * m^2 (sign kept)."""
    if n == 0:
        raise ValueError("squarefree part of zero")
    s = -1 if n < 0 else 1
    for p, e in factorize(n).items():
        if e % 2:
            s *= p
    return s


def is_fundamental_discriminant(d: int) -> bool:
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return squarefree_part(d) == d
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree_part(m) == m
    return False


def fundamental_part(D: int) -> tuple[int, int]:
    """Split a discriminant D (D = 0, 1 mod 4, nonzero) as D = d * f^2 with d fundamental."""
    if D == 0:
        raise ValueError("zero discriminant")
    if D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    s = squarefree_part(D)
    d = s if s % 4 == 1 else 4 * s
    f = isqrt(D // d)
    assert d * f * f == D
    return d, f


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2, via sum_{j<=n} C(n+1, j) B_j = 0."""
    if n == 0:
        return Fraction(1)
    total = sum(comb(n + 1, j) * bernoulli(j) for j in range(n))
    return -total / (n + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    return sum(comb(n, j) * bernoulli(j) * x ** (n - j) for j in range(n + 1))


def zeta_neg(m: int) -> Fraction:
    """zeta(1 - m) for m >= 2, i.e. -B_m / m."""
    if m < 2:
        raise ValueError("zeta(1 - m) needs m >= 2")
    return -bernoulli(m) / m


def generalized_bernoulli(k: int, d: int) -> Fraction:
    """B_{k, chi_d} for the Kronecker character of a fundamental discriminant d."""
    f = abs(d)
    return Fraction(f) ** (k - 1) * sum(
        kronecker(d, a) * bernoulli_poly(k, Fraction(a, f)) for a in range(1, f + 1)
    )


@lru_cache(maxsize=None)
def dirichlet_L_neg(k: int, d: int) -> Fraction:
    """L(1 - k, chi_d) = -B_{k,chi_d} / k for a fundamental discriminant d."""
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    if d == 1 and k == 1:
        raise ValueError("zeta has a pole at s = 1 - 1")
    if d == 1:
        return zeta_neg(k)
    return -generalized_bernoulli(k, d) / k


def crt_coprime_completion(x: int, y: int) -> tuple[int, int]:
    """Return (b, d) with x*d - y*b = 1, for coprime x, y."""
    g, s, t = ext_gcd(x, y)
    if g != 1:
        raise ValueError("entries not coprime")
    # s*x + t*y = 1  ->  d = s, b = -t
    return -t, s


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def gcd_list(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g

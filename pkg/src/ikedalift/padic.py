"""p-adic valuations on Hecke fields, unit roots, norms and congruence scans.

A prime ideal over p of a number field K = Q[x]/(m) is described by a monic
irreducible factor g of m mod p; we only accept p for which m mod p is
squarefree, which rules out ramification and p dividing the index of Z[x].
The completion at that ideal is unramified of degree deg g over Q_p and is
modelled as (Z/p^M)[t]/(G) with G the Hensel lift of g.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .arith import QQ, NumberField, NumberFieldElem, QuadExtElem, field_norm
from .nt import is_prime, primes_up_to, valuation

DEFAULT_PADIC_PRECISION = 30


class AtLeast(int):
    """A valuation known only to be at least this value (precision exhausted)."""

    def __repr__(self):
        return f"AtLeast({int(self)})"

    def __str__(self):
        return f">={int(self)}"


# -- integer polynomial helpers mod p^M (coefficient lists low -> high) -------


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmod(c: Sequence[int], mod: int) -> list[int]:
    return _trim([x % mod for x in c])


def _pmul(a: Sequence[int], b: Sequence[int], mod: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, mod)


def _psub(a: Sequence[int], b: Sequence[int], mod: int) -> list[int]:
    n = max(len(a), len(b))
    return _pmod([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)], mod)


def _padd(a: Sequence[int], b: Sequence[int], mod: int) -> list[int]:
    n = max(len(a), len(b))
    return _pmod([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], mod)


def _pdivmod_monic(a: Sequence[int], g: Sequence[int], mod: int) -> tuple[list[int], list[int]]:
    rem = [x % mod for x in a]
    d = len(g) - 1
    quo = [0] * max(len(rem) - d, 0)
    for shift in range(len(rem) - d - 1, -1, -1):
        q = rem[shift + d] % mod
        quo[shift] = q
        if q:
            for i, c in enumerate(g):
                rem[shift + i] = (rem[shift + i] - q * c) % mod
    return _trim(quo), _pmod(rem[:d], mod)


def _sympy_poly(c: Sequence[int], p: int) -> sympy.Poly:
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(list(c))) or [0], x, modulus=p)


def _from_sympy(poly: sympy.Poly, p: int) -> list[int]:
    return _trim([int(c) % p for c in reversed(poly.all_coeffs())])


def hensel_lift(m: Sequence[int], g: Sequence[int], p: int, M: int) -> list[int]:
    """Lift a monic factor g of m mod p (coprime to m/g mod p) to a factor mod p^M."""
    h, r = _pdivmod_monic(m, g, p)
    if r:
        raise ValueError("g does not divide m mod p")
    _, t_, one = _sympy_poly(g, p).gcdex(_sympy_poly(h, p))
    if one.degree() != 0:
        raise ValueError("factor is not coprime to its cofactor mod p")
    c = int(one.all_coeffs()[0]) % p
    inv = pow(c, -1, p)
    t = _pmod([x * inv for x in _from_sympy(t_, p)], p)
    g, h = list(g), list(h)
    pj = p
    for _ in range(1, M):
        e = _psub(m, _pmul(g, h, pj * p), pj * p)
        assert all(x % pj == 0 for x in e)
        e = [x // pj for x in e]
        # e = (e s) g + (e t) h; move the multiple of g out of e t
        _, r = _pdivmod_monic(_pmul(e, t, p), g, p)
        dh, zero = _pdivmod_monic(_psub(e, _pmul(r, h, p), p), g, p)
        assert not zero
        g = _padd(g, [x * pj for x in r], pj * p)
        h = _padd(h, [x * pj for x in dh], pj * p)
        pj *= p
    return g


# -- prime ideals ------------------------------------------------------------


@dataclass(frozen=True)
class PrimeIdealData:
    p: int
    field: NumberField
    local_factor: tuple[int, ...]

    @property
    def residue_degree(self) -> int:
        return len(self.local_factor) - 1

    def __str__(self):
        return f"({self.p}, {_poly_str(self.local_factor)})"


def _poly_str(c: Sequence[int]) -> str:
    from .arith import Poly

    return Poly(list(c), var="x").to_string()


def split_prime(field_: NumberField, p: int) -> list[PrimeIdealData]:
    """Prime ideals over p, one per irreducible factor of the minimal polynomial mod p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    m = list(field_.coeffs)
    if field_.degree == 1:
        return [PrimeIdealData(p, field_, tuple(x % p for x in m))]
    _, factors = _sympy_poly(m, p).factor_list()
    if any(e > 1 for _, e in factors):
        raise ValueError(
            f"minimal polynomial is not squarefree mod {p}: ramified or index-divisible prime"
        )
    ideals = []
    for fac, _ in factors:
        c = _from_sympy(fac, p)
        inv = pow(c[-1], -1, p)
        ideals.append(PrimeIdealData(p, field_, tuple((x * inv) % p for x in c)))
    return sorted(ideals, key=lambda I: (I.residue_degree, I.local_factor))


# -- local embeddings ----------------------------------------------------------


class PadicApprox:
    """An element of (Z/p^M)[t]/(G), the completion at a prime ideal mod p^M."""

    __slots__ = ("ideal", "M", "G", "coords")

    def __init__(self, ideal: PrimeIdealData, M: int, G: Sequence[int], coords: Sequence[int]):
        self.ideal = ideal
        self.M = M
        self.G = tuple(G)
        mod = ideal.p**M
        self.coords = tuple(_pdivmod_monic(list(coords), list(G), mod)[1]) if coords else ()

    @property
    def p(self) -> int:
        return self.ideal.p

    @property
    def modulus(self) -> int:
        return self.ideal.p**self.M

    def _new(self, coords) -> "PadicApprox":
        return PadicApprox(self.ideal, self.M, self.G, coords)

    def _other(self, other) -> "PadicApprox":
        if isinstance(other, PadicApprox):
            if other.ideal != self.ideal:
                raise TypeError("different prime ideals")
            if other.M < self.M:
                return other
            return other if other.M == self.M else other.reduce(self.M)
        return embed(other, self.ideal, self.M)

    def reduce(self, M: int) -> "PadicApprox":
        if M > self.M:
            raise ValueError("cannot raise precision")
        G = [c % self.p**M for c in self.G]
        return PadicApprox(self.ideal, M, G, [c % self.p**M for c in self.coords])

    def _align(self, other):
        other = self._other(other)
        if other.M < self.M:
            return self.reduce(other.M), other
        return self, other

    def __add__(self, other):
        a, b = self._align(other)
        return a._new(_padd(a.coords, b.coords, a.modulus))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._align(other)
        return a._new(_psub(a.coords, b.coords, a.modulus))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._new([-c for c in self.coords])

    def __mul__(self, other):
        a, b = self._align(other)
        return a._new(_pmul(a.coords, b.coords, a.modulus))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self._new([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def valuation(self) -> int:
        if not self.coords:
            return AtLeast(self.M)
        return min(valuation(c, self.p) if c else self.M for c in self.coords)

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def inverse(self) -> "PadicApprox":
        if not self.is_unit():
            raise ZeroDivisionError("not a unit in the local ring")
        q = self.p ** self.ideal.residue_degree
        x = self.reduce(1) ** (q - 2)
        x = PadicApprox(self.ideal, self.M, self.G, x.coords)
        prec = 1
        while prec < self.M:
            x = x * (2 - self * x)
            prec *= 2
        return x

    def __truediv__(self, other):
        a, b = self._align(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return a.coords == b.coords

    def __hash__(self):
        return hash((self.ideal, self.M, self.coords))

    def __repr__(self):
        return f"PadicApprox({list(self.coords)} mod {self.p}^{self.M} at {self.ideal})"


_LIFT_CACHE: dict = {}


def local_modulus(ideal: PrimeIdealData, M: int) -> list[int]:
    key = (ideal, M)
    if key not in _LIFT_CACHE:
        _LIFT_CACHE[key] = hensel_lift(list(ideal.field.coeffs), list(ideal.local_factor), ideal.p, M)
    return _LIFT_CACHE[key]


def embed(value, ideal: PrimeIdealData, M: int = DEFAULT_PADIC_PRECISION, alpha: PadicApprox | None = None) -> PadicApprox:
    """Image of a rational, number-field or quadratic-ring element in the completion.

    Quadratic-ring elements need the image ``alpha`` of the designated root y.
    Denominators must be prime to p.
    """
    p = ideal.p
    mod = p**M
    G = local_modulus(ideal, M)
    if isinstance(value, QuadExtElem):
        if alpha is None:
            raise ValueError("embedding a quadratic-ring element needs alpha")
        return embed(value.c0, ideal, M) + embed(value.c1, ideal, M) * alpha
    if isinstance(value, (int, Fraction)):
        value = Fraction(value)
        if value.denominator % p == 0:
            raise ValueError("denominator divisible by p")
        c = value.numerator * pow(value.denominator, -1, mod)
        return PadicApprox(ideal, M, G, [c])
    if isinstance(value, NumberFieldElem):
        if value.field != ideal.field and not (ideal.field.degree == 1):
            raise TypeError("number field mismatch")
        den = value.denominator()
        if den % p == 0:
            raise ValueError("denominator divisible by p")
        inv = pow(den, -1, mod)
        coords = [int(c * den) * inv for c in value.coords]
        if ideal.field.degree == 1:
            return PadicApprox(ideal, M, G, [coords[0]])
        return PadicApprox(ideal, M, G, coords)
    if isinstance(value, PadicApprox):
        return value
    raise TypeError(f"cannot embed {value!r}")


def padic_valuation(a, ideal: PrimeIdealData, M: int = DEFAULT_PADIC_PRECISION) -> int:
    """Valuation at the ideal (normalized v(p) = 1), or an :class:`AtLeast` bound."""
    if a == 0:
        raise ValueError("valuation of zero")
    p = ideal.p
    if isinstance(a, (int, Fraction)):
        return valuation(Fraction(a), p)
    if isinstance(a, NumberFieldElem):
        den = a.denominator()
        shift = valuation(den, p)
        integral = NumberFieldElem(a.field, [c * den for c in a.coords])
        scaled_den = den // p**shift
        # integral / scaled_den has a p-free denominator and valuation v(a) + shift
        v = embed(integral / scaled_den, ideal, M + shift).valuation()
        if isinstance(v, AtLeast):
            return AtLeast(int(v) - shift)
        return v - shift
    raise TypeError(f"unsupported value {a!r}")


def unit_root(a_p, p: int, exponent: int, M: int = DEFAULT_PADIC_PRECISION, ideal: PrimeIdealData | None = None) -> PadicApprox:
    """The unit root alpha of X^2 - a_p X + p^exponent in the completion at ``ideal``."""
    if ideal is None:
        fld = a_p.field if isinstance(a_p, NumberFieldElem) else QQ
        ideal = split_prime(fld, p)[0]
    a = embed(a_p, ideal, M)
    if not a.is_unit():
        raise ValueError(f"a_p is not a unit at {ideal}: not ordinary")
    c = embed(p**exponent, ideal, M)
    alpha = a
    for _ in range(M // max(exponent, 1) + 3):
        alpha = a - c / alpha
    return alpha


def unit_root_pair(a_p, p: int, exponent: int, M: int = DEFAULT_PADIC_PRECISION, ideal=None) -> tuple[PadicApprox, PadicApprox]:
    alpha = unit_root(a_p, p, exponent, M, ideal)
    beta = embed(p**exponent, alpha.ideal, M) / alpha
    return alpha, beta


@lru_cache(maxsize=4)
def _trial_primes(bound: int) -> tuple[int, ...]:
    return tuple(primes_up_to(bound))


def factor_report(n: int, bound: int = 10**6) -> tuple[list[tuple[int, int]], int, str]:
    """Trial division up to ``bound``; returns (factors, cofactor, cofactor tag).

    The tag is ``"unit"``, ``"prime"`` or ``"composite"`` (sympy's probable-prime test).
    The sign of n is dropped.
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    factors = []
    exhausted = True  # every prime up to sqrt(n) was tried
    for d in _trial_primes(bound):
        if d * d > n:
            break
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            factors.append((d, e))
    else:
        exhausted = bound * bound >= n
    if n > 1 and (n <= bound or exhausted):
        factors.append((n, 1))
        n = 1
    tag = "unit" if n == 1 else ("prime" if sympy.isprime(n) else "composite")
    return factors, n, tag


@dataclass
class ScanRow:
    key: object
    disc: int
    difference: object
    valuations: dict
    norm: Fraction | None = None


@dataclass
class CongruenceReport:
    ideals: list
    rows: list = field(default_factory=list)

    def violations(self, ideal_index: int | None = None) -> list:
        bad = []
        for row in self.rows:
            vals = list(row.valuations.values()) if ideal_index is None else [row.valuations[self.ideals[ideal_index]]]
            if ideal_index is None:
                if not any(v is None or v >= 1 for v in vals):
                    bad.append(row)
            elif not (vals[0] is None or vals[0] >= 1):
                bad.append(row)
        return bad

    def norms_divisible(self, p: int) -> bool:
        return all(row.norm is None or row.norm == 0 or row.norm.numerator % p == 0 for row in self.rows)

    def verdict(self) -> str:
        return "all >= 1" if not self.violations() else f"{len(self.violations())} violations"


def congruence_scan(entries_a: Iterable, entries_b: Iterable, ideals: Sequence[PrimeIdealData], M: int = DEFAULT_PADIC_PRECISION) -> CongruenceReport:
    """Compare two coefficient lists keyed alike: (key, disc, value) triples.

    A valuation of ``None`` means the difference is exactly zero (infinite valuation).
    """
    a = {key: (disc, val) for key, disc, val in entries_a}
    b = {key: (disc, val) for key, disc, val in entries_b}
    if set(a) != set(b):
        raise ValueError("class sets differ")
    report = CongruenceReport(list(ideals))
    for key in a:
        disc, va = a[key]
        _, vb = b[key]
        diff = vb - va if isinstance(vb, NumberFieldElem) else va - vb
        vals = {}
        for I in ideals:
            vals[I] = None if diff == 0 else padic_valuation(diff, I, M)
        report.rows.append(ScanRow(key, disc, diff, vals, field_norm(diff)))
    return report

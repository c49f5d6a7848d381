"""The polynomials F_l(T; X) of the local Siegel series

    b_l(T; X) = (1 - X) prod_{i=1..n} (1 - l^(2i) X^2) / (1 - (d/l) l^n X) * F_l(T; X)

for positive definite half-integral T of size 2n, with d the fundamental part of
D = (-1)^n det(2T).  F_l has degree 2 v_l(f) and constant term 1.

Genus 2 uses Kaufhold's closed form at every valuation.  Genus 4 is handled when
v_l(f) = 1 and l is odd: then F = 1 + c1 X + l^(2n+1) X^2, the top coefficient
forced by the functional equation and c1 read off from the X^1 coefficient of
b_l.  That coefficient comes from the rank-one stratum R = l^-1 lambda v v^t of the
defining sum, where the inner sum over lambda is l * [Q(v) = 0 mod l] - 1, so

    [X^1] b_l = l * N0 - (l^(2n) - 1) / (l - 1),
    N0 = #{[v] in P^(2n-1)(F_l) : v^t (2T) v = 0 mod l}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .arith import Poly
from .nt import is_prime, kronecker, valuation
from .quadforms.matrices import HalfIntMatrix, content, discriminant_data


class UnsupportedCase(NotImplementedError):
    """A Siegel series case outside the implemented range (genus 4 with v >= 2 or l = 2)."""


@dataclass(frozen=True)
class SiegelSeriesPoly:
    prime: int
    genus: int
    v: int
    poly: Poly

    @property
    def n(self) -> int:
        return self.genus // 2

    def __call__(self, x):
        return self.poly(x)

    def coefficient(self, j: int) -> int:
        return self.poly[j]

    def __str__(self):
        return self.poly.to_string()


def _chi(T: HalfIntMatrix, l: int) -> int:
    _, d, _, _ = discriminant_data(T)
    return kronecker(d, l)


def _vf(T: HalfIntMatrix, l: int) -> int:
    _, _, f, _ = discriminant_data(T)
    return valuation(f, l)


def kaufhold_genus2(T: HalfIntMatrix, l: int) -> SiegelSeriesPoly:
    """F_l(T; X) = sum_{i <= v(m)} (l^2 X)^i [ sum_{j <= v(f)-i} (l^3 X^2)^j
    - (d/l) l X sum_{j <= v(f)-i-1} (l^3 X^2)^j ]."""
    if T.genus != 2:
        raise ValueError("Kaufhold's formula is for genus 2")
    vf = _vf(T, l)
    vm = valuation(content(T), l)
    chi = _chi(T, l)
    X = Poly([0, 1])
    a = Poly([0, l * l])
    b = Poly([0, 0, l**3])
    F = Poly([])
    for i in range(vm + 1):
        inner = sum((b**j for j in range(vf - i + 1)), Poly([]))
        inner = inner - X * (chi * l) * sum((b**j for j in range(vf - i)), Poly([]))
        F = F + a**i * inner
    return SiegelSeriesPoly(l, 2, vf, F)


def quadric_points(T: HalfIntMatrix, l: int) -> int:
    """N0 = number of projective points [v] over F_l with v^t (2T) v = 0 mod l."""
    n = T.genus
    G = np.array(T.gram, dtype=np.int64) % l
    grid = np.array(np.meshgrid(*[np.arange(l, dtype=np.int64)] * n, indexing="ij")).reshape(n, -1).T
    vals = np.einsum("ki,ij,kj->k", grid, G, grid) % l
    zeros = int(np.count_nonzero(vals == 0)) - 1  # drop v = 0
    return zeros // (l - 1)


def rank1_bl_coefficient(T: HalfIntMatrix, l: int) -> int:
    """[X^1] b_l(T; X) from the rank-one stratum: l * N0 - (l^(2n) - 1)/(l - 1)."""
    n = T.n
    return l * quadric_points(T, l) - (l ** (2 * n) - 1) // (l - 1)


def rank1_extraction(T: HalfIntMatrix, l: int) -> SiegelSeriesPoly:
    """F_l for v_l(f) = 1 at any genus, via the X^1 coefficient of b_l."""
    if l == 2:
        raise UnsupportedCase("rank-one extraction is stated for odd l")
    v = _vf(T, l)
    if v != 1:
        raise UnsupportedCase(f"rank-one extraction needs v_l(f) = 1, got {v}")
    n = T.n
    c1 = rank1_bl_coefficient(T, l) + 1 - _chi(T, l) * l**n
    return SiegelSeriesPoly(l, T.genus, 1, Poly([1, c1, l ** (2 * n + 1)]))


def genus4_v1(T: HalfIntMatrix, l: int) -> SiegelSeriesPoly:
    if T.genus != 4:
        raise ValueError("genus4_v1 expects a genus-4 matrix")
    return rank1_extraction(T, l)


def siegel_series(T: HalfIntMatrix, l: int) -> SiegelSeriesPoly:
    """F_l(T; X) for every supported case; raises :class:`UnsupportedCase` otherwise."""
    if not is_prime(l):
        raise ValueError(f"{l} is not prime")
    v = _vf(T, l)
    if v == 0:
        return SiegelSeriesPoly(l, T.genus, 0, Poly([1]))
    if T.genus == 2:
        return kaufhold_genus2(T, l)
    if l == 2:
        raise UnsupportedCase("genus-4 Siegel series at l = 2")
    if v >= 2:
        raise UnsupportedCase(f"genus-4 Siegel series with v_{l}(f) = {v} >= 2")
    return genus4_v1(T, l)


def is_supported(T: HalfIntMatrix) -> bool:
    _, _, _, fac = discriminant_data(T)
    try:
        for l in fac:
            siegel_series(T, l) if T.genus == 2 else _check_supported(T, l)
    except UnsupportedCase:
        return False
    return True


def _check_supported(T: HalfIntMatrix, l: int):
    v = _vf(T, l)
    if v and (l == 2 or v >= 2):
        raise UnsupportedCase(f"genus 4, l = {l}, v = {v}")


def functional_eq_check(F: SiegelSeriesPoly) -> bool:
    """F(l^(-2n-1) / X) = (l^(2n+1) X^2)^(-v) F(X), i.e. coeff_{2v-j} = l^((2n+1)(v-j)) coeff_j,
    together with degree 2v and constant term 1."""
    l, v, n = F.prime, F.v, F.n
    if F.poly.degree != 2 * v or F.poly[0] != 1:
        return False
    w = 2 * n + 1
    for j in range(2 * v + 1):
        lhs = Fraction(F.poly[2 * v - j])
        rhs = Fraction(l) ** (w * (v - j)) * F.poly[j]
        if lhs != rhs:
            return False
    return True


def telescope_check(
    T: HalfIntMatrix, p: int, F: Callable[[HalfIntMatrix, int], SiegelSeriesPoly] = kaufhold_genus2
) -> bool:
    """F(p^2 T) - (p^2 X + p^3 X^2) F(pT) + p^5 X^3 F(T) == 1 - (d/p) p X."""
    X = Poly([0, 1])
    lhs = (
        F(T.scale(p * p), p).poly
        - Poly([0, p * p, p**3]) * F(T.scale(p), p).poly
        + Poly.monomial(p**5, 3) * F(T, p).poly
    )
    return lhs == Poly([1]) - X * (_chi(T, p) * p)


def bl_assemble(F: SiegelSeriesPoly, d: int, order: int) -> list:
    """Coefficients X^0..X^(order-1) of F (1-X) prod (1 - l^(2i) X^2) / (1 - (d/l) l^n X)."""
    l, n = F.prime, F.n
    num = F.poly * Poly([1, -1])
    for i in range(1, n + 1):
        num = num * Poly([1, 0, -(l ** (2 * i))])
    ratio = kronecker(d, l) * l**n
    out = []
    for m in range(order):
        out.append(sum(num[j] * ratio ** (m - j) for j in range(m + 1)))
    return out

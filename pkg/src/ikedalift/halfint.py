"""Kohnen plus space of weight k + 1/2 on Gamma0(4).

Every form of half-integral weight on Gamma0(4) is a polynomial in theta and the
weight-2 form F = sum_{n odd} sigma_1(n) q^n, so M_{k+1/2}(Gamma0(4)) is spanned by
theta^(2k+1-4j) F^j.  The plus space is cut out by linear algebra on coefficients,
and Hecke eigenforms are pinned by the Shimura relation

    c_{|d| m^2} = c_{|d|} * sum_{e | m} mu(e) (d/e) e^(k-1) a_{m/e}(f)

for fundamental d with (-1)^k d > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .arith import NumberField, NumberFieldElem, to_string
from .linalg import nullspace, rref, solve
from .modforms import EigenformData, dim_cusp_forms, sigma_table
from .nt import dirichlet_L_neg, divisors, is_fundamental_discriminant, kronecker, moebius
from .series import DEFAULT_PRECISION, QExpansion

__all__ = [
    "HalfIntegralForm",
    "theta",
    "weight2_F",
    "plus_space_basis",
    "cusp_plus_basis",
    "cohen_eisenstein",
    "shimura_eigen_lift",
    "shimura_relation_holds",
    "dirichlet_L_neg",
    "kronecker",
    "plus_bound",
]


def plus_bound(k: int) -> int:
    """Number of coefficients on which the plus condition is imposed."""
    return 4 * (2 * k + 2)


@dataclass
class HalfIntegralForm:
    k: int
    qexp: QExpansion
    plus_certified: bool
    normalization: str = "c_min = 1"

    @property
    def precision(self) -> int:
        return self.qexp.precision

    def c(self, m: int):
        return self.qexp[m]

    def to_json(self) -> dict:
        ring = self.qexp.ring
        return {
            "k": self.k,
            "weight": f"{2 * self.k + 1}/2",
            "field": ring.polynomial_string() if isinstance(ring, NumberField) else "x",
            "normalization": self.normalization,
            "precision": self.precision,
            "coeffs": [[m, to_string(c)] for m, c in self.qexp.nonzero_terms()],
        }


def is_plus_index(k: int, m: int) -> bool:
    return ((-1) ** k * m) % 4 in (0, 1)


def theta(precision: int = DEFAULT_PRECISION) -> QExpansion:
    coeffs = [0] * precision
    for m in range(isqrt(max(precision - 1, 0)) + 1):
        if m * m < precision:
            coeffs[m * m] = 1 if m == 0 else 2
    return QExpansion(coeffs, precision)


def weight2_F(precision: int = DEFAULT_PRECISION) -> QExpansion:
    sig = sigma_table(precision, 1)
    return QExpansion([s if m % 2 else 0 for m, s in enumerate(sig)], precision)


def _monomials(k: int, precision: int) -> list[QExpansion]:
    th = theta(precision)
    F = weight2_F(precision)
    return [th ** (2 * k + 1 - 4 * j) * F**j for j in range((2 * k + 1) // 4 + 1)]


def plus_space_basis(k: int, precision: int = DEFAULT_PRECISION, bound: int | None = None) -> list[HalfIntegralForm]:
    """Echelonized basis of M+_{k+1/2}(Gamma0(4)); dimension 1 + dim S_{2k}."""
    if k < 2:
        raise ValueError("plus space needs k >= 2")
    bound = plus_bound(k) if bound is None else bound
    work = max(precision, bound)
    monos = _monomials(k, work)
    forbidden = [m for m in range(min(bound, work)) if not is_plus_index(k, m)]
    conditions = [[mono[m] for mono in monos] for m in forbidden]
    combos = nullspace(conditions, len(monos)) if conditions else [
        [Fraction(int(i == j)) for j in range(len(monos))] for i in range(len(monos))
    ]
    expected = 1 + dim_cusp_forms(2 * k)
    if len(combos) != expected:
        raise ValueError(
            f"plus-space dimension {len(combos)} != {expected}; raise the certification bound"
        )
    rows = [[sum(c * mono[m] for c, mono in zip(v, monos)) for m in range(work)] for v in combos]
    red, _ = rref(rows)
    forms = []
    for row in red:
        coeffs = [_rat(c) for c in row[:precision]]
        certified = all(coeffs[m] == 0 for m in range(precision) if not is_plus_index(k, m))
        forms.append(HalfIntegralForm(k, QExpansion(coeffs, precision), certified, "echelon"))
    return forms


def cusp_plus_basis(k: int, precision: int = DEFAULT_PRECISION) -> list[HalfIntegralForm]:
    """The plus-space forms with vanishing constant term (the cusp part)."""
    return [h for h in plus_space_basis(k, precision) if h.qexp[0] == 0]


def _rat(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _fundamentals(k: int, limit: int) -> list[int]:
    """Fundamental d with (-1)^k d > 0 and |d| < limit."""
    sign = (-1) ** k
    return [sign * D for D in range(1, limit) if is_fundamental_discriminant(sign * D)]


def _shimura_factor(d: int, m: int, k: int, a) -> object:
    total = 0
    for e in divisors(m):
        mu = moebius(e)
        if mu:
            total = total + mu * kronecker(d, e) * e ** (k - 1) * a(m // e)
    return total


def _relations(k: int, precision: int, a):
    """(target index, base index, factor) for every Shimura relation below precision."""
    out = []
    for d in _fundamentals(k, precision):
        D = abs(d)
        m = 2
        while D * m * m < precision:
            out.append((D * m * m, D, _shimura_factor(d, m, k, a)))
            m += 1
    return out


def shimura_eigen_lift(f: EigenformData, precision: int = DEFAULT_PRECISION) -> HalfIntegralForm:
    """The plus cusp form h attached to f, normalized so its first nonzero coefficient is 1."""
    k = f.k
    need = isqrt(max(precision - 1, 1)) + 1
    if f.precision <= need:
        raise ValueError(f"eigenform precision {f.precision} too small; need > {need}")
    basis = cusp_plus_basis(k, precision)
    if len(basis) != dim_cusp_forms(f.weight):
        raise ValueError("plus cusp space dimension differs from dim S_2k")
    K = f.hecke_field
    rel = _relations(k, precision, f.a)
    rows = []
    for target, base, factor in rel:
        rows.append([h.qexp[target] - factor * h.qexp[base] for h in basis])
    vs = nullspace(rows, len(basis))
    if len(vs) != 1:
        raise ValueError(f"Shimura relation system has a {len(vs)}-dimensional solution space")
    v = vs[0]
    coeffs = [sum((c * h.qexp[m] for c, h in zip(v, basis)), Fraction(0)) for m in range(precision)]
    first = next((m for m, c in enumerate(coeffs) if c != 0), None)
    if first is None:
        raise ValueError("lift vanished identically")
    lead = coeffs[first]
    coeffs = [c / lead for c in coeffs]
    if K.degree > 1:
        coeffs = [K(c) for c in coeffs]
        qexp = QExpansion(coeffs, precision, K)
    else:
        coeffs = [_rat(c.to_rational() if isinstance(c, NumberFieldElem) else c) for c in coeffs]
        qexp = QExpansion(coeffs, precision)
    certified = all(qexp[m] == 0 for m in range(precision) if not is_plus_index(k, m))
    return HalfIntegralForm(k, qexp, certified)


def shimura_relation_holds(h: HalfIntegralForm, a) -> bool:
    """Check every Shimura relation of h below its precision against coefficients a(m)."""
    return all(
        h.qexp[target] == factor * h.qexp[base]
        for target, base, factor in _relations(h.k, h.precision, a)
    )


def cohen_eisenstein(k: int, precision: int = DEFAULT_PRECISION) -> HalfIntegralForm:
    """Cohen's H_{k+1/2}: c_{|d|} = L(1-k, chi_d) at fundamental d, Shimura relations with
    a_m = sigma_{2k-1}(m) elsewhere."""
    basis = plus_space_basis(k, precision)
    sig = sigma_table(isqrt(precision) + 2, 2 * k - 1)
    rows, rhs = [], []
    for d in _fundamentals(k, precision):
        rows.append([h.qexp[abs(d)] for h in basis])
        rhs.append(dirichlet_L_neg(k, d))
    for target, base, factor in _relations(k, precision, lambda m: sig[m]):
        rows.append([h.qexp[target] - factor * h.qexp[base] for h in basis])
        rhs.append(0)
    v = solve(rows, rhs)
    coeffs = [_rat(sum(c * h.qexp[m] for c, h in zip(v, basis))) for m in range(precision)]
    qexp = QExpansion(coeffs, precision)
    certified = all(qexp[m] == 0 for m in range(precision) if not is_plus_index(k, m))
    return HalfIntegralForm(k, qexp, certified, "c_|d| = L(1-k, chi_d)")

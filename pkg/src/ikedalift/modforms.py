"""Level-one elliptic modular forms: Eisenstein series, cusp forms, Hecke eigenforms,
ordinarity and ordinary p-stabilization."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .arith import QQ, NumberField, NumberFieldElem, QuadRing, to_string
from .linalg import nullspace, rref
from .nt import bernoulli, is_prime
from .series import DEFAULT_PRECISION, QExpansion


def sigma_table(n: int, k: int) -> list[int]:
    """[sigma_k(m) for m < n] by a divisor sieve (entry 0 is 0)."""
    out = [0] * n
    for d in range(1, n):
        dk = d**k
        for m in range(d, n, d):
            out[m] += dk
    return out


def dim_modular_forms(weight: int) -> int:
    if weight < 0 or weight % 2:
        return 0
    if weight == 2:
        return 0
    return weight // 12 + (0 if weight % 12 == 2 else 1)


def dim_cusp_forms(weight: int) -> int:
    if weight < 12 or weight % 2:
        return 0
    return dim_modular_forms(weight) - 1


def eisenstein_series(weight: int, precision: int = DEFAULT_PRECISION) -> QExpansion:
    """zeta(1 - 2k)/2 + sum sigma_{2k-1}(m) q^m for weight 2k."""
    if weight % 2 or weight < 4:
        raise ValueError("Eisenstein series need even weight >= 4")
    const = -bernoulli(weight) / (2 * weight)
    coeffs = sigma_table(precision, weight - 1)
    if precision:
        coeffs[0] = const
    return QExpansion(coeffs, precision)


def _normalized_eisenstein(weight: int, precision: int) -> QExpansion:
    """E_w with constant term 1 and integer coefficients (w = 4, 6)."""
    c = {4: 240, 6: -504}[weight]
    coeffs = [c * s for s in sigma_table(precision, weight - 1)]
    if precision:
        coeffs[0] = 1
    return QExpansion(coeffs, precision)


def delta(precision: int = DEFAULT_PRECISION) -> QExpansion:
    """q prod (1 - q^m)^24, computed as q * J^8 with J = prod (1 - q^m)^3 (Jacobi)."""
    if precision <= 0:
        return QExpansion([], 0)
    n = precision - 1
    J = [0] * max(n, 1)
    m = 0
    while m * (m + 1) // 2 < n:
        J[m * (m + 1) // 2] += (-1) ** m * (2 * m + 1)
        m += 1
    s = QExpansion(J, n)
    s = s * s
    s = s * s
    s = s * s
    return QExpansion([0] + s.coeffs, precision)


def cusp_basis(weight: int, precision: int = DEFAULT_PRECISION) -> list[QExpansion]:
    """The monomials E4^a E6^b Delta^c (4a + 6b + 12c = weight), one per c = 1..dim S."""
    if weight % 2 or weight < 12:
        raise ValueError("cusp forms need even weight >= 12")
    d = dim_cusp_forms(weight)
    D = delta(precision)
    E4 = _normalized_eisenstein(4, precision)
    E6 = _normalized_eisenstein(6, precision)
    basis = []
    Dc = QExpansion([1], precision)
    for c in range(1, d + 1):
        Dc = Dc * D
        rest = weight - 12 * c
        b = 0 if rest % 4 == 0 else 1
        a = (rest - 6 * b) // 4
        basis.append(Dc * (E4**a) * (E6**b))
    return basis


def hecke_Tl(form: QExpansion, weight: int, l: int) -> QExpansion:
    """T_l on a level-one expansion; precision drops to floor(N / l)."""
    n = form.precision // l
    lk = l ** (weight - 1)
    out = []
    for m in range(n):
        c = form[l * m]
        if m % l == 0:
            c = c + lk * form[m // l]
        out.append(c)
    return QExpansion(out, n, form.ring)


def _echelon_basis(basis: list[QExpansion]) -> tuple[list[list], list[int]]:
    rows = [b.coeffs for b in basis]
    red, pivots = rref(rows)
    if len(pivots) != len(basis):
        raise ValueError("basis is not linearly independent at this precision")
    return red, pivots


def _hecke_matrix(red: list[list], pivots: list[int], weight: int, l: int) -> list[list[Fraction]]:
    """Matrix M with T_l(b_i) = sum_j M[i][j] b_j for the echelon rows b_i."""
    M = []
    for row in red:
        img = hecke_Tl(QExpansion(row), weight, l)
        if pivots[-1] >= img.precision:
            raise ValueError("precision too small for the Hecke matrix")
        M.append([img[p] for p in pivots])
    return M


@dataclass
class EigenformData:
    weight: int
    hecke_field: NumberField
    qexp: QExpansion
    normalized: bool = True

    @property
    def k(self) -> int:
        return self.weight // 2

    @property
    def precision(self) -> int:
        return self.qexp.precision

    def a(self, m: int):
        if m >= self.qexp.precision:
            raise IndexError(f"a_{m} needs precision > {m}; have {self.qexp.precision}")
        return self.qexp[m]

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "field": self.hecke_field.polynomial_string(),
            "precision": self.precision,
            "coeffs": [[m, to_string(c)] for m, c in enumerate(self.qexp.coeffs) if m >= 1],
        }

    @classmethod
    def from_json(cls, data: dict) -> "EigenformData":
        from .arith import parse_scalar

        K = NumberField(data["field"])
        prec = data.get("precision", max(m for m, _ in data["coeffs"]) + 1)
        coeffs = [0] * prec
        for m, s in data["coeffs"]:
            coeffs[m] = parse_scalar(s, K)
        return cls(data["weight"], K, QExpansion(coeffs, prec, None if K.degree == 1 else K))


def _rational(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def eigenforms(weight: int, precision: int = DEFAULT_PRECISION) -> list[EigenformData]:
    """Normalized Hecke eigenforms of S_weight(SL2(Z)), one per Galois orbit.

    T_2 is diagonalized on the cusp basis (T_2 + T_3 if its characteristic polynomial
    has repeated factors); each irreducible factor g gives the Hecke field Q[x]/(g)
    with x the eigenvalue, so that a_2 = x whenever T_2 alone is used.
    """
    if weight % 2 or weight < 12:
        raise ValueError("eigenforms need even weight >= 12")
    d = dim_cusp_forms(weight)
    if d == 0:
        return []
    if d == 1:
        f = cusp_basis(weight, precision)[0]
        return [EigenformData(weight, QQ, QExpansion([_rational(c) for c in f.coeffs], precision))]
    work_prec = max(precision, 3 * d + 4)
    red, pivots = _echelon_basis(cusp_basis(weight, work_prec))
    M = _hecke_matrix(red, pivots, weight, 2)
    X = sympy.Symbol("x")
    charpoly = sympy.Matrix(M).charpoly(X)
    if not sympy.Poly(charpoly, X).is_sqf:
        M3 = _hecke_matrix(red, pivots, weight, 3)
        M = [[a + b for a, b in zip(r2, r3)] for r2, r3 in zip(M, M3)]
        charpoly = sympy.Matrix(M).charpoly(X)
        if not sympy.Poly(charpoly, X).is_sqf:
            raise ValueError("Hecke operator has repeated eigenvalues")
    _, factors = sympy.factor_list(charpoly.as_expr(), X)
    out = []
    for g, _ in sorted(factors, key=lambda t: (sympy.degree(t[0], X), str(t[0]))):
        coeffs = [int(c) for c in reversed(sympy.Poly(g, X).all_coeffs())]
        if coeffs[-1] < 0:
            coeffs = [-c for c in coeffs]
        K = NumberField(coeffs)
        lam = K.gen() if K.degree > 1 else Fraction(-coeffs[0], coeffs[1])
        # left eigenvector: v M = lam v
        rows = [[M[j][i] - (lam if i == j else 0) for j in range(d)] for i in range(d)]
        vs = nullspace(rows, d)
        if len(vs) != 1:
            raise ValueError("eigenspace is not one-dimensional")
        v = vs[0]
        coeffs_f = [sum((v[i] * red[i][m] for i in range(d)), 0 * v[0]) for m in range(precision)]
        a1 = coeffs_f[1]
        coeffs_f = [c / a1 for c in coeffs_f]
        if K.degree == 1:
            qexp = QExpansion([_rational(c) if not isinstance(c, NumberFieldElem) else _rational(c.to_rational()) for c in coeffs_f], precision)
        else:
            qexp = QExpansion([K(c) for c in coeffs_f], precision, K)
        out.append(EigenformData(weight, K, qexp))
    return out


def eigenform_with_precision(f: EigenformData, precision: int) -> EigenformData:
    """Recompute ``f`` to a larger precision, matching the same Galois orbit."""
    if precision <= f.precision:
        return f
    for g in eigenforms(f.weight, precision):
        if g.hecke_field == f.hecke_field and g.qexp.agrees_with(f.qexp):
            return g
    raise ValueError("eigenform not found at higher precision")


def is_ordinary(f: EigenformData, p: int, M: int = 30) -> list[tuple[object, bool]]:
    """For each prime ideal over p of the Hecke field: whether v(a_p) = 0 there."""
    from .padic import padic_valuation, split_prime

    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    ap = f.a(p)
    ideals = split_prime(f.hecke_field, p)
    return [(I, ap != 0 and padic_valuation(ap, I, M) == 0) for I in ideals]


def ordinary_at(f: EigenformData, p: int) -> bool:
    return any(flag for _, flag in is_ordinary(f, p))


@dataclass
class StabilizedForm:
    base: EigenformData
    p: int
    ring: QuadRing
    qexp: QExpansion

    @property
    def alpha(self):
        return self.ring.alpha

    @property
    def beta(self):
        return self.ring.beta


def satake_ring(f: EigenformData, p: int) -> QuadRing:
    """base[y]/(y^2 - a_p y + p^(2k-1)) with y standing for alpha_p."""
    return QuadRing(f.a(p), p ** (f.weight - 1))


def ordinary_stabilize(f: EigenformData, p: int, precision: int | None = None) -> StabilizedForm:
    """f* = f - beta_p f(pz), in the quadratic ring where y is the unit root alpha_p."""
    if not ordinary_at(f, p):
        raise ValueError(f"f is not ordinary at {p}")
    qexp = f.qexp if precision is None else f.qexp.truncate(precision)
    R = satake_ring(f, p)
    beta = R.beta
    vp = qexp.Vp(p)
    coeffs = [R(c) - beta * v if v != 0 else R(c) for c, v in zip(qexp.coeffs, vp.coeffs)]
    return StabilizedForm(f, p, R, QExpansion(coeffs, qexp.precision, R))


def eisenstein_stabilize(weight: int, p: int, precision: int = DEFAULT_PRECISION) -> QExpansion:
    """E*(z) = E(z) - p^(weight-1) E(pz); the U_p eigenvalue is 1."""
    E = eisenstein_series(weight, precision)
    return E - E.Vp(p).scale(p ** (weight - 1))

"""Fourier coefficients of Ikeda lifts and Siegel Eisenstein series, Satake parameters,
the stabilization polynomials Phi, Phi*, Psi*, the semi-ordinary p-stabilization and
the operator U_{p,0}: A_T -> A_{pT}.

All alpha/beta arithmetic happens in the formal ring base[y]/(y^2 - a_l y + l^(2k-1))
with y = alpha_l.  Coefficients of the lift itself are symmetric under alpha <-> beta and
come back as Hecke-field elements; stabilized coefficients stay in the ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable

from .arith import NumberField, NumberFieldElem, Poly, QuadExtElem, QuadRing, parse_scalar, to_string
from .halfint import HalfIntegralForm
from .linalg import solve
from .modforms import EigenformData, satake_ring
from .nt import dirichlet_L_neg, kronecker, zeta_neg
from .quadforms.matrices import HalfIntMatrix, classes_up_to, discriminant_data, isometric
from .siegel_series import UnsupportedCase, siegel_series

__all__ = [
    "SatakeParam",
    "FourierTable",
    "satake_params",
    "satake_from_pair",
    "ikeda_coeff",
    "ikeda_local_factor",
    "kohnen_phi_expansion",
    "hecke_stabilization_polys",
    "semi_ordinary_coeff",
    "lift_table",
    "stabilized_table",
    "u_p0_apply",
    "apply_polynomial",
    "stabilize_via_operator",
    "dagger_table",
    "dagger_relation_check",
    "eisenstein_siegel_coeff",
    "eisenstein_stabilized_coeff",
    "eisenstein_rank0_coeff",
    "standard_L_factorization_check",
    "UnsupportedCase",
]


def _check_parity(k: int, n: int):
    if (k - n) % 2:
        raise ValueError(f"need k = n mod 2, got k = {k}, n = {n}")


def _qpow(l: int, e: int) -> Fraction | int:
    return l**e if e >= 0 else Fraction(1, l ** (-e))


def _base_value(x):
    """Collapse rationals with denominator 1 to int."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    if isinstance(x, NumberFieldElem) and x.field.degree == 1:
        return _base_value(x.to_rational())
    return x


# -- Satake parameters ---------------------------------------------------------


@dataclass
class SatakeParam:
    prime: int
    genus: int
    k: int
    psi: list

    @property
    def n(self) -> int:
        return self.genus // 2

    def fundamental_equation(self) -> bool:
        """psi_0^2 psi_1 ... psi_2n = l^(2n(k+n) - n(2n+1))."""
        prod = self.psi[0] ** 2
        for x in self.psi[1:]:
            prod = prod * x
        n, k, l = self.n, self.k, self.prime
        return prod == l ** (2 * n * (k + n) - n * (2 * n + 1))


def satake_from_pair(alpha, beta, k: int, l: int, n: int, gate: bool = True) -> SatakeParam:
    """psi_0 = l^(nk - n(n+1)/2), psi_i = alpha l^(i-k) (i <= n), beta l^(i-k-n) (i > n).

    ``gate=False`` skips the k = n mod 2 condition (the formulas are algebraic in any case)."""
    if gate:
        _check_parity(k, n)
    psi = [l ** (n * k - n * (n + 1) // 2)]
    psi += [alpha * _qpow(l, i - k) for i in range(1, n + 1)]
    psi += [beta * _qpow(l, i - k - n) for i in range(n + 1, 2 * n + 1)]
    return SatakeParam(l, 2 * n, k, psi)


def satake_params(f: EigenformData, l: int, n: int) -> SatakeParam:
    R = satake_ring(f, l)
    return satake_from_pair(R.alpha, R.beta, f.k, l, n)


# -- lift coefficients ---------------------------------------------------------


def ikeda_local_factor(f: EigenformData, T: HalfIntMatrix, l: int, n: int):
    """alpha_l^v F_l(T; beta_l l^(-k-n)), certified alpha <-> beta symmetric."""
    k = f.k
    F = siegel_series(T, l)
    R = satake_ring(f, l)
    val = R.alpha ** F.v * F.poly(R.beta * _qpow(l, -k - n))
    if not val.is_symmetric():
        raise ArithmeticError(f"local factor at {l} for {T} is not symmetric: {val}")
    return _base_value(val.c0)


def _c_fund(h: HalfIntegralForm, d: int):
    if abs(d) >= h.precision:
        raise ValueError(f"c_{abs(d)}(h) is beyond the precision {h.precision} of h")
    return h.c(abs(d))


def _gate(f: EigenformData, h: HalfIntegralForm | None, T: HalfIntMatrix) -> int:
    n = T.n
    _check_parity(f.k, n)
    if h is not None and h.k != f.k:
        raise ValueError("h and f have different k")
    return n


def ikeda_coeff(f: EigenformData, h: HalfIntegralForm, T: HalfIntMatrix, n: int | None = None):
    """A_T(Lift^(2n)(f)) = c_|d|(h) prod_{l | f_T} alpha_l^v F_l(T; beta_l l^(-k-n))."""
    nn = _gate(f, h, T)
    if n is not None and n != nn:
        raise ValueError(f"T has genus {T.genus}, not {2 * n}")
    _, d, _, fac = discriminant_data(T)
    value = _c_fund(h, d)
    for l in fac:
        if value == 0:
            break
        value = value * ikeda_local_factor(f, T, l, nn)
    return _base_value(value)


def kohnen_phi_expansion(f: EigenformData, T: HalfIntMatrix, l: int) -> list[int]:
    """[phi_T(1), phi_T(l), ..., phi_T(l^v)] with
    alpha^v F(T; beta l^(-k-n)) = sum_i phi_T(l^(v-i)) (l^(k-1))^(v-i) a_{l^i}(f).

    Both sides are polynomials of degree v in e1 = alpha + beta (alpha beta = l^(2k-1)
    fixed), so the unknowns are solved from v + 1 integer specializations of e1.
    """
    k, n = f.k, T.n
    F = siegel_series(T, l)
    v = F.v
    e2 = l ** (2 * k - 1)
    rows, rhs = [], []
    for s in range(v + 1):
        e1 = s + 1
        R = QuadRing(e1, e2)
        lhs = R.alpha**v * F.poly(R.beta * _qpow(l, -k - n))
        if not lhs.is_symmetric():
            raise ArithmeticError("generic local factor is not symmetric")
        a = [1, e1]
        while len(a) <= v:
            a.append(e1 * a[-1] - e2 * a[-2])
        rows.append([Fraction(a[i]) for i in range(v + 1)])
        rhs.append(Fraction(lhs.c0))
    try:
        x = solve(rows, rhs)
    except ValueError as exc:
        raise ArithmeticError(f"degenerate specialization system: {exc}") from exc
    phi = []
    for j in range(v + 1):  # phi_T(l^j) sits at i = v - j
        val = Fraction(x[v - j]) / l ** ((k - 1) * j)
        if val.denominator != 1:
            raise ArithmeticError(f"phi_T({l}^{j}) = {val} is not integral")
        phi.append(val.numerator)
    return phi


# -- stabilization polynomials -------------------------------------------------


def _subset_products(sp: SatakeParam):
    n2 = sp.genus
    for r in range(1, n2 + 1):
        for idx in combinations(range(1, n2 + 1), r):
            prod = sp.psi[0]
            for i in idx:
                prod = prod * sp.psi[i]
            yield idx, prod


def _linear_product(roots: Iterable) -> Poly:
    out = Poly([1], "Y")
    for r in roots:
        out = out * Poly([-r, 1], "Y")
    return out


def hecke_stabilization_polys(f: EigenformData, p: int, n: int, check_ordinary: bool = True):
    """(Phi_p, Phi_p*, Psi_p*) over the quadratic ring at p (variable Y)."""
    from .modforms import ordinary_at

    if check_ordinary and not ordinary_at(f, p):
        raise ValueError(f"f is not ordinary at {p}")
    R = satake_ring(f, p)
    return _stabilization_polys(R.alpha, R.beta, f.k, p, n)


def _stabilization_polys(alpha, beta, k: int, p: int, n: int):
    sp = satake_from_pair(alpha, beta, k, p, n)
    top = tuple(range(1, n + 1))
    roots = [sp.psi[0]]
    star = []
    for idx, prod in _subset_products(sp):
        roots.append(prod)
        if idx != top:
            star.append(prod)
    Phi = _linear_product(roots)
    Phi_star = _linear_product(star)
    an1 = alpha ** (n - 1) if n > 1 else 1
    Psi_star = _linear_product(
        [an1 * p ** (k + n - 1)] + [an1 * beta * p ** (2 * i - 2) for i in range(1, n + 1)]
    )
    return Phi, Phi_star, Psi_star


def stabilization_scale(f: EigenformData, p: int, n: int):
    """Psi*(alpha^n) / Phi*(alpha^n)."""
    R = satake_ring(f, p)
    _, Phi_star, Psi_star = _stabilization_polys(R.alpha, R.beta, f.k, p, n)
    an = R.alpha**n
    return Psi_star(an) / Phi_star(an)


def semi_ordinary_coeff(f: EigenformData, h: HalfIntegralForm, T: HalfIntMatrix, p: int, n: int | None = None):
    """Closed form of A_T(Lift*):

        (1 - (d/p) beta_p p^(-k)) c_|d|(h) alpha_p^(v_p(f) + n(n+1)) prod_{l != p} alpha_l^v F_l(T; beta_l l^(-k-n))
    """
    nn = _gate(f, h, T)
    if n is not None and n != nn:
        raise ValueError(f"T has genus {T.genus}, not {2 * n}")
    k = f.k
    R = satake_ring(f, p)
    _, d, _, fac = discriminant_data(T)
    c = _c_fund(h, d)
    value = (1 - R.beta * (kronecker(d, p) * Fraction(1, p**k))) * c
    value = value * R.alpha ** (fac.get(p, 0) + nn * (nn + 1))
    for l in fac:
        if l != p:
            value = value * ikeda_local_factor(f, T, l, nn)
    return value


# -- Fourier tables and U_{p,0} ------------------------------------------------


Supplier = Callable[[HalfIntMatrix], object]


@dataclass
class FourierTable:
    """Coefficients on class representatives, optionally backed by a supplier that can
    produce the coefficient at any T (needed to reach pT outside the table)."""

    genus: int
    weight: int
    level: int
    entries: list = field(default_factory=list)
    supplier: Supplier | None = None
    skipped: list = field(default_factory=list)

    def coeff(self, T: HalfIntMatrix):
        for S, c in self.entries:
            if S == T:
                return c
        return self.lookup(T)

    def lookup(self, T: HalfIntMatrix):
        if self.supplier is not None:
            return self.supplier(T)
        for S, c in self.entries:
            if S.disc == T.disc and isometric(S, T)[0]:
                return c
        raise KeyError(f"class of {T} is not resolvable in this table")

    def __len__(self):
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "weight": self.weight,
            "level": self.level,
            "entries": [
                {"matrix": list(T.entries), "disc": T.disc, "coeff": to_string(c)} for T, c in self.entries
            ],
            "skipped": [{"matrix": list(T.entries), "reason": r} for T, r in self.skipped],
        }

    @classmethod
    def from_json(cls, data: dict, field_: NumberField | QuadRing | None = None) -> "FourierTable":
        entries = []
        for e in data["entries"]:
            T = HalfIntMatrix.from_entries(e["matrix"])
            entries.append((T, _parse_coeff(e["coeff"], field_)))
        skipped = [(HalfIntMatrix.from_entries(s["matrix"]), s["reason"]) for s in data.get("skipped", [])]
        return cls(data["genus"], data["weight"], data.get("level", 1), entries, None, skipped)


def _parse_coeff(text: str, field_):
    if isinstance(field_, QuadRing):
        c0, _, c1 = text.rpartition(" + ")
        c1 = c1.removesuffix(f"*{field_.name}")
        c0, c1 = c0.strip("()"), c1.strip("()")
        base = field_.e1.field if isinstance(field_.e1, NumberFieldElem) else None
        return field_(parse_scalar(c0, base), parse_scalar(c1, base))
    return parse_scalar(text, field_)


def _classes(genus: int, disc_bound: int) -> list[HalfIntMatrix]:
    return classes_up_to(genus, disc_bound) if disc_bound > 0 else []


def _build_table(genus, weight, level, classes, fn: Supplier) -> FourierTable:
    entries, skipped = [], []
    for T in classes:
        try:
            entries.append((T, fn(T)))
        except UnsupportedCase as exc:
            skipped.append((T, str(exc)))
    return FourierTable(genus, weight, level, entries, fn, skipped)


def lift_table(f: EigenformData, h: HalfIntegralForm, n: int, disc_bound: int, classes=None) -> FourierTable:
    _check_parity(f.k, n)
    classes = _classes(2 * n, disc_bound) if classes is None else classes
    return _build_table(2 * n, f.k + n, 1, classes, lambda T: ikeda_coeff(f, h, T))


def stabilized_table(f, h, n: int, p: int, disc_bound: int, classes=None) -> FourierTable:
    """The closed-form semi-ordinary stabilization on every class."""
    _check_parity(f.k, n)
    classes = _classes(2 * n, disc_bound) if classes is None else classes
    return _build_table(2 * n, f.k + n, p, classes, lambda T: semi_ordinary_coeff(f, h, T, p))


def u_p0_apply(table: FourierTable, p: int) -> FourierTable:
    """A_T -> A_{pT}."""
    entries = [(T, table.lookup(T.scale(p))) for T, _ in table.entries]
    sup = table.supplier
    new_sup = (lambda T: sup(T.scale(p))) if sup is not None else None
    return FourierTable(table.genus, table.weight, p, entries, new_sup, list(table.skipped))


def apply_polynomial(table: FourierTable, poly: Poly, p: int, lift=lambda c: c) -> FourierTable:
    """table | poly(U_{p,0}): A_T -> sum_j poly[j] A_{p^j T}.  ``lift`` maps table
    coefficients into the coefficient ring of ``poly``."""
    sup = table.supplier
    if sup is None:
        raise ValueError("applying a polynomial in U_{p,0} needs a coefficient supplier")

    def fn(T):
        total = 0
        for j, c in enumerate(poly.coeffs):
            if c != 0:
                total = total + c * lift(sup(T.scale(p**j)))
        return total

    return _build_table(table.genus, table.weight, p, [T for T, _ in table.entries], fn)


def stabilize_via_operator(f: EigenformData, h: HalfIntegralForm, p: int, disc_bound: int, classes=None) -> FourierTable:
    """Psi*(alpha)/Phi*(alpha) * Lift | Phi*(U_{p,0}) at genus 2, entry by entry."""
    n = 1
    base = lift_table(f, h, n, disc_bound, classes)
    R = satake_ring(f, p)
    _, Phi_star, _ = hecke_stabilization_polys(f, p, n)
    scale = stabilization_scale(f, p, n)
    out = apply_polynomial(base, Phi_star, p, lift=lambda c: R(c))
    out.entries = [(T, scale * c) for T, c in out.entries]
    sup = out.supplier
    out.supplier = lambda T: scale * sup(T)
    return out


def dagger_table(f: EigenformData, h: HalfIntegralForm, p: int, disc_bound: int, classes=None) -> FourierTable:
    """Lift | (U_{p,0} - psi_0) Phi*(U_{p,0}) at genus 2."""
    n = 1
    base = lift_table(f, h, n, disc_bound, classes)
    R = satake_ring(f, p)
    _, Phi_star, _ = hecke_stabilization_polys(f, p, n)
    psi0 = p ** (n * f.k - n * (n + 1) // 2)
    return apply_polynomial(base, Phi_star * Poly([-psi0, 1], "Y"), p, lift=lambda c: R(c))


def dagger_relation_check(f, h, p: int, disc_bound: int, form: str = "stated", classes=None) -> tuple[bool, list]:
    """Compare (Psi*/Phi*)(alpha^n) Lift^dagger with c * Lift^* entry by entry.

    ``form="stated"`` uses c = 1 - p^(nk - n(n+1)/2); ``form="corrected"`` uses
    c = alpha^n - psi_0, which is what follows from Lift | Phi*(U) being a U_{p,0}
    eigenvector with eigenvalue alpha^n.  Returns (all agree, failing classes).
    """
    if form not in ("stated", "corrected"):
        raise ValueError("form must be 'stated' or 'corrected'")
    n = 1
    R = satake_ring(f, p)
    psi0 = p ** (n * f.k - n * (n + 1) // 2)
    c = 1 - psi0 if form == "stated" else R.alpha**n - psi0
    scale = stabilization_scale(f, p, n)
    dag = dagger_table(f, h, p, disc_bound, classes)
    star = stabilized_table(f, h, n, p, disc_bound, [T for T, _ in dag.entries])
    bad = [T for (T, a), (_, b) in zip(dag.entries, star.entries) if scale * a != c * b]
    return not bad, bad


# -- Siegel Eisenstein series --------------------------------------------------


def _eis_gate(k: int, n: int):
    _check_parity(k, n)
    if k <= n + 1:
        raise ValueError(f"need k > n + 1, got k = {k}, n = {n}")


def eisenstein_siegel_coeff(k: int, n: int, T: HalfIntMatrix) -> Fraction:
    """A_T(E^(2n)_{k+n}) = L(1-k, chi_d) prod_{l | f_T} F_l(T; l^(k-n-1))."""
    _eis_gate(k, n)
    if T.n != n:
        raise ValueError(f"T has genus {T.genus}, not {2 * n}")
    _, d, _, fac = discriminant_data(T)
    value = dirichlet_L_neg(k, d)
    for l in fac:
        value *= siegel_series(T, l).poly(l ** (k - n - 1))
    return value


def eisenstein_stabilized_coeff(k: int, n: int, T: HalfIntMatrix | None, p: int) -> Fraction:
    """A_T((E^(2n)_{k+n})*) = L^(p)(1-k, chi_d) prod_{l | f_T, l != p} F_l(T; l^(k-n-1)).

    ``T=None`` or a zero matrix is the rank-0 coefficient; singular T of intermediate
    rank is refused.
    """
    _eis_gate(k, n)
    if T is None or all(e == 0 for e in T.entries):
        return eisenstein_rank0_coeff(k, n, p)
    if T.n != n:
        raise ValueError(f"T has genus {T.genus}, not {2 * n}")
    if T.disc == 0:
        raise UnsupportedCase("coefficients at singular T of intermediate rank are not implemented")
    _, d, _, fac = discriminant_data(T)
    value = dirichlet_L_neg(k, d) * (1 - kronecker(d, p) * p ** (k - 1))
    for l in fac:
        if l != p:
            value *= siegel_series(T, l).poly(l ** (k - n - 1))
    return value


def _zeta_p(m: int, p: int) -> Fraction:
    """zeta^(p)(1 - m) = (1 - p^(m-1)) zeta(1 - m)."""
    return (1 - p ** (m - 1)) * zeta_neg(m)


def eisenstein_rank0_coeff(k: int, n: int, p: int) -> Fraction:
    """2^(-n) zeta^(p)(1-k-n) prod_{i=1..n} zeta^(p)(1-2k-2n+2i)."""
    _eis_gate(k, n)
    value = Fraction(1, 2**n) * _zeta_p(k + n, p)
    for i in range(1, n + 1):
        value *= _zeta_p(2 * k + 2 * n - 2 * i, p)
    return value


# -- standard L-function ---------------------------------------------------------


def _inverse(x):
    if isinstance(x, QuadExtElem):
        return x.inverse()
    return 1 / Fraction(x)


def standard_L_factorization_check(
    f: EigenformData | None, n: int, l: int, *, pair=None, k: int | None = None, perturb: tuple[int, object] | None = None
) -> bool:
    """(1-u) prod_i (1 - psi_i u)(1 - psi_i^-1 u) == (1-u) prod_i (1 - alpha l^(i-k-n) u)(1 - beta l^(i-k-n) u).

    ``pair=(alpha, beta)`` with ``k`` replaces the eigenform (e.g. (1, l^(2k-1)) for the
    Eisenstein series).  ``perturb=(i, c)`` multiplies psi_i by c before the comparison.
    """
    if pair is None:
        R = satake_ring(f, l)
        alpha, beta, k = R.alpha, R.beta, f.k
    else:
        alpha, beta = pair
    sp = satake_from_pair(alpha, beta, k, l, n, gate=False)
    psi = list(sp.psi)
    if perturb is not None:
        i, c = perturb
        psi[i] = psi[i] * c
    one_minus_u = Poly([1, -1], "u")
    lhs = one_minus_u
    for i in range(1, 2 * n + 1):
        lhs = lhs * Poly([1, -psi[i]], "u") * Poly([1, -_inverse(psi[i])], "u")
    rhs = one_minus_u
    for i in range(1, 2 * n + 1):
        s = _qpow(l, i - k - n)
        rhs = rhs * Poly([1, -(alpha * s)], "u") * Poly([1, -(beta * s)], "u")
    return lhs.degree == rhs.degree == 4 * n + 1 and lhs == rhs

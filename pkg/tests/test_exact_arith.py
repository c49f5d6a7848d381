from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ikedalift.arith import (
    QQ,
    MINUS_INFINITY,
    NumberField,
    Poly,
    QuadRing,
    field_norm,
    quadext_conjugate,
    quadext_is_symmetric,
)
from ikedalift.linalg import nullspace, rank, rref, solve
from ikedalift.nt import (
    bernoulli,
    dirichlet_L_neg,
    fundamental_part,
    generalized_bernoulli,
    is_fundamental_discriminant,
    kronecker,
    zeta_neg,
)
from ikedalift.series import QExpansion, int_poly_mul, series_scale, series_Up, series_Vp

K32 = NumberField("x^2 - 39960*x - 2235350016")
ints = st.integers(-10**6, 10**6)
rats = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)


# -- number fields -------------------------------------------------------------


def test_number_field_rejects_reducible():
    with pytest.raises(ValueError):
        NumberField([-1, 0, 1])


def test_norm_of_generator_is_constant_term():
    assert field_norm(K32.gen()) == -2235350016


def test_norm_of_rational():
    assert field_norm(K32(Fraction(3, 2))) == Fraction(9, 4)


@given(a=st.lists(rats, min_size=2, max_size=2), b=st.lists(rats, min_size=2, max_size=2))
@settings(max_examples=60, deadline=None)
def test_norm_multiplicative(a, b):
    x, y = K32(0) + a[0] + a[1] * K32.gen(), K32(0) + b[0] + b[1] * K32.gen()
    assert field_norm(x * y) == field_norm(x) * field_norm(y)


@given(a=st.lists(rats, min_size=2, max_size=2))
@settings(max_examples=60, deadline=None)
def test_inverse(a):
    x = K32(a[0]) + a[1] * K32.gen()
    if x == 0:
        return
    assert x * x.inverse() == 1


def test_parse_roundtrip():
    x = K32.parse("29000909200*x - 4470615038375388")
    assert K32.parse(str(x)) == x
    assert QQ.parse("-7/3") == Fraction(-7, 3)


# -- quadratic ring ------------------------------------------------------------

TAU11 = 534612


def test_conjugate_of_y():
    R = QuadRing(TAU11, 11**11)
    assert quadext_conjugate(R.y) == TAU11 - R.y
    assert quadext_conjugate(5) == 5
    assert quadext_conjugate(R.y) * R.y == 11**11


def test_symmetric_witness():
    R = QuadRing(TAU11, 11**11)
    ok, w = quadext_is_symmetric(R.y + quadext_conjugate(R.y))
    assert ok and w == TAU11
    assert quadext_is_symmetric(R.y) == (False, None)


def test_example_local_factor_symmetric():
    R = QuadRing(TAU11, 11**11)
    F = Poly([1, -1452, 161051])
    val = R.alpha * F(R.beta * Fraction(1, 11**8))
    ok, w = quadext_is_symmetric(val)
    assert ok and w == TAU11 - 1452 * 11**3


quad = st.tuples(st.integers(-50, 50), st.integers(-50, 50))


@given(quad, quad, quad, st.integers(-20, 20), st.integers(1, 30))
@settings(max_examples=80, deadline=None)
def test_quad_ring_laws(a, b, c, e1, e2):
    R = QuadRing(e1, e2)
    x, y, z = R(*a), R(*b), R(*c)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert x.conjugate().conjugate() == x
    assert quadext_is_symmetric(x + x.conjugate())[0]
    assert quadext_is_symmetric(x * x.conjugate())[0]


def test_quad_ring_over_number_field():
    R = QuadRing(K32.gen(), 11**31)
    s = R.alpha + R.beta
    assert s.is_symmetric() and s.c0 == K32.gen()


# -- polynomials ---------------------------------------------------------------


def test_poly_basics():
    assert Poly([]).degree is MINUS_INFINITY
    assert Poly([1, 2, 0, 0]).degree == 1
    assert Poly([1, -1452, 161051]).to_string() == "1 - 1452*X + 161051*X^2"
    assert Poly.parse("1 - 1452*X + 161051*X^2") == Poly([1, -1452, 161051])


def test_poly_divmod():
    a = Poly([1, 1]) * Poly([2, 0, 1]) + Poly([3])
    q, r = a.divmod_monic(Poly([2, 0, 1]))
    assert q == Poly([1, 1]) and r == Poly([3])


# -- series --------------------------------------------------------------------


def test_series_examples():
    a = QExpansion([1, 1], 10)
    b = QExpansion([1, -1], 10)
    assert (a * b).coeffs[:3] == [1, 0, -1]
    assert series_scale(a, 0).is_zero()


def test_delta_truncated_product():
    q = QExpansion([0, 1], 4)
    prod = q
    for m in range(1, 4):
        factor = QExpansion([1] + [0] * (m - 1) + [-1], 4)
        prod = prod * factor**24
    assert prod.coeffs == [0, 1, -24, 252]


def test_vp_up():
    a = QExpansion([0, 1, 1], 11)
    v = series_Vp(a, 5)
    assert list(v.nonzero_terms()) == [(5, 1), (10, 1)]
    assert series_Up(v, 5).truncate(2) == a.truncate(2)
    assert series_Up(QExpansion([0, 0, 1, 1], 10), 2).coeffs[:2] == [0, 1]
    assert series_Up(QExpansion([7], 10), 3)[0] == 7
    assert series_Up(QExpansion([0] * 11, 11), 2).precision == 5


series_st = st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=40)


@given(series_st, series_st)
@settings(max_examples=80, deadline=None)
def test_kronecker_multiplication_matches_schoolbook(a, b):
    n = min(len(a), len(b))
    naive = [sum(a[i] * b[m - i] for i in range(m + 1)) for m in range(n)]
    assert int_poly_mul(a, b, n) == naive


@given(series_st, series_st, series_st)
@settings(max_examples=40, deadline=None)
def test_series_ring_laws(a, b, c):
    A, B, C = QExpansion(a), QExpansion(b), QExpansion(c)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert (A * B).precision == min(A.precision, B.precision)


@given(series_st, st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=40, deadline=None)
def test_up_vp_section(a, p):
    A = QExpansion(a)
    UV = series_Up(series_Vp(A, p), p)
    assert all(UV[m] == A[m] for m in range(UV.precision))
    VU = series_Vp(series_Up(A, p), p)
    assert all(VU[m] == (A[m] if m % p == 0 else 0) for m in range(VU.precision) if m < p * (A.precision // p))


# -- linear algebra ------------------------------------------------------------


def test_linalg():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    assert rank(rows) == 1
    ns = nullspace(rows, 3)
    assert len(ns) == 2
    for v in ns:
        assert all(sum(r[i] * v[i] for i in range(3)) == 0 for r in rows)
    assert solve([[1, 1], [1, -1]], [3, 1]) == [2, 1]
    with pytest.raises(ValueError):
        solve([[1, 1], [1, 1]], [1, 2])
    red, piv = rref([[0, 2], [1, 1]])
    assert piv == [0, 1]


# -- elementary number theory --------------------------------------------------


def test_bernoulli_and_zeta():
    assert bernoulli(12) == Fraction(-691, 2730)
    assert zeta_neg(6) == Fraction(-1, 252)
    assert zeta_neg(12) == Fraction(691, 32760)


def test_dirichlet_L_values():
    assert dirichlet_L_neg(6, 1) == Fraction(-1, 252)
    assert dirichlet_L_neg(1, -4) == Fraction(1, 2)
    assert dirichlet_L_neg(2, -4) == 0  # odd character, even k
    assert generalized_bernoulli(1, -3) == Fraction(-1, 3)
    with pytest.raises(ValueError):
        dirichlet_L_neg(2, 9)


def test_kronecker():
    assert kronecker(5, 11) == 1
    assert all(kronecker(d, 1) == 1 for d in range(-20, 20))
    assert kronecker(12, 2) == 0
    # multiplicative in the bottom argument
    for d in (-23, -4, 5, 8, 12, 13):
        for m in range(1, 30):
            for r in range(1, 30):
                assert kronecker(d, m * r) == kronecker(d, m) * kronecker(d, r)


def test_fundamental_part():
    assert fundamental_part(121) == (1, 11)
    assert fundamental_part(8) == (8, 1)
    assert fundamental_part(12) == (12, 1)
    assert fundamental_part(-300) == (-3, 10)
    for D in range(-400, 400):
        if D % 4 in (0, 1) and D != 0:
            d, f = fundamental_part(D)
            assert d * f * f == D and is_fundamental_discriminant(d)

from fractions import Fraction

import pytest

from ikedalift.halfint import (
    cohen_eisenstein,
    cusp_plus_basis,
    is_plus_index,
    plus_space_basis,
    shimura_eigen_lift,
    shimura_relation_holds,
)
from ikedalift.modforms import (
    EigenformData,
    cusp_basis,
    delta,
    dim_cusp_forms,
    dim_modular_forms,
    eigenforms,
    eisenstein_series,
    eisenstein_stabilize,
    hecke_Tl,
    is_ordinary,
    ordinary_at,
    ordinary_stabilize,
)
from ikedalift.nt import gcd_list, sigma

TAU = [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]


def test_delta():
    assert delta(13).coeffs == TAU


def test_e12_constant_term():
    E = eisenstein_series(12, 5)
    # normalized so that a_1 = 1: constant term -B_12/24 = 691/65520
    assert E[0] == Fraction(691, 65520)
    assert E[1] == 1 and E[2] == sigma(2, 11)


def test_dimensions():
    assert [dim_modular_forms(k) for k in (0, 2, 4, 12, 14, 24)] == [1, 0, 1, 2, 1, 3]
    assert [dim_cusp_forms(k) for k in (12, 16, 24, 32)] == [1, 1, 2, 2]
    with pytest.raises(ValueError):
        eigenforms(13)


def test_weight16():
    (f,) = eigenforms(16, 5)
    assert f.a(2) == 216


def test_tau_multiplicative():
    f = eigenforms(12, 60)[0]
    for m in range(1, 8):
        for n in range(1, 8):
            if gcd_list([m, n]) == 1:
                assert f.a(m * n) == f.a(m) * f.a(n)
    # Hecke recursion at p = 2
    assert f.a(4) == f.a(2) ** 2 - 2**11


def test_f32_hecke_eigen(f32):
    g = hecke_Tl(f32.qexp, 32, 2)
    lam = f32.a(2)
    assert all(g[m] == lam * f32.a(m) for m in range(1, g.precision))


def test_f32_is_eigen_for_T3(f32):
    g = hecke_Tl(f32.qexp, 32, 3)
    assert all(g[m] == f32.a(3) * f32.a(m) for m in range(1, g.precision))


def test_a_out_of_precision():
    f = eigenforms(12, 10)[0]
    with pytest.raises(IndexError):
        f.a(10)


def test_eigenform_json_roundtrip(f32):
    g = EigenformData.from_json(f32.to_json())
    assert g.hecke_field == f32.hecke_field
    assert all(g.a(m) == f32.a(m) for m in range(1, 40))


def test_tau_2411_divisible():
    f = eigenforms(12, 2412)[0]
    assert f.a(2411) % 2411 == 0
    assert not ordinary_at(f, 2411)


def test_f32_ordinary_at_11(f32):
    flags = is_ordinary(f32, 11)
    assert any(ok for _, ok in flags)


def test_ordinary_stabilization_is_Up_eigen(f12):
    fs = ordinary_stabilize(f12, 11, 110)
    up = fs.qexp.Up(11)
    assert all(up[m] == fs.alpha * fs.qexp[m] for m in range(up.precision))


def test_ordinary_stabilization_nonordinary_raises():
    f = eigenforms(12, 2412)[0]
    with pytest.raises(ValueError):
        ordinary_stabilize(f, 2411)


def test_eisenstein_stabilization_eigenvalue_one():
    Es = eisenstein_stabilize(12, 5, 60)
    up = Es.Up(5)
    assert all(up[m] == Es[m] for m in range(up.precision))


def test_cusp_basis_integral():
    for b in cusp_basis(24, 10):
        assert all(Fraction(c).denominator == 1 for c in b.coeffs)


# -- half-integral weight ------------------------------------------------------


def test_plus_space_dimensions():
    for k in (2, 4, 6, 8, 9, 16):
        assert len(plus_space_basis(k, 60)) == dim_modular_forms(2 * k)
        assert len(cusp_plus_basis(k, 60)) == dim_cusp_forms(2 * k)


def test_plus_condition_on_basis():
    for h in plus_space_basis(6, 40):
        assert all(h.qexp[m] == 0 for m in range(40) if not is_plus_index(6, m))


def test_h13_2(h12):
    assert h12.c(4) == -56 and h12.c(9) == 9 and h12.plus_certified
    assert h12.normalization == "c_min = 1"


def test_h18_starts_at_three(h18):
    # weight 19/2 plus space: (-1)^9 m = 0, 1 mod 4 forces m = 0, 3 mod 4
    assert h18.c(1) == 0 and h18.c(3) == 1


def test_shimura_relations(f12, h12):
    assert shimura_relation_holds(h12, f12.a)
    assert not shimura_relation_holds(h12, lambda m: f12.a(m) + (1 if m == 2 else 0))


def test_shimura_lift_precision_gate():
    f = eigenforms(12, 5)[0]
    with pytest.raises(ValueError):
        shimura_eigen_lift(f, 100)


def test_cohen_eisenstein_h52():
    H = cohen_eisenstein(2, 13)
    expected = {0: Fraction(1, 120), 1: Fraction(-1, 12), 4: Fraction(-7, 12), 5: Fraction(-2, 5),
                8: -1, 9: Fraction(-25, 12), 12: -2}
    assert {m: H.c(m) for m in range(13) if H.c(m) != 0} == expected

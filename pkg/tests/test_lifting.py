from fractions import Fraction

import pytest

from ikedalift.halfint import cohen_eisenstein
from ikedalift.lifting import (
    FourierTable,
    dagger_relation_check,
    eisenstein_rank0_coeff,
    eisenstein_siegel_coeff,
    eisenstein_stabilized_coeff,
    hecke_stabilization_polys,
    ikeda_coeff,
    ikeda_local_factor,
    kohnen_phi_expansion,
    lift_table,
    satake_from_pair,
    satake_params,
    semi_ordinary_coeff,
    stabilized_table,
    standard_L_factorization_check,
    u_p0_apply,
)
from ikedalift.halfint import shimura_eigen_lift
from ikedalift.modforms import satake_ring
from ikedalift.quadforms import HalfIntMatrix, classes_up_to, content
from ikedalift.siegel_series import UnsupportedCase

from conftest import T1, T2, T3

TAU11 = 534612


def test_example_coefficient_f12(f12, h12):
    for T in (T1, T2, T3):
        assert ikeda_coeff(f12, h12, T) == TAU11 - 1452 * 11**3 == -1398000


def test_example_coefficient_f32(f32, h32):
    K = f32.hecke_field
    assert ikeda_coeff(f32, h32, T1) == K.parse("29000909200*x - 54597593071363200")


def test_kohnen_phi(f12, f32):
    assert kohnen_phi_expansion(f12, T1, 11) == [1, -12]
    assert kohnen_phi_expansion(f32, T1, 11) == [1, -12]


def test_local_factor_symmetric(f12):
    value = ikeda_local_factor(f12, T1, 11, 2)
    assert value == TAU11 - 1452 * 11**3


def test_parity_gate(f12, h12):
    with pytest.raises(ValueError):
        lift_table(f12, h12, 1, 20)
    with pytest.raises(ValueError):
        ikeda_coeff(f12, h12, HalfIntMatrix(2, (1, 1, 1)))


def test_precision_gate(f12):
    h = shimura_eigen_lift(f12, 60)
    T = next(T for T in classes_up_to(4, 200) if T.disc > 100 and T.disc != 121)
    with pytest.raises(ValueError):
        ikeda_coeff(f12, h, T)


def test_satake_fundamental_equation(f12, f18):
    for l in (2, 3, 5, 11):
        assert satake_params(f12, l, 2).fundamental_equation()
        assert satake_params(f18, l, 1).fundamental_equation()


def test_satake_parity():
    with pytest.raises(ValueError):
        satake_from_pair(1, 3**11, 6, 3, 1)
    assert satake_from_pair(1, 3**11, 6, 3, 1, gate=False).fundamental_equation()


def test_stabilization_polys(f12):
    alpha = satake_ring(f12, 11).alpha
    Phi, Phi_star, Psi_star = hecke_stabilization_polys(f12, 11, 2)
    assert (Phi.degree, Phi_star.degree, Psi_star.degree) == (16, 14, 3)
    assert Psi_star.divides(Phi_star) and Phi_star.divides(Phi)
    assert not Phi.divides(Phi_star)
    assert Phi(alpha**2) == 0 and Phi_star(alpha**2) != 0


def test_stabilization_polys_need_ordinary():
    from ikedalift.modforms import eigenforms

    f = eigenforms(12, 2412)[0]
    with pytest.raises(ValueError):
        hecke_stabilization_polys(f, 2411, 1)


def test_semi_ordinary_eigenvalue_genus4(f12, h12):
    alpha = satake_ring(f12, 11).alpha
    for T in (T1, T2, T3):
        assert semi_ordinary_coeff(f12, h12, T.scale(11), 11) == alpha**2 * semi_ordinary_coeff(f12, h12, T, 11)


def test_u_p0(f18, h18):
    table = lift_table(f18, h18, 1, 30)
    up = u_p0_apply(table, 17)
    for (T, _), (_, c) in zip(table.entries, up.entries):
        assert c == ikeda_coeff(f18, h18, T.scale(17))


def test_dagger_corrected_small(f18, h18):
    assert dagger_relation_check(f18, h18, 17, 60, form="corrected")[0]
    with pytest.raises(ValueError):
        dagger_relation_check(f18, h18, 17, 60, form="other")


def test_table_json_roundtrip(f32, h32):
    table = lift_table(f32, h32, 2, 130)
    data = table.to_json()
    back = FourierTable.from_json(data, f32.hecke_field)
    assert [T for T, _ in back.entries] == [T for T, _ in table.entries]
    assert [c for _, c in back.entries] == [c for _, c in table.entries]
    assert len(back.skipped) == len(table.skipped)


def test_stabilized_table_json_roundtrip(f18, h18):
    table = stabilized_table(f18, h18, 1, 17, 80)
    R = satake_ring(f18, 17)
    back = FourierTable.from_json(table.to_json(), R)
    assert [c for _, c in back.entries] == [c for _, c in table.entries]


def test_lookup_by_isometry(f18, h18):
    table = lift_table(f18, h18, 1, 40)
    T = table.entries[5][0]
    S = T.transform([[1, 1], [0, 1]])
    table.supplier = None
    assert table.lookup(S) == table.entries[5][1]


def test_unsupported_are_skipped(f12, h12):
    table = lift_table(f12, h12, 2, 64)
    assert table.skipped and all("genus" in r or "v_" in r for _, r in table.skipped)


# -- Eisenstein ------------------------------------------------------------------


def test_eisenstein_matches_cohen():
    k = 5
    H = cohen_eisenstein(k, 200)
    for T in classes_up_to(2, 199):
        if content(T) == 1:
            assert eisenstein_siegel_coeff(k, 1, T) == H.c(-T.disc)


def test_eisenstein_rank0_example():
    assert eisenstein_rank0_coeff(5, 1, 3) == Fraction(108251, 1512)
    assert eisenstein_stabilized_coeff(5, 1, HalfIntMatrix(2, (0, 0, 0)), 3) == Fraction(108251, 1512)


def test_eisenstein_gates():
    with pytest.raises(ValueError):
        eisenstein_siegel_coeff(2, 1, HalfIntMatrix(2, (1, 1, 1)))
    with pytest.raises(ValueError):
        eisenstein_siegel_coeff(6, 1, HalfIntMatrix(2, (1, 1, 1)))
    with pytest.raises(UnsupportedCase):
        eisenstein_stabilized_coeff(5, 1, HalfIntMatrix(2, (1, 1, 2)), 3)


def test_eisenstein_standard_L():
    assert standard_L_factorization_check(None, 1, 3, pair=(1, 3**11), k=6)
    assert standard_L_factorization_check(None, 2, 5, pair=(1, 5**11), k=6)


def test_standard_L_mutation(f12):
    assert standard_L_factorization_check(f12, 2, 3)
    assert not standard_L_factorization_check(f12, 2, 3, perturb=(2, 3))

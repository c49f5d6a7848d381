"""Exact computation of Ikeda (Duke-Imamoglu) lifts, their semi-ordinary p-stabilizations
and the p-adic congruences between them."""

__version__ = "0.1.0"

from .arith import QQ, NumberField, NumberFieldElem, Poly, QuadExtElem, QuadRing, field_norm
from .halfint import HalfIntegralForm, cohen_eisenstein, plus_space_basis, shimura_eigen_lift
from .lifting import (
    FourierTable,
    SatakeParam,
    eisenstein_siegel_coeff,
    eisenstein_stabilized_coeff,
    hecke_stabilization_polys,
    ikeda_coeff,
    kohnen_phi_expansion,
    lift_table,
    satake_params,
    semi_ordinary_coeff,
    stabilize_via_operator,
    standard_L_factorization_check,
    u_p0_apply,
)
from .modforms import EigenformData, eigenforms, is_ordinary, ordinary_stabilize
from .padic import congruence_scan, factor_report, padic_valuation, split_prime
from .quadforms import BinaryQF, HalfIntMatrix, classes_up_to, enumerate_classes
from .series import QExpansion
from .siegel_series import SiegelSeriesPoly, UnsupportedCase, siegel_series

__all__ = [name for name in dir() if not name.startswith("_")]

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2mirror.cyextract import (
    CHART_CONVENTION,
    MembershipError,
    NonUnitVector,
    chart_type,
    complex_coordinates,
    dual_pair,
    extract,
    format_j_table,
    holomorphy_type,
    hyperplane_basis,
    verify,
)
from g2mirror.exactalg import determinant, transpose
from g2mirror.exterior import Vector, inner, parse_form
from g2mirror.g2core import CoordinatePlane

b = Vector.basis
PYTH = Vector([F(3, 5), F(4, 5), 0, 0, 0, 0, 0])
E123 = CoordinatePlane.coordinate((1, 2, 3))
DBETA = [[(1, -1, -1, 1, 1, -1, -1)[i] * (i == j) for j in range(7)] for i in range(7)]

XIS = [b(4), b(1), b(5), b(2), PYTH, Vector([0, 0, 0, F(5, 13), 0, F(12, 13), 0])]


def test_j_table_e4():
    assert format_j_table(extract(b(4))) == (
        "e1 -> e5", "e2 -> e6", "e3 -> -e7", "e5 -> -e1", "e6 -> -e2", "e7 -> e3")


def test_j_table_e1():
    assert format_j_table(extract(b(1))) == (
        "e2 -> -e3", "e3 -> e2", "e4 -> -e5", "e5 -> e4", "e6 -> -e7", "e7 -> e6")


def test_omega_e1():
    assert extract(b(1)).omega == parse_form("+1*e23 +1*e45 +1*e67", 7, 2)


def test_charts_match_classical_tables():
    assert CHART_CONVENTION == -1
    z = complex_coordinates(extract(b(4)))
    assert z.pairs == ((1, 5, -1), (2, 6, -1), (3, 7, 1))
    assert z.formulas("z") == ("z1 = x1 - i x5", "z2 = x2 - i x6", "z3 = x3 + i x7")
    w = complex_coordinates(extract(b(1)))
    assert w.pairs == ((2, 3, 1), (4, 5, 1), (6, 7, 1))
    assert w.formulas("w") == ("w1 = x2 + i x3", "w2 = x4 + i x5", "w3 = x6 + i x7")


def test_no_chart_for_skew_xi():
    assert complex_coordinates(extract(PYTH)) is None


@pytest.mark.parametrize("xi", XIS, ids=lambda v: ",".join(map(str, v)))
def test_hyperplane_basis_orthonormal_and_oriented(xi):
    basis = hyperplane_basis(xi)
    for i, u in enumerate(basis):
        assert inner(u, xi) == 0
        for j, v in enumerate(basis):
            assert inner(u, v) == (1 if i == j else 0)
    assert determinant(transpose(list(basis) + [xi])) == 1


@pytest.mark.parametrize("xi", XIS, ids=lambda v: ",".join(map(str, v)))
def test_verification_passes(xi):
    ver = verify(extract(xi))
    assert ver.ok, [(c.name, c.witness) for c in ver.checks if not c.passed]


def test_signs_global():
    signs = {(v.compat_sign, v.type_sign) for v in (verify(extract(x)) for x in XIS)}
    assert signs == {(-1, 1)}
    assert chart_type(1) == "(0,3)"
    assert chart_type(1, convention=1) == "(3,0)"


def test_non_unit_rejected():
    with pytest.raises(NonUnitVector):
        extract(b(1) + b(2))
    with pytest.raises(NonUnitVector):
        extract(Vector([2, 0, 0, 0, 0, 0, 0]))


def test_float_rejected():
    with pytest.raises(TypeError):
        extract((1.0, 0, 0, 0, 0, 0, 0))


def test_dual_pair_classical():
    pair = dual_pair(E123, b(4), b(1))
    assert pair.ok
    assert pair.data.label() == "T6_123567"
    assert pair.data_prime.label() == "T6_234567"
    assert pair.V.indices == (4, 5, 6, 7)


def test_dual_pair_alternate():
    pair = dual_pair(E123, b(5), b(2))
    assert pair.ok
    assert format_j_table(pair.data) is not None


def test_dual_pair_membership():
    with pytest.raises(MembershipError):
        dual_pair(E123, b(1), b(1))
    with pytest.raises(MembershipError):
        dual_pair(E123, b(4), b(5))
    with pytest.raises(MembershipError):
        dual_pair(CoordinatePlane.coordinate((1, 2, 4)), b(3), b(1))


def test_holomorphy_dbeta_xi_prime():
    h = holomorphy_type(DBETA, extract(b(1)))
    assert h.kind == "holomorphic"
    assert h.chart_action == (-1, 1, -1)
    assert h.omega_sign == 1 and h.Omega_factor == "1"


def test_holomorphy_dbeta_xi():
    # chart order (z1, z2, z3) pairs axes (1,5), (2,6), (3,7); the T2 factor of
    # the Borcea-Voisin model is T2_26, so listing it first gives (-, +, -)
    h = holomorphy_type(DBETA, extract(b(4)))
    assert h.kind == "holomorphic"
    assert h.chart_action == (1, -1, -1)
    assert (h.chart_action[1], h.chart_action[0], h.chart_action[2]) == (-1, 1, -1)


def test_holomorphy_identity():
    ident = [[int(i == j) for j in range(7)] for i in range(7)]
    h = holomorphy_type(ident, extract(b(4)))
    assert (h.kind, h.omega_sign, h.Omega_factor) == ("holomorphic", 1, "1")


def test_holomorphy_antiholomorphic():
    # a reflection through a Lagrangian coordinate plane anticommutes with J
    conj = [[(1, 1, 1, 1, -1, -1, -1)[i] * (i == j) for j in range(7)] for i in range(7)]
    h = holomorphy_type(conj, extract(b(4)))
    assert h.kind == "antiholomorphic"
    assert h.omega_sign == -1


def test_holomorphy_rejects_non_preserving():
    swap = [[0] * 7 for _ in range(7)]
    for i in range(7):
        swap[i][i] = 1
    swap[0][0] = swap[3][3] = 0
    swap[0][3] = swap[3][0] = 1
    with pytest.raises(ValueError):
        holomorphy_type(swap, extract(b(4)))


pyth = st.sampled_from([(3, 4, 5), (5, 12, 13), (8, 15, 17)])


@given(pyth, st.integers(1, 7), st.integers(1, 7), st.booleans())
def test_verification_on_pythagorean_xis(t, i, j, neg):
    if i == j:
        return
    a, c, h = t
    comps = [F(0)] * 7
    comps[i - 1] = F(a, h) * (-1 if neg else 1)
    comps[j - 1] = F(c, h)
    ver = verify(extract(Vector(comps)))
    assert ver.ok
    assert (ver.compat_sign, ver.type_sign) == (-1, 1)

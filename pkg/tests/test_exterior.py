import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2mirror.exterior import (
    KForm,
    Vector,
    contract,
    evaluate,
    form_inner,
    format_form,
    hodge_star,
    lie_derivative_flat,
    parse_form,
    pullback,
    wedge,
)
from g2mirror.g2core import PHI0, STAR_PHI0

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def forms(draw, n=7, degree=None):
    k = draw(st.integers(0, 4)) if degree is None else degree
    blades = list(itertools.combinations(range(1, n + 1), k))
    picked = draw(st.lists(st.sampled_from(blades), min_size=0, max_size=3, unique=True))
    return KForm(n, k, {b: draw(rationals) for b in picked})


def vectors(n=7):
    return st.lists(rationals, min_size=n, max_size=n).map(Vector)


def matrices(n=7):
    return st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n)


def e(*idx, n=7):
    return KForm.blade(idx, n)


def test_wedge_examples():
    assert e(1) ^ e(2) == e(1, 2)
    assert (e(1, 2) ^ e(1, 2)).is_zero()
    assert e(1, 3) ^ e(2) == -e(1, 2, 3)


def test_wedge_dimension_mismatch():
    with pytest.raises(ValueError):
        wedge(e(1, n=7), e(1, n=6))


def test_contract_examples():
    assert contract(Vector.basis(1), PHI0) == parse_form("+1*e23 +1*e45 +1*e67", 7, 2)
    assert contract(Vector.basis(4), PHI0) == parse_form("-1*e15 -1*e26 +1*e37", 7, 2)
    assert contract(Vector.basis(1), e(2, 3)).is_zero()
    with pytest.raises(ValueError):
        contract(Vector.basis(1), KForm.scalar(1))


def test_contract_first_slot():
    a = e(1, 2)
    v = Vector.basis(1)
    w = Vector.basis(2)
    assert evaluate(contract(v, a), w) == evaluate(a, v, w) == 1


def test_hodge_examples():
    assert hodge_star(e(1, 2, 3)) == e(4, 5, 6, 7)
    assert hodge_star(KForm.scalar(1)) == KForm.volume(7)
    expected = parse_form("+1*e4567 +1*e2367 +1*e2345 +1*e1357 -1*e1346 -1*e1256 -1*e1247", 7, 4)
    assert hodge_star(PHI0) == expected == STAR_PHI0


def test_pullback_examples():
    ident = [[int(i == j) for j in range(7)] for i in range(7)]
    assert pullback(ident, PHI0) == PHI0
    alpha = [[(1 if i < 3 else -1) * (i == j) for j in range(7)] for i in range(7)]
    assert pullback(alpha, PHI0) == PHI0
    flip = [[(-1 if i == 0 else 1) * (i == j) for j in range(7)] for i in range(7)]
    assert pullback(flip, e(1, 2)) == -e(1, 2)
    assert pullback(flip, PHI0) != PHI0


def test_evaluate_examples():
    b = Vector.basis
    assert evaluate(PHI0, b(1), b(2), b(3)) == 1
    assert evaluate(PHI0, b(2), b(5), b(7)) == -1
    assert evaluate(PHI0, b(1), b(2), b(4)) == 0
    with pytest.raises(ValueError):
        evaluate(PHI0, b(1), b(2))


def test_lie_derivative_flat_examples():
    assert lie_derivative_flat(Vector.basis(4), PHI0) == KForm.zero(7, 3)
    assert lie_derivative_flat(Vector.basis(1), STAR_PHI0) == KForm.zero(7, 4)
    v = Vector.basis(1) + Vector.basis(4)
    assert lie_derivative_flat(v, parse_form("+3*e12 -1/2*e57", 7, 2)).is_zero()


def test_zero_coefficients_not_stored():
    a = KForm(7, 1, {(1,): 0, (2,): F(1, 2)})
    assert len(a) == 1
    assert (a - a).is_zero() and len(a - a) == 0


def test_serialization_large_n():
    a = KForm.blade((2, 10, 11), 12, F(-3, 2))
    text = format_form(a)
    assert text == "-3/2*e2.10.11"
    assert parse_form(text, 12, 3) == a


@given(forms(), forms())
def test_anticommutativity(a, b):
    assert a ^ b == (b ^ a) * (-1) ** (a.degree * b.degree)


@given(forms(), forms(), forms())
def test_associativity(a, b, c):
    assert (a ^ b) ^ c == a ^ (b ^ c)


@given(vectors(), forms())
def test_contract_twice_is_zero(v, a):
    if a.degree < 2:
        return
    assert contract(v, contract(v, a)).is_zero()


@given(vectors(), forms(), forms())
def test_leibniz(v, a, b):
    if a.degree + b.degree == 0 or a.degree + b.degree > 7:
        return
    lhs = contract(v, a ^ b)
    rhs = KForm.zero(7, a.degree + b.degree - 1)
    if a.degree:
        rhs = rhs + (contract(v, a) ^ b)
    if b.degree:
        rhs = rhs + (a ^ contract(v, b)) * (-1) ** a.degree
    assert lhs == rhs


@pytest.mark.parametrize("k", range(8))
def test_double_star_is_identity(k):
    for blade in itertools.combinations(range(1, 8), k):
        assert hodge_star(hodge_star(e(*blade))) == e(*blade)


@pytest.mark.parametrize("k", range(5))
def test_pairing_positive_definite_on_blades(k):
    blades = list(itertools.combinations(range(1, 7), k))
    vol = KForm.volume(6)
    for x, y in itertools.product(blades, repeat=2):
        a, b = KForm.blade(x, 6), KForm.blade(y, 6)
        assert a ^ hodge_star(b) == vol * form_inner(a, b)
        assert form_inner(a, b) == (1 if x == y else 0)


def _det(m):
    size = len(m)
    total = F(0)
    for perm in itertools.permutations(range(size)):
        sign = 1
        for i, j in itertools.combinations(range(size), 2):
            if perm[i] > perm[j]:
                sign = -sign
        prod = F(1)
        for r, c in enumerate(perm):
            prod *= m[r][c]
        total += sign * prod
    return total


@given(forms(degree=3), st.lists(vectors(), min_size=3, max_size=3))
def test_evaluate_matches_determinant_oracle(a, vs):
    expected = F(0)
    for blade, coef in a.items():
        expected += coef * _det([[v[i - 1] for v in vs] for i in blade])
    assert evaluate(a, *vs) == expected


@given(forms(degree=2), matrices(), matrices())
def test_pullback_functorial(a, L, M):
    LM = [[sum(L[i][k] * M[k][j] for k in range(7)) for j in range(7)] for i in range(7)]
    assert pullback(LM, a) == pullback(M, pullback(L, a))


@given(forms(degree=2), matrices(), st.lists(vectors(), min_size=2, max_size=2))
def test_pullback_definition(a, L, vs):
    Lv = [Vector(sum(L[i][j] * v[j] for j in range(7)) for i in range(7)) for v in vs]
    assert evaluate(pullback(L, a), *vs) == evaluate(a, *Lv)


@given(forms())
def test_format_parse_roundtrip(a):
    assert parse_form(format_form(a), 7, a.degree) == a


def test_phi0_serialization():
    assert format_form(PHI0) == "+1*e123 +1*e145 +1*e167 +1*e246 -1*e257 -1*e347 -1*e356"

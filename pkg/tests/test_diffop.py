"""Differential operators: application, composition, conjugation, flags."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orbitforms.diffop import (DiffOp, GaugeFactor, apply, commutator, compose,
                               gauge_conjugate, preserves_flag,
                               restrict_to_flag)
from orbitforms.errors import FlagViolation, UnsupportedOrder
from orbitforms.models import bc1_operator, build_bc1, g2_operator
from orbitforms.poly import FlagSpace, MultiPoly

t = MultiPoly.variable(1, 0)
HALF = Fraction(1, 2)


def test_apply_annihilates_constants():
    h = bc1_operator(Fraction(1, 3), Fraction(2, 5))
    assert apply(h, MultiPoly.const(1, 1)).is_zero()


def test_apply_linear_monomial():
    nu2, nu3 = Fraction(1, 3), Fraction(2, 5)
    h = bc1_operator(nu2, nu3)
    image = apply(h, t)
    assert image == (2 * nu2 + nu3 + 1) * t + nu3


def test_apply_square_free_case():
    # hand oracle: (tau^2-1)*2 + tau*2tau = 4 tau^2 - 2
    h = bc1_operator(Fraction(0), Fraction(0))
    assert apply(h, t * t) == 4 * t * t - 2


def test_canonical_commutation():
    d = DiffOp.partial(1, 0)
    x = DiffOp.mul_by(t)
    assert commutator(d, x) == DiffOp.identity(1)


def test_compose_euler_square():
    # hand expansion oracle: (tau d)(tau d) = tau^2 d^2 + tau d
    e = DiffOp(1, {(1,): t})
    sq = compose(e, e)
    assert sq == DiffOp(1, {(2,): t * t, (1,): t})


def test_compose_identity_neutral():
    h = bc1_operator(Fraction(1, 2), Fraction(1, 3))
    assert compose(h, DiffOp.identity(1)) == h
    assert compose(DiffOp.identity(1), h) == h


def test_compose_agrees_with_sequential_application():
    # independent oracle: action equality on monomials determines the operator
    a = DiffOp(2, {(1, 0): MultiPoly.variable(2, 1), (0, 1): MultiPoly.const(2, 2)})
    b = DiffOp(2, {(1, 1): MultiPoly.variable(2, 0), (0, 0): MultiPoly.variable(2, 1)})
    ab = compose(a, b)
    for e1 in range(4):
        for e2 in range(4):
            mono = MultiPoly.monomial(2, (e1, e2))
            assert apply(ab, mono) == apply(a, apply(b, mono))


def test_commutator_lowering_euler():
    jminus = DiffOp.partial(1, 0)
    j0 = DiffOp(1, {(1,): t, (0,): MultiPoly.const(1, -4)})
    assert commutator(jminus, j0) == jminus


def test_commutator_antisymmetry():
    h = bc1_operator(Fraction(1, 2), Fraction(1, 3))
    assert commutator(h, h).is_zero()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
       st.fractions(min_value=-3, max_value=3, max_denominator=4),
       st.fractions(min_value=-3, max_value=3, max_denominator=4),
       st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_jacobi_identity(k1, k2, k3, c1, c2, c3):
    def op(k, c):
        return DiffOp(1, {(k,): t * c + 1, (0,): MultiPoly.const(1, c)})
    a, b, c = op(k1, c1), op(k2, c2), op(k3, c3)
    total = (commutator(a, commutator(b, c))
             + commutator(b, commutator(c, a))
             + commutator(c, commutator(a, b)))
    assert total.is_zero()


# -- gauge conjugation ---------------------------------------------------------

def test_gauge_identity_factor():
    h = bc1_operator(Fraction(1, 2), Fraction(1, 3))
    assert gauge_conjugate(h, GaugeFactor(1)) == h


def test_gauge_pure_exponential():
    # hand conjugation oracle: e^{-b tau} d^2 e^{b tau} = d^2 + 2b d + b^2
    b = Fraction(3, 7)
    op = DiffOp(1, {(2,): MultiPoly.const(1, 1)})
    factor = GaugeFactor(1, [], t * b)
    expected = DiffOp(1, {(2,): MultiPoly.const(1, 1),
                          (1,): MultiPoly.const(1, 2 * b),
                          (0,): MultiPoly.const(1, b * b)})
    assert gauge_conjugate(op, factor) == expected


def test_gauge_bc1_rational_to_algebraic():
    # full symbolic conjugation; the additive constant is +(nu2+nu3/2)^2
    nu2, nu3 = Fraction(1), Fraction(2)
    bundle = build_bc1(nu2, nu3)
    conj = gauge_conjugate(bundle.rational_form, bundle.ground_factor)
    diff = conj - bundle.h
    assert diff.order() == 0
    const = diff.constant_part()
    assert const.is_constant() and const.constant_value() == (nu2 + nu3 * HALF) ** 2


def test_gauge_roundtrip_inverse():
    op = bc1_operator(Fraction(1, 3), Fraction(1, 5))
    factor = GaugeFactor(1, [(1 + t, Fraction(1, 2)), (1 - t, Fraction(2, 3))],
                         t * Fraction(1, 4))
    there = gauge_conjugate(op, factor)
    back = gauge_conjugate(there, factor.inverse())
    assert back == op


def test_gauge_order_cap():
    cubic = DiffOp(1, {(3,): MultiPoly.const(1, 1)})
    with pytest.raises(UnsupportedOrder):
        gauge_conjugate(cubic, GaugeFactor(1, [(1 + t, Fraction(1, 2))]))


# -- flag restriction ----------------------------------------------------------

def test_restrict_bc1_free_lower_triangular():
    h = bc1_operator(Fraction(0), Fraction(0))
    m = restrict_to_flag(h, FlagSpace(1, (1,), 2))
    assert m.rows == [[Fraction(0)] * 3,
                      [Fraction(0), Fraction(1), Fraction(0)],
                      [Fraction(-2), Fraction(0), Fraction(4)]]
    assert m.is_block_triangular()
    assert [m.rows[i][i] for i in range(3)] == [0, 1, 4]


def test_restrict_raising_generator_violation():
    # J+_n tau^m = (m-n) tau^{m+1}: the top monomial of a level-m flag with
    # m < n escapes to tau^{m+1}
    n = 4
    jplus = DiffOp(1, {(1,): t * t, (0,): t * (-n)})
    with pytest.raises(FlagViolation) as err:
        restrict_to_flag(jplus, FlagSpace(1, (1,), 2))
    assert err.value.input_monomial == (2,)
    assert err.value.output_monomial == (3,)


def test_restrict_zero_operator():
    m = restrict_to_flag(DiffOp.zero(1), FlagSpace(1, (1,), 3))
    assert all(all(x == 0 for x in row) for row in m.rows)


def test_preserves_g2_flags():
    h = g2_operator(Fraction(1, 2), Fraction(1, 3))
    for f in ((1, 2), (3, 5), (5, 9)):
        ok, _ = preserves_flag(h, FlagSpace(2, f, 8))
        assert ok, f


def test_g2_unit_flag_violation():
    # the (1,1)-graded level-1 space is preserved (the image of tau2 is
    # affine), but level 2 breaks: tau2^2 picks up a tau1^3 term
    h = g2_operator(Fraction(1, 2), Fraction(1, 3))
    ok1, _ = preserves_flag(h, FlagSpace(2, (1, 1), 1))
    assert ok1
    ok2, witness = preserves_flag(h, FlagSpace(2, (1, 1), 2))
    assert not ok2
    assert witness == ((0, 2), (3, 0))


def test_dimension_mismatch_errors():
    from orbitforms.errors import DimensionMismatch
    one = DiffOp.partial(1, 0)
    two = DiffOp.partial(2, 0)
    with pytest.raises(DimensionMismatch):
        compose(one, two)
    with pytest.raises(DimensionMismatch):
        apply(one, MultiPoly.variable(2, 0))

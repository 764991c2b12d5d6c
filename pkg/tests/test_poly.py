"""Exact polynomial core: ring operations, rational functions, flag bases."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orbitforms.errors import DimensionMismatch, DomainError
from orbitforms.poly import (FlagSpace, MultiPoly, RationalFn,
                             enumerate_flag_basis, fdegree, qq,
                             unit_flag_dimension)

t = MultiPoly.variable(1, 0)


def test_difference_of_squares():
    assert (t + 1) * (t - 1) == t * t - 1


def test_power_rule_derivative():
    t1, t2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    p = t1 * t1 * t2
    assert p.diff(0) == 2 * t1 * t2


def test_evaluate_at_point():
    t1, t2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    p = t1 * t1 - 4 * t2
    assert p.evaluate([Fraction(2), Fraction(1)]) == 0


def test_variable_count_mismatch():
    with pytest.raises(DimensionMismatch):
        MultiPoly.variable(2, 0) + MultiPoly.variable(3, 0)


def test_exact_division():
    p = (t + 1) * (t - 1) * (t + 2)
    assert p.exact_div(t + 2) == (t + 1) * (t - 1)
    assert p.exact_div(t + 3) is None


def test_qq_parses_rational_strings():
    assert qq("3/7") == Fraction(3, 7)
    assert qq("-2") == -2
    assert qq(1, 4) == Fraction(1, 4)


# -- rational functions -------------------------------------------------------

def test_ratfn_factorization_equality():
    lhs = RationalFn(t * t - 1, t - 1)
    rhs = RationalFn(t + 1, MultiPoly.const(1, 1))
    assert lhs == rhs


def test_ratfn_zero_canonical():
    z = RationalFn(MultiPoly.zero(1), 1 + t)
    assert z.is_zero()
    assert z.den == MultiPoly.const(1, 1)


def test_ratfn_content_normalization():
    r = RationalFn(2 * t, MultiPoly.const(1, 4))
    assert r.den == MultiPoly.const(1, 1)          # content removed
    assert r == RationalFn(t, MultiPoly.const(1, 2))


def test_ratfn_zero_denominator():
    with pytest.raises(DomainError):
        RationalFn(t, MultiPoly.zero(1))


def test_ratfn_derivative_quotient_rule():
    r = RationalFn(MultiPoly.const(1, 1), t)       # 1/tau
    assert r.diff(0) == RationalFn(MultiPoly.const(1, -1), t * t)


# -- flag spaces ---------------------------------------------------------------

def brute_force_lattice(d, f, n):
    """Independent oracle: scan the full exponent box."""
    out = []
    bound = n + 1
    def walk(prefix):
        if len(prefix) == d:
            if sum(w * p for w, p in zip(f, prefix)) <= n:
                out.append(tuple(prefix))
            return
        for p in range(bound):
            walk(prefix + [p])
    walk([])
    return sorted(out, key=lambda e: (fdegree(e, f), e))


def test_flag_count_unit_weights():
    # dim P_2^(2) = C(4,2) = 6
    assert enumerate_flag_basis(2, (1, 1), 2).dim == 6


def test_flag_basis_weighted():
    space = enumerate_flag_basis(2, (1, 2), 2)
    assert list(space.basis) == brute_force_lattice(2, (1, 2), 2)
    assert space.dim == 4
    assert set(space.basis) == {(0, 0), (1, 0), (2, 0), (0, 1)}


def test_flag_constants_only():
    space = enumerate_flag_basis(1, (1,), 0)
    assert list(space.basis) == [(0,)]


def test_flag_order_graded_then_lex():
    space = enumerate_flag_basis(2, (1, 1), 2)
    grades = [fdegree(e, (1, 1)) for e in space.basis]
    assert grades == sorted(grades)
    assert space.basis[0] == (0, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10))
def test_unit_flag_dimension_binomial(d, n):
    assert enumerate_flag_basis(d, (1,) * d, n).dim == unit_flag_dimension(d, n)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(0, 5),
       st.lists(st.integers(1, 3), min_size=3, max_size=3))
def test_flag_nesting(d, n, f):
    f = tuple(f[:d])
    smaller = set(enumerate_flag_basis(d, f, n).basis)
    larger = set(enumerate_flag_basis(d, f, n + 1).basis)
    assert smaller <= larger


def test_bad_char_vector_rejected():
    with pytest.raises(DomainError):
        FlagSpace(2, (1, 0), 3)


# -- ring axioms via hypothesis ------------------------------------------------

coeffs = st.fractions(min_value=-4, max_value=4, max_denominator=6)


def polys(nvars=2, max_deg=3):
    exps = st.tuples(*[st.integers(0, max_deg) for _ in range(nvars)])
    return st.dictionaries(exps, coeffs, max_size=4).map(
        lambda d: MultiPoly(nvars, d))


@settings(max_examples=50, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@settings(max_examples=30, deadline=None)
@given(polys(), polys())
def test_derivative_leibniz(a, b):
    assert (a * b).diff(0) == a.diff(0) * b + a * b.diff(0)

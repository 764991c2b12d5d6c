"""Particular integrals: construction and annihilation on flag levels."""

from fractions import Fraction

from orbitforms.diffop import apply
from orbitforms.integrals import annihilation_check, build_pi_integral
from orbitforms.models import build_bc1, build_bc1_qes, build_g2
from orbitforms.poly import FlagSpace, MultiPoly

t = MultiPoly.variable(1, 0)


def test_level_one_product():
    # (tau d - 1)(tau d) annihilates {1, tau}
    ip = build_pi_integral((1,), 1, 1)
    assert apply(ip.expanded, MultiPoly.const(1, 1)).is_zero()
    assert apply(ip.expanded, t).is_zero()
    assert not apply(ip.expanded, t * t).is_zero()


def test_level_zero_is_euler():
    ip = build_pi_integral((2, 3), 2, 0)
    assert ip.expanded == ip.euler
    assert apply(ip.expanded, MultiPoly.const(2, 5)).is_zero()


def test_weighted_level_two():
    ip = build_pi_integral((1, 2), 2, 2)
    assert ip.expanded.order() == 3
    for mono in ((0, 0), (1, 0), (2, 0), (0, 1)):
        assert apply(ip.expanded, MultiPoly.monomial(2, mono)).is_zero()
    assert not apply(ip.expanded, MultiPoly.monomial(2, (3, 0))).is_zero()


def test_monomial_scalar_closed_form():
    ip = build_pi_integral((1, 2), 2, 3)
    space = FlagSpace(2, (1, 2), 7)
    for mono in space.basis:
        image = apply(ip.expanded, MultiPoly.monomial(2, mono))
        assert image == MultiPoly.monomial(2, mono) * ip.monomial_scalar(mono)


def test_bc1_annihilation():
    bundle = build_bc1(Fraction(1, 3), Fraction(1, 5))
    ip = build_pi_integral((1,), 1, 3)
    ok, witness = annihilation_check(bundle.h, ip, FlagSpace(1, (1,), 3))
    assert ok and witness is None


def test_bc1_negative_witness():
    bundle = build_bc1(Fraction(1, 3), Fraction(1, 5))
    ip = build_pi_integral((1,), 1, 2)
    ok, witness = annihilation_check(bundle.h, ip, FlagSpace(1, (1,), 3))
    assert not ok
    assert witness[0] == (3,)
    assert not witness[1].is_zero()


def test_qes_annihilation_at_own_level():
    n = 3
    bundle = build_bc1_qes(Fraction(1, 3), Fraction(1, 5), Fraction(2, 3), n)
    ip = build_pi_integral((1,), 1, n)
    ok, _ = annihilation_check(bundle.h, ip, FlagSpace(1, (1,), n))
    assert ok


def test_g2_both_gradings():
    bundle = build_g2(Fraction(1, 2), Fraction(1, 3))
    for f in ((1, 2), (5, 9)):
        ip = build_pi_integral(f, 2, 4)
        ok, _ = annihilation_check(bundle.h, ip, FlagSpace(2, f, 4))
        assert ok, f

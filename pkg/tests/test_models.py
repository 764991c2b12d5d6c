"""Model constructors: operators, spectra formulas, factors, table data."""

from fractions import Fraction

import pytest

from orbitforms.diffop import DiffOp, apply
from orbitforms.errors import DomainError, UnsupportedModel
from orbitforms.models import (bc2_rational_potential,
                               bc2_rational_potential_printed,
                               build_bc1, build_bc1_qes,
                               build_bcn, build_g2, build_mw_family,
                               build_sutherland, char_vector_table,
                               eigenvalue_formula, ttw_models)
from orbitforms.poly import MultiPoly

t = MultiPoly.variable(1, 0)
HALF = Fraction(1, 2)


# -- BC1 ------------------------------------------------------------------------

def test_bc1_eigenvalue_formula():
    m = build_bc1(1, 2)
    assert eigenvalue_formula(m, (3,)) == 21          # 9 + 4*3
    assert eigenvalue_formula(m, (0,)) == 0


def test_bc1_free_case():
    m = build_bc1(0, 0)
    assert m.h == DiffOp(1, {(2,): t * t - 1, (1,): t})
    assert eigenvalue_formula(m, (5,)) == 25


def test_bc1_rational_potential_at_zero():
    nu2, nu3 = Fraction(1, 3), Fraction(2, 7)
    g2 = nu2 * (nu2 - 1)
    g3 = nu3 * (nu3 + 2 * nu2 - 1)
    m = build_bc1(nu2, nu3)
    assert m.rational_potential.evaluate([Fraction(0)]) == g2 / 2 + (g2 + g3) / 2


def test_bc1_ground_energy_positive_square():
    m = build_bc1(Fraction(1), Fraction(2))
    assert m.e0 == 4          # +(nu2 + nu3/2)^2; printed sign is negative


# -- QES BC1 ---------------------------------------------------------------------

def test_qes_reduces_to_bc1_at_b_zero():
    q = build_bc1_qes(Fraction(1, 3), Fraction(1, 5), 0, 4)
    m = build_bc1(Fraction(1, 3), Fraction(1, 5))
    assert q.h == m.h


def test_qes_constant_on_level_zero():
    nu2, nu3, b = Fraction(1, 3), Fraction(1, 5), Fraction(2, 3)
    q = build_bc1_qes(nu2, nu3, b, 0)
    image = apply(q.h, MultiPoly.const(1, 1))
    assert image == MultiPoly.const(1, 2 * b * (nu2 + nu3 + HALF))


def test_qes_uniqueness_brute_force():
    q = build_bc1_qes(0, 0, Fraction(1, 2), 1)
    # tau^2 escapes the level-2 space only through the raising term
    image = apply(q.h, t * t)
    assert image.coeff((3,)) == 2 * Fraction(1, 2) * (2 - 1)


# -- Sutherland -------------------------------------------------------------------

def test_sutherland_two_body_operator():
    nu = Fraction(1, 2)
    s = build_sutherland(2, nu)
    expected = DiffOp(1, {(2,): t * t * HALF - 2, (1,): (HALF + nu) * t})
    assert s.h == expected
    assert eigenvalue_formula(s, (3,)) == Fraction(9, 2) + 3 * nu


def test_sutherland_degenerate_pair():
    s = build_sutherland(3, Fraction(1, 2))
    val = 2 * Fraction(1, 2) + Fraction(2, 3)
    assert eigenvalue_formula(s, (1, 0)) == val
    assert eigenvalue_formula(s, (0, 1)) == val


def test_sutherland_mixed_index_vs_diagonal():
    # exact diagonalization oracle fixed the symmetric quadratic form
    s = build_sutherland(3, Fraction(0))
    assert eigenvalue_formula(s, (1, 1)) == 2      # printed one-sided reading gives 3


def test_sutherland_requires_three_bodies():
    with pytest.raises(DomainError):
        build_sutherland(1, Fraction(1, 2))


# -- BC_N ------------------------------------------------------------------------

def test_bcn_reduces_to_bc1():
    import random
    rng = random.Random(2)
    for _ in range(5):
        nu2 = Fraction(rng.randint(1, 9), rng.choice([2, 3, 5, 7]))
        nu3 = Fraction(rng.randint(1, 9), rng.choice([2, 3, 5, 7]))
        nu = Fraction(rng.randint(1, 9), 4)
        b1 = build_bcn(1, nu, nu2, nu3)
        m1 = build_bc1(nu2, nu3)
        assert b1.h == m1.h
        for p in range(4):
            assert eigenvalue_formula(b1, (p,)) == eigenvalue_formula(m1, (p,))


def test_bc2_paper_substitution():
    b2 = build_bcn(2, 1, 0, 0)
    assert eigenvalue_formula(b2, (1, 0)) == 3     # 2 + 1


def test_bc2_potential_pole_on_discriminant():
    V = bc2_rational_potential(Fraction(1, 2), Fraction(1, 3), Fraction(1, 5))
    with pytest.raises(DomainError):
        V.evaluate([Fraction(0), Fraction(0)])


def test_bc2_potential_at_corner():
    nu, nu2, nu3 = Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)
    g2 = nu2 * (nu2 - 1)
    g3 = nu3 * (nu3 + 2 * nu2 - 1)
    V = bc2_rational_potential(nu, nu2, nu3)
    # derived wall terms: (g2/4)(2+tau1)/P + ((g2+g3)/4)(2-tau1)/M
    assert V.evaluate([Fraction(1), Fraction(1)]) == \
        g2 / 4 * Fraction(3, 3) + (g2 + g3) / 4 * Fraction(1, 1)
    printed = bc2_rational_potential_printed(nu, nu2, nu3)
    assert printed.evaluate([Fraction(1), Fraction(1)]) == \
        g2 / 12 + (2 * (g2 + g3) + g2 - g3) / 4


# -- G2 --------------------------------------------------------------------------

def test_g2_annihilates_constants():
    g = build_g2(Fraction(1, 2), Fraction(1, 3))
    assert apply(g.h, MultiPoly.const(2, 1)).is_zero()


def test_g2_paper_eigenvalue():
    g = build_g2(1, 1)
    assert eigenvalue_formula(g, (0, 1)) == 4


def test_g2_free_linear_action():
    g = build_g2(0, 0)
    t1 = MultiPoly.variable(2, 0)
    assert apply(g.h, t1) == t1 * Fraction(1, 3)
    assert eigenvalue_formula(g, (1, 0)) == Fraction(1, 3)


def test_g2_char_vectors():
    g = build_g2(Fraction(1, 2), Fraction(1, 3))
    assert [e.vector for e in g.flags] == [(1, 2), (3, 5), (5, 9)]


# -- MW family --------------------------------------------------------------------

def test_mw_word_expansion_b0_n0():
    op = build_mw_family("0+", 0, 0)
    assert op == DiffOp(1, {(2,): t * t - 1, (1,): 2 * t})


def test_mw_unknown_variant():
    with pytest.raises(DomainError):
        build_mw_family("2+", 1, 1)


def test_mw_zero_minus_level_guard():
    with pytest.raises(DomainError):
        build_mw_family("0-", 1, 0)


# -- dispatch and QES guards --------------------------------------------------------

def test_eigenvalue_formula_rejects_qes():
    q = build_bc1_qes(0, 0, 1, 2)
    with pytest.raises(UnsupportedModel):
        eigenvalue_formula(q, (1,))


def test_eigenvalue_formula_validates_index():
    m = build_bc1(0, 0)
    with pytest.raises(DomainError):
        eigenvalue_formula(m, (1, 2))


# -- TTW descriptors -----------------------------------------------------------------

def test_ttw_printed_r2_coefficient():
    d = ttw_models("TTW_QES_RADIAL", nu2=Fraction(1, 2), nu3=Fraction(1, 3),
                   beta=2, omega=3, a=Fraction(1, 2), n=1, convention="printed")
    from orbitforms.cartesian import ttw_r2_coefficient, ttw_radial_power
    # omega^2 - 2a(2n + 2 + beta(nu2+nu3)), exact in printed mode
    assert ttw_r2_coefficient(d) == \
        Fraction(9) - 2 * Fraction(1, 2) * (2 * 1 + 2 + 2 * Fraction(5, 6))
    assert ttw_radial_power(d) == 2 * Fraction(5, 6)


def test_ttw_variant_validation():
    with pytest.raises(DomainError):
        ttw_models("TTW_QES_RADIAL", nu2=0, nu3=0, beta=1, omega=1, a=0)
    with pytest.raises(DomainError):
        ttw_models("TTW", nu2=0, nu3=0, beta=1, omega=0)
    with pytest.raises(DomainError):
        ttw_models("NOPE", nu2=0, nu3=0, beta=1, omega=1)


# -- characteristic-vector table -------------------------------------------------------

def test_table_rows():
    table = char_vector_table()
    assert table[("G2", "trig_minimal")] == (1, 2)
    assert table[("G2", "co_weyl")] == (5, 9)
    assert table[("E8", "trig_minimal")] == (2, 2, 3, 3, 4, 4, 5, 6)
    assert table[("E7", "trig_minimal")] == (1, 2, 2, 2, 3, 3, 4)
    assert table[("A_N", "rational")] == table[("A_N", "trig_minimal")] == "1^N"
    assert table[("H4", "rational")] == (1, 5, 8, 12)
    assert table[("E8", "weyl")] == (29, 46, 57, 68, 84, 91, 110, 135)


# -- cross-model invariants --------------------------------------------------------

def test_every_solvable_model_annihilates_constants():
    bundles = [
        build_bc1(Fraction(1, 3), Fraction(1, 5)),
        build_sutherland(3, Fraction(1, 2)),
        build_bcn(2, Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)),
        build_g2(Fraction(1, 2), Fraction(1, 3)),
    ]
    for bundle in bundles:
        assert apply(bundle.h, MultiPoly.const(bundle.d, 1)).is_zero()
        assert eigenvalue_formula(bundle, (0,) * bundle.d) == 0

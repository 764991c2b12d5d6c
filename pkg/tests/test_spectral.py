"""Exact spectra, QES spectra, Jacobi references, orthogonality."""

from fractions import Fraction

import mpmath
import pytest

from orbitforms.diffop import apply
from orbitforms.errors import (DomainError, FormulaMismatch, UnsupportedModel)
from orbitforms.models import (build_bc1, build_bc1_qes, build_g2,
                               build_sutherland)
from orbitforms.poly import MultiPoly
from orbitforms.spectral import (jacobi_reference, orthogonality_check,
                                 proportional_scalar, qes_spectrum, spectrum)

t = MultiPoly.variable(1, 0)
HALF = Fraction(1, 2)


def test_bc1_free_chebyshev_point():
    rec = spectrum(build_bc1(0, 0), 2, numeric_check=True)
    assert [e.eigenvalue for e in rec.entries] == [0, 1, 4]
    phi2 = [e for e in rec.entries if e.eigenvalue == 4][0].eigenpolynomials[0]
    assert proportional_scalar(phi2, 2 * t * t - 1) is not None


def test_bc1_linear_eigenpolynomial():
    nu2, nu3 = Fraction(1, 3), Fraction(2, 7)
    rec = spectrum(build_bc1(nu2, nu3), 1, numeric_check=False)
    phi1 = rec.entries[1].eigenpolynomials[0]
    expected = t + MultiPoly.const(1, nu3 / (2 * nu2 + nu3 + 1))
    assert proportional_scalar(phi1, expected) is not None


def test_bc1_eigenpolynomials_satisfy_equation():
    bundle = build_bc1(Fraction(1, 3), Fraction(2, 7))
    rec = spectrum(bundle, 5, numeric_check=False)
    for entry in rec.entries:
        for phi in entry.eigenpolynomials:
            assert apply(bundle.h, phi) == phi * entry.eigenvalue


def test_sutherland_degenerate_kernel():
    rec = spectrum(build_sutherland(3, Fraction(1, 2)), 1, numeric_check=False)
    degenerate = [e for e in rec.entries if e.multiplicity == 2]
    assert len(degenerate) == 1
    entry = degenerate[0]
    assert entry.kernel_dim == 2
    span = {tuple(sorted(p.terms)) for p in entry.eigenpolynomials}
    assert span == {((1, 0),), ((0, 1),)}
    assert not rec.defective


def test_spectrum_dim_counts():
    rec = spectrum(build_sutherland(3, Fraction(1, 2)), 2, numeric_check=False)
    assert rec.dim == 6
    rec = spectrum(build_g2(1, 1), 3, numeric_check=False)
    assert rec.dim == 6          # lattice points with p1 + 2 p2 <= 3


def test_formula_mismatch_detection():
    import dataclasses
    bundle = build_bc1(Fraction(1, 3), Fraction(2, 7))
    broken = dataclasses.replace(
        bundle, eigenvalue=lambda p: Fraction(p[0] * p[0] + 1))
    with pytest.raises(FormulaMismatch):
        spectrum(broken, 3, numeric_check=False)


def test_spectrum_rejects_qes():
    q = build_bc1_qes(0, 0, 1, 2)
    with pytest.raises(UnsupportedModel):
        spectrum(q, 2)


# -- QES spectra -----------------------------------------------------------------

def test_qes_level_zero_single_entry():
    q = build_bc1_qes(Fraction(1, 3), Fraction(1, 5), Fraction(2, 3), 0)
    rec = qes_spectrum(q)
    assert len(rec.eigenvalues) == 1
    exact = q.h.constant_part().constant_value()
    with mpmath.mp.workdps(50):
        target = mpmath.mpf(exact.numerator) / exact.denominator
        assert abs(rec.eigenvalues[0] - target) < mpmath.mpf("1e-40")


def test_qes_two_level_trace():
    q = build_bc1_qes(0, 0, 1, 1)
    rec = qes_spectrum(q)
    assert rec.matrix.trace() == 7      # exact matrix [[3,-2],[-2,4]]
    assert rec.trace_gap < mpmath.mpf("1e-40")
    assert rec.max_imag < mpmath.mpf("1e-40")


def test_qes_reduces_to_closed_form_at_b_zero():
    nu2, nu3, n = Fraction(1, 3), Fraction(1, 5), 3
    q = build_bc1_qes(nu2, nu3, 0, n)
    rec = qes_spectrum(q)
    expected = sorted(Fraction(p * p) + (2 * nu2 + nu3) * p for p in range(n + 1))
    with mpmath.mp.workdps(50):
        for num, ex in zip(rec.eigenvalues, expected):
            target = mpmath.mpf(ex.numerator) / ex.denominator
            assert abs(num - target) < mpmath.mpf("1e-40")


def test_qes_reality_up_to_level_six():
    for n in range(7):
        q = build_bc1_qes(Fraction(1, 3), Fraction(1, 5), Fraction(3, 4), n)
        rec = qes_spectrum(q)
        assert rec.max_imag < mpmath.mpf("1e-30")


# -- Jacobi reference ---------------------------------------------------------------

def test_jacobi_base_cases():
    assert jacobi_reference(0, HALF, HALF) == MultiPoly.const(1, 1)
    a, b = Fraction(1, 3), Fraction(2, 7)
    p1 = jacobi_reference(1, a, b)
    assert p1 == (a + 1) + (a + b + 2) * (t - 1) * HALF


def test_jacobi_chebyshev_specialization():
    p2 = jacobi_reference(2, -HALF, -HALF)
    assert proportional_scalar(p2, 2 * t * t - 1) is not None


def test_jacobi_identifies_bc1_eigenfunctions():
    nu2, nu3 = Fraction(1, 3), Fraction(2, 7)
    bundle = build_bc1(nu2, nu3)
    rec = spectrum(bundle, 6, numeric_check=False)
    for entry in rec.entries:
        (p,) = entry.quantum_indices[0]
        ref = jacobi_reference(p, nu2 + nu3 - HALF, nu2 - HALF)
        assert proportional_scalar(entry.eigenpolynomials[0], ref) is not None


# -- orthogonality --------------------------------------------------------------------

def test_orthogonality_chebyshev_parity():
    max_off, min_diag = orthogonality_check(0, 0, 2, dps=30)
    assert min_diag > 0
    assert max_off < mpmath.mpf("1e-12")


def test_orthogonality_half_integer_weight():
    max_off, min_diag = orthogonality_check(HALF, HALF, 3, dps=30)
    assert min_diag > 0
    assert max_off < mpmath.mpf("1e-12")


def test_orthogonality_rejects_nonintegrable():
    with pytest.raises(DomainError):
        orthogonality_check(Fraction(-3, 4), 0, 2)


def test_restricted_matrices_block_triangular():
    from orbitforms.diffop import restrict_to_flag
    jobs = [(build_bc1(Fraction(1, 3), Fraction(1, 5)), 5),
            (build_sutherland(3, Fraction(1, 2)), 3),
            (build_g2(Fraction(1, 2), Fraction(1, 3)), 5)]
    for bundle, n in jobs:
        m = restrict_to_flag(bundle.h, bundle.flag(n))
        assert m.is_block_triangular()


def test_g2_spectrum_on_alternative_gradings():
    g = build_g2(Fraction(1, 2), Fraction(1, 3))
    for vec, dim in (((3, 5), 7), ((5, 9), 4)):
        rec = spectrum(g, 10, vector=vec, numeric_check=True)
        assert rec.dim == dim


def test_large_model_spectra_numeric():
    rec = spectrum(build_sutherland(5, Fraction(1, 3)), 2, numeric_check=True)
    assert rec.dim == 15

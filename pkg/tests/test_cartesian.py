"""Cartesian oracle: invariants, factors, potentials, residuals, fits."""

from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from orbitforms import cartesian as cart
from orbitforms.errors import DomainError
from orbitforms.poly import MultiPoly
from orbitforms.models import (build_bc1, build_bcn, build_g2,
                               build_sutherland, ttw_models)
from orbitforms.spectral import spectrum

HALF = Fraction(1, 2)


def test_invariants_bc1_origin():
    spec = build_bc1(0, 0).spec
    assert cart.invariants_map(spec, [mpmath.mpf(0)]) == [1]


def test_invariants_sutherland_origin():
    spec = build_sutherland(3, HALF).spec
    tau = cart.invariants_map(spec, [mpmath.mpf(2), mpmath.mpf(2), mpmath.mpf(2)])
    assert abs(tau[0] - 3) < mpmath.mpf("1e-12")
    assert abs(tau[1] - 3) < mpmath.mpf("1e-12")


def test_invariants_sutherland_conjugate_pairing():
    spec = build_sutherland(3, HALF).spec
    tau = cart.invariants_map(spec, [mpmath.mpf("0.3"), mpmath.mpf("0.9"),
                                     mpmath.mpf("2.1")])
    assert abs(tau[0] - mpmath.conj(tau[1])) < mpmath.mpf("1e-12")


def test_invariants_g2_origin():
    spec = build_g2(HALF, HALF).spec
    tau = cart.invariants_map(spec, [mpmath.mpf(1), mpmath.mpf(1), mpmath.mpf(1)])
    assert abs(tau[0] - 6) < mpmath.mpf("1e-12") and abs(tau[1] - 6) < mpmath.mpf("1e-12")


def test_psi0_bc1_peak():
    spec = build_bc1(1, 0).spec
    x = mpmath.pi / 2
    assert abs(cart.psi0_cartesian(spec, [x]) - 1) < mpmath.mpf("1e-12")


def test_psi0_node_error():
    spec = build_bc1(1, 0).spec
    with pytest.raises(DomainError):
        cart.psi0_cartesian(spec, [mpmath.pi])


def test_potential_bc1_single_coupling():
    nu3 = Fraction(2, 3)
    spec = build_bc1(0, nu3).spec     # g2 = 0
    g3 = nu3 * (nu3 - 1)
    x = mpmath.mpf("0.8")
    expected = mpmath.mpf(g3.numerator) / g3.denominator / 4 / mpmath.sin(x / 2) ** 2
    assert abs(cart.hamiltonian_potential(spec, [x]) - expected) < mpmath.mpf("1e-20")


def test_potential_sutherland_symmetric():
    spec = build_sutherland(2, HALF).spec
    a, b = mpmath.mpf("0.7"), mpmath.mpf("1.9")
    assert abs(cart.hamiltonian_potential(spec, [a, b])
               - cart.hamiltonian_potential(spec, [b, a])) < mpmath.mpf("1e-25")


def test_potential_singularity_error():
    spec = build_sutherland(2, HALF).spec
    with pytest.raises(DomainError):
        cart.hamiltonian_potential(spec, [mpmath.mpf(1), mpmath.mpf(1)])


def test_sampling_is_deterministic():
    spec = build_bcn(2, HALF, HALF, HALF).spec
    a = cart.sample_alcove(spec, 5, seed=3)
    b = cart.sample_alcove(spec, 5, seed=3)
    assert a == b


# -- residual checks (kept small; the verify suite runs the full versions) ------

def test_bc1_free_particle_energy():
    bundle = build_bc1(0, 0)
    rec = spectrum(bundle, 2, numeric_check=False)
    phi = [e for e in rec.entries if e.eigenvalue == 4][0].eigenpolynomials[0]
    pts = cart.sample_alcove(bundle.spec, 8, seed=5)
    st = cart.residual_check(bundle, Fraction(4), phi, pts)
    assert st.max_abs < mpmath.mpf("1e-8")


def test_bc1_excited_state_with_exact_e0():
    bundle = build_bc1(1, 2)           # E0 = +4 beta^2
    rec = spectrum(bundle, 1, numeric_check=False)
    phi = rec.entries[1].eigenpolynomials[0]
    pts = cart.sample_alcove(bundle.spec, 8, seed=6)
    st = cart.residual_check(bundle, rec.entries[1].eigenvalue, phi, pts)
    assert st.max_abs < mpmath.mpf("1e-6")


def test_sutherland_complex_residual_real():
    bundle = build_sutherland(3, HALF)
    rec = spectrum(bundle, 1, numeric_check=False)
    entry = [e for e in rec.entries if e.multiplicity == 2][0]
    pts = cart.sample_alcove(bundle.spec, 6, seed=7)
    st = cart.residual_check(bundle, entry.eigenvalue,
                             entry.eigenpolynomials[0], pts,
                             e0=Fraction(1, 4), kappa=HALF)
    assert st.max_abs < mpmath.mpf("1e-6")
    assert st.max_imag < mpmath.mpf("1e-8")


def test_fit_requires_two_eigenvalues():
    bundle = build_bc1(0, 0)
    rec = spectrum(bundle, 0, numeric_check=False)
    pts = cart.sample_alcove(bundle.spec, 4, seed=8)
    with pytest.raises(DomainError):
        cart.fit_energy_affine(
            bundle, [(Fraction(0), rec.entries[0].eigenpolynomials[0])], pts)


def test_hyperbolic_consistency():
    bundle = build_bc1(Fraction(1, 3), Fraction(2, 5))
    rec = spectrum(bundle, 2, numeric_check=False)
    pts = [(mpmath.mpf("0.5"),), (mpmath.mpf("0.9"),), (mpmath.mpf("1.4"),)]
    for entry in rec.entries:
        st = cart.residual_check(bundle, entry.eigenvalue,
                                 entry.eigenpolynomials[0], pts,
                                 hyperbolic=True)
        assert st.max_abs < mpmath.mpf("1e-6")


def test_a2_identity_small():
    dev = cart.a2_groundstate_identity(HALF, npoints=6, seed=9)
    assert dev < mpmath.mpf("1e-12")


def test_fd_convergence_order():
    bundle = build_bc1(0, 0)
    rec = spectrum(bundle, 3, numeric_check=False)
    phi = [e for e in rec.entries if e.eigenvalue == 9][0].eigenpolynomials[0]
    assert cart.fd_convergence_order(bundle, Fraction(9), phi) >= mpmath.mpf("3.5")


# -- TTW family ----------------------------------------------------------------

BASE = dict(nu2=HALF, nu3=Fraction(1, 3), beta=Fraction(3, 2), omega=Fraction(1))


def test_ttw_plain_potential_formula():
    d = ttw_models("TTW", **BASE)
    g2 = HALF * (HALF - 1)
    g3 = Fraction(1, 3) * (Fraction(1, 3) + 1 - 1)
    with mp.workdps(40):
        r, phi = mpmath.mpf("0.9"), mpmath.mpf("0.7")
        beta = mpmath.mpf(3) / 2
        expected = (r * r
                    + (mpmath.mpf(g2.numerator) / g2.denominator * beta ** 2
                       / mpmath.sin(beta * phi) ** 2
                       + mpmath.mpf(g3.numerator) / g3.denominator * beta ** 2
                       / (4 * mpmath.sin(beta * phi / 2) ** 2)) / r ** 2)
        assert abs(cart.ttw_potential(d, r, phi) - expected) < mpmath.mpf("1e-20")


def test_ttw_ground_factor_printed_term_by_term():
    d = ttw_models("TTW", convention="printed", **BASE)
    r, phi = mpmath.mpf(1), mpmath.pi / (2 * mpmath.mpf(3) / 2)
    with mp.workdps(40):
        val = cart.ttw_ground_factor(d, r, phi)
        beta = mpmath.mpf(3) / 2
        expected = (r ** (mpmath.mpf(5) / 6 * beta)
                    * abs(mpmath.sin(beta * phi)) ** mpmath.mpf("0.5")
                    * abs(mpmath.sin(beta * phi / 2)) ** (mpmath.mpf(1) / 3)
                    * mpmath.exp(-r * r / 2))
        assert abs(val - expected) < mpmath.mpf("1e-20")


def test_ttw_full_factor_exponent_signs():
    full_printed = ttw_models("TTW_QES_FULL", a=HALF, b=Fraction(2, 5),
                              convention="printed", **BASE)
    full = ttw_models("TTW_QES_FULL", a=HALF, b=Fraction(2, 5), **BASE)
    r, phi = mpmath.mpf("1.1"), mpmath.mpf("0.6")
    with mp.workdps(40):
        beta = mpmath.mpf(3) / 2
        b = mpmath.mpf(2) / 5
        ratio = (cart.ttw_ground_factor(full, r, phi)
                 / cart.ttw_ground_factor(full_printed, r, phi))
        # identical except r-power and the sign of b cos(beta phi)
        gamma_gap = (cart.ttw_radial_power(full)
                     - mpmath.mpf(5) / 6 * beta)
        expected = r ** gamma_gap * mpmath.exp(2 * b * mpmath.cos(beta * phi))
        assert abs(ratio - expected) < mpmath.mpf("1e-20")


def test_ttw_r_must_be_positive():
    d = ttw_models("TTW", **BASE)
    with pytest.raises(DomainError):
        cart.ttw_potential(d, mpmath.mpf(0), mpmath.mpf(1))
    with pytest.raises(DomainError):
        cart.ttw_ground_factor(d, mpmath.mpf(-1), mpmath.mpf(1))


def test_ttw_ground_constancy_quick():
    d = ttw_models("TTW", **BASE)
    st = cart.ttw_ground_check(d, npoints=8, seed=11)
    assert st.std / abs(st.mean) < mpmath.mpf("1e-6")


def test_ttw_angular_variant_quick():
    d = ttw_models("TTW_QES_ANGULAR", b=Fraction(2, 5), **BASE)
    st = cart.ttw_ground_check(d, npoints=8, seed=12)
    assert st.std / abs(st.mean) < mpmath.mpf("1e-6")


def test_fit_bc1_returns_exact_constants():
    bundle = build_bc1(Fraction(1, 3), Fraction(2, 5))
    rec = spectrum(bundle, 3, numeric_check=False)
    pairs = [(e.eigenvalue, e.eigenpolynomials[0]) for e in rec.entries]
    pts = cart.sample_alcove(bundle.spec, 8, seed=21)
    e0f, kf, var = cart.fit_energy_affine(bundle, pairs, pts, beta=Fraction(6, 5))
    e0 = bundle.e0
    assert abs(kf - 1) < mpmath.mpf("1e-6")
    assert abs(e0f - mpmath.mpf(e0.numerator) / e0.denominator) < mpmath.mpf("1e-6")
    assert var < mpmath.mpf("1e-12")


def test_qes_ground_state_in_cartesian_space():
    # level-0 algebraic state: Psi0 e^{+b cos(beta x)} with the exact eigenvalue
    nu2, nu3, b = Fraction(1, 3), Fraction(1, 5), Fraction(2, 3)
    from orbitforms.models import build_bc1_qes
    bundle = build_bc1_qes(nu2, nu3, b, 0)
    eps = 2 * b * (nu2 + nu3 + HALF)       # h_qes(1) at level 0
    pts = cart.sample_alcove(bundle.spec, 10, seed=23)
    st = cart.residual_check(bundle, eps, MultiPoly.const(1, 1), pts)
    assert st.max_abs < mpmath.mpf("1e-6")

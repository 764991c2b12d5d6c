"""Independent Cartesian oracle: invariants, ground factors, potentials,
finite-difference Schroedinger residuals and energy-affine fits.

Everything numeric runs in mpmath working precision (default 40 digits, well
above double-double), with 4th-order central stencils plus one Richardson
extrapolation level.  Exact objects (polynomials, rationals) enter only
through integer numerators and denominators, never binary floats.

Per-model energy conventions, verified by the suites and pinned here:

    family        kinetic       gauge prefactor     E = E0 + kappa beta^2 eps
    BC1           -d^2          1/beta^2            kappa = 1
    BC1_QES       -d^2          1/beta^2            kappa = 1
    SUTHERLAND    -1/2 sum d^2  2/beta^2            kappa = 1/2
    BCN           -1/2 sum d^2  2/beta^2            kappa = 1/2
    G2            -1/2 sum d^2  1/(3 beta^2)        kappa = 3
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
from mpmath import mp

from .errors import DomainError, InconsistencyError, UnsupportedModel
from .models import ModelBundle, ModelSpec, TTWDescriptor
from .poly import MultiPoly

DEFAULT_DPS = 40
DEFAULT_STEPS = (Fraction(1, 100), Fraction(1, 200))
WALL_MARGIN = Fraction(1, 20)    # 5% of the alcove scale

KAPPA = {
    "BC1": Fraction(1),
    "BC1_QES": Fraction(1),
    "SUTHERLAND": Fraction(1, 2),
    "BCN": Fraction(1, 2),
    "G2": Fraction(3),
}


def _mpf(q) -> mpmath.mpf:
    if isinstance(q, (mpmath.mpf, mpmath.mpc)):
        return q
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class ResidualStats:
    """Per-point residuals with deterministic summary statistics."""

    residuals: tuple
    mean: object
    max_abs: object
    std: object
    skipped: int
    max_imag: object
    fitted_e0: object = None
    fitted_kappa: object = None

    @classmethod
    def from_values(cls, values, skipped=0, max_imag=0, **extra):
        n = len(values)
        if n == 0:
            raise DomainError("no usable sample points")
        mean = sum(values, mp.mpf(0)) / n
        var = sum(((v - mean) ** 2 for v in values), mp.mpf(0)) / n
        return cls(tuple(values), mean, max(abs(v) for v in values),
                   mpmath.sqrt(var), skipped, max_imag, **extra)


# ---------------------------------------------------------------------------
# Cartesian dimension, invariants, ground factors, potentials
# ---------------------------------------------------------------------------

def cartesian_dim(spec: ModelSpec) -> int:
    if spec.family in ("BC1", "BC1_QES"):
        return 1
    if spec.family == "SUTHERLAND":
        return spec.N
    if spec.family == "BCN":
        return spec.N
    if spec.family == "G2":
        return 3
    raise UnsupportedModel(f"no Cartesian realization for {spec.family}")


def _relative(x: Sequence) -> list:
    center = sum(x, mp.mpf(0)) / len(x)
    return [xi - center for xi in x]


def invariants_map(spec: ModelSpec, x: Sequence, beta=1) -> list:
    """Orbit variables at the Cartesian point (complex for the relative
    exponential invariants; conjugate-paired when sum y = 0)."""
    beta = _mpf(beta)
    fam = spec.family
    if fam in ("BC1", "BC1_QES"):
        return [mpmath.cos(beta * x[0])]
    if fam == "SUTHERLAND":
        N = spec.N
        y = _relative(x)
        z = [mpmath.exp(1j * beta * yi) for yi in y]
        return [_elementary_symmetric(z, k) for k in range(1, N)]
    if fam == "BCN":
        c = [mpmath.cos(beta * xi) for xi in x]
        return [_elementary_symmetric(c, k) for k in range(1, spec.N + 1)]
    if fam == "G2":
        y = _relative(x)
        t1 = 2 * (mpmath.cos(beta * (y[0] - y[1]))
                  + mpmath.cos(beta * (y[0] - y[2]))
                  + mpmath.cos(beta * (y[1] - y[2])))
        t2 = 2 * sum(mpmath.cos(3 * beta * yi) for yi in y)
        return [t1, t2]
    raise UnsupportedModel(f"no invariants for {fam}")


def _elementary_symmetric(vals: Sequence, k: int):
    n = len(vals)
    e = [mp.mpf(0)] * (n + 1)
    e[0] = mp.mpf(1)
    for v in vals:
        for i in range(n, 0, -1):
            e[i] = e[i] + e[i - 1] * v
    return e[k]


def _abs_sin_pow(arg, expo: Fraction):
    s = abs(mpmath.sin(arg))
    if s < mpmath.mpf(10) ** (-(mp.dps // 2)):
        raise DomainError("evaluation at a node of the ground factor")
    return s ** _mpf(expo)


def psi0_cartesian(spec: ModelSpec, x: Sequence, beta=1):
    """Ground-state factor (product of powers of sines) in high precision."""
    beta = _mpf(beta)
    fam = spec.family
    if fam in ("BC1", "BC1_QES"):
        v = (_abs_sin_pow(beta * x[0], spec.nu2)
             * _abs_sin_pow(beta * x[0] / 2, spec.nu3))
        if fam == "BC1_QES":
            v *= mpmath.exp(_mpf(spec.b) * mpmath.cos(beta * x[0]))
        return v
    if fam == "SUTHERLAND":
        v = mp.mpf(1)
        for i in range(spec.N):
            for j in range(i + 1, spec.N):
                v *= _abs_sin_pow(beta * (x[i] - x[j]) / 2, spec.nu)
        return v
    if fam == "BCN":
        v = mp.mpf(1)
        for i in range(spec.N):
            for j in range(i + 1, spec.N):
                v *= _abs_sin_pow(beta * (x[i] - x[j]) / 2, spec.nu)
                v *= _abs_sin_pow(beta * (x[i] + x[j]) / 2, spec.nu)
        for xi in x:
            v *= _abs_sin_pow(beta * xi, spec.nu2)
            v *= _abs_sin_pow(beta * xi / 2, spec.nu3)
        return v
    if fam == "G2":
        v = mp.mpf(1)
        for i in range(3):
            for j in range(i + 1, 3):
                v *= _abs_sin_pow(beta * (x[i] - x[j]) / 2, spec.nu)
        for (i, j, k) in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            v *= _abs_sin_pow(beta * (x[i] + x[j] - 2 * x[k]) / 2, spec.mu)
        return v
    raise UnsupportedModel(f"no ground factor for {fam}")


def _inv_sin2(arg):
    s = mpmath.sin(arg)
    if s == 0:
        raise DomainError("potential evaluated on a singular wall")
    return 1 / (s * s)


def hamiltonian_potential(spec: ModelSpec, x: Sequence, beta=1):
    """Potential with the per-family coupling conventions (the one-variable
    family has no 1/2 kinetic factor; the others do)."""
    beta = _mpf(beta)
    b2 = beta * beta
    fam = spec.family
    if fam in ("BC1", "BC1_QES"):
        g2 = _mpf(spec.nu2 * (spec.nu2 - 1))
        g3 = _mpf(spec.nu3 * (spec.nu3 + 2 * spec.nu2 - 1))
        v = g2 * b2 * _inv_sin2(beta * x[0]) + g3 * b2 / 4 * _inv_sin2(beta * x[0] / 2)
        if fam == "BC1_QES":
            bb = _mpf(spec.b)
            v += (bb * bb * b2 * mpmath.sin(beta * x[0]) ** 2
                  + 2 * bb * b2 * _mpf(2 * spec.n + 2 * spec.nu2 + spec.nu3 + 1)
                  * mpmath.sin(beta * x[0] / 2) ** 2)
        return v
    if fam == "SUTHERLAND":
        g = _mpf(spec.nu * (spec.nu - 1))
        return g * b2 / 4 * sum(_inv_sin2(beta * (x[i] - x[j]) / 2)
                                for i in range(spec.N)
                                for j in range(i + 1, spec.N))
    if fam == "BCN":
        g = _mpf(spec.nu * (spec.nu - 1))
        g2 = _mpf(spec.nu2 * (spec.nu2 - 1))
        g3 = _mpf(spec.nu3 * (spec.nu3 + 2 * spec.nu2 - 1))
        v = g * b2 / 4 * sum(_inv_sin2(beta * (x[i] - x[j]) / 2)
                             + _inv_sin2(beta * (x[i] + x[j]) / 2)
                             for i in range(spec.N)
                             for j in range(i + 1, spec.N))
        v += g2 * b2 / 2 * sum(_inv_sin2(beta * xi) for xi in x)
        v += g3 * b2 / 8 * sum(_inv_sin2(beta * xi / 2) for xi in x)
        return v
    if fam == "G2":
        g = _mpf(spec.nu * (spec.nu - 1))
        g1 = _mpf(3 * spec.mu * (spec.mu - 1))
        v = g * b2 / 4 * sum(_inv_sin2(beta * (x[i] - x[j]) / 2)
                             for i in range(3) for j in range(i + 1, 3))
        v += g1 * b2 / 4 * sum(_inv_sin2(beta * (x[i] + x[j] - 2 * x[k]) / 2)
                               for (i, j, k) in ((0, 1, 2), (0, 2, 1), (1, 2, 0)))
        return v
    raise UnsupportedModel(f"no potential for {fam}")


def kinetic_half(spec: ModelSpec) -> bool:
    return spec.family not in ("BC1", "BC1_QES")


# ---------------------------------------------------------------------------
# Sampling inside the alcove
# ---------------------------------------------------------------------------

def sample_alcove(spec: ModelSpec, npoints: int, seed: int, beta=1,
                  min_sin=0.12) -> list[tuple]:
    """Seeded uniform rejection sampling away from all singular walls."""
    rng = random.Random(seed)
    betaf = float(Fraction(beta))
    points: list[tuple] = []
    guard = 0
    while len(points) < npoints:
        guard += 1
        if guard > 200000:
            raise DomainError("alcove sampling failed; margins too tight")
        x = _sample_candidate(spec, rng, betaf)
        if x is not None and _inside_alcove(spec, x, betaf, min_sin):
            points.append(tuple(mpmath.mpf(v) for v in x))
    return points


def _sample_candidate(spec: ModelSpec, rng: random.Random, beta: float):
    import math
    fam = spec.family
    if fam in ("BC1", "BC1_QES"):
        lo = float(WALL_MARGIN) * math.pi / beta
        return [rng.uniform(lo, math.pi / beta - lo)]
    if fam == "SUTHERLAND":
        return [rng.uniform(0, 2 * math.pi / beta) for _ in range(spec.N)]
    if fam == "BCN":
        lo = 0.03 * math.pi / beta
        vals = sorted((rng.uniform(lo, math.pi / beta - lo)
                       for _ in range(spec.N)), reverse=True)
        return vals
    if fam == "G2":
        return [rng.uniform(-1.2 / beta, 1.2 / beta) for _ in range(3)]
    raise UnsupportedModel(fam)


def _inside_alcove(spec: ModelSpec, x, beta: float, min_sin: float) -> bool:
    import math
    fam = spec.family
    s = lambda a: abs(math.sin(a))
    if fam in ("BC1", "BC1_QES"):
        return s(beta * x[0]) > min_sin and s(beta * x[0] / 2) > min_sin / 2
    if fam == "SUTHERLAND":
        return all(s(beta * (x[i] - x[j]) / 2) > min_sin
                   for i in range(spec.N) for j in range(i + 1, spec.N))
    if fam == "BCN":
        for i in range(spec.N):
            if s(beta * x[i]) < min_sin or s(beta * x[i] / 2) < min_sin / 2:
                return False
            for j in range(i + 1, spec.N):
                if (s(beta * (x[i] - x[j]) / 2) < min_sin
                        or s(beta * (x[i] + x[j]) / 2) < min_sin):
                    return False
        return True
    if fam == "G2":
        y = [xi - sum(x) / 3 for xi in x]
        for i in range(3):
            for j in range(i + 1, 3):
                if s(beta * (y[i] - y[j]) / 2) < min_sin:
                    return False
        for (i, j, k) in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            if s(beta * (y[i] + y[j] - 2 * y[k]) / 2) < min_sin:
                return False
        return True
    raise UnsupportedModel(fam)


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

def _second_derivative(fn: Callable, x: Sequence, axis: int, h):
    """4th-order central stencil for d^2/dx_axis^2."""
    def shifted(k):
        pt = list(x)
        pt[axis] = pt[axis] + k * h
        return fn(pt)
    return (-shifted(2) + 16 * shifted(1) - 30 * fn(list(x))
            + 16 * shifted(-1) - shifted(-2)) / (12 * h * h)


def laplacian_fd(fn: Callable, x: Sequence, h):
    return sum(_second_derivative(fn, x, i, h) for i in range(len(x)))


def laplacian_richardson(fn: Callable, x: Sequence, steps):
    """One Richardson level over the 4th-order stencil (order >= 6)."""
    h1, h2 = (_mpf(s) for s in steps)
    d1 = laplacian_fd(fn, x, h1)
    d2 = laplacian_fd(fn, x, h2)
    r = (h1 / h2) ** 4
    return (r * d2 - d1) / (r - 1)


def apply_hamiltonian_fd(spec: ModelSpec, psi: Callable, x: Sequence, beta=1,
                         steps=DEFAULT_STEPS):
    lap = laplacian_richardson(psi, x, steps)
    coeff = mpmath.mpf(1) / 2 if kinetic_half(spec) else mpmath.mpf(1)
    return -coeff * lap + hamiltonian_potential(spec, x, beta) * psi(list(x))


# ---------------------------------------------------------------------------
# Residual checks and the affine-energy fit
# ---------------------------------------------------------------------------

def eigenfunction_factory(bundle: ModelBundle, phi: MultiPoly, beta=1,
                          hyperbolic: bool = False) -> Callable:
    """Psi(x) = Psi0(x) * phi(tau(x)); hyperbolic mode maps tau = cosh(beta x)
    with sinh ground factors (one-variable family only)."""
    spec = bundle.spec
    betam = _mpf(beta)
    if hyperbolic:
        if spec.family != "BC1":
            raise UnsupportedModel("hyperbolic mode implemented for the one-variable model")
        e2, e3 = _mpf(spec.nu2), _mpf(spec.nu3)

        def psi_h(x):
            s1 = mpmath.sinh(betam * x[0])
            s2 = mpmath.sinh(betam * x[0] / 2)
            return (abs(s1) ** e2 * abs(s2) ** e3
                    * phi.evaluate([mpmath.cosh(betam * x[0])]))
        return psi_h

    def psi(x):
        tau = invariants_map(spec, x, beta)
        return psi0_cartesian(spec, x, beta) * phi.evaluate(tau)
    return psi


def residual_check(bundle: ModelBundle, eps, phi: MultiPoly,
                   sample: Sequence, *, beta=1, steps=DEFAULT_STEPS,
                   e0=None, kappa=None, dps: int = DEFAULT_DPS,
                   imag_tol="1e-8", hyperbolic: bool = False) -> ResidualStats:
    """Statistics of (H Psi)/Psi - (E0 + kappa beta^2 eps) over the sample.

    Points too close to a node of Psi are skipped and counted.  For complex
    invariants the imaginary part must stay below imag_tol.
    """
    spec = bundle.spec
    if kappa is None:
        kappa = KAPPA[spec.family]
    if e0 is None:
        if bundle.e0 is None:
            raise DomainError("model has no exact ground energy; pass fitted e0")
        e0 = bundle.e0
    with mp.workdps(dps):
        betam = _mpf(beta)
        if hyperbolic:
            # beta -> i beta: E = -beta^2 (e0 + eps) for the one-variable model
            target = -betam ** 2 * (_mpf(e0) + _mpf(eps))
        else:
            target = _mpf(e0) * betam ** 2 + _mpf(kappa) * betam ** 2 * _mpf(eps)
        psi = eigenfunction_factory(bundle, phi, beta, hyperbolic)
        ham_spec = spec if not hyperbolic else spec
        values = []
        skipped = 0
        max_imag = mp.mpf(0)
        for x in sample:
            try:
                denom = psi(list(x))
                if abs(denom) < mpmath.mpf(10) ** (-dps // 2):
                    skipped += 1
                    continue
                if hyperbolic:
                    num = _apply_hyperbolic_fd(spec, psi, x, betam, steps)
                else:
                    num = apply_hamiltonian_fd(spec, psi, x, beta, steps)
                ratio = num / denom - target
            except DomainError:
                skipped += 1
                continue
            if isinstance(ratio, mpmath.mpc):
                max_imag = max(max_imag, abs(ratio.imag))
                if abs(ratio.imag) > mpmath.mpf(imag_tol):
                    raise InconsistencyError(
                        f"residual has imaginary part {ratio.imag}")
                ratio = ratio.real
            values.append(ratio)
        return ResidualStats.from_values(values, skipped, max_imag)


def _apply_hyperbolic_fd(spec: ModelSpec, psi: Callable, x, betam, steps):
    lap = laplacian_richardson(psi, x, steps)
    g2 = _mpf(spec.nu2 * (spec.nu2 - 1))
    g3 = _mpf(spec.nu3 * (spec.nu3 + 2 * spec.nu2 - 1))
    sh1 = mpmath.sinh(betam * x[0])
    sh2 = mpmath.sinh(betam * x[0] / 2)
    if sh1 == 0 or sh2 == 0:
        raise DomainError("hyperbolic potential singularity")
    pot = g2 * betam ** 2 / sh1 ** 2 + g3 * betam ** 2 / (4 * sh2 ** 2)
    return -lap + pot * psi(list(x))


def fit_energy_affine(bundle: ModelBundle, eigenpairs: Sequence, sample,
                      *, beta=1, steps=DEFAULT_STEPS,
                      dps: int = DEFAULT_DPS, imag_tol="1e-8"):
    """Least-squares fit E_measured = E0 + kappa * beta^2 * eps over >= 2
    distinct eigenvalues; returns (e0_fit, kappa_fit, variance) in units of
    beta^2 (so e0_fit and kappa_fit are directly comparable to the exact
    gauge data)."""
    if len({eps for eps, _ in eigenpairs}) < 2:
        raise DomainError("need at least two distinct eigenvalues to fit")
    with mp.workdps(dps):
        betam = _mpf(beta)
        xs, ys = [], []
        for eps, phi in eigenpairs:
            psi = eigenfunction_factory(bundle, phi, beta)
            acc = []
            for x in sample:
                try:
                    denom = psi(list(x))
                    if abs(denom) < mpmath.mpf(10) ** (-dps // 2):
                        continue
                    val = apply_hamiltonian_fd(bundle.spec, psi, x, beta, steps) / denom
                except DomainError:
                    continue
                if isinstance(val, mpmath.mpc):
                    if abs(val.imag) > mpmath.mpf(imag_tol):
                        raise InconsistencyError("complex measured energy")
                    val = val.real
                acc.append(val)
            if not acc:
                raise DomainError("no usable points for an eigenpair")
            xs.append(_mpf(eps))
            ys.append(sum(acc, mp.mpf(0)) / len(acc))
        n = len(xs)
        sx = sum(xs, mp.mpf(0))
        sy = sum(ys, mp.mpf(0))
        sxx = sum((v * v for v in xs), mp.mpf(0))
        sxy = sum((a * b for a, b in zip(xs, ys)), mp.mpf(0))
        det = n * sxx - sx * sx
        slope = (n * sxy - sx * sy) / det
        intercept = (sy * sxx - sx * sxy) / det
        var = sum(((y - intercept - slope * x) ** 2
                   for x, y in zip(xs, ys)), mp.mpf(0)) / n
        return (intercept / betam ** 2, slope / betam ** 2, var)


# ---------------------------------------------------------------------------
# Specific identities
# ---------------------------------------------------------------------------

def a2_groundstate_identity(nu, npoints: int = 20, seed: int = 11,
                            dps: int = DEFAULT_DPS):
    """|Psi0|^2 equals the tau-discriminant to the power nu up to the exact
    constant 64^-nu (three-body relative invariants).

    Returns (max relative deviation of the ratio from 64^-nu).
    """
    from .models import build_sutherland
    spec = build_sutherland(3, nu).spec
    disc = MultiPoly(2, {
        (3, 0): Fraction(4), (0, 3): Fraction(4), (1, 1): Fraction(-18),
        (2, 2): Fraction(-1), (0, 0): Fraction(27)})
    sample = sample_alcove(spec, npoints, seed)
    with mp.workdps(dps):
        target = mpmath.mpf(64) ** (-_mpf(nu))
        worst = mp.mpf(0)
        for x in sample:
            tau = invariants_map(spec, x)
            val = disc.evaluate(tau)
            if abs(val.imag) > mpmath.mpf("1e-25"):
                raise InconsistencyError("discriminant must be real on the alcove")
            psi2 = psi0_cartesian(spec, x) ** 2
            ratio = psi2 / (val.real ** _mpf(nu))
            worst = max(worst, abs(ratio - target) / target)
        return worst


def periodicity_check(bundle: ModelBundle, npoints: int = 10, seed: int = 3,
                      beta=1, dps: int = DEFAULT_DPS):
    """Spot-check Psi0 and V under the translation x -> x + 2 pi / beta."""
    spec = bundle.spec
    sample = sample_alcove(spec, npoints, seed, beta)
    with mp.workdps(dps):
        period = 2 * mpmath.pi / _mpf(beta)
        worst = mp.mpf(0)
        for x in sample:
            shifted = [xi + period for xi in x]
            worst = max(worst, abs(psi0_cartesian(spec, x, beta)
                                   - psi0_cartesian(spec, shifted, beta)))
            worst = max(worst, abs(hamiltonian_potential(spec, x, beta)
                                   - hamiltonian_potential(spec, shifted, beta)))
        return worst


def fd_convergence_order(bundle: ModelBundle, eps, phi: MultiPoly, *,
                         beta=1, seed: int = 5, dps: int = DEFAULT_DPS):
    """Observed order of the 4th-order stencil between steps h and h/2
    against the Richardson-extrapolated limit; expect >= 3.5."""
    spec = bundle.spec
    sample = sample_alcove(spec, 3, seed, beta)
    with mp.workdps(dps):
        psi = eigenfunction_factory(bundle, phi, beta)
        orders = []
        for x in sample:
            h1 = mpmath.mpf(1) / 50
            h2 = h1 / 2
            h3 = h2 / 2
            d1 = laplacian_fd(psi, x, h1)
            d2 = laplacian_fd(psi, x, h2)
            d3 = laplacian_fd(psi, x, h3)
            limit = (16 * d3 - d2) / 15
            e1 = abs(d1 - limit)
            e2 = abs(d2 - limit)
            if e2 == 0:
                continue
            orders.append(mpmath.log(e1 / e2) / mpmath.log(2))
        if not orders:
            raise InconsistencyError("could not measure convergence order")
        return min(orders)


# ---------------------------------------------------------------------------
# TTW family
# ---------------------------------------------------------------------------

def ttw_radial_power(desc: TTWDescriptor, dps: int = DEFAULT_DPS):
    """Exponent of r in the ground factor; exact Fraction when rational.

    printed: (nu2+nu3) beta.  consistent: beta sqrt(e0 + 2b(nu2+nu3+1/2))
    with e0 = (nu2+nu3/2)^2, which reduces to beta (nu2+nu3/2) at b = 0.
    """
    if desc.convention == "printed":
        return desc.beta * (desc.nu2 + desc.nu3)
    e0 = (desc.nu2 + desc.nu3 * Fraction(1, 2)) ** 2
    lam = e0 + 2 * desc.b * (desc.nu2 + desc.nu3 + Fraction(1, 2))
    if lam < 0:
        raise DomainError("angular sector eigenvalue is negative; no real power")
    if desc.b == 0:
        return desc.beta * (desc.nu2 + desc.nu3 * Fraction(1, 2))
    with mp.workdps(dps):
        return _mpf(desc.beta) * mpmath.sqrt(_mpf(lam))


def ttw_r2_coefficient(desc: TTWDescriptor, dps: int = DEFAULT_DPS):
    """Coefficient of r^2 in the potential (sextic variants tie it to the
    radial power; the harmonic variants use omega^2).  Exact when rational."""
    if not desc.has_sextic:
        return desc.omega ** 2
    gamma = ttw_radial_power(desc, dps)
    if isinstance(gamma, Fraction):
        return desc.omega ** 2 - 2 * desc.a * (2 * desc.n + 2 + gamma)
    with mp.workdps(dps):
        return (_mpf(desc.omega) ** 2
                - 2 * _mpf(desc.a) * (2 * desc.n + 2 + gamma))


def ttw_potential(desc: TTWDescriptor, r, phi, dps: int = DEFAULT_DPS):
    """V(r, phi); raises on r <= 0 or angular singularities."""
    with mp.workdps(dps):
        r = mpmath.mpf(r) if not isinstance(r, mpmath.mpf) else r
        if r <= 0:
            raise DomainError("radial coordinate must be positive")
        beta = _mpf(desc.beta)
        omega = _mpf(desc.omega)
        a = _mpf(desc.a)
        b = _mpf(desc.b)
        g2 = _mpf(desc.nu2 * (desc.nu2 - 1))
        g3 = _mpf(desc.nu3 * (desc.nu3 + 2 * desc.nu2 - 1))
        v = ttw_r2_coefficient(desc, dps) * r ** 2
        if desc.has_sextic:
            v += a * a * r ** 6 + 2 * a * omega * r ** 4
        ang = g2 * beta ** 2 * _inv_sin2(beta * phi) \
            + g3 * beta ** 2 / 4 * _inv_sin2(beta * phi / 2)
        if desc.has_angular_qes:
            ang += b * b * beta ** 2 * mpmath.sin(beta * phi) ** 2
            ang += (2 * b * beta ** 2
                    * _mpf(2 * desc.m + 2 * desc.nu2 + desc.nu3 + 1)
                    * mpmath.sin(beta * phi / 2) ** 2)
        return v + ang / r ** 2


def ttw_ground_factor(desc: TTWDescriptor, r, phi, dps: int = DEFAULT_DPS):
    """Ground factor r^gamma |sin|^nu2 |sin/2|^nu3 exp(-omega r^2/2 [- a r^4/4]
    [+- b cos beta phi])."""
    with mp.workdps(dps):
        r = mpmath.mpf(r) if not isinstance(r, mpmath.mpf) else r
        if r <= 0:
            raise DomainError("radial coordinate must be positive")
        beta = _mpf(desc.beta)
        gamma = ttw_radial_power(desc, dps)
        v = r ** gamma
        v *= _abs_sin_pow(beta * phi, desc.nu2)
        v *= _abs_sin_pow(beta * phi / 2, desc.nu3)
        expo = -_mpf(desc.omega) * r ** 2 / 2
        if desc.has_sextic:
            expo -= _mpf(desc.a) * r ** 4 / 4
        if desc.has_angular_qes:
            sign = -1 if desc.convention == "printed" else +1
            expo += sign * _mpf(desc.b) * mpmath.cos(beta * phi)
        return v * mpmath.exp(expo)


def ttw_sample(desc: TTWDescriptor, npoints: int, seed: int):
    rng = random.Random(seed)
    import math
    betaf = float(desc.beta)
    pts = []
    while len(pts) < npoints:
        r = rng.uniform(0.35, 1.4)
        phi = rng.uniform(0.08 * math.pi / betaf, 0.92 * math.pi / betaf)
        if abs(math.sin(betaf * phi)) > 0.1:
            pts.append((mpmath.mpf(r), mpmath.mpf(phi)))
    return pts


def ttw_ground_check(desc: TTWDescriptor, npoints: int = 50, seed: int = 17,
                     steps=DEFAULT_STEPS, dps: int = DEFAULT_DPS) -> ResidualStats:
    """(H Psi0)/Psi0 must be constant across the sample; the mean is the
    fitted ground energy and std/|mean| the constancy ratio."""
    sample = ttw_sample(desc, npoints, seed)
    with mp.workdps(dps):
        def psi(pt):
            return ttw_ground_factor(desc, pt[0], pt[1], dps)

        values = []
        skipped = 0
        for (r, phi) in sample:
            try:
                num = _apply_polar_fd(desc, psi, (r, phi), steps, dps)
                values.append(num / psi((r, phi)))
            except DomainError:
                skipped += 1
        return ResidualStats.from_values(values, skipped, 0)


def _apply_polar_fd(desc: TTWDescriptor, psi: Callable, pt, steps, dps):
    """-d_r^2 - (1/r) d_r - (1/r^2) d_phi^2 + V, by 4th-order stencils."""
    r, phi = pt
    h1, h2 = (_mpf(s) for s in steps)

    def d2(axis, h):
        return _second_derivative(lambda q: psi(q), [r, phi], axis, h)

    def d1r(h):
        def shifted(k):
            return psi((r + k * h, phi))
        return (-shifted(2) + 8 * shifted(1) - 8 * shifted(-1) + shifted(-2)) / (12 * h)

    ratio = (h1 / h2) ** 4
    lap_r = (ratio * d2(0, h2) - d2(0, h1)) / (ratio - 1)
    lap_phi = (ratio * d2(1, h2) - d2(1, h1)) / (ratio - 1)
    der_r = (ratio * d1r(h2) - d1r(h1)) / (ratio - 1)
    return (-lap_r - der_r / r - lap_phi / r ** 2
            + ttw_potential(desc, r, phi, dps) * psi((r, phi)))

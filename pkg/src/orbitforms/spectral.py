"""Exact spectra of flag-restricted operators and related special functions.

The headline check is exact: the characteristic polynomial of the restricted
matrix (division-free Berkowitz over cleared denominators) must equal the
monic product of the closed-form eigenvalues over the flag basis.  Kernels of
(M - eps I) deliver the eigenpolynomials; a high-precision numeric
diagonalization cross-checks the multiset on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp

from . import linalg
from .diffop import ExactMatrix, apply, restrict_to_flag
from .errors import (DomainError, FormulaMismatch, InconsistencyError,
                     UnsupportedModel)
from .models import ModelBundle, eigenvalue_formula
from .poly import Exponents, FlagSpace, MultiPoly

ZERO = Fraction(0)


@dataclass(frozen=True)
class SpectralEntry:
    eigenvalue: Fraction
    quantum_indices: tuple[Exponents, ...]
    multiplicity: int            # algebraic multiplicity (count of indices)
    kernel_dim: int              # geometric multiplicity found
    eigenpolynomials: tuple[MultiPoly, ...]


@dataclass(frozen=True)
class SpectrumRecord:
    model: str
    d: int
    f: tuple[int, ...]
    n: int
    entries: tuple[SpectralEntry, ...]
    defective: tuple[Fraction, ...]      # eigenvalues with kernel_dim < multiplicity
    numeric_checked: bool

    @property
    def dim(self) -> int:
        return sum(e.multiplicity for e in self.entries)


def _to_mp_matrix(rows: Sequence[Sequence[Fraction]]) -> mpmath.matrix:
    n = len(rows)
    m = mpmath.matrix(n, n)
    for i in range(n):
        for j in range(n):
            c = rows[i][j]
            m[i, j] = mpmath.mpf(c.numerator) / c.denominator
        # exact integer/denominator split keeps 50+ digit accuracy
    return m


def numeric_eigenvalues(rows: Sequence[Sequence[Fraction]], dps: int = 60) -> list:
    with mp.workdps(dps):
        m = _to_mp_matrix(rows)
        values, _ = mpmath.eig(m)
        return [mpmath.mpc(v) for v in values]


def spectrum(model: ModelBundle, n: int, *, vector: tuple[int, ...] | None = None,
             numeric_check: bool = True, with_vectors: bool = True,
             numeric_dps: int = 60, numeric_tol: str = "1e-30") -> SpectrumRecord:
    """Exact spectrum of the model on its level-n flag.

    Verifies that the closed-form eigenvalue multiset matches the restricted
    matrix exactly (characteristic polynomial identity), extracts exact
    kernel eigenpolynomials, and optionally cross-checks the multiset against
    a >= 50 digit numeric diagonalization.
    """
    if model.eigenvalue is None:
        raise UnsupportedModel("use qes_spectrum for QES families")
    space = model.flag(n, vector)
    matrix = restrict_to_flag(model.h, space)
    predicted: dict[Fraction, list[Exponents]] = {}
    for mono in space.basis:
        val = eigenvalue_formula(model, mono)
        predicted.setdefault(val, []).append(mono)

    # Exact identity: charpoly(M) == prod_p (lambda - eps_p).
    action = matrix.action_matrix()
    cp = linalg.charpoly(action)
    roots: list[Fraction] = []
    for val, monos in predicted.items():
        roots.extend([val] * len(monos))
    expected = linalg.poly_from_roots(sorted(roots))
    if cp != expected:
        offenders = [str(v) for v in sorted(predicted)
                     if linalg.poly_eval(cp, v) != 0]
        bad = offenders[0] if offenders else "multiplicity mismatch"
        raise FormulaMismatch(
            f"{model.spec.family}: predicted eigenvalue set is not the exact "
            f"spectrum at n={n} (offender: {bad})",
            quantum_index=bad)

    entries: list[SpectralEntry] = []
    defective: list[Fraction] = []
    for val in sorted(predicted):
        monos = tuple(sorted(predicted[val], key=lambda e: (sum(e), e)))
        kernel_polys: tuple[MultiPoly, ...] = ()
        kdim = len(monos)
        if with_vectors:
            shifted = linalg.shift_diagonal(action, val)
            basis_vecs = linalg.nullspace(shifted)
            if not basis_vecs:
                raise InconsistencyError(
                    f"empty kernel for verified eigenvalue {val}")
            kdim = len(basis_vecs)
            if kdim < len(monos):
                defective.append(val)
            kernel_polys = tuple(_vector_to_poly(v, space) for v in basis_vecs)
            for phi in kernel_polys:
                if apply(model.h, phi) != phi * val:
                    raise InconsistencyError(
                        f"kernel vector is not an exact eigenpolynomial at {val}")
        entries.append(SpectralEntry(val, monos, len(monos), kdim, kernel_polys))

    numeric_checked = False
    if numeric_check:
        _numeric_multiset_check(action, roots, numeric_dps, numeric_tol)
        numeric_checked = True
    return SpectrumRecord(model.spec.family, space.d, space.f, n,
                          tuple(entries), tuple(defective), numeric_checked)


def _vector_to_poly(vec: Sequence[Fraction], space: FlagSpace) -> MultiPoly:
    terms = {space.basis[i]: c for i, c in enumerate(vec) if c}
    return MultiPoly(space.d, terms)


def _numeric_multiset_check(action, roots: Sequence[Fraction], dps: int,
                            tol: str) -> None:
    values = numeric_eigenvalues(action, dps)
    with mp.workdps(dps):
        bound = mpmath.mpf(tol)
        for v in values:
            if abs(v.imag) > bound:
                raise InconsistencyError(
                    f"numeric eigenvalue has imaginary part {v.imag}")
        numeric = sorted(v.real for v in values)
        exact = sorted(roots)
        if len(numeric) != len(exact):
            raise InconsistencyError("numeric eigenvalue count mismatch")
        for nv, ev in zip(numeric, exact):
            target = mpmath.mpf(ev.numerator) / ev.denominator
            if abs(nv - target) > bound:
                raise InconsistencyError(
                    f"numeric eigenvalue {nv} does not match exact {ev}")


@dataclass(frozen=True)
class QesSpectrumRecord:
    model: str
    n: int
    matrix: ExactMatrix
    eigenvalues: tuple            # mpf values, ascending
    eigenpolynomials: tuple       # MultiPoly with mpf coefficients unsupported -> coefficient tuples
    max_imag: object
    trace_gap: object


def qes_spectrum(model: ModelBundle, n: int | None = None, *,
                 dps: int = 60) -> QesSpectrumRecord:
    """Numeric spectrum of a QES model on its single invariant subspace.

    Eigenvalues come from a high-precision diagonalization of the exact
    matrix; there is no closed-form check (none exists).  Reality and the
    exact trace are asserted as cross-checks.
    """
    if model.eigenvalue is not None:
        raise UnsupportedModel("qes_spectrum is for QES families")
    level = model.spec.n if n is None else n
    space = model.flag(level)
    matrix = restrict_to_flag(model.h, space)
    action = matrix.action_matrix()
    with mp.workdps(dps):
        values, vectors = mpmath.eig(_to_mp_matrix(action))
        order = sorted(range(len(values)), key=lambda i: mpmath.mpf(values[i].real))
        max_imag = max((abs(values[i].imag) for i in order), default=mp.mpf(0))
        eigvals = tuple(values[i].real for i in order)
        polys = []
        for i in order:
            col = [vectors[r, i] for r in range(len(eigvals))]
            polys.append(tuple(col))
        exact_trace = matrix.trace()
        trace_gap = abs(sum(eigvals) - mpmath.mpf(exact_trace.numerator)
                        / exact_trace.denominator)
    return QesSpectrumRecord(model.spec.family, level, matrix, eigvals,
                             tuple(polys), max_imag, trace_gap)


# ---------------------------------------------------------------------------
# Jacobi reference polynomials
# ---------------------------------------------------------------------------

def jacobi_reference(p: int, a: Fraction, b: Fraction) -> MultiPoly:
    """Jacobi polynomial P_p^{(a,b)} by the three-term recurrence, exact.

    P_0 = 1, P_1 = (a+1) + (a+b+2)(tau-1)/2, and for p >= 2
    2p(p+a+b)(2p+a+b-2) P_p = (2p+a+b-1)[(2p+a+b)(2p+a+b-2) tau + a^2-b^2] P_{p-1}
                              - 2(p+a-1)(p+b-1)(2p+a+b) P_{p-2}.
    """
    if p < 0:
        raise DomainError("degree must be non-negative")
    a, b = Fraction(a), Fraction(b)
    t = MultiPoly.variable(1, 0)
    p0 = MultiPoly.const(1, 1)
    if p == 0:
        return p0
    p1 = (a + 1) + (a + b + 2) * (t - 1) * Fraction(1, 2)
    if p == 1:
        return p1
    prev2, prev1 = p0, p1
    for k in range(2, p + 1):
        s = 2 * k + a + b
        lead = 2 * k * (k + a + b) * (s - 2)
        if lead == 0:
            raise DomainError(
                f"degenerate Jacobi recurrence at p={k} for a={a}, b={b}")
        main = (s - 1) * ((s * (s - 2)) * t + (a * a - b * b))
        tail = 2 * (k + a - 1) * (k + b - 1) * s
        cur = (main * prev1 - tail * prev2) * (1 / Fraction(lead))
        prev2, prev1 = prev1, cur
    return prev1


def proportional_scalar(p: MultiPoly, q: MultiPoly) -> Fraction | None:
    """c with p == c*q exactly, if any (q nonzero)."""
    if q.is_zero():
        return None
    e, c = q.leading_term()
    ratio = p.coeff(e) / c
    return ratio if p == q * ratio else None


# ---------------------------------------------------------------------------
# Orthogonality under the squared ground factor
# ---------------------------------------------------------------------------

def orthogonality_check(nu2, nu3, pmax: int, quadrature_order: int = 8,
                        *, dps: int = 40, polys: Sequence[MultiPoly] | None = None):
    """Pairwise inner products of the one-variable eigenpolynomials under the
    weight (1-tau)^(nu2+nu3-1/2) (1+tau)^(nu2-1/2) induced by the squared
    ground factor and |dx/dtau|.

    Integrates in the angle variable (tau = cos theta), where the weight
    becomes sin(theta/2)^(2nu2+2nu3) cos(theta/2)^(2nu2) and Gauss-Legendre
    quadrature converges fast; returns (max normalized off-diagonal product,
    min diagonal norm).
    """
    nu2, nu3 = Fraction(nu2), Fraction(nu3)
    # integrability: both weight exponents must exceed -1
    if nu2 + nu3 <= Fraction(-1, 2) or nu2 <= Fraction(-1, 2):
        raise DomainError("weight is not integrable for these parameters")
    if pmax < 1:
        raise DomainError("need pmax >= 1")
    if polys is None:
        a = nu2 + nu3 - Fraction(1, 2)
        b = nu2 - Fraction(1, 2)
        polys = [jacobi_reference(p, a, b) for p in range(pmax + 1)]
    with mp.workdps(dps):
        e_sin = 2 * (nu2 + nu3)
        e_cos = 2 * nu2
        exp_sin = mpmath.mpf(e_sin.numerator) / e_sin.denominator
        exp_cos = mpmath.mpf(e_cos.numerator) / e_cos.denominator

        def weight(theta):
            return (mpmath.sin(theta / 2) ** exp_sin
                    * mpmath.cos(theta / 2) ** exp_cos)

        def inner(i, j):
            def f(theta):
                tau = mpmath.cos(theta)
                return (polys[i].evaluate([tau]) * polys[j].evaluate([tau])
                        * weight(theta))
            return mpmath.quad(f, [0, mpmath.pi], method="gauss-legendre",
                               maxdegree=quadrature_order)

        norms = [inner(i, i) for i in range(pmax + 1)]
        if min(norms) <= 0:
            raise InconsistencyError("non-positive diagonal norm")
        max_off = mp.mpf(0)
        for i in range(pmax + 1):
            for j in range(i + 1, pmax + 1):
                val = abs(inner(i, j)) / mpmath.sqrt(norms[i] * norms[j])
                max_off = max(max_off, val)
        return max_off, min(norms)

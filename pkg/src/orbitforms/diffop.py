"""Linear differential operators with polynomial or rational coefficients.

An operator is a finite sum  sum_k  C_k(tau) * d^k  over derivative
multi-indices k = (k_1,...,k_d), stored sparsely.  Application, composition
(exact Leibniz expansion), commutators, gauge conjugation by a ground-state
factor, and exact restriction to flag spaces are provided.

Everything is a pure function over immutable values; results never depend on
evaluation order.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Mapping, Sequence, Union

from .errors import (DimensionMismatch, DomainError, FlagViolation,
                     UnsupportedOrder)
from .linalg import Matrix
from .poly import Exponents, FlagSpace, MultiPoly, RationalFn

Coefficient = Union[MultiPoly, RationalFn]

ZERO = Fraction(0)


def _as_rational(c: Coefficient) -> RationalFn:
    return c if isinstance(c, RationalFn) else RationalFn.from_poly(c)


class DiffOp:
    """Immutable differential operator; coefficients MultiPoly or RationalFn."""

    __slots__ = ("nvars", "terms", "polynomial")

    def __init__(self, nvars: int, terms: Mapping[Exponents, Coefficient] | None = None):
        clean: dict[Exponents, Coefficient] = {}
        polynomial = True
        if terms:
            for k, c in terms.items():
                key = tuple(k)
                if len(key) != nvars or any(p < 0 for p in key):
                    raise DomainError(f"bad derivative multi-index {key}")
                if isinstance(c, (int, Fraction)):
                    c = MultiPoly.const(nvars, c)
                if c.nvars != nvars:
                    raise DimensionMismatch("coefficient variable count mismatch")
                if isinstance(c, RationalFn):
                    poly = c.as_poly()
                    if poly is not None:
                        c = poly
                if not c.is_zero():
                    clean[key] = c
                    if isinstance(c, RationalFn):
                        polynomial = False
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "polynomial", polynomial)

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "DiffOp":
        return cls(nvars)

    @classmethod
    def identity(cls, nvars: int) -> "DiffOp":
        return cls(nvars, {(0,) * nvars: MultiPoly.const(nvars, 1)})

    @classmethod
    def partial(cls, nvars: int, i: int, times: int = 1) -> "DiffOp":
        k = [0] * nvars
        k[i] = times
        return cls(nvars, {tuple(k): MultiPoly.const(nvars, 1)})

    @classmethod
    def mul_by(cls, p: MultiPoly) -> "DiffOp":
        return cls(p.nvars, {(0,) * p.nvars: p})

    @classmethod
    def euler(cls, nvars: int, weights: Sequence[int], shift: Fraction = ZERO) -> "DiffOp":
        """sum_i w_i tau_i d_i - shift."""
        terms: dict[Exponents, Coefficient] = {}
        for i, w in enumerate(weights):
            k = [0] * nvars
            k[i] = 1
            terms[tuple(k)] = MultiPoly.variable(nvars, i) * w
        op = cls(nvars, terms)
        if shift:
            op = op - cls.identity(nvars) * shift
        return op

    # -- linear structure ----------------------------------------------------

    def _check(self, other: "DiffOp") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatch("operator variable counts differ")

    def __add__(self, other: "DiffOp") -> "DiffOp":
        self._check(other)
        res: dict[Exponents, Coefficient] = dict(self.terms)
        for k, c in other.terms.items():
            if k in res:
                a = res[k]
                s = (_as_rational(a) + _as_rational(c)
                     if isinstance(a, RationalFn) or isinstance(c, RationalFn)
                     else a + c)
                res[k] = s
            else:
                res[k] = c
        return DiffOp(self.nvars, res)

    def __neg__(self) -> "DiffOp":
        return DiffOp(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def __mul__(self, scalar) -> "DiffOp":
        scalar = Fraction(scalar)
        return DiffOp(self.nvars, {k: c * scalar for k, c in self.terms.items()})

    __rmul__ = __mul__

    def order(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, k: Exponents) -> Coefficient:
        key = tuple(k)
        return self.terms.get(key, MultiPoly.zero(self.nvars))

    def constant_part(self) -> Coefficient:
        return self.coefficient((0,) * self.nvars)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            a, b = self.coefficient(k), other.coefficient(k)
            if isinstance(a, RationalFn) or isinstance(b, RationalFn):
                if _as_rational(a) != _as_rational(b):
                    return False
            elif a != b:
                return False
        return True

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms)))

    def __repr__(self):
        if not self.terms:
            return "DiffOp(0)"
        parts = []
        for k in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[k]
            body = c.as_string() if isinstance(c, MultiPoly) else repr(c)
            ds = "*".join(f"d{i + 1}^{p}" if p > 1 else f"d{i + 1}"
                          for i, p in enumerate(k) if p)
            parts.append(f"({body})" + (f"*{ds}" if ds else ""))
        return "DiffOp(" + " + ".join(parts) + ")"

    def as_string(self) -> str:
        return repr(self)[7:-1]


def apply(op: DiffOp, p: MultiPoly) -> Union[MultiPoly, RationalFn]:
    """Exact image op(p); MultiPoly whenever all coefficients are polynomial."""
    if op.nvars != p.nvars:
        raise DimensionMismatch("operator/polynomial variable counts differ")
    if op.polynomial:
        total = MultiPoly.zero(op.nvars)
        for k, c in op.terms.items():
            q = p
            for i, times in enumerate(k):
                if times:
                    q = q.diff(i, times)
                if q.is_zero():
                    break
            if not q.is_zero():
                total = total + c * q
        return total
    total_r = RationalFn.const(op.nvars, 0)
    for k, c in op.terms.items():
        q = p
        for i, times in enumerate(k):
            if times:
                q = q.diff(i, times)
        if not q.is_zero():
            total_r = total_r + _as_rational(c) * RationalFn.from_poly(q)
    return total_r


def _multi_binom(alpha: Exponents, gamma: Exponents) -> int:
    b = 1
    for a, g in zip(alpha, gamma):
        b *= comb(a, g)
    return b


def _sub_indices(alpha: Exponents):
    """All gamma with 0 <= gamma <= alpha componentwise."""
    if not alpha:
        yield ()
        return
    head, rest = alpha[0], alpha[1:]
    for tail in _sub_indices(rest):
        for g in range(head + 1):
            yield (g,) + tail


def _poly_derivative(c: Coefficient, gamma: Exponents) -> Coefficient:
    for i, times in enumerate(gamma):
        if times:
            if isinstance(c, RationalFn):
                for _ in range(times):
                    c = c.diff(i)
            else:
                c = c.diff(i, times)
    return c


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Operator product a.b with exact Leibniz expansion.

    For every polynomial p: apply(compose(a, b), p) == apply(a, apply(b, p)).
    """
    a._check(b)
    nvars = a.nvars
    acc: dict[Exponents, object] = {}
    for alpha, ca in a.terms.items():
        for beta, cb in b.terms.items():
            for gamma in _sub_indices(alpha):
                coeff_b = _poly_derivative(cb, gamma)
                if (coeff_b.is_zero()):
                    continue
                w = _multi_binom(alpha, gamma)
                key = tuple(x - g + y for x, g, y in zip(alpha, gamma, beta))
                term = ca * coeff_b if not isinstance(ca, RationalFn) and not isinstance(coeff_b, RationalFn) \
                    else _as_rational(ca) * _as_rational(coeff_b)
                term = term * w
                if key in acc:
                    prev = acc[key]
                    if isinstance(prev, RationalFn) or isinstance(term, RationalFn):
                        acc[key] = _as_rational(prev) + _as_rational(term)
                    else:
                        acc[key] = prev + term
                else:
                    acc[key] = term
    return DiffOp(nvars, acc)


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    """[a, b] = a.b - b.a, exact."""
    return compose(a, b) - compose(b, a)


class GaugeFactor:
    """Product of polynomial powers times exp of a polynomial.

    F = prod_k P_k^{alpha_k} * exp(Q).  Only the logarithmic derivative is
    ever needed in exact arithmetic:  G_i = sum_k alpha_k dP_k/P_k + dQ/d tau_i.
    """

    __slots__ = ("nvars", "factors", "exp_arg")

    def __init__(self, nvars: int,
                 factors: Sequence[tuple[MultiPoly, Fraction]] = (),
                 exp_arg: MultiPoly | None = None):
        facs = []
        for base, expo in factors:
            if base.nvars != nvars:
                raise DimensionMismatch("factor base variable count mismatch")
            if base.is_zero():
                raise DomainError("gauge factor base is identically zero")
            expo = Fraction(expo)
            if expo:
                facs.append((base, expo))
        if exp_arg is None:
            exp_arg = MultiPoly.zero(nvars)
        if exp_arg.nvars != nvars:
            raise DimensionMismatch("exponential argument variable count mismatch")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "factors", tuple(facs))
        object.__setattr__(self, "exp_arg", exp_arg)

    def __setattr__(self, name, value):
        raise AttributeError("GaugeFactor is immutable")

    def inverse(self) -> "GaugeFactor":
        return GaugeFactor(self.nvars,
                           [(b, -e) for b, e in self.factors],
                           -self.exp_arg)

    def common_denominator(self) -> MultiPoly:
        d = MultiPoly.const(self.nvars, 1)
        for base, _ in self.factors:
            d = d * base
        return d

    def log_gradient_over_common(self) -> tuple[list[MultiPoly], MultiPoly]:
        """Numerators N_i and shared denominator D with G_i = N_i / D."""
        d = self.common_denominator()
        nums = []
        for i in range(self.nvars):
            n = MultiPoly.zero(self.nvars)
            for base, expo in self.factors:
                other = d.exact_div(base)
                n = n + expo * base.diff(i) * other
            n = n + self.exp_arg.diff(i) * d
            nums.append(n)
        return nums, d

    def log_gradient(self, i: int) -> RationalFn:
        nums, den = self.log_gradient_over_common()
        return RationalFn(nums[i], den)

    def __repr__(self):
        parts = [f"({b.as_string()})^({e})" for b, e in self.factors]
        if not self.exp_arg.is_zero():
            parts.append(f"exp({self.exp_arg.as_string()})")
        return "GaugeFactor(" + " * ".join(parts or ["1"]) + ")"


def gauge_conjugate(op: DiffOp, factor: GaugeFactor) -> DiffOp:
    """F^-1 op F for an order <= 2 operator, by the closed conjugation rule.

    Writing op = sum A_ij d_i d_j + sum B_i d_i + C with symmetric A and
    G = grad log F:  the second-order part is unchanged, the first-order part
    becomes B_i + 2 sum_j A_ij G_j and the zeroth part
    C + sum A_ij (d_i G_j + G_i G_j) + sum B_i G_i.  Denominator-free results
    are downgraded to polynomial coefficients.
    """
    if op.order() > 2:
        raise UnsupportedOrder("gauge conjugation implemented for order <= 2 only")
    if factor.nvars != op.nvars:
        raise DimensionMismatch("gauge factor variable count mismatch")
    n = op.nvars
    if not factor.factors and factor.exp_arg.is_zero():
        return op

    # Symmetric second-order matrix from the stored multi-indices.
    A = [[MultiPoly.zero(n) for _ in range(n)] for _ in range(n)]
    B = [MultiPoly.zero(n) for _ in range(n)]
    C: Coefficient = MultiPoly.zero(n)
    second: dict[Exponents, Coefficient] = {}
    for k, c in op.terms.items():
        total = sum(k)
        if total == 2:
            second[k] = c
            if not isinstance(c, MultiPoly):
                raise DomainError("second-order coefficients must be polynomial")
            idx = [i for i, p in enumerate(k) for _ in range(p)]
            i, j = idx[0], idx[1]
            if i == j:
                A[i][i] = A[i][i] + c
            else:
                half = c * Fraction(1, 2)
                A[i][j] = A[i][j] + half
                A[j][i] = A[j][i] + half
        elif total == 1:
            i = k.index(1)
            if not isinstance(c, MultiPoly):
                raise DomainError("first-order coefficients must be polynomial")
            B[i] = B[i] + c
        else:
            C = c

    nums, den = factor.log_gradient_over_common()
    den2 = den * den

    # First order: B_i + 2 sum_j A_ij N_j / D, assembled over denominator D.
    first_terms: dict[Exponents, Coefficient] = {}
    for i in range(n):
        num = B[i] * den
        for j in range(n):
            if not A[i][j].is_zero() and not nums[j].is_zero():
                num = num + 2 * A[i][j] * nums[j]
        if num.is_zero():
            continue
        k = [0] * n
        k[i] = 1
        first_terms[tuple(k)] = RationalFn(num, den)

    # Zeroth order over D^2:
    #   C D^2 + sum A_ij [(dN_j D - N_j dD) + N_i N_j] + sum B_i N_i D
    zero_num = MultiPoly.zero(n)
    for i in range(n):
        for j in range(n):
            if A[i][j].is_zero():
                continue
            dg = nums[j].diff(i) * den - nums[j] * den.diff(i)
            zero_num = zero_num + A[i][j] * (dg + nums[i] * nums[j])
        if not B[i].is_zero() and not nums[i].is_zero():
            zero_num = zero_num + B[i] * nums[i] * den
    czero: Coefficient
    if isinstance(C, RationalFn):
        czero = C + RationalFn(zero_num, den2)
    else:
        czero = RationalFn(C * den2 + zero_num, den2)

    terms: dict[Exponents, Coefficient] = dict(second)
    terms.update(first_terms)
    if not czero.is_zero():
        terms[(0,) * n] = czero
    return DiffOp(n, terms)


class ExactMatrix:
    """Restriction of an operator to a flag basis.

    Row i holds the expansion of op(basis[i]) over the basis, so the matrix of
    a flag-preserving operator is block lower triangular in the graded order
    (an output can only reach monomials of equal or lower f-degree).
    """

    __slots__ = ("space", "rows")

    def __init__(self, space: FlagSpace, rows: Matrix):
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def entry(self, input_mono: Exponents, output_mono: Exponents) -> Fraction:
        i = self.space.index[tuple(input_mono)]
        j = self.space.index[tuple(output_mono)]
        return self.rows[i][j]

    def action_matrix(self) -> Matrix:
        """Column-action matrix M with op(basis_j) = sum_i M[i][j] basis_i."""
        return [list(col) for col in zip(*self.rows)]

    def is_block_triangular(self) -> bool:
        grades = [self.space.grade(e) for e in self.space.basis]
        return all(self.rows[i][j] == 0
                   for i in range(self.dim)
                   for j in range(self.dim)
                   if grades[j] > grades[i])

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.dim)), Fraction(0))


def restrict_to_flag(op: DiffOp, space: FlagSpace) -> ExactMatrix:
    """Exact matrix of op on the flag basis; FlagViolation with witness if
    the image of any basis monomial leaves the space."""
    if not op.polynomial:
        raise DomainError("restriction requires polynomial coefficients")
    if op.nvars != space.d:
        raise DimensionMismatch("operator/flag variable counts differ")
    rows: Matrix = []
    for mono in space.basis:
        image = apply(op, MultiPoly.monomial(space.d, mono))
        row = [ZERO] * space.dim
        for e, c in image.terms.items():
            pos = space.index.get(e)
            if pos is None:
                raise FlagViolation(
                    f"operator maps {mono} to a term outside the flag: {e}",
                    mono, e)
            row[pos] = c
        rows.append(row)
    return ExactMatrix(space, rows)


def preserves_flag(op: DiffOp, space: FlagSpace):
    """True iff op(m) stays in the space for every basis monomial.

    Returns (True, None) or (False, (input_monomial, offending_monomial)).
    """
    if not op.polynomial:
        raise DomainError("flag check requires polynomial coefficients")
    if op.nvars != space.d:
        raise DimensionMismatch("operator/flag variable counts differ")
    for mono in space.basis:
        image = apply(op, MultiPoly.monomial(space.d, mono))
        for e in image.terms:
            if not space.contains(e):
                return False, (mono, e)
    return True, None

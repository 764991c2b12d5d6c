"""Particular integrals built from shifted Euler operators.

With the graded Euler operator J0 = sum_i f_i tau_i d_i - n, the product
prod_{j=0..n} (J0 + j) is an operator of order n+1 that annihilates every
monomial of f-degree at most n: on a monomial of f-degree s it acts as the
scalar prod_j (s - n + j).  Its commutator with any flag-preserving model
operator therefore kills the level-n flag space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from .diffop import DiffOp, apply, commutator, compose
from .errors import DomainError
from .poly import (CharVector, Exponents, FlagSpace, MultiPoly, fdegree,
                   validate_char_vector)


@dataclass(frozen=True)
class PiIntegral:
    """Expanded particular integral of zero grading at level n."""

    f: CharVector
    d: int
    n: int
    euler: DiffOp       # J0 = sum f_i tau_i d_i - n
    expanded: DiffOp    # prod_{j=0..n} (J0 + j), order n+1

    def monomial_scalar(self, exps: Exponents) -> Fraction:
        """Closed-form action on a monomial: prod_j (deg_f - n + j)."""
        s = fdegree(exps, self.f)
        return Fraction(prod(s - self.n + j for j in range(self.n + 1)))


def build_pi_integral(f: Sequence[int], d: int, n: int) -> PiIntegral:
    """prod_{j=0}^{n} (J0 + j) for the grading f, expanded exactly."""
    fvec = validate_char_vector(f)
    if len(fvec) != d:
        raise DomainError("characteristic vector length != variable count")
    if n < 0:
        raise DomainError("level must be non-negative")
    euler = DiffOp.euler(d, list(fvec), Fraction(n))
    ident = DiffOp.identity(d)
    expanded = euler
    for j in range(1, n + 1):
        expanded = compose(expanded, euler + j * ident)
    return PiIntegral(fvec, d, n, euler, expanded)


def annihilation_check(h: DiffOp, ip: PiIntegral, space: FlagSpace):
    """True iff [h, ip] maps every basis monomial of the space to zero.

    Returns (True, None) or (False, (witness monomial, nonzero image)).
    """
    if h.nvars != ip.d:
        raise DomainError("operator/integral variable counts differ")
    comm = commutator(h, ip.expanded)
    for mono in space.basis:
        image = apply(comm, MultiPoly.monomial(space.d, mono))
        if not image.is_zero():
            return False, (mono, image)
    return True, None

"""Hidden-algebra generator realizations, structure checks and decompositions.

Three families of first/second order differential operators are realized
exactly: gl2 on one variable, gl_{d+1} on d variables (degree-n row irrep),
and the eleven-generator algebra acting on the (1,2)-graded plane that hides
behind the two-variable dihedral model.  A small word calculus evaluates
formal linear combinations of generator products to operators, and an exact
linear solver expresses a given operator in the span of degree <= 2 words of
non-raising generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .diffop import DiffOp, commutator, compose, preserves_flag
from .errors import DomainError
from .poly import Exponents, FlagSpace, MultiPoly

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class GeneratorSet:
    """Named generators with representation data.

    roles maps each name to one of "lowering", "cartan", "raising",
    "central"; raising generators are excluded from decomposition word bases.
    """

    kind: str
    d: int
    n: int
    names: tuple[str, ...]
    ops: Mapping[str, DiffOp]
    roles: Mapping[str, str]
    flag_vector: tuple[int, ...]

    def op(self, name: str) -> DiffOp:
        try:
            return self.ops[name]
        except KeyError:
            raise DomainError(f"unknown generator {name!r} in {self.kind}") from None

    def non_raising(self) -> list[str]:
        return [g for g in self.names if self.roles[g] != "raising"]

    def flag(self, n: int | None = None) -> FlagSpace:
        return FlagSpace(self.d, self.flag_vector, self.n if n is None else n)


@dataclass(frozen=True)
class GeneratorWord:
    """Formal sum of generator products with rational coefficients.

    terms: ((coefficient, (name_1, ..., name_k)), ...); products act right to
    left (the last name applies first), matching the written operator order.
    """

    terms: tuple[tuple[Fraction, tuple[str, ...]], ...]
    constant: Fraction = ZERO

    @classmethod
    def from_items(cls, items: Iterable[tuple[object, Sequence[str]]],
                   constant=0) -> "GeneratorWord":
        return cls(tuple((Fraction(c), tuple(names)) for c, names in items),
                   Fraction(constant))


def evaluate_word(gs: GeneratorSet, word: GeneratorWord) -> DiffOp:
    """Exact operator for a formal word (empty word -> zero operator)."""
    total = DiffOp.zero(gs.d)
    for coeff, names in word.terms:
        if not names:
            total = total + DiffOp.identity(gs.d) * coeff
            continue
        op = gs.op(names[-1])
        for name in reversed(names[:-1]):
            op = compose(gs.op(name), op)
        total = total + op * coeff
    if word.constant:
        total = total + DiffOp.identity(gs.d) * word.constant
    return total


# ---------------------------------------------------------------------------
# Realizations
# ---------------------------------------------------------------------------

def gl2_generators(n: int) -> GeneratorSet:
    """J- = d, J0 = tau d - n, T0 = 1, J+ = tau^2 d - n tau on one variable."""
    if n < 0:
        raise DomainError("representation level must be non-negative")
    t = MultiPoly.variable(1, 0)
    ops = {
        "J-": DiffOp.partial(1, 0),
        "J0": DiffOp(1, {(1,): t, (0,): MultiPoly.const(1, -n)}),
        "T0": DiffOp.identity(1),
        "J+": DiffOp(1, {(1,): t * t, (0,): t * (-n)}),
    }
    roles = {"J-": "lowering", "J0": "cartan", "T0": "central", "J+": "raising"}
    return GeneratorSet("gl2", 1, n, ("J-", "J0", "T0", "J+"), ops, roles, (1,))


def gln_generators(d: int, n: int) -> GeneratorSet:
    """The (d+1)^2 first-order generators of gl_{d+1} on degree <= n polynomials.

    Names: "E-i" = d_i, "E0-i-j" = tau_i d_j, "E0" = sum tau_i d_i - n,
    "E+i" = tau_i * E0.
    """
    if d < 1 or n < 0:
        raise DomainError("need d >= 1 and n >= 0")
    ops: dict[str, DiffOp] = {}
    roles: dict[str, str] = {}
    names: list[str] = []
    euler = DiffOp.euler(d, [1] * d, Fraction(n))
    for i in range(d):
        name = f"E-{i + 1}"
        ops[name] = DiffOp.partial(d, i)
        roles[name] = "lowering"
        names.append(name)
    for i in range(d):
        for j in range(d):
            name = f"E0-{i + 1}-{j + 1}"
            k = [0] * d
            k[j] = 1
            ops[name] = DiffOp(d, {tuple(k): MultiPoly.variable(d, i)})
            roles[name] = "cartan"
            names.append(name)
    ops["E0"] = euler
    roles["E0"] = "cartan"
    names.append("E0")
    for i in range(d):
        name = f"E+{i + 1}"
        ops[name] = compose(DiffOp.mul_by(MultiPoly.variable(d, i)), euler)
        roles[name] = "raising"
        names.append(name)
    return GeneratorSet("gl_{d+1}", d, n, tuple(names), ops, roles, (1,) * d)


def g2_algebra_generators(n: int) -> GeneratorSet:
    """Eleven generators acting on the (1,2)-graded plane (t, u).

    First order: J1 = dt, J2 = t dt - n/3, J3 = 2u du - n/3,
    J4 = t^2 dt + 2tu du - n t, R_i = t^i du.  Second order:
    T0 = u dt^2, T1 = u dt J0, T2 = u J0 (J0 + 1), with the Euler operator
    J0 = t dt + 2u du - n.
    """
    if n < 0:
        raise DomainError("representation level must be non-negative")
    d = 2
    t = MultiPoly.variable(d, 0)
    u = MultiPoly.variable(d, 1)
    third = Fraction(n, 3)
    dt = DiffOp.partial(d, 0)
    du = DiffOp.partial(d, 1)
    j0 = DiffOp.euler(d, [1, 2], Fraction(n))
    mul_u = DiffOp.mul_by(u)
    ops = {
        "J1": dt,
        "J2": DiffOp(d, {(1, 0): t, (0, 0): MultiPoly.const(d, -third)}),
        "J3": DiffOp(d, {(0, 1): 2 * u, (0, 0): MultiPoly.const(d, -third)}),
        "J4": DiffOp(d, {(1, 0): t * t, (0, 1): 2 * t * u, (0, 0): -Fraction(n) * t}),
        "R0": du,
        "R1": DiffOp(d, {(0, 1): t}),
        "R2": DiffOp(d, {(0, 1): t * t}),
        "T0": DiffOp(d, {(2, 0): u}),
        "T1": compose(compose(mul_u, dt), j0),
        "T2": compose(mul_u, compose(j0, j0 + DiffOp.identity(d))),
        "J0": j0,
    }
    roles = {
        "J1": "lowering", "J2": "cartan", "J3": "cartan", "J4": "raising",
        "R0": "lowering", "R1": "lowering", "R2": "lowering",
        "T0": "lowering", "T1": "raising", "T2": "raising",
        "J0": "cartan",
    }
    names = ("J1", "J2", "J3", "J4", "R0", "R1", "R2", "T0", "T1", "T2", "J0")
    return GeneratorSet("g2", d, n, names, ops, roles, (1, 2))


# ---------------------------------------------------------------------------
# Structure verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropertyResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class StructureReport:
    kind: str
    n: int
    results: tuple[PropertyResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> list[PropertyResult]:
        return [r for r in self.results if not r.ok]


def _gl2_expected_table(gs: GeneratorSet) -> dict[tuple[str, str], GeneratorWord]:
    n = Fraction(gs.n)
    W = GeneratorWord.from_items
    return {
        ("J-", "J0"): W([(1, ("J-",))]),
        ("J-", "J+"): W([(2, ("J0",)), (n, ("T0",))]),
        ("J0", "J+"): W([(1, ("J+",))]),
        ("J-", "T0"): W([]),
        ("J0", "T0"): W([]),
        ("J+", "T0"): W([]),
    }


def _gln_expected(gs: GeneratorSet, a: str, b: str) -> GeneratorWord | None:
    """Expected [a, b] for the gl_{d+1} realization; None for untested pairs."""

    def kind(name):
        if name.startswith("E-"):
            return ("low", int(name[2:]))
        if name.startswith("E0-"):
            _, i, j = name.split("-")
            return ("mid", int(i), int(j))
        if name == "E0":
            return ("euler",)
        return ("high", int(name[2:]))

    ka, kb = kind(a), kind(b)
    items: list[tuple[Fraction, tuple[str, ...]]] = []

    def w(c, *names):
        items.append((Fraction(c), names))

    if ka[0] == "low" and kb[0] == "low":
        pass
    elif ka[0] == "low" and kb[0] == "mid":
        if ka[1] == kb[1]:
            w(1, f"E-{kb[2]}")
    elif ka[0] == "mid" and kb[0] == "mid":
        _, i, j = ka
        _, k, l = kb
        if j == k:
            w(1, f"E0-{i}-{l}")
        if l == i:
            w(-1, f"E0-{k}-{j}")
    elif ka[0] == "low" and kb[0] == "euler":
        w(1, a)
    elif ka[0] == "mid" and kb[0] == "euler":
        pass
    elif ka[0] == "low" and kb[0] == "high":
        if ka[1] == kb[1]:
            w(1, "E0")
        w(1, f"E0-{kb[1]}-{ka[1]}")
    elif ka[0] == "mid" and kb[0] == "high":
        _, i, j = ka
        if j == kb[1]:
            w(1, f"E+{i}")
    elif ka[0] == "euler" and kb[0] == "high":
        w(1, b)
    elif ka[0] == "high" and kb[0] == "high":
        pass
    else:
        return None
    return GeneratorWord.from_items(items)


def check_structure(gs: GeneratorSet, flag_n: int | None = None) -> StructureReport:
    """Verify commutator closure, flag invariance and the extra claimed
    identities of the generator set; every failure carries a witness string."""
    results: list[PropertyResult] = []
    space = gs.flag(flag_n)

    for name in gs.names:
        ok, witness = preserves_flag(gs.op(name), space)
        results.append(PropertyResult(
            f"flag-invariance[{name}]", ok,
            "" if ok else f"witness {witness[0]} -> {witness[1]}"))

    if gs.kind == "gl2":
        table = _gl2_expected_table(gs)
        for (a, b), expected in table.items():
            lhs = commutator(gs.op(a), gs.op(b))
            rhs = evaluate_word(gs, expected)
            ok = lhs == rhs
            results.append(PropertyResult(f"commutator[{a},{b}]", ok,
                                          "" if ok else f"got {lhs!r}"))
    elif gs.kind == "gl_{d+1}":
        for i, a in enumerate(gs.names):
            for b in gs.names[i + 1:]:
                expected = _gln_expected(gs, a, b)
                if expected is None:
                    continue
                lhs = commutator(gs.op(a), gs.op(b))
                rhs = evaluate_word(gs, expected)
                ok = lhs == rhs
                results.append(PropertyResult(f"commutator[{a},{b}]", ok,
                                              "" if ok else f"got {lhs!r}"))
    elif gs.kind == "g2":
        results.extend(_check_g2_structure(gs))
    return StructureReport(gs.kind, gs.n, tuple(results))


def _proportional(a: DiffOp, b: DiffOp) -> Fraction | None:
    """c with a == c*b, if it exists (b nonzero)."""
    if b.is_zero():
        return None
    for k, coeff in b.terms.items():
        other = a.coefficient(k)
        if isinstance(coeff, MultiPoly) and isinstance(other, MultiPoly):
            if coeff.is_zero():
                continue
            e, c = coeff.leading_term()
            ratio = other.coeff(e) / c
            if a == b * ratio:
                return ratio
            return None
    return None


def _g2_pairwise_closure(gs: GeneratorSet) -> PropertyResult:
    """Every pairwise commutator must lie in the span of the generators,
    degree <= 2 words of the *first-order* generators, and a constant.

    Products of the second-order generators are excluded, so commutators
    involving them carry real content (e.g. [R0, T0] must reduce to a word in
    the first-order family); with them included the check would be vacuous,
    since [a, b] = ab - ba is itself a pair word.  All 55 systems share the
    word matrix, so one elimination with a multi-column right-hand side
    settles them together.
    """
    names = gs.names
    first_order = [g for g in names if gs.op(g).order() <= 1]
    words = [()] + [(g,) for g in names] \
        + [(a, b) for a in first_order for b in first_order]
    ops = [evaluate_word(gs, GeneratorWord(((ONE, w),)) if w
                         else GeneratorWord((), ONE)) for w in words]
    vecs = [_vectorize(op) for op in ops]
    pairs = [(a, b) for i, a in enumerate(names) for b in names[i + 1:]]
    targets = [_vectorize(commutator(gs.op(a), gs.op(b))) for a, b in pairs]
    keys = sorted({k for v in vecs for k in v}
                  | {k for t in targets for k in t})
    ncols = len(words)
    aug = [[v.get(k, ZERO) for v in vecs] + [t.get(k, ZERO) for t in targets]
           for k in keys]
    red, pivots = linalg.rref(aug)
    for row in red:
        if any(row[:ncols]):
            continue
        for j, val in enumerate(row[ncols:]):
            if val:
                a, b = pairs[j]
                return PropertyResult("closure[pairwise]", False,
                                      f"[{a},{b}] escapes the word span")
    return PropertyResult("closure[pairwise]", True)


def _check_g2_structure(gs: GeneratorSet) -> list[PropertyResult]:
    results: list[PropertyResult] = [_g2_pairwise_closure(gs)]
    j4 = gs.op("J4")
    t0 = gs.op("T0")

    # Commutator chain: [J4, T0] ~ T1, [J4, [J4, T0]] ~ T2, next one vanishes.
    c1 = commutator(j4, t0)
    r1 = _proportional(c1, gs.op("T1"))
    results.append(PropertyResult(
        "chain[J4,T0]~T1", r1 is not None,
        f"scale {r1}" if r1 is not None else f"got {c1!r}"))
    c2 = commutator(j4, c1)
    r2 = _proportional(c2, gs.op("T2"))
    results.append(PropertyResult(
        "chain[J4,[J4,T0]]~T2", r2 is not None,
        f"scale {r2}" if r2 is not None else f"got {c2!r}"))
    c3 = commutator(j4, c2)
    results.append(PropertyResult("nilpotency[[J4,[J4,[J4,T0]]]=0]", c3.is_zero(),
                                  "" if c3.is_zero() else f"got {c3!r}"))

    # Commutativity inside the T and R families.
    for fam in (("T0", "T1", "T2"), ("R0", "R1", "R2")):
        for i, a in enumerate(fam):
            for b in fam[i + 1:]:
                c = commutator(gs.op(a), gs.op(b))
                results.append(PropertyResult(f"commute[{a},{b}]", c.is_zero(),
                                              "" if c.is_zero() else f"got {c!r}"))

    # Conjugation pairings: the t <-> dt, u <-> du swap image of R_i,
    # completed by Euler factors, equals T_{2-i}:
    #   du     <-> u J0 (J0+1),   t du <-> u dt J0,   t^2 du <-> u dt^2.
    d = gs.d
    j0 = gs.op("J0")
    ident = DiffOp.identity(d)
    u = MultiPoly.variable(d, 1)
    swaps = {
        "R0": DiffOp(d, {(0, 0): u}),          # swap of du is multiplication by u
        "R1": DiffOp(d, {(1, 0): u}),          # swap of t du is u dt
        "R2": DiffOp(d, {(2, 0): u}),          # swap of t^2 du is u dt^2
    }
    pairings = {
        "R0": ("T2", compose(swaps["R0"], compose(j0, j0 + ident))),
        "R1": ("T1", compose(swaps["R1"], j0)),
        "R2": ("T0", swaps["R2"]),
    }
    for rname, (tname, built) in pairings.items():
        ok = built == gs.op(tname)
        results.append(PropertyResult(f"conjugation[{rname}<->{tname}]", ok,
                                      "" if ok else f"got {built!r}"))
    return results


# ---------------------------------------------------------------------------
# Exact decomposition fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    coefficients: tuple[tuple[tuple[str, ...], Fraction], ...]
    residual: DiffOp
    unmatched: tuple[tuple[Exponents, Exponents], ...]

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()

    def as_word(self) -> GeneratorWord:
        terms = [(c, names) for names, c in self.coefficients if names]
        const = next((c for names, c in self.coefficients if not names), ZERO)
        return GeneratorWord(tuple(terms), const)


def _vectorize(op: DiffOp) -> dict[tuple[Exponents, Exponents], Fraction]:
    vec: dict[tuple[Exponents, Exponents], Fraction] = {}
    for k, c in op.terms.items():
        if not isinstance(c, MultiPoly):
            raise DomainError("decomposition fitting needs polynomial coefficients")
        for e, coeff in c.terms.items():
            vec[(k, e)] = coeff
    return vec


def decomposition_words(gs: GeneratorSet, max_word_degree: int = 2
                        ) -> list[tuple[str, ...]]:
    """Ordered degree <= 2 products of first-order non-raising generators,
    all generators linearly, and the empty (constant) word."""
    if max_word_degree > 2:
        raise DomainError("word degree is capped at 2")
    first_order = [g for g in gs.non_raising() if gs.op(g).order() <= 1
                   and gs.roles[g] != "central"]
    # constant and single generators first: the solver pins free variables to
    # zero, so simple words are preferred over redundant product combinations
    words: list[tuple[str, ...]] = [()]
    for g in gs.names:
        words.append((g,))
    if max_word_degree >= 2:
        for a in first_order:
            for b in first_order:
                words.append((a, b))
    return words


def fit_decomposition(h: DiffOp, gs: GeneratorSet, max_word_degree: int = 2
                      ) -> FitResult:
    """Express h exactly in the word span; zero residual iff representable.

    Linear dependence between words is immaterial: each word is reduced to
    its operator coefficient vector and the system is solved there, with free
    variables pinned to zero for determinism.
    """
    words = decomposition_words(gs, max_word_degree)
    word_ops = [evaluate_word(gs, GeneratorWord(((ONE, w),)) if w
                              else GeneratorWord((), ONE)) for w in words]
    target = _vectorize(h)
    keys: list[tuple[Exponents, Exponents]] = sorted(set(target))
    vecs = []
    for op in word_ops:
        v = _vectorize(op)
        vecs.append(v)
        for key in v:
            if key not in target:
                keys.append(key)
    keys = sorted(set(keys))
    rows = [[vecs[c].get(key, ZERO) for c in range(len(words))] for key in keys]
    rhs = [target.get(key, ZERO) for key in keys]
    solution = linalg.solve(rows, rhs)
    if solution is None:
        # No exact representation: solve the consistent part for a certificate.
        red, pivots = linalg.rref([row[:] + [b] for row, b in zip(rows, rhs)])
        ncols = len(words)
        partial = [ZERO] * ncols
        for r, pc in enumerate(pivots):
            if pc < ncols:
                partial[pc] = red[r][ncols]
        solution = partial
    fitted = DiffOp.zero(gs.d)
    for c, op in zip(solution, word_ops):
        if c:
            fitted = fitted + op * c
    residual = h - fitted
    unmatched = tuple(sorted(_vectorize(residual)))
    coeffs = tuple((words[i], solution[i]) for i in range(len(words)) if solution[i])
    return FitResult(coeffs, residual, unmatched)

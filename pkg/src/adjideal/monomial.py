"""Exact arithmetic on monomial ideals in n variables.

An exponent is a tuple of non-negative ints; a monomial ideal is stored by
its minimal generating exponents.  The unit ideal is generated by the zero
exponent, the zero ideal has no generators; both are explicit so that
annihilator computations never hit an empty-set ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian

from .errors import DimensionMismatchError, PreconditionError, UndefinedInputError

Exponent = tuple


def exp_leq(a: Exponent, b: Exponent) -> bool:
    """Componentwise a <= b, i.e. the monomial z^a divides z^b."""
    return all(x <= y for x, y in zip(a, b))


def exp_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub_clamped(a: Exponent, b: Exponent) -> Exponent:
    """max(a - b, 0) componentwise; the colon step for single monomials."""
    return tuple(max(x - y, 0) for x, y in zip(a, b))


def exp_max(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _check_exponents(gens, dim=None):
    gens = [tuple(int(x) for x in g) for g in gens]
    for g in gens:
        if any(x < 0 for x in g):
            raise UndefinedInputError(f"negative exponent in {g}")
    lengths = {len(g) for g in gens}
    if dim is None:
        if len(lengths) > 1:
            raise DimensionMismatchError(f"mixed exponent lengths {sorted(lengths)}")
        dim = lengths.pop() if lengths else 0
    elif lengths - {dim}:
        raise DimensionMismatchError(f"exponents of length {sorted(lengths)} in dimension {dim}")
    return gens, dim


@dataclass(frozen=True)
class MonomialIdeal:
    dim: int
    gens: frozenset

    def __post_init__(self):
        for a in self.gens:
            for b in self.gens:
                if a != b and exp_leq(a, b):
                    raise UndefinedInputError("generators not minimal; use minimalize()")

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return (0,) * self.dim in self.gens

    def sorted_gens(self) -> list:
        return sorted(self.gens)

    def contains_exponent(self, e: Exponent) -> bool:
        return any(exp_leq(g, e) for g in self.gens)

    def contains(self, other: "MonomialIdeal") -> bool:
        if self.dim != other.dim:
            raise DimensionMismatchError("dimension mismatch in containment test")
        return all(self.contains_exponent(g) for g in other.gens)

    def __le__(self, other):
        return other.contains(self)

    def __repr__(self):
        if self.is_zero:
            return f"MonomialIdeal(0; dim={self.dim})"
        return f"MonomialIdeal({self.sorted_gens()}; dim={self.dim})"


def zero_ideal(dim: int) -> MonomialIdeal:
    return MonomialIdeal(dim, frozenset())


def unit_ideal(dim: int) -> MonomialIdeal:
    return MonomialIdeal(dim, frozenset({(0,) * dim}))


def principal_ideal(e: Exponent) -> MonomialIdeal:
    return MonomialIdeal(len(e), frozenset({tuple(int(x) for x in e)}))


def minimalize(gens, dim=None) -> MonomialIdeal:
    """Ideal generated by `gens`: keep only the <=-minimal exponents."""
    gens, dim = _check_exponents(gens, dim)
    minimal = []
    for g in sorted(set(gens), key=lambda e: (sum(e), e)):
        if not any(exp_leq(m, g) for m in minimal):
            minimal.append(g)
    return MonomialIdeal(dim, frozenset(minimal))


def combine(I: MonomialIdeal, J: MonomialIdeal, kind: str) -> MonomialIdeal:
    """sum, product, intersection or colon (I:J) of two monomial ideals."""
    if I.dim != J.dim:
        raise DimensionMismatchError(f"dimensions {I.dim} != {J.dim}")
    dim = I.dim
    if kind == "sum":
        return minimalize(list(I.gens) + list(J.gens), dim)
    if kind == "product":
        if I.is_zero or J.is_zero:
            return zero_ideal(dim)
        return minimalize([exp_add(a, b) for a in I.gens for b in J.gens], dim)
    if kind == "intersection":
        if I.is_zero or J.is_zero:
            return zero_ideal(dim)
        return minimalize([exp_max(a, b) for a in I.gens for b in J.gens], dim)
    if kind == "colon":
        # (I : J) = intersection over generators g of J of <max(a-g,0)>
        if J.is_zero:
            return unit_ideal(dim)
        if I.is_zero:
            return zero_ideal(dim)
        result = unit_ideal(dim)
        for g in J.gens:
            piece = minimalize([exp_sub_clamped(a, g) for a in I.gens], dim)
            result = combine(result, piece, "intersection")
        return result
    raise UndefinedInputError(f"unknown combine kind {kind!r}")


def annihilator_quotient(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """Ann(I/J) = {h : h*I subset J}, the maximal K with K*I <= J.

    Requires J <= I.  Equals the intersection of (J : f) over generators f
    of I, which for monomial ideals is combine(J, I, "colon").
    """
    if not I.contains(J):
        raise PreconditionError("annihilator_quotient requires J contained in I")
    return combine(J, I, "colon")


def radical(I: MonomialIdeal) -> MonomialIdeal:
    """Squarefree parts of the generators, minimalized."""
    if I.is_zero:
        return I
    return minimalize([tuple(1 if x > 0 else 0 for x in g) for g in I.gens], I.dim)


def gcd_generators(I: MonomialIdeal) -> Exponent:
    """Componentwise minimum of the generators (gcd monomial)."""
    if I.is_zero:
        raise UndefinedInputError("gcd of the zero ideal is undefined")
    gens = list(I.gens)
    out = gens[0]
    for g in gens[1:]:
        out = tuple(min(x, y) for x, y in zip(out, g))
    return out


def is_principal(I: MonomialIdeal) -> bool:
    return len(I.gens) == 1


def squarefree_from_support(dim: int, support) -> Exponent:
    return tuple(1 if i in set(support) else 0 for i in range(dim))


def intersection_of_coordinate_primes(dim: int, primes) -> MonomialIdeal:
    """Defining ideal of a union of coordinate subspaces.

    Each element of `primes` is a set of coordinate indices P, standing for
    the subspace {z_i = 0 : i in P}.  The result is the intersection of the
    corresponding monomial primes.
    """
    result = unit_ideal(dim)
    for P in primes:
        prime = minimalize([squarefree_from_support(dim, [i]) for i in P], dim)
        result = combine(result, prime, "intersection")
    return result


def minimal_primes_squarefree(I: MonomialIdeal) -> list:
    """Minimal coordinate primes over a squarefree monomial ideal.

    Returns the minimal vertex covers of the generator supports, i.e. the
    irreducible components of the zero locus as coordinate index sets.
    Brute force over subsets; fine for the small dimensions used here.
    """
    if I.is_zero:
        raise UndefinedInputError("zero ideal has no zero-locus decomposition here")
    if I.is_unit:
        return []
    supports = [frozenset(i for i, x in enumerate(g) if x > 0) for g in I.gens]
    covers = []
    for size in range(1, I.dim + 1):
        for subset in _subsets(range(I.dim), size):
            s = frozenset(subset)
            if all(s & sup for sup in supports) and not any(c <= s for c in covers):
                covers.append(s)
    return sorted(covers, key=lambda c: (len(c), sorted(c)))


def _subsets(items, size):
    items = list(items)
    if size == 0:
        yield ()
        return
    for i in range(len(items)):
        for rest in _subsets(items[i + 1:], size - 1):
            yield (items[i],) + rest


def staircase_minimal_points(constraints, dim: int) -> MonomialIdeal:
    """Minimal generators of {a >= 0 integral : row . a >= bound for all rows}.

    `constraints` is a list of (row, bound) with non-negative integer rows;
    non-positive bounds are vacuous.  A minimal solution cannot exceed the
    largest positive bound in any coordinate appearing in some row, and
    coordinates absent from every row stay 0 in minimal points, so a finite
    grid search suffices.
    """
    rows = []
    for row, bound in constraints:
        row = tuple(int(x) for x in row)
        if len(row) != dim:
            raise DimensionMismatchError(f"constraint row {row} has wrong length")
        if any(x < 0 for x in row):
            raise UndefinedInputError(f"negative entry in constraint row {row}")
        if int(bound) > 0:
            rows.append((row, int(bound)))
    if not rows:
        return unit_ideal(dim)
    bmax = max(b for _, b in rows)
    active = [i for i in range(dim) if any(r[i] > 0 for r, _ in rows)]
    ranges = [range(bmax + 1) if i in active else range(1) for i in range(dim)]
    solutions = [a for a in cartesian(*ranges)
                 if all(sum(r[i] * a[i] for i in range(dim)) >= b for r, b in rows)]
    if not solutions:
        return zero_ideal(dim)
    return minimalize(solutions, dim)

"""Exact values of the form sum of q * pi^k * e^r * rho^s, q,r,s rational.

Residue norms and centre integrals are finite sums of such terms (one per
lc centre), so they can be compared exactly and rendered as strings like
"pi^2*e^1*(3/4)".  Infinite results are the INFINITE singleton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class ExactTerm:
    coeff: Fraction
    pi_pow: int = 0
    e_exp: Fraction = Fraction(0)
    rho: Fraction = Fraction(1)
    rho_exp: Fraction = Fraction(0)

    def key(self):
        rho, rho_exp = (Fraction(1), Fraction(0)) if self.rho == 1 else (self.rho, self.rho_exp)
        return (self.pi_pow, self.e_exp, rho, rho_exp)

    def __float__(self):
        return (float(self.coeff) * math.pi ** self.pi_pow
                * math.exp(float(self.e_exp))
                * float(self.rho) ** float(self.rho_exp))


class ExactValue:
    """Canonical finite sum of ExactTerms (terms with equal keys merged)."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged = {}
        for t in terms:
            k = t.key()
            merged[k] = merged.get(k, Fraction(0)) + Fraction(t.coeff)
        self.terms = tuple(
            ExactTerm(c, k[0], k[1], k[2], k[3])
            for k, c in sorted(merged.items()) if c != 0
        )

    @staticmethod
    def zero():
        return ExactValue(())

    @staticmethod
    def of(coeff, pi_pow=0, e_exp=0, rho=1, rho_exp=0):
        return ExactValue((ExactTerm(Fraction(coeff), int(pi_pow), Fraction(e_exp),
                                     Fraction(rho), Fraction(rho_exp)),))

    @property
    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if isinstance(other, ExactValue):
            return ExactValue(self.terms + other.terms)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ExactValue(tuple(
                ExactTerm(t.coeff * other, t.pi_pow, t.e_exp, t.rho, t.rho_exp)
                for t in self.terms))
        if isinstance(other, ExactTerm):
            return ExactValue((_term_product(t, other) for t in self.terms))
        if isinstance(other, ExactValue):
            return ExactValue(tuple(_term_product(t, u)
                                    for t in self.terms for u in other.terms))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ExactValue) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __float__(self):
        return sum(float(t) for t in self.terms)

    def render(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for t in self.terms:
            factors = []
            if t.pi_pow:
                factors.append(f"pi^{t.pi_pow}")
            if t.e_exp:
                factors.append(f"e^{t.e_exp}")
            if t.rho != 1 and t.rho_exp:
                factors.append(f"({t.rho})^{t.rho_exp}")
            factors.append(f"({t.coeff})")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"ExactValue({self.render()})"


def _term_product(a: ExactTerm, b: ExactTerm) -> ExactTerm:
    if a.rho != 1 and b.rho != 1 and a.rho != b.rho:
        raise ValueError("cannot multiply exact terms with different radii")
    rho = a.rho if a.rho != 1 else b.rho
    return ExactTerm(a.coeff * b.coeff, a.pi_pow + b.pi_pow, a.e_exp + b.e_exp,
                     rho, a.rho_exp + b.rho_exp)


class _Infinite:
    is_zero = False

    def render(self):
        return "infinite"

    def __repr__(self):
        return "INFINITE"

    def __float__(self):
        return math.inf


INFINITE = _Infinite()


def is_infinite(value) -> bool:
    return value is INFINITE

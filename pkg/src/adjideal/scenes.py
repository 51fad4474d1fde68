"""Scenes: potentials with logarithmic singularities on a polydisc.

A potential is a finite sum of atoms c * log(sum of |z^g|^2 over generators)
plus a constant offset.  Atoms whose singular locus is not torus-invariant
(cusp, node) are carried as named principal sections whose pullback data
comes from a resolution certificate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DimensionMismatchError, InputError, PreconditionError
from .monomial import MonomialIdeal, is_principal, minimalize


@dataclass(frozen=True)
class DivisorId:
    name: str
    kind: str  # "coordinate" | "exceptional" | "named-principal"
    index: int | None = None  # base coordinate index for kind == "coordinate"

    def __post_init__(self):
        if self.kind not in ("coordinate", "exceptional", "named-principal"):
            raise InputError(f"unknown divisor kind {self.kind!r}")


class QDivisor(dict):
    """Finitely supported map divisor-name -> Fraction."""

    def __init__(self, data=()):
        super().__init__()
        items = data.items() if isinstance(data, dict) else data
        for name, coeff in items:
            coeff = Fraction(coeff)
            if coeff != 0:
                self[name] = coeff

    def plus(self, other, scale=1):
        out = QDivisor(self)
        for name, coeff in other.items():
            new = out.get(name, Fraction(0)) + Fraction(scale) * coeff
            if new == 0:
                out.pop(name, None)
            else:
                out[name] = new
        return out

    def scaled(self, scale):
        return QDivisor({n: Fraction(scale) * c for n, c in self.items()})

    def coeff(self, name):
        return self.get(name, Fraction(0))

    def is_effective(self):
        return all(c >= 0 for c in self.values())

    def is_integral(self):
        return all(c.denominator == 1 for c in self.values())


@dataclass(frozen=True)
class PotentialAtom:
    coeff: Fraction
    ideal: MonomialIdeal | None = None  # None for named-principal atoms
    section: str | None = None          # name of the principal section

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if (self.ideal is None) == (self.section is None):
            raise InputError("atom needs exactly one of ideal / section")

    @property
    def is_named(self):
        return self.section is not None


@dataclass(frozen=True)
class Potential:
    atoms: tuple
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "offset", Fraction(self.offset))

    @staticmethod
    def zero():
        return Potential((), 0)


@dataclass(frozen=True)
class Scene:
    dim: int
    phi_L: Potential
    psi: Potential
    polyradius: Fraction = Fraction(1)
    c: Fraction | None = None  # optional scaling parameter carried for reports

    def __post_init__(self):
        object.__setattr__(self, "polyradius", Fraction(self.polyradius))
        if self.c is not None:
            object.__setattr__(self, "c", Fraction(self.c))


@dataclass(frozen=True)
class TwistedIdeal:
    """Product of powers of named principal sections with a monomial ideal."""

    section_powers: tuple  # sorted tuple of (name, power)
    monomial: MonomialIdeal

    @staticmethod
    def of(monomial, powers=()):
        items = tuple(sorted((n, int(p)) for n, p in dict(powers).items() if int(p) != 0))
        if any(p < 0 for _, p in items):
            raise InputError("negative section power")
        return TwistedIdeal(items, monomial)

    @property
    def is_plain(self):
        return not self.section_powers

    @property
    def is_unit(self):
        return self.is_plain and self.monomial.is_unit

    def powers(self):
        return dict(self.section_powers)


def validate_scene(scene: Scene) -> list:
    """Check the standing hypotheses; return a list of violation strings.

    Verifies atom shapes and the normalisation psi <= -1 on the unit
    polydisc (non-negative coefficients, offset <= -1, generators of
    positive degree).  Whether m=1 actually is a jumping number is a
    resolution-level question and is only flagged here, not computed.
    """
    violations = []
    for role, pot in (("phi_L", scene.phi_L), ("psi", scene.psi)):
        for i, atom in enumerate(pot.atoms):
            where = f"{role} atom {i}"
            if atom.is_named:
                if atom.coeff < 0:
                    # named sections are principal, so this stays a
                    # difference of admissible potentials
                    continue
                continue
            if atom.ideal.dim != scene.dim:
                violations.append(f"(1) {where}: dimension {atom.ideal.dim} != {scene.dim}")
                continue
            if atom.coeff < 0 and not is_principal(atom.ideal):
                violations.append(f"(1) {where}: negative coefficient on a non-principal ideal")
            if atom.ideal.is_zero:
                violations.append(f"(1) {where}: zero ideal is not a valid polar ideal")
    for i, atom in enumerate(scene.psi.atoms):
        if atom.coeff < 0:
            violations.append(f"(3) psi atom {i}: negative coefficient breaks psi <= -1")
        if not atom.is_named and not atom.ideal.is_zero:
            if any(sum(g) == 0 for g in atom.ideal.gens):
                violations.append(f"(3) psi atom {i}: generator of degree 0 (atom not <= 0)")
    if scene.psi.offset > -1:
        violations.append(f"(3) psi offset {scene.psi.offset} > -1; psi <= -1 fails")
    # item (4): the m=1 jump requirement is checked downstream by the
    # jumping-spectrum machinery, not here.
    return violations


def lelong(potential: Potential, coord: int) -> Fraction:
    """Generic Lelong number along the coordinate divisor {z_coord = 0}.

    Sum over atoms of coeff * (min generator exponent at the coordinate);
    offsets contribute nothing.  Named atoms need certificate tables and
    are rejected here.
    """
    total = Fraction(0)
    for atom in potential.atoms:
        if atom.is_named:
            raise PreconditionError(
                f"named atom {atom.section!r} needs a certificate pullback table")
        if atom.ideal.is_zero:
            continue
        total += atom.coeff * min(g[coord] for g in atom.ideal.gens)
    return total


def snc_weights(potential: Potential, dim: int):
    """Per-coordinate log weights (c_1, ..., c_n) and the offset.

    Every atom must be principal; otherwise the potential is not in normal
    crossings in these coordinates and the caller must resolve first.
    """
    weights = [Fraction(0)] * dim
    for atom in potential.atoms:
        if atom.is_named:
            raise PreconditionError(f"atom {atom.section!r} is not resolved in this chart")
        if not is_principal(atom.ideal):
            raise PreconditionError("non-principal atom; not snc in these coordinates")
        (gen,) = atom.ideal.gens
        for i, g in enumerate(gen):
            weights[i] += atom.coeff * g
    return tuple(weights), potential.offset


def potential_from_weights(weights, offset) -> Potential:
    """Inverse of snc_weights for principal data."""
    atoms = []
    for i, w in enumerate(weights):
        w = Fraction(w)
        if w == 0:
            continue
        gen = tuple(1 if j == i else 0 for j in range(len(weights)))
        atoms.append(PotentialAtom(w, minimalize([gen], len(weights))))
    return Potential(tuple(atoms), Fraction(offset))


# --- JSON serialization -------------------------------------------------

def _frac_to_str(x) -> str:
    x = Fraction(x)
    return str(x)


def parse_fraction(s) -> Fraction:
    try:
        f = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {s!r}: {exc}") from None
    return f


def potential_to_json(p: Potential) -> dict:
    atoms = []
    for a in p.atoms:
        if a.is_named:
            atoms.append({"coeff": _frac_to_str(a.coeff), "section": a.section})
        else:
            atoms.append({"coeff": _frac_to_str(a.coeff),
                          "ideal": [list(g) for g in a.ideal.sorted_gens()]})
    return {"atoms": atoms, "offset": _frac_to_str(p.offset)}


def potential_from_json(data, dim) -> Potential:
    try:
        atoms = []
        for a in data.get("atoms", []):
            coeff = parse_fraction(a["coeff"])
            if "section" in a:
                atoms.append(PotentialAtom(coeff, section=a["section"]))
            else:
                atoms.append(PotentialAtom(coeff, minimalize(a["ideal"], dim)))
        return Potential(tuple(atoms), parse_fraction(data.get("offset", "0")))
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad potential JSON: {exc}") from None
    except DimensionMismatchError as exc:
        raise InputError(str(exc)) from None


def scene_to_json(s: Scene) -> dict:
    out = {"dim": s.dim, "polyradius": _frac_to_str(s.polyradius),
           "phi_L": potential_to_json(s.phi_L), "psi": potential_to_json(s.psi)}
    if s.c is not None:
        out["c"] = _frac_to_str(s.c)
    return out


def scene_from_json(data) -> Scene:
    try:
        dim = int(data["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad scene JSON at /dim: {exc}") from None
    return Scene(
        dim=dim,
        phi_L=potential_from_json(data.get("phi_L", {"atoms": []}), dim),
        psi=potential_from_json(data.get("psi", {"atoms": []}), dim),
        polyradius=parse_fraction(data.get("polyradius", "1")),
        c=parse_fraction(data["c"]) if "c" in data else None,
    )


def load_scene(path) -> Scene:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read scene {path}: {exc}") from None
    return scene_from_json(data)

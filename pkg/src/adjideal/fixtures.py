"""Built-in scenes and certificates: cross2d, delta3, cusp, node.

The cross and delta3 towers are purely monomial and are built through the
blow-up machinery (so the consistency gate re-derives their canonical
multiplicities).  The cusp and node certificates carry non-toric strict
transforms; their charts, tables and canonical multiplicities are declared
and trusted, including the relative canonical divisor printed with the
worked example they reproduce.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .monomial import minimalize, unit_ideal
from .resolution import (Chart, DivisorId, ResolutionCertificate, blowup,
                         identity_certificate)
from .scenes import Potential, PotentialAtom, QDivisor, Scene


def _coord_atom(coeff, dim, index):
    gen = tuple(1 if i == index else 0 for i in range(dim))
    return PotentialAtom(Fraction(coeff), minimalize([gen], dim))


def cross_scene() -> Scene:
    psi = Potential((_coord_atom(1, 2, 0), _coord_atom(1, 2, 1)), Fraction(-1))
    return Scene(2, Potential.zero(), psi)


def cross_certificate() -> ResolutionCertificate:
    return blowup(identity_certificate(2), ("z1", "z2"), new_name="R")


def delta3_scene(c=Fraction(0)) -> Scene:
    c = Fraction(c)
    phi = Potential((PotentialAtom(c, minimalize([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)),),
                    Fraction(0))
    psi = Potential((_coord_atom(1, 3, 0), _coord_atom(1, 3, 1)), Fraction(-1))
    return Scene(3, phi, psi, c=c)


def delta3_certificate() -> ResolutionCertificate:
    cert = identity_certificate(3)
    cert = blowup(cert, ("z1", "z2"), new_name="E1")
    cert = blowup(cert, ("E1", "z3"), new_name="E2")
    return cert


def delta3_weight_ideal():
    return minimalize([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)


def cusp_scene() -> Scene:
    psi = Potential((PotentialAtom(Fraction(1), section="cusp"),), Fraction(-1))
    return Scene(2, Potential.zero(), psi)


def cusp_certificate() -> ResolutionCertificate:
    # Tower of three point blow-ups separating the cuspidal curve
    # {z2^2 = z1^3} from the exceptional divisors.  The canonical
    # multiplicities and pullback orders are declared per the worked
    # example this fixture reproduces.
    charts = (
        # generic point of E1
        Chart("E1", rows=((1, 0), (1, 1)), slots=(("E1", 1),),
              named_ord=(("cusp", (0, 2)),)),
        # generic point of E2
        Chart("E2", rows=((1, 2), (0, 1)), slots=(("E2", 0),),
              named_ord=(("cusp", (3, 0)),)),
        # E1 meets E3
        Chart("p1", rows=((1, 1), (2, 3)), slots=(("E1", 0), ("E3", 1)),
              named_ord=(("cusp", (2, 6)),)),
        # E2 meets E3
        Chart("p2", rows=((2, 3), (1, 2)), slots=(("E2", 1), ("E3", 0)),
              named_ord=(("cusp", (6, 3)),)),
        # strict transform meets E3 (translated coordinates)
        Chart("p0", rows=((2, 3), (0, 0)), slots=(("E3", 0), ("S", 1)),
              named_ord=(("cusp", (6, 1)),)),
    )
    registry = (DivisorId("S", "named-principal"),
                DivisorId("E1", "exceptional"),
                DivisorId("E2", "exceptional"),
                DivisorId("E3", "exceptional"))
    k_rel = QDivisor({"E1": 1, "E2": 2, "E3": 3})
    sections = (("cusp", ((3, 0), (0, 2))),)
    return ResolutionCertificate(2, charts, registry, k_rel, sections, trusted=True)


def node_scene() -> Scene:
    psi = Potential((PotentialAtom(Fraction(1), section="node"),), Fraction(-1))
    return Scene(2, Potential.zero(), psi)


def node_certificate() -> ResolutionCertificate:
    # One blow-up at the node of {z2^2 = z1^2 (z1 + 1)}; the strict
    # transform meets the exceptional divisor at two points.
    charts = (
        Chart("a", rows=((1, 1), (0, 1)), slots=(("E", 0),),
              named_ord=(("node", (2, 0)),)),
        Chart("b", rows=((1, 0), (1, 1)), slots=(("E", 1),),
              named_ord=(("node", (0, 2)),)),
        Chart("p+", rows=((1, 1), (0, 0)), slots=(("E", 0), ("S", 1)),
              named_ord=(("node", (2, 1)),)),
        Chart("p-", rows=((1, 1), (0, 0)), slots=(("E", 0), ("S", 1)),
              named_ord=(("node", (2, 1)),)),
    )
    registry = (DivisorId("S", "named-principal"), DivisorId("E", "exceptional"))
    k_rel = QDivisor({"E": 1})
    sections = (("node", ((0, 2), (3, 0), (2, 0))),)
    return ResolutionCertificate(2, charts, registry, k_rel, sections, trusted=True)


def cross_boundary():
    return [(("coordinate", 0), Fraction(1)), (("coordinate", 1), Fraction(1))]


def cusp_boundary():
    return [(("named", "cusp"), Fraction(1))]


def node_boundary():
    return [(("named", "node"), Fraction(1))]


def cross_s_components():
    return [("coordinate", 0), ("coordinate", 1)]


def delta3_s_components():
    return [("coordinate", 0), ("coordinate", 1)]


def cusp_s_components():
    return [("named", "cusp")]


def node_s_components():
    return [("named", "node")]


FIXTURES = ("cross2d", "delta3", "cusp", "node")


def load_fixture(name, c=None):
    """(scene, certificate, metadata) for a built-in fixture name."""
    if name == "cross2d":
        return cross_scene(), cross_certificate(), {
            "boundary": cross_boundary(),
            "s_components": cross_s_components(),
            "a_ideal": unit_ideal(2),
        }
    if name == "delta3":
        scene = delta3_scene(c if c is not None else Fraction(0))
        return scene, delta3_certificate(), {
            "boundary": None,
            "s_components": delta3_s_components(),
            "a_ideal": delta3_weight_ideal(),
        }
    if name == "cusp":
        return cusp_scene(), cusp_certificate(), {
            "boundary": cusp_boundary(),
            "s_components": cusp_s_components(),
            "a_ideal": unit_ideal(2),
        }
    if name == "node":
        return node_scene(), node_certificate(), {
            "boundary": node_boundary(),
            "s_components": node_s_components(),
            "a_ideal": unit_ideal(2),
        }
    raise InputError(f"unknown fixture {name!r}; choose from {FIXTURES}")

"""Blow-up towers, pullback bookkeeping and global (pushforward) ideals.

A certificate is a list of charts over the base polydisc.  Each chart
records, per chart coordinate, the vanishing order of every pulled-back
base coordinate (a non-negative integer row vector), which divisor of the
registry the coordinate cuts out, and the vanishing orders of any named
principal sections (cusp, node) that are not torus-invariant.  For purely
monomial towers every derived quantity (relative canonical divisor,
pullback tables) is recomputed from the rows and must match the stored
values; for named-principal fixtures the tables are trusted inputs.

All candidate sections are torus-invariant: monomials times declared
powers of named sections.  Requirements along strict transforms of named
divisors are discharged by factoring the named section, after which only
monomial staircase constraints remain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .errors import (ConstructionError, HypothesisError, InputError,
                     PreconditionError, ResolveFurtherError, VerificationError)
from .exactvals import INFINITE, ExactValue, is_infinite
from .monomial import (MonomialIdeal, combine, exp_add, minimalize,
                       minimal_primes_squarefree, principal_ideal, radical,
                       staircase_minimal_points, unit_ideal, zero_ideal)
from .scenes import (DivisorId, Potential, PotentialAtom, QDivisor, Scene,
                     TwistedIdeal, snc_weights)
from . import snc as _snc
from .snc import SncData


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


@dataclass(frozen=True)
class Chart:
    id: str
    rows: tuple          # rows[j][i] = ord along chart coord j of pulled z_i
    slots: tuple         # sorted tuple of (divisor name, chart coord index)
    named_ord: tuple = ()  # sorted tuple of (section name, ord tuple per coord)

    @property
    def dim(self):
        return len(self.rows)

    def slot_of(self, name):
        for n, j in self.slots:
            if n == name:
                return j
        return None

    def divisor_at(self, coord):
        for n, j in self.slots:
            if j == coord:
                return n
        return None

    def named_orders(self, name):
        for n, vec in self.named_ord:
            if n == name:
                return vec
        return (0,) * self.dim

    def ord_of_exponent(self, coord, exponent):
        return sum(r * int(a) for r, a in zip(self.rows[coord], exponent))

    def ord_of_ideal(self, coord, ideal: MonomialIdeal):
        if ideal.is_zero:
            raise PreconditionError("zero ideal has no vanishing order")
        return min(self.ord_of_exponent(coord, g) for g in ideal.gens)

    def matrix(self):
        """M[i][j] = exponent of chart coordinate j in pulled z_i."""
        n = self.dim
        return [[self.rows[j][i] for j in range(n)] for i in range(n)]


@dataclass(frozen=True, eq=False)
class ResolutionCertificate:
    dim: int
    charts: tuple
    registry: tuple              # DivisorId entries
    k_rel: object                # QDivisor over exceptional names
    named_sections: tuple = ()   # ((name, (expansion exponents, ...)), ...)
    trusted: bool = False        # skip the recompute gate (declared fixture)

    def chart(self, chart_id) -> Chart:
        for ch in self.charts:
            if ch.id == chart_id:
                return ch
        raise InputError(f"no chart {chart_id!r} in certificate")

    def divisor(self, name) -> DivisorId:
        for d in self.registry:
            if d.name == name:
                return d
        raise InputError(f"divisor {name!r} not registered")

    def exceptional_names(self):
        return [d.name for d in self.registry if d.kind == "exceptional"]

    def named_expansion(self, name):
        for n, exp in self.named_sections:
            if n == name:
                return exp
        raise InputError(f"no base expansion declared for section {name!r}")

    def charts_with(self, *names):
        return [ch for ch in self.charts
                if all(ch.slot_of(n) is not None for n in names)]

    def section_ord(self, name, divisor_name):
        """Vanishing order of the named section along a registered divisor."""
        for ch in self.charts:
            j = ch.slot_of(divisor_name)
            if j is not None:
                return ch.named_orders(name)[j]
        raise InputError(f"divisor {divisor_name!r} slotted in no chart")

    def coordinate_ord(self, base_index, divisor_name):
        """Vanishing order of pulled z_{base_index} along a divisor."""
        for ch in self.charts:
            j = ch.slot_of(divisor_name)
            if j is not None:
                return ch.rows[j][base_index]
        raise InputError(f"divisor {divisor_name!r} slotted in no chart")

    def atom_ord(self, atom: PotentialAtom, chart: Chart, coord: int):
        if atom.is_named:
            return Fraction(atom.coeff) * chart.named_orders(atom.section)[coord]
        return Fraction(atom.coeff) * chart.ord_of_ideal(coord, atom.ideal)


def identity_certificate(dim: int) -> ResolutionCertificate:
    """The trivial certificate: one chart, identity substitution, each base
    coordinate divisor registered as its own strict transform."""
    rows = tuple(tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim))
    slots = tuple((f"z{j+1}", j) for j in range(dim))
    registry = tuple(DivisorId(f"z{j+1}", "coordinate", j) for j in range(dim))
    chart = Chart("c0", rows, slots)
    return ResolutionCertificate(dim, (chart,), registry, QDivisor())


def blowup(cert: ResolutionCertificate, centre, chart_id=None,
           new_name=None) -> ResolutionCertificate:
    """Blow up the intersection of the named divisors.

    `centre` is a collection of >= 2 registered divisor names.  Every chart
    in which all of them are slotted is replaced by len(centre) charts; the
    new exceptional divisor is registered, the relative canonical divisor
    gains (len(centre) - 1 + sum of old multiplicities along the centre)
    copies of it.  Restrict to a single chart with `chart_id` if the centre
    is known to be visible only there.
    """
    centre = tuple(dict.fromkeys(centre))
    if len(centre) < 2:
        raise InputError("blow-up centre needs at least 2 divisors")
    for n in centre:
        cert.divisor(n)
    if new_name is None:
        count = len(cert.exceptional_names())
        new_name = f"E{count + 1}"
        while any(d.name == new_name for d in cert.registry):
            count += 1
            new_name = f"E{count + 1}"
    targets = cert.charts_with(*centre)
    if chart_id is not None:
        targets = [ch for ch in targets if ch.id == chart_id]
    if not targets:
        raise InputError(f"centre {centre} is visible in no chart")

    new_charts = []
    for ch in cert.charts:
        if ch not in targets:
            new_charts.append(ch)
            continue
        coords = [ch.slot_of(n) for n in centre]
        exc_row = tuple(sum(ch.rows[j][i] for j in coords) for i in range(ch.dim))
        named_names = [n for n, _ in ch.named_ord]
        for direction, dname in zip(coords, centre):
            rows = list(ch.rows)
            rows[direction] = exc_row
            slots = [(n, j) for n, j in ch.slots if n != dname]
            slots.append((new_name, direction))
            named = []
            for n in named_names:
                vec = list(ch.named_orders(n))
                vec[direction] = sum(ch.named_orders(n)[j] for j in coords)
                named.append((n, tuple(vec)))
            new_charts.append(Chart(f"{ch.id}.{dname}", tuple(rows),
                                    tuple(sorted(slots)), tuple(sorted(named))))

    k_new = len(centre) - 1 + sum(cert.k_rel.coeff(n) for n in centre)
    registry = cert.registry + (DivisorId(new_name, "exceptional"),)
    k_rel = cert.k_rel.plus(QDivisor({new_name: k_new}))
    return ResolutionCertificate(cert.dim, tuple(new_charts), registry, k_rel,
                                 cert.named_sections, cert.trusted)


def verify_certificate(cert: ResolutionCertificate):
    """Consistency gate: monomial quantities recomputed from chart rows must
    match the stored ones.  Trusted (named-principal) fixtures only get the
    cheap structural checks."""
    problems = []
    slotted = set()
    for ch in cert.charts:
        slotted.update(n for n, _ in ch.slots)
        for n, j in ch.slots:
            if j >= ch.dim:
                problems.append(f"{ch.id}: slot {n} out of range")
    for d in cert.registry:
        if d.name not in slotted:
            problems.append(f"divisor {d.name} slotted in no chart")
    if not cert.trusted:
        for ch in cert.charts:
            m = ch.matrix()
            if abs(_det(m)) != 1:
                problems.append(f"{ch.id}: pullback matrix not unimodular")
            for n, j in ch.slots:
                d = cert.divisor(n)
                if d.kind == "exceptional":
                    k = sum(ch.rows[j]) - 1
                    if k != cert.k_rel.coeff(n):
                        problems.append(
                            f"{ch.id}: recomputed K coefficient {k} for {n}"
                            f" != stored {cert.k_rel.coeff(n)}")
        for d in cert.registry:
            for i in range(cert.dim):
                vals = {ch.rows[ch.slot_of(d.name)][i]
                        for ch in cert.charts if ch.slot_of(d.name) is not None}
                if len(vals) > 1:
                    problems.append(f"inconsistent ord of z{i+1} along {d.name}: {vals}")
    if problems:
        raise VerificationError("; ".join(problems))


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    out = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        out += (-1) ** j * m[0][j] * _det(minor)
    return out


# --- pulled-back weight data ---------------------------------------------

def pullback_potential(cert: ResolutionCertificate, chart: Chart,
                       potential: Potential) -> Potential:
    """Potential in chart coordinates (principal part only: each atom must
    be principal after pullback, which holds once the chart resolves it)."""
    weights = [Fraction(0)] * chart.dim
    for atom in potential.atoms:
        if atom.is_named:
            vec = chart.named_orders(atom.section)
            if all(v == 0 for v in vec) and atom.coeff != 0:
                raise ResolveFurtherError(
                    f"section {atom.section!r} has no pullback data in chart {chart.id}")
            for j in range(chart.dim):
                weights[j] += atom.coeff * vec[j]
        else:
            pulled = minimalize([tuple(chart.ord_of_exponent(j, g)
                                       for j in range(chart.dim))
                                 for g in atom.ideal.gens], chart.dim)
            if len(pulled.gens) != 1:
                raise ResolveFurtherError(
                    f"atom not principal in chart {chart.id}; resolve further")
            (gen,) = pulled.gens
            for j in range(chart.dim):
                weights[j] += atom.coeff * gen[j]
    from .scenes import potential_from_weights
    return potential_from_weights(weights, potential.offset)


@dataclass(frozen=True)
class ERSplit:
    E: object  # QDivisor
    R: object  # QDivisor


def e_r_decomposition(cert: ResolutionCertificate, scene: Scene) -> ERSplit:
    """Split the relative canonical divisor K = E + R with R maximal such
    that pulled phi_L - R + pulled psi stays quasi-psh: along each
    exceptional divisor r = min(k, floor(total Lelong number)), leaving a
    residual Lelong number in [0, 1) on the E part."""
    E = {}
    R = {}
    for name in cert.exceptional_names():
        chs = cert.charts_with(name)
        if not chs:
            raise ResolveFurtherError(f"exceptional {name} visible in no chart")
        ch = chs[0]
        j = ch.slot_of(name)
        ell = Fraction(0)
        for pot in (scene.phi_L, scene.psi):
            for atom in pot.atoms:
                ell += cert.atom_ord(atom, ch, j)
        k = cert.k_rel.coeff(name)
        if ell < 0:
            raise ResolveFurtherError(
                f"negative Lelong number {ell} along {name}; data not quasi-psh")
        r = min(k, Fraction(_floor(ell)))
        if r < 0:
            r = Fraction(0)
        e = k - r
        if e > 0 and not ell - r < 1:
            raise VerificationError(
                f"residual Lelong number {ell - r} >= 1 along {name}")
        assert ell - r >= 0
        if e:
            E[name] = e
        if r:
            R[name] = r
    return ERSplit(QDivisor(E), QDivisor(R))


def chart_snc_data(cert: ResolutionCertificate, chart: Chart, scene: Scene,
                   er: ERSplit) -> SncData:
    """Weight data of (pulled phi_L - R, pulled psi) in one chart."""
    b = [Fraction(0)] * chart.dim
    nu = [Fraction(0)] * chart.dim
    for j in range(chart.dim):
        for atom in scene.phi_L.atoms:
            b[j] += cert.atom_ord(atom, chart, j)
        for atom in scene.psi.atoms:
            nu[j] += cert.atom_ord(atom, chart, j)
        dname = chart.divisor_at(j)
        if dname is not None:
            b[j] -= er.R.coeff(dname)
    return SncData(tuple(b), tuple(nu), scene.psi.offset, scene.phi_L.offset)


def e_chart_exponents(cert, chart, er: ERSplit):
    out = [0] * chart.dim
    for j in range(chart.dim):
        dname = chart.divisor_at(j)
        if dname is not None and er.E.coeff(dname):
            c = er.E.coeff(dname)
            if c.denominator != 1:
                raise VerificationError("E part must be integral")
            out[j] = int(c)
    return tuple(out)


# --- twisted ideal machinery ----------------------------------------------

def _expansion_monomials(cert, name, power, dim):
    """Monomials appearing in the power of a named section (coefficients
    ignored; membership tests in monomial ideals only need the supports)."""
    base = cert.named_expansion(name)
    if power == 0:
        return [(0,) * dim]
    out = set()
    for picks in combinations_with_replacement(base, power):
        total = (0,) * dim
        for p in picks:
            total = exp_add(total, p)
        out.add(total)
    return sorted(out)


def _twist_expansions(cert, powers, dim):
    mons = [(0,) * dim]
    for name, k in powers.items():
        mons = [exp_add(a, b) for a in mons
                for b in _expansion_monomials(cert, name, k, dim)]
    return mons


def twisted_contains(cert, big: TwistedIdeal, small: TwistedIdeal) -> bool:
    """Does `big` contain `small`?  Sections are expanded into their base
    monomials where needed; valid for the torus-invariant sections used
    here."""
    if small.monomial.is_zero:
        return True
    bp, sp = big.powers(), small.powers()
    for name, k in bp.items():
        if sp.get(name, 0) < k:
            # monomials are never divisible by a named section
            return False
    extra = {name: k - bp.get(name, 0) for name, k in sp.items()
             if k - bp.get(name, 0) > 0}
    dim = big.monomial.dim
    for em in _twist_expansions(cert, extra, dim):
        for g in small.monomial.gens:
            if not big.monomial.contains_exponent(exp_add(em, g)):
                return False
    return True


def twisted_union(cert, parts) -> TwistedIdeal:
    """Sum of twisted ideals, collapsed to a single representative.

    Plain monomial parts add up; a twisted part is kept only when not
    absorbed by the rest.  The supported inputs always collapse (checked),
    since every fixture's alternatives are dominated either by a plain
    monomial sum or by a single twisted part.
    """
    parts = [p for p in parts if not p.monomial.is_zero]
    if not parts:
        return TwistedIdeal.of(zero_ideal(cert.dim))
    plain = [p.monomial for p in parts if p.is_plain]
    twisted = [p for p in parts if not p.is_plain]
    if plain:
        total = plain[0]
        for m in plain[1:]:
            total = combine(total, m, "sum")
        plain_part = TwistedIdeal.of(total)
        remaining = [t for t in twisted if not twisted_contains(cert, plain_part, t)]
        if not remaining:
            return plain_part
        twisted = remaining
    else:
        plain_part = None
    keep = []
    for t in twisted:
        if not any(twisted_contains(cert, u, t) for u in twisted if u != t):
            keep.append(t)
    if plain_part is None and len(keep) == 1:
        return keep[0]
    if plain_part is not None and not keep:
        return plain_part
    raise VerificationError(
        "sum of twisted ideals does not collapse to a single twist; "
        "unsupported section configuration")


def twisted_intersection(cert, A: TwistedIdeal, B: TwistedIdeal) -> TwistedIdeal:
    """Intersection of twisted ideals over the torus-invariant section model.

    Every element of either ideal carries at least the larger section power
    (monomials are not divisible by a named section), so the intersection is
    s^max * {m : s^(max - own power) * m lands in the monomial part}, the
    latter computed by expanding the residual section power.
    """
    ap, bp = A.powers(), B.powers()
    names = sorted(set(ap) | set(bp))
    top = {n: max(ap.get(n, 0), bp.get(n, 0)) for n in names}
    top = {n: k for n, k in top.items() if k}

    def reduce(part: TwistedIdeal) -> MonomialIdeal:
        residual = {n: k - part.powers().get(n, 0) for n, k in top.items()
                    if k - part.powers().get(n, 0) > 0}
        if not residual:
            return part.monomial
        out = unit_ideal(cert.dim)
        for em in _twist_expansions(cert, residual, cert.dim):
            out = combine(out, combine(part.monomial, principal_ideal(em),
                                       "colon"), "intersection")
        return out

    mono = combine(reduce(A), reduce(B), "intersection")
    return TwistedIdeal.of(mono, top)


# --- pushforward -----------------------------------------------------------

def _chart_alternative(cert, chart: Chart, req) -> TwistedIdeal:
    """Base sections whose pullback meets one requirement vector in a chart.

    Requirements on named-divisor coordinates are discharged by factoring
    the named section (monomials cannot vanish there); the rest reduce to
    staircase constraints on the exponent.
    """
    req = list(req)
    powers = {}
    for n, j in chart.slots:
        d = cert.divisor(n)
        if d.kind == "named-principal" and req[j] > 0:
            own = chart.named_orders(n)[j]
            if own <= 0:
                raise ResolveFurtherError(
                    f"no section data for {n} in chart {chart.id}")
            k = -(-req[j] // own)  # ceil
            powers[n] = powers.get(n, 0) + k
            vec = chart.named_orders(n)
            for jj in range(chart.dim):
                req[jj] -= k * vec[jj]
    constraints = []
    for j in range(chart.dim):
        if req[j] <= 0:
            continue
        if all(r == 0 for r in chart.rows[j]):
            raise ResolveFurtherError(
                f"chart {chart.id}: requirement {req[j]} along coordinate {j} "
                "cannot be met by monomials")
        constraints.append((chart.rows[j], req[j]))
    return TwistedIdeal.of(staircase_minimal_points(constraints, cert.dim), powers)


def pushforward_sheaf(cert: ResolutionCertificate, requirements) -> TwistedIdeal:
    """Sections of the base whose pullback satisfies per-chart requirements.

    `requirements` maps chart id -> list of alternative requirement vectors
    (one per generator of the chart ideal); a section qualifies in a chart
    if its pullback order vector dominates some alternative.  The result is
    the intersection over charts of the per-chart unions.
    """
    result = TwistedIdeal.of(unit_ideal(cert.dim))
    for ch in cert.charts:
        alts = requirements.get(ch.id)
        if not alts:
            continue
        parts = [_chart_alternative(cert, ch, r) for r in alts]
        chart_ideal = twisted_union(cert, parts)
        result = twisted_intersection(cert, result, chart_ideal)
    return result


def divisor_requirement(cert, chart: Chart, qdiv) -> list:
    """Requirement vector of an integral divisor in a chart (by slots)."""
    req = [0] * chart.dim
    for name, coeff in qdiv.items():
        if Fraction(coeff).denominator != 1:
            raise PreconditionError(f"non-integral requirement {coeff} on {name}")
        j = chart.slot_of(name)
        if j is not None:
            req[j] += int(coeff)
    return req


def pushforward_divisor(cert, qdiv) -> TwistedIdeal:
    """Sections with pullback order >= the given integral divisor."""
    for name in qdiv:
        cert.divisor(name)
    if any(Fraction(c) > 0 and not cert.charts_with(n) for n, c in qdiv.items()):
        raise ResolveFurtherError("requirement on a divisor absent from all charts")
    reqs = {ch.id: [tuple(divisor_requirement(cert, ch, qdiv))] for ch in cert.charts}
    return pushforward_sheaf(cert, reqs)


# --- global adjoint ideals --------------------------------------------------

def scene_chart_data(cert, scene):
    """E/R split plus per-chart weight data for a resolved scene."""
    er = e_r_decomposition(cert, scene)
    data = {ch.id: chart_snc_data(cert, ch, scene, er) for ch in cert.charts}
    return er, data


def adjoint_ideal_global(scene: Scene, cert: ResolutionCertificate,
                         sigma: int) -> TwistedIdeal:
    """Index-sigma adjoint ideal of the scene, computed chart by chart
    upstairs, twisted by the E part and pushed forward."""
    er, data = scene_chart_data(cert, scene)
    reqs = {}
    for ch in cert.charts:
        d = data[ch.id]
        upstairs = _snc.adjoint_ideal_snc(d, sigma, check=False) if d.S else \
            principal_ideal(_snc._floor_exponents(d))
        e_exp = e_chart_exponents(cert, ch, er)
        reqs[ch.id] = [tuple(g[j] - e_exp[j] for j in range(ch.dim))
                       for g in upstairs.sorted_gens()]
    return pushforward_sheaf(cert, reqs)


def multiplier_ideal_global(scene, cert, m) -> TwistedIdeal:
    """Pushforward of the E-twisted multiplier ideal of phi_L + m psi."""
    er, data = scene_chart_data(cert, scene)
    reqs = {}
    for ch in cert.charts:
        d = data[ch.id]
        ideal = _snc.multiplier_ideal_snc([d.b[i] + Fraction(m) * d.nu[i]
                                           for i in range(d.dim)])
        e_exp = e_chart_exponents(cert, ch, er)
        reqs[ch.id] = [tuple(g[j] - e_exp[j] for j in range(ch.dim))
                       for g in ideal.sorted_gens()]
    return pushforward_sheaf(cert, reqs)


def global_spectrum(scene, cert):
    """Union of the per-chart jumping spectra, with the global m0."""
    _, data = scene_chart_data(cert, scene)
    jumps = set()
    for d in data.values():
        jumps.update(_snc.jumping_spectrum(d).jumps)
    jumps = tuple(sorted(jumps))
    below = [m for m in jumps if m < 1]
    m0 = max(below) if below else Fraction(0)
    return jumps, m0


def global_sigma_mlc(scene, cert) -> int:
    _, data = scene_chart_data(cert, scene)
    return max((len(d.S) for d in data.values()), default=0)


# --- algebraic adjoint ideals ------------------------------------------------

def _pulled_ideal_ord(cert, ideal: MonomialIdeal, divisor_name) -> int:
    for ch in cert.charts:
        j = ch.slot_of(divisor_name)
        if j is not None:
            return ch.ord_of_ideal(j, ideal)
    raise InputError(f"divisor {divisor_name!r} slotted in no chart")


def _component_ord(cert, comp, divisor_name):
    """Order of the pullback of one boundary component along a divisor."""
    kind, ref = comp
    if kind == "coordinate":
        return cert.coordinate_ord(ref, divisor_name)
    return cert.section_ord(ref, divisor_name)


def strict_transforms_disjoint(cert, components) -> bool:
    """No chart carries two of the components' strict transforms."""
    names = [_strict_name(cert, comp) for comp in components]
    for ch in cert.charts:
        present = [n for n in names if ch.slot_of(n) is not None]
        if len(present) > 1:
            return False
    return True


def _strict_name(cert, comp):
    kind, ref = comp
    if kind == "coordinate":
        return f"z{ref + 1}"
    return ref


def el_hm_adjoint(cert: ResolutionCertificate, s_components, a_ideal, c):
    """Algebraic adjoint ideals of a reduced boundary with a weight ideal.

    `s_components` lists the boundary components as ("coordinate", index)
    or ("named", section name); `a_ideal` is a monomial ideal (unit for no
    twist) whose pullback must be principal in every chart; `c >= 0`.

    Per exceptional divisor D with canonical multiplicity k_D and boundary
    multiplicity s_D, the discrepancy is a_D = k_D - s_D.  The reduced sum
    of the a_D = -1 divisors and the corrected exceptional divisor (with
    coefficients a_D + [a_D = -1], possibly negative off the lc case) give
    the two pushforward formulas; the variant keeping the reduced part
    gives the smaller ideal.
    """
    c = Fraction(c)
    if c < 0:
        raise PreconditionError("c must be >= 0")
    # F: orders of the pulled weight ideal (must be exceptional-supported)
    f_ord = {}
    for ch in cert.charts:
        pulled = minimalize([tuple(ch.ord_of_exponent(j, g) for j in range(ch.dim))
                             for g in a_ideal.gens], ch.dim)
        if len(pulled.gens) != 1:
            raise ResolveFurtherError(
                f"weight ideal not principal in chart {ch.id}; resolve further")
        (gen,) = pulled.gens
        for j in range(ch.dim):
            name = ch.divisor_at(j)
            if gen[j] and (name is None or cert.divisor(name).kind != "exceptional"):
                raise ResolveFurtherError(
                    "weight ideal has a non-exceptional zero locus upstairs")
            if name is not None:
                f_ord[name] = gen[j]
    gamma_exc = {}
    e0 = {}
    for name in cert.exceptional_names():
        k = cert.k_rel.coeff(name)
        s = sum(_component_ord(cert, comp, name) for comp in s_components)
        disc = k - s
        if disc.denominator != 1:
            raise VerificationError(f"non-integral discrepancy {disc} along {name}")
        disc = int(disc)
        if disc == -1:
            gamma_exc[name] = 1
            e0[name] = 0
        else:
            e0[name] = disc
    hm_req = QDivisor({n: _floor(c * f_ord.get(n, 0)) - e0[n]
                       for n in cert.exceptional_names()})
    el_req = hm_req.plus(QDivisor(gamma_exc))
    hm = pushforward_divisor(cert, QDivisor({n: v for n, v in hm_req.items() if v > 0}))
    if not strict_transforms_disjoint(cert, s_components):
        raise ResolveFurtherError(
            "intersecting strict transforms: this variant needs a finer certificate")
    el = pushforward_divisor(cert, QDivisor({n: v for n, v in el_req.items() if v > 0}))
    return el, hm


# --- sigma-lc centres on the base --------------------------------------------

@dataclass(frozen=True)
class BaseCentre:
    """Zero locus descriptor: coordinates and named sections that vanish."""
    coords: frozenset
    named: frozenset

    def canonical(self, cert):
        named = set()
        for s in self.named:
            expansion = cert.named_expansion(s)
            # drop the section when it already vanishes on the coordinate part
            if not all(any(g[i] > 0 for i in self.coords) for g in expansion):
                named.add(s)
        return BaseCentre(frozenset(self.coords), frozenset(named))

    def contains(self, other, cert):
        """Set containment other <= self of the zero loci (coordinate and
        declared-section cutters only)."""
        for i in self.coords:
            if i not in other.coords:
                return False
        for s in self.named:
            if s in other.named:
                continue
            expansion = cert.named_expansion(s)
            if not all(any(g[i] > 0 for i in other.coords) for g in expansion):
                return False
        return True

    def describe(self):
        parts = [f"z{i+1}=0" for i in sorted(self.coords)]
        parts += [f"{s}=0" for s in sorted(self.named)]
        return "{" + ", ".join(parts) + "}" if parts else "(whole space)"


def _image_of_centre(cert, chart: Chart, P) -> BaseCentre:
    coords = frozenset(i for i in range(cert.dim)
                       if any(chart.rows[j][i] > 0 for j in P))
    named = frozenset(n for n, _ in cert.named_sections
                      if any(chart.named_orders(n)[j] > 0 for j in P))
    return BaseCentre(coords, named).canonical(cert)


def _minimal_centres(cert, centres):
    keep = []
    for c in centres:
        if any(other != c and other.contains(c, cert) for other in centres):
            continue
        if c not in keep:
            keep.append(c)
    return keep


def upstairs_lc_centres(scene, cert, sigma):
    """sigma-fold strata of the upstairs lc locus, as divisor-name sets."""
    _, data = scene_chart_data(cert, scene)
    found = {}
    for ch in cert.charts:
        d = data[ch.id]
        for P in combinations(sorted(d.S), sigma):
            names = []
            for j in P:
                name = ch.divisor_at(j)
                if name is None:
                    raise VerificationError(
                        f"chart {ch.id}: lc coordinate {j} carries no divisor")
                names.append(name)
            found.setdefault(frozenset(names), []).append((ch.id, tuple(P)))
    return found


def sigma_lc_centres_global(scene, cert, sigma):
    """Base images of the sigma-fold lc strata, cross-checked against the
    annihilator of (index sigma)/(index sigma-1), which must be radical and
    cut out exactly the image set."""
    if sigma < 1:
        raise PreconditionError("sigma must be >= 1")
    strata = upstairs_lc_centres(scene, cert, sigma)
    images = []
    for names, locations in strata.items():
        ch_id, P = locations[0]
        images.append(_image_of_centre(cert, cert.chart(ch_id), P))
    components = _minimal_centres(cert, images)

    j_hi = adjoint_ideal_global(scene, cert, sigma)
    j_lo = adjoint_ideal_global(scene, cert, sigma - 1)
    ann = twisted_annihilator_quotient(cert, j_hi, j_lo)
    _check_annihilator_matches(cert, ann, components)
    return {"strata": {tuple(sorted(k)): v for k, v in strata.items()},
            "centres": components,
            "annihilator": ann}


def twisted_annihilator_quotient(cert, big: TwistedIdeal, small: TwistedIdeal):
    """Ann(big/small) over the torus-invariant section model."""
    bp, sp = big.powers(), small.powers()
    out_powers = {}
    residual = {}
    for name in set(bp) | set(sp):
        gap = sp.get(name, 0) - bp.get(name, 0)
        if gap > 0:
            out_powers[name] = gap
        elif gap < 0:
            residual[name] = -gap
    mono = unit_ideal(cert.dim)
    for em in _twist_expansions(cert, residual, cert.dim):
        for g in big.monomial.gens:
            mono = combine(mono, combine(small.monomial,
                                         principal_ideal(exp_add(em, g)), "colon"),
                           "intersection")
    return TwistedIdeal.of(mono, out_powers)


def _check_annihilator_matches(cert, ann: TwistedIdeal, components):
    if ann.monomial.is_zero or ann.monomial.is_unit and not ann.section_powers:
        if not components:
            return
        raise VerificationError("trivial annihilator but nonempty centre set")
    if any(p > 1 for _, p in ann.section_powers):
        raise VerificationError(f"annihilator {ann} is not radical (section power > 1)")
    if radical(ann.monomial) != ann.monomial:
        raise VerificationError(f"annihilator {ann} is not radical")
    pieces = [BaseCentre(frozenset(), frozenset({n})).canonical(cert)
              for n, _ in ann.section_powers]
    if not ann.monomial.is_unit:
        pieces += [BaseCentre(frozenset(P), frozenset())
                   for P in minimal_primes_squarefree(ann.monomial)]
    pieces = _minimal_centres(cert, pieces)
    if {(c.coords, c.named) for c in pieces} != \
            {(c.coords, c.named) for c in components}:
        raise VerificationError(
            f"annihilator zero locus {[c.describe() for c in pieces]} != "
            f"lc centre images {[c.describe() for c in components]}")


# --- comparison, classification, adjunction ----------------------------------

def compare_adjoints(scene, cert, c, a_ideal, s_components):
    """Compare the algebraic adjoint ideals against indices 1 and sigma_mlc.

    Reports containments (which always hold), equality or strictness, and
    whether the zero locus of the weight ideal meets an lc centre of the
    scene (the mechanism behind strictness).
    """
    el, hm = el_hm_adjoint(cert, s_components, a_ideal, c)
    j1 = adjoint_ideal_global(scene, cert, 1)
    smlc = global_sigma_mlc(scene, cert)
    jm = adjoint_ideal_global(scene, cert, smlc)
    report = {
        "sigma_mlc": smlc,
        "el_contained": twisted_contains(cert, j1, el),
        "hm_contained": twisted_contains(cert, jm, hm),
        "el_equal": twisted_contains(cert, j1, el) and twisted_contains(cert, el, j1),
        "hm_equal": twisted_contains(cert, jm, hm) and twisted_contains(cert, hm, jm),
        "el": el, "hm": hm, "j1": j1, "jmlc": jm,
    }
    if not (report["el_contained"] and report["hm_contained"]):
        raise VerificationError("algebraic adjoint ideal not contained in the "
                                "analytic one; hypothesis violated somewhere")
    # does the zero locus of the weight ideal meet an lc centre?
    meets = []
    if not a_ideal.is_unit:
        zero_primes = minimal_primes_squarefree(radical(a_ideal))
        for sigma in range(1, smlc + 1):
            info = sigma_lc_centres_global(scene, cert, sigma)
            for centre in info["centres"]:
                for prime in zero_primes:
                    if BaseCentre(frozenset(prime), frozenset()).contains(centre, cert):
                        meets.append((sigma, centre.describe()))
    report["zero_locus_meets_lc_centre"] = meets
    return report


def classify_pair(boundary, cert):
    """Verdict for a pair (polydisc, boundary) from triviality of the
    index-sigma ideals: klt at index 0, plt at index 1, lc when some index
    up to the dimension is trivial.  Returns the verdict with a witness
    (the least trivial index, or an obstructing generator)."""
    scene = boundary_scene(boundary, cert.dim)
    idls = {}
    verdict = "not-lc"
    witness = None
    for sigma in range(0, cert.dim + 1):
        idls[sigma] = adjoint_ideal_global(scene, cert, sigma)
        if idls[sigma].is_unit and witness is None:
            witness = sigma
    if witness == 0:
        verdict = "klt"
    elif witness == 1:
        verdict = "plt"
    elif witness is not None:
        verdict = "lc"
    obstruction = None
    if witness is None:
        top = idls[cert.dim]
        obstruction = (dict(top.section_powers), top.monomial.sorted_gens())
    return {"verdict": verdict, "witness_sigma": witness,
            "obstruction": obstruction, "ideals": idls}


def boundary_scene(boundary, dim) -> Scene:
    """Scene for a boundary divisor: zero ambient weight and one log atom
    per component, offset -1."""
    atoms = []
    for comp, coeff in boundary:
        kind, ref = comp
        coeff = Fraction(coeff)
        if coeff == 0:
            continue
        if coeff < 0:
            raise PreconditionError("boundary coefficients must be >= 0")
        if kind == "coordinate":
            gen = tuple(1 if i == ref else 0 for i in range(dim))
            atoms.append(PotentialAtom(coeff, minimalize([gen], dim)))
        else:
            atoms.append(PotentialAtom(coeff, section=ref))
    return Scene(dim, Potential.zero(), Potential(tuple(atoms), Fraction(-1)))


def discrepancy_classify(boundary, cert):
    """Direct discrepancy verdict over the certificate's divisors: klt iff
    every total discrepancy is > -1 (boundary components included), lc iff
    >= -1, plt iff exceptional discrepancies are > -1 with boundary
    coefficients <= 1."""
    coeffs = {}
    for comp, coeff in boundary:
        kind, ref = comp
        name = f"z{ref+1}" if kind == "coordinate" else ref
        coeffs[name] = coeffs.get(name, Fraction(0)) + Fraction(coeff)
    disc = {}
    for d in cert.registry:
        if d.kind == "exceptional":
            total = Fraction(0)
            for comp, coeff in boundary:
                total += Fraction(coeff) * _component_ord(cert, comp, d.name)
            disc[d.name] = cert.k_rel.coeff(d.name) - total
        else:
            disc[d.name] = -coeffs.get(d.name, Fraction(0))
    exc = [v for n, v in disc.items() if cert.divisor(n).kind == "exceptional"]
    comp_coeffs = list(coeffs.values())
    if all(v > -1 for v in disc.values()):
        verdict = "klt"
    elif all(v > -1 for v in exc) and all(c <= 1 for c in comp_coeffs):
        verdict = "plt"
    elif all(v >= -1 for v in disc.values()):
        verdict = "lc"
    else:
        verdict = "not-lc"
    return verdict, disc


def inversion_check(boundary, cert):
    """Adjunction both ways for a boundary with reduced integral part.

    Restricts the remaining boundary to each integral component (which must
    be a coordinate hyperplane), classifies the restricted pair by its
    coefficients, and checks the biconditional against the index-1 verdict
    of the ambient pair."""
    floor_comps = []
    rest = []
    for comp, coeff in boundary:
        coeff = Fraction(coeff)
        if coeff >= 1:
            if coeff != 1:
                raise PreconditionError("integral part must be reduced")
            if comp[0] != "coordinate":
                raise PreconditionError(
                    "only coordinate components carry normalization data here")
            floor_comps.append(comp)
        else:
            rest.append((comp, coeff))
    if not floor_comps:
        raise PreconditionError("no integral part; adjunction needs one")
    diffs = {}
    all_klt = True
    for comp in floor_comps:
        _, index = comp
        diff = []
        for other, coeff in boundary:
            if other == comp:
                continue
            if other[0] != "coordinate":
                raise PreconditionError("unsupported singular component in Diff")
            diff.append((f"z{other[1]+1}|restricted", coeff))
            if coeff >= 1:
                all_klt = False
        diffs[f"z{index+1}"] = diff
    pair = classify_pair(boundary, cert)
    plt_side = pair["verdict"] in ("klt", "plt")
    if plt_side != all_klt:
        raise VerificationError(
            f"adjunction biconditional fails: ambient {pair['verdict']} vs "
            f"restricted klt={all_klt}")
    return {"diff": diffs, "restricted_klt": all_klt,
            "ambient_plt": plt_side, "consistent": True}


def connectedness_check(scene, cert):
    """The components of the upstairs lc locus lying over each base 1-lc
    centre must form a connected subgraph of the incidence graph (divisors
    adjacent when some chart carries both)."""
    _, data = scene_chart_data(cert, scene)
    divisors = set()
    for ch in cert.charts:
        d = data[ch.id]
        for j in d.S:
            name = ch.divisor_at(j)
            if name is not None:
                divisors.add(name)
    edges = {n: set() for n in divisors}
    for ch in cert.charts:
        d = data[ch.id]
        present = [ch.divisor_at(j) for j in d.S if ch.divisor_at(j) is not None]
        for a in present:
            for b in present:
                if a != b:
                    edges[a].add(b)
    images = {}
    for name in divisors:
        for ch in cert.charts:
            j = ch.slot_of(name)
            if j is not None and d_has_lc(data[ch.id], j):
                images[name] = _image_of_centre(cert, ch, (j,))
                break
    report = {}
    for centre_name, centre in images.items():
        inside = [n for n, img in images.items() if centre.contains(img, cert)]
        report[centre.describe()] = _connected(inside, edges)
    return report


def d_has_lc(d, j):
    return j in d.S


def _connected(nodes, edges):
    if not nodes:
        return True
    seen = {nodes[0]}
    frontier = [nodes[0]]
    while frontier:
        current = frontier.pop()
        for n in edges.get(current, ()):
            if n in nodes and n not in seen:
                seen.add(n)
                frontier.append(n)
    return len(seen) == len(nodes)


# --- residue isometry ---------------------------------------------------------

def residue_isometry_check(scene, cert, f, sigma):
    """Residue norms downstairs versus upstairs.

    The scene must already be normal-crossing, so the downstairs norm is the
    closed form; the upstairs norm sums the per-chart closed forms of the
    pulled-back section twisted by the E part (the chart polydiscs partition
    the preimage up to measure zero).  Equality is exact."""
    b, ob = snc_weights(scene.phi_L, scene.dim)
    nu, on = snc_weights(scene.psi, scene.dim)
    down = SncData(b, nu, on, ob)
    below = _snc.residue_norm_closed_form(down, f, sigma, scene.polyradius)
    er, data = scene_chart_data(cert, scene)
    total = ExactValue.zero()
    infinite = False
    for ch in cert.charts:
        d = data[ch.id]
        e_exp = e_chart_exponents(cert, ch, er)
        pulled = tuple(ch.ord_of_exponent(j, f) + e_exp[j] for j in range(ch.dim))
        if not d.S:
            continue
        if not _snc.membership(d, pulled, sigma):
            infinite = True
            continue
        piece = _snc.residue_norm_closed_form(d, pulled, sigma, scene.polyradius)
        if is_infinite(piece):
            infinite = True
            continue
        total = total + piece
    up = INFINITE if infinite else total
    equal = (is_infinite(below) and is_infinite(up)) or \
        (not is_infinite(below) and not is_infinite(up) and below == up)
    return {"downstairs": below, "upstairs": up, "equal": equal}

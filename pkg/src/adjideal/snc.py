"""Chart-level computations when all potentials are normal-crossing.

The data is a pair of weight vectors on a polydisc: phi = sum b_i log|z_i|^2
+ offset_phi and psi = sum nu_i log|z_i|^2 + offset_psi with nu_i >= 0 and
offset_psi <= -1.  The lc locus S is the set of coordinates where nu_i > 0
and b_i + nu_i is a positive integer.

For a monomial z^a, put t_i = (b_i + nu_i) - a_i.  Convergence of

    |z^a|^2 e^{-phi-psi} / (|psi|^sigma log^{1+eps}(e|psi|))

over the polydisc holds for every eps > 0 iff t_i <= 1 for all i, t_i < 1
whenever nu_i = 0, and #{i : nu_i > 0, t_i = 1} <= sigma.  Everything in
this module (ideals of index sigma, residues, closed-form norms, the local
extension construction) is driven by that criterion; the numeric module
re-checks it by quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as cartesian

from .errors import HypothesisError, PreconditionError, ConstructionError
from .exactvals import INFINITE, ExactTerm, ExactValue, is_infinite
from .monomial import (MonomialIdeal, combine, annihilator_quotient, minimalize,
                       principal_ideal, squarefree_from_support, unit_ideal)
from .scenes import QDivisor


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


@dataclass(frozen=True)
class SncData:
    b: tuple            # phi weights, Fractions
    nu: tuple           # psi weights, Fractions >= 0
    offset_psi: Fraction = Fraction(-1)
    offset_phi: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))
        object.__setattr__(self, "nu", tuple(Fraction(x) for x in self.nu))
        object.__setattr__(self, "offset_psi", Fraction(self.offset_psi))
        object.__setattr__(self, "offset_phi", Fraction(self.offset_phi))
        if len(self.b) != len(self.nu):
            raise PreconditionError("b and nu must have the same length")
        if any(x < 0 for x in self.nu):
            raise PreconditionError("psi weights must be non-negative")
        if self.offset_psi > -1:
            raise PreconditionError("psi offset must be <= -1")

    @property
    def dim(self):
        return len(self.b)

    @property
    def S(self):
        """Coordinates of the lc locus."""
        return frozenset(i for i in range(self.dim)
                         if self.nu[i] > 0 and (self.b[i] + self.nu[i]).denominator == 1
                         and self.b[i] + self.nu[i] >= 1)

    def lam(self, i):
        """Lelong number of phi+psi along {z_i = 0} (integer lambda_i on S)."""
        return self.b[i] + self.nu[i]


@dataclass(frozen=True)
class JumpingSpectrum:
    jumps: tuple                      # sorted Fractions in (0, 1]
    ideal_at: tuple                   # ((m_lower, ideal), ...) per interval
    m0: Fraction                      # largest jump < 1, else 0

    @property
    def has_unit_jump(self):
        return Fraction(1) in self.jumps


def multiplier_ideal_snc(weights) -> MonomialIdeal:
    """Multiplier ideal of sum c_i log|z_i|^2: principal with exponents
    max(0, floor(c_i)) (the least a_i with a_i - c_i > -1)."""
    return principal_ideal(tuple(max(0, _floor(Fraction(c))) for c in weights))


def jumping_spectrum(d: SncData) -> JumpingSpectrum:
    """Jumps of m -> multiplier ideal of b + m*nu on (0, 1].

    Candidates are the m where some b_i + m nu_i crosses an integer; a
    candidate is kept only if the ideal actually changes there (crossings
    absorbed by max(0, .) are not jumps).
    """
    candidates = set()
    for i in range(d.dim):
        if d.nu[i] == 0:
            continue
        # b_i + m nu_i = k for integers k with 0 < m <= 1
        m_at_1 = d.b[i] + d.nu[i]
        for k in range(_floor(d.b[i]) + 1, _floor(m_at_1) + 1):
            m = (Fraction(k) - d.b[i]) / d.nu[i]
            if 0 < m <= 1:
                candidates.add(m)
    jumps = []
    pieces = []
    prev = Fraction(0)
    prev_ideal = multiplier_ideal_snc([d.b[i] + prev * d.nu[i] for i in range(d.dim)])
    pieces.append((prev, prev_ideal))
    for m in sorted(candidates):
        ideal = multiplier_ideal_snc([d.b[i] + m * d.nu[i] for i in range(d.dim)])
        if ideal != prev_ideal:
            jumps.append(m)
            pieces.append((m, ideal))
            prev_ideal = ideal
    below_one = [m for m in jumps if m < 1]
    m0 = max(below_one) if below_one else Fraction(0)
    return JumpingSpectrum(tuple(jumps), tuple(pieces), m0)


def require_unit_jump(d: SncData):
    spec = jumping_spectrum(d)
    if not spec.has_unit_jump:
        raise HypothesisError("m=1 is not a jumping number for this data")
    return spec


def lc_locus(d: SncData) -> frozenset:
    """S as a set of coordinate indices, cross-checked against the
    annihilator of (ideal at m0) / (ideal at 1)."""
    S = d.S
    if not S:
        raise HypothesisError("empty lc locus: m=1 is not a jumping number")
    spec = require_unit_jump(d)
    I_m0 = multiplier_ideal_snc([d.b[i] + spec.m0 * d.nu[i] for i in range(d.dim)])
    I_1 = multiplier_ideal_snc([d.lam(i) for i in range(d.dim)])
    ann = annihilator_quotient(I_m0, I_1)
    expected = principal_ideal(squarefree_from_support(d.dim, S))
    if ann != expected:
        raise HypothesisError(
            f"annihilator {ann} does not cut out the expected locus {sorted(S)}")
    from .monomial import radical
    assert radical(ann) == ann, "lc locus annihilator must be radical"
    return S


def mu_vector(d: SncData) -> tuple:
    """mu_i = lambda_i - 1 on S, else 0 (multiplicities of the divisor S_0)."""
    S = d.S
    return tuple(int(d.lam(i)) - 1 if i in S else 0 for i in range(d.dim))


def siu_decompose(d: SncData):
    """Split phi+psi into a residual potential plus S_0 + S.

    Returns (residual weights, residual offset, S0, S) with S0, S as
    QDivisors over coordinate divisor names 'z1', ...  On S-coordinates
    lambda_i = mu_i + 1 with mu_i a non-negative integer; off S the
    residual weight is b_k + nu_k and must be >= 0, otherwise the data
    needs another exceptional/residual split upstream.
    """
    S = d.S
    if not S:
        raise HypothesisError("empty lc locus; nothing to decompose")
    mu = mu_vector(d)
    res_weights = []
    for i in range(d.dim):
        if i in S:
            res_weights.append(Fraction(0))
        else:
            w = d.lam(i)
            if w < 0:
                raise PreconditionError(
                    f"residual weight {w} < 0 at coordinate {i}; not quasi-psh")
            res_weights.append(w)
    res_offset = d.offset_phi + d.offset_psi
    S0 = QDivisor({f"z{i+1}": mu[i] for i in range(d.dim) if mu[i] > 0})
    S_div = QDivisor({f"z{i+1}": 1 for i in S})
    # exact identity: residual + S0 + S = phi_L + psi, weights and offsets
    for i in range(d.dim):
        assert res_weights[i] + Fraction(mu[i]) + (1 if i in S else 0) == d.lam(i)
    return tuple(res_weights), res_offset, S0, S_div


def residual_weights(d: SncData) -> tuple:
    """Weights of the residual potential (0 on S, lambda off S)."""
    S = d.S
    return tuple(Fraction(0) if i in S else d.lam(i) for i in range(d.dim))


def membership(d: SncData, f, sigma: int) -> bool:
    """Does z^f satisfy the convergence criterion at index sigma?"""
    if sigma < 0:
        return False
    equalities = 0
    for i in range(d.dim):
        t = d.lam(i) - f[i]
        if t > 1:
            return False
        if t == 1:
            if d.nu[i] == 0:
                return False
            equalities += 1
    return equalities <= sigma


# spec name
membership_J = membership


def _floor_exponents(d: SncData):
    """Exponent vector of the ideal at any m in [m0, 1): mu_i on S and the
    m=1 multiplier exponent elsewhere (constant across that interval)."""
    S = d.S
    out = []
    for i in range(d.dim):
        if i in S:
            out.append(int(d.lam(i)) - 1)
        else:
            out.append(max(0, _floor(d.lam(i))))
    return tuple(out)


def lcc_ideal(d: SncData, codim: int) -> MonomialIdeal:
    """Defining ideal of the union of codimension-`codim` strata of S:
    generated by squarefree products of |S| - codim + 1 S-coordinates."""
    S = sorted(d.S)
    if codim > len(S):
        return unit_ideal(d.dim)
    keep = len(S) - codim + 1
    gens = [squarefree_from_support(d.dim, c) for c in combinations(S, keep)]
    return minimalize(gens, d.dim)


def adjoint_ideal_snc(d: SncData, sigma: int, check: bool = True) -> MonomialIdeal:
    """Ideal of index sigma: (ideal at m0) * (ideal of codim sigma+1 strata).

    With check=True the result is asserted equal to the set of monomials
    passing the convergence criterion on a generating grid; the two routes
    are independent enough to catch transcription slips.
    """
    if not d.S:
        raise HypothesisError("empty lc locus: adjoint ideals need a jump at m=1")
    base = principal_ideal(_floor_exponents(d))
    ideal = combine(base, lcc_ideal(d, sigma + 1), "product")
    if check:
        bounds = [e + 1 for e in _floor_exponents(d)]
        grid = cartesian(*[range(bd + 1) for bd in bounds])
        passing = [a for a in grid if membership(d, a, sigma)]
        scanned = minimalize(passing, d.dim) if passing else unit_ideal(d.dim).__class__(d.dim, frozenset())
        assert scanned == ideal, (
            f"criterion scan {scanned} != closed form {ideal} at sigma={sigma}")
    return ideal


def lc_centres(d: SncData, sigma: int) -> list:
    """All sigma-element subsets of S (each is a coordinate stratum)."""
    if not d.S:
        raise HypothesisError("empty lc locus")
    return [frozenset(P) for P in combinations(sorted(d.S), sigma)]


def sigma_mlc(d: SncData) -> int:
    """Codimension of the minimal stratum: |S| in a single chart."""
    if not d.S:
        raise HypothesisError("empty lc locus")
    return len(d.S)


def sigma_f(d: SncData, f):
    """Minimal sigma whose criterion accepts z^f, or None if none does."""
    if not d.S:
        raise HypothesisError("empty lc locus")
    for sigma in range(0, len(d.S) + 1):
        if membership(d, f, sigma):
            return sigma
    return None


@dataclass(frozen=True)
class ResidueDatum:
    centre: tuple               # sorted S-coordinate indices, |centre| = sigma
    germ: tuple | None          # exponent on complementary coordinates, None if 0
    lelong_product: Fraction
    norm_contribution: object   # ExactValue


def residue_restrict(d: SncData, f, sigma: int, polyradius=Fraction(1)) -> list:
    """Restrict z^f to all codimension-sigma strata of S.

    For a stratum P the germ is nonzero iff f_i = mu_i exactly on P and
    f_j >= mu_j + 1 off P inside S; then it is z^(f - mu - 1_{S \\ P})
    viewed on the complementary coordinates.  All germs vanish iff f
    already satisfies the criterion at sigma - 1.
    """
    if sigma < 1:
        raise PreconditionError("residues are defined for sigma >= 1")
    if not membership(d, f, sigma):
        raise PreconditionError(f"monomial {f} fails the criterion at sigma={sigma}")
    mu = mu_vector(d)
    S = d.S
    out = []
    for P in lc_centres(d, sigma):
        nonzero = all(f[i] == mu[i] for i in P) and \
            all(f[j] >= mu[j] + 1 for j in S - P)
        if nonzero:
            germ = tuple(0 if i in P else f[i] - mu[i] - (1 if i in S else 0)
                         for i in range(d.dim))
        else:
            germ = None
        nu_prod = Fraction(1)
        for i in P:
            nu_prod *= d.nu[i]
        out.append(ResidueDatum(tuple(sorted(P)), germ, nu_prod,
                                _centre_norm(d, P, germ, sigma, nu_prod, polyradius)))
    return out


def _radial_integral(k: int, c: Fraction, rho: Fraction):
    """integral over |w| < rho of |w|^(2k) e^{-c log|w|^2} dV
    = pi rho^(2(k-c+1)) / (k-c+1), finite iff k - c + 1 > 0."""
    denom = Fraction(k) - c + 1
    if denom <= 0:
        return INFINITE
    return ExactValue.of(Fraction(1, 1) / denom, pi_pow=1, rho=rho,
                         rho_exp=2 * denom)


def _centre_norm(d: SncData, P, germ, sigma, nu_prod, rho):
    """pi^sigma/((sigma-1)! nu_P) * int_{stratum} |germ|^2 e^{-residual}."""
    if germ is None:
        return ExactValue.zero()
    res_w = residual_weights(d)
    total = ExactValue.of(Fraction(1), e_exp=-(d.offset_phi + d.offset_psi))
    for j in range(d.dim):
        if j in P:
            continue
        piece = _radial_integral(germ[j], res_w[j], Fraction(rho))
        if is_infinite(piece):
            return INFINITE
        total = total * piece
    fact = 1
    for k in range(1, sigma):
        fact *= k
    coeff = ExactTerm(Fraction(1, fact) / nu_prod, pi_pow=sigma)
    return total * coeff


def residue_norm_closed_form(d: SncData, f, sigma: int, polyradius=Fraction(1)):
    """Exact value of the index-sigma residue norm of z^f, or INFINITE."""
    if sigma < 1:
        raise PreconditionError("residue norms are defined for sigma >= 1")
    if not membership(d, f, sigma):
        return INFINITE
    total = ExactValue.zero()
    for datum in residue_restrict(d, f, sigma, polyradius):
        if is_infinite(datum.norm_contribution):
            return INFINITE
        total = total + datum.norm_contribution
    return total


@dataclass(frozen=True)
class ExtensionResult:
    monomials: tuple            # exponents of the constructed section
    bound_constant: int         # count of strata with nonzero data
    bound: object               # bound_constant * residue norm (ExactValue)


def extension_from_residues(d: SncData, data, sigma: int,
                            polyradius=Fraction(1)) -> ExtensionResult:
    """Build a section with prescribed stratum germs.

    `data` is a list of (P, germ exponent) with P a sigma-subset of S and
    the germ supported on the complementary coordinates.  The section is
    the sum over strata of germ * z^mu * prod_{j in S-P} z_j; restriction
    reproduces the data exactly (no cross-talk between strata).
    """
    if sigma < 1:
        raise PreconditionError("extension is defined for sigma >= 1")
    S = d.S
    mu = mu_vector(d)
    res_w = residual_weights(d)
    seen = set()
    monomials = []
    norm = ExactValue.zero()
    count = 0
    for P, germ in data:
        P = frozenset(P)
        if not P <= S or len(P) != sigma:
            raise ConstructionError(f"{sorted(P)} is not a sigma-subset of S")
        if P in seen:
            raise ConstructionError(f"duplicate stratum {sorted(P)} in data")
        seen.add(P)
        if germ is None:
            continue
        germ = tuple(int(x) for x in germ)
        if any(germ[i] != 0 for i in P):
            raise ConstructionError("germ must be supported off its stratum")
        for j in range(d.dim):
            if j in P:
                continue
            if is_infinite(_radial_integral(germ[j], res_w[j], Fraction(polyradius))):
                raise ConstructionError(
                    f"germ {germ} has infinite stratum integral at coordinate {j}")
        term = tuple(germ[i] + mu[i] + (1 if (i in S and i not in P) else 0)
                     for i in range(d.dim))
        monomials.append(term)
        count += 1
        nu_prod = Fraction(1)
        for i in P:
            nu_prod *= d.nu[i]
        norm = norm + _centre_norm(d, P, germ, sigma, nu_prod, Fraction(polyradius))
    return ExtensionResult(tuple(monomials), count, norm * Fraction(count))


def residues_of_sum(d: SncData, monomials, sigma: int):
    """Germ per stratum of a formal sum of monomials (coefficients 1).

    Returns {P: {germ_exponent: multiplicity}}; used to check that
    restriction after extension reproduces the prescribed data.
    """
    out = {tuple(sorted(P)): {} for P in lc_centres(d, sigma)}
    for f in monomials:
        for datum in residue_restrict(d, f, sigma):
            if datum.germ is not None:
                bucket = out[datum.centre]
                bucket[datum.germ] = bucket.get(datum.germ, 0) + 1
    return out


def guenancia_adjoint_snc(d: SncData) -> MonomialIdeal:
    """Variant ideal with per-coordinate log^2 damping: t_i <= 1 on S and
    t_k < 1 off S, with no count constraint (each equality is absorbed
    separately, and strictness makes the lambda > 1 quantifier automatic
    for rational monomial data)."""
    if not d.S:
        raise HypothesisError("empty lc locus")
    S = d.S
    bounds = [e + 1 for e in _floor_exponents(d)]
    passing = []
    for a in cartesian(*[range(bd + 1) for bd in bounds]):
        ok = True
        for i in range(d.dim):
            t = d.lam(i) - a[i]
            if i in S:
                if t > 1:
                    ok = False
                    break
            elif t >= 1:
                ok = False
                break
        if ok:
            passing.append(a)
    return minimalize(passing, d.dim)


def openness_margin(d: SncData, f, sigma: int) -> Fraction:
    """Largest delta with the criterion stable under b_k -> lam*b_k for all
    lam in (1, 1+delta) on coordinates with nu_k = 0 and b_k > 0.

    Computed from the strict slack t_k < 1 at those coordinates; returns 0
    if some slack is already exhausted (it cannot be, when f passes).
    """
    if not membership(d, f, sigma):
        raise PreconditionError("openness margin needs a passing monomial")
    margins = []
    for k in range(d.dim):
        if d.nu[k] == 0 and d.b[k] > 0:
            # lam * b_k - f_k < 1  <=>  lam < (1 + f_k) / b_k
            margins.append((1 + Fraction(f[k])) / d.b[k] - 1)
    return min(margins) if margins else Fraction(1)

"""Invariance groups of polynomial maps and the equivariance solve.

The diagonal-torus symmetries of a map are governed by integer lattices of
exponent differences: the full group of diagonal phase rotations that
preserve the squared norm (or fix the map literally) is the dual, modulo
integer vectors, of the lattice spanned by the Gram-coupled exponent
differences (or by the support exponents).  Smith normal form turns that
dual into an explicit continuous subtorus plus finitely many rational
generators.

For a given source automorphism, `gamma_membership` finds the unique
target automorphism making the map equivariant (unique when the map is
minimal) and verifies the intertwining identity exactly.  The module also
hosts the graded-restriction report and a solver producing proper monomial
maps invariant under a prescribed diagonal cyclic group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .autgroup import (
    BallAutomorphism,
    FiniteUnitaryGroup,
    UnitaryMatrix,
    aut_from_parts,
)
from .hermitian import (
    NoSolution,
    degree_bound,
    gram_unitary_solve,
    is_proper,
    norm_equal,
    polarized_form,
)
from .intlattice import SmithNormalForm, smith_normal_form
from .polymap import (
    MultiIndex,
    PolyMap,
    RationalMap,
    ScalarPoly,
    apply_target_automorphism,
    apply_target_unitary,
    compose_automorphism,
    compose_unitary,
    grlex_key,
    span_rank,
)
from .scalar import RadScalar, UnsupportedInverse, UnsupportedScalar, as_scalar


class InvarianceError(Exception):
    pass


class NonzeroOrigin(InvarianceError):
    """The operation requires a map vanishing at the origin."""


class NotInvariant(InvarianceError):
    """A Gram-coupled exponent pair violates the weighted invariance
    condition; carries the offending pair."""

    def __init__(self, alpha, beta, value):
        super().__init__(
            f"coupled pair {tuple(alpha)}, {tuple(beta)} breaks invariance"
        )
        self.alpha = alpha
        self.beta = beta
        self.value = value


# --------------------------------------------------------------------------
# exponent lattices and torus duals


@dataclass(frozen=True)
class ExponentLattice:
    dim: int
    basis: tuple[tuple[int, ...], ...]
    snf: SmithNormalForm

    @property
    def rank(self) -> int:
        return self.snf.rank

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.snf.invariant_factors


def exponent_lattice(f: PolyMap, mode: str = "gram") -> ExponentLattice:
    """Integer lattice obstructing diagonal invariance.

    gram mode: spanned by differences alpha - beta over pairs with a
    nonzero Gram entry (obstructions to norm invariance);
    support mode: spanned by the support exponents themselves
    (obstructions to literal invariance under composition).
    """
    if mode == "gram":
        form = polarized_form(f)
        rows = sorted(
            {a.diff(b) for (a, b) in form.coupled_pairs()}
        )
    elif mode == "support":
        rows = sorted({tuple(a) for a in f.terms})
    else:
        raise ValueError("mode must be 'gram' or 'support'")
    snf = smith_normal_form(rows, n_cols=f.n)
    return ExponentLattice(dim=f.n, basis=tuple(rows), snf=snf)


@dataclass(frozen=True)
class TorusSubgroup:
    """Subgroup of the diagonal n-torus: a continuous subtorus plus a
    finite group, with angles stored as rational fractions of a full
    turn."""

    dim: int
    continuous_basis: tuple[tuple[Fraction, ...], ...]
    finite_generators: tuple[tuple[tuple[Fraction, ...], int], ...]
    lattice: ExponentLattice | None = field(default=None, compare=False, repr=False)

    @property
    def continuous_dim(self) -> int:
        return len(self.continuous_basis)

    @property
    def finite_order(self) -> int:
        order = 1
        for _, d in self.finite_generators:
            order *= d
        return order

    def contains_turns(self, turns) -> bool:
        """Exact membership of a rational angle vector (in turns)."""
        if self.lattice is None:
            raise ValueError("membership requires the defining lattice")
        x = [Fraction(t) for t in turns]
        for row in self.lattice.basis:
            dot = sum(xi * ri for xi, ri in zip(x, row))
            if dot.denominator != 1:
                return False
        return True

    def finite_elements(self):
        """All elements of the finite part (tuples of turns in [0,1)),
        combining the generators; intended for small groups."""
        elems = {tuple(Fraction(0) for _ in range(self.dim))}
        for gen, order in self.finite_generators:
            new = set()
            for base in elems:
                for k in range(order):
                    new.add(
                        tuple((b + k * g) % 1 for b, g in zip(base, gen))
                    )
            elems = new
        return sorted(elems)


def _dual_torus(lat: ExponentLattice) -> TorusSubgroup:
    n = lat.dim
    snf = lat.snf
    r = snf.rank
    v = snf.right  # n x n unimodular, rows
    continuous = tuple(
        tuple(Fraction(v[i][j]) for i in range(n)) for j in range(r, n)
    )
    finite = []
    for idx in range(r):
        d = snf.diagonal[idx]
        if d > 1:
            gen = tuple(Fraction(v[i][idx], d) % 1 for i in range(n))
            finite.append((gen, d))
    return TorusSubgroup(
        dim=n,
        continuous_basis=continuous,
        finite_generators=tuple(finite),
        lattice=lat,
    )


def torus_invariance_group(f: PolyMap) -> TorusSubgroup:
    """All diagonal phase rotations preserving the squared norm of f
    (equivalently, for f vanishing at the origin, the diagonal part of the
    invariance group)."""
    if not f.vanishes_at_zero():
        raise NonzeroOrigin("the map must vanish at the origin")
    return _dual_torus(exponent_lattice(f, "gram"))


def diagonal_fixing_group(f: PolyMap) -> TorusSubgroup:
    """All diagonal phase rotations gamma with f o gamma = f."""
    return _dual_torus(exponent_lattice(f, "support"))


# --------------------------------------------------------------------------
# the left-stabilizer parameter and complement


@dataclass(frozen=True)
class LeftStabilizerReport:
    """Unitaries of the target acting as the identity on the coefficient
    span form a unitary group of the orthogonal complement; k is its
    dimension parameter (k = 0 exactly when the map is minimal)."""

    k: int
    fixed_complement_basis: tuple


def hf_group(f: PolyMap) -> LeftStabilizerReport:
    if not f.vanishes_at_zero():
        raise NonzeroOrigin("the map must vanish at the origin")
    report = span_rank(f)
    comp, _ = linalg.complement_basis(list(report.basis), f.N)
    return LeftStabilizerReport(
        k=f.N - report.rank, fixed_complement_basis=tuple(comp)
    )


# --------------------------------------------------------------------------
# equivariance membership and the induced homomorphism data


@dataclass(frozen=True)
class PhiResult:
    gamma: BallAutomorphism
    psi: BallAutomorphism
    unique: bool

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotMember:
    reason: str

    def __bool__(self):
        return False


def _as_source_automorphism(gamma, n: int) -> tuple[BallAutomorphism, UnitaryMatrix | None]:
    if isinstance(gamma, UnitaryMatrix):
        if gamma.dim != n:
            raise ValueError("automorphism dimension must match the source")
        return BallAutomorphism.from_unitary(gamma), gamma
    if isinstance(gamma, BallAutomorphism):
        if gamma.dim != n:
            raise ValueError("automorphism dimension must match the source")
        if gamma.is_unitary_block():
            return gamma, gamma.unitary_part()
        return gamma, None
    raise TypeError("gamma must be a UnitaryMatrix or BallAutomorphism")


def gamma_membership(f: PolyMap, gamma) -> PhiResult | NotMember:
    """Decide whether a source automorphism admits a target automorphism
    psi with f o gamma = psi o f, and produce psi.

    For unitary gamma and f(0) = 0 the norm-equality criterion applies and
    psi is recovered by the exact Gram solve.  Otherwise the composition is
    renormalized by a target automorphism moving f(gamma(0)) to the
    origin, reduced to a polynomial identity, and solved the same way; the
    result is verified identically before being reported.
    """
    aut, unitary = _as_source_automorphism(gamma, f.n)
    unique = span_rank(f).rank == f.N
    if unitary is not None and f.vanishes_at_zero():
        fg = compose_unitary(f, unitary)
        if not norm_equal(f, fg):
            return NotMember("squared norms differ under composition")
        solved = gram_unitary_solve(f, fg)
        if isinstance(solved, NoSolution):
            return NotMember(f"no unitary intertwiner: {solved.reason}")
        return PhiResult(
            gamma=aut, psi=BallAutomorphism.from_unitary(solved), unique=unique
        )
    # general branch
    g = compose_automorphism(f, aut)
    b = g.value_at_zero()
    if all(x.is_zero() for x in b):
        tau = BallAutomorphism.identity(f.N)
        normalized = g
    else:
        tau = aut_from_parts(UnitaryMatrix.identity(f.N), b)
        normalized = apply_target_automorphism(tau, g)
    # the normalized composition must actually be polynomial
    comps = normalized.numerator.component_polys()
    poly_comps = []
    for comp in comps:
        quot, rem = _scalar_poly_divide(comp, normalized.denominator)
        if rem.terms:
            return NotMember("renormalized composition is not polynomial")
        poly_comps.append(quot)
    h = PolyMap.from_components(f.n, poly_comps)
    solved = gram_unitary_solve(f, h)
    if isinstance(solved, NoSolution):
        return NotMember(f"no unitary intertwiner: {solved.reason}")
    psi = tau.inverse().compose(BallAutomorphism.from_unitary(solved))
    # full verification of the intertwining identity
    lhs = g
    rhs = apply_target_automorphism(psi, RationalMap(f))
    if not lhs == rhs:
        return NotMember("verification of the intertwining identity failed")
    return PhiResult(gamma=aut, psi=psi, unique=unique)


def _scalar_poly_divide(p: ScalarPoly, q: ScalarPoly) -> tuple[ScalarPoly, ScalarPoly]:
    """Single-divisor multivariate division with graded-lex leading
    terms; exact over the scalar fragment."""
    if not q.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    lead_q = max(q.terms, key=grlex_key)
    try:
        inv_lead = q.terms[lead_q].inverse()
    except UnsupportedInverse as exc:
        raise UnsupportedScalar("divisor leading coefficient not invertible") from exc
    work = dict(p.terms)
    quot: dict = {}
    rem: dict = {}
    while work:
        key = max(work, key=grlex_key)
        val = work.pop(key)
        if all(k >= l for k, l in zip(key, lead_q)):
            shift = MultiIndex(k - l for k, l in zip(key, lead_q))
            coef = val * inv_lead
            quot[shift] = quot.get(shift, RadScalar.zero()) + coef
            for mono, c in q.terms.items():
                if mono == lead_q:
                    continue
                kk = shift + mono
                existing = work.get(kk, RadScalar.zero()) - coef * c
                if existing.is_zero():
                    work.pop(kk, None)
                else:
                    work[kk] = existing
        else:
            rem[key] = val
    return ScalarPoly(p.n, quot), ScalarPoly(p.n, rem)


def phi_kernel(f: PolyMap, candidates: FiniteUnitaryGroup) -> FiniteUnitaryGroup:
    """The subgroup of the candidate group whose elements fix f exactly
    under right composition."""
    kernel = [
        g for g in candidates.elements if compose_unitary(f, g) == f
    ]
    gens = tuple(g for g in kernel if not g.is_identity())
    return FiniteUnitaryGroup(
        dim=candidates.dim, elements=tuple(kernel), generators=gens
    )


# --------------------------------------------------------------------------
# graded restriction certificate


@dataclass(frozen=True)
class GradedReport:
    """Certificate that a one-parameter diagonal invariance with the given
    integer weights forces a degree bound on the restriction of the map to
    the positively weighted coordinates (1-based indices)."""

    m: tuple[int, ...]
    positive_indices: tuple[int, ...]
    restricted_degree_bound: int | None
    restriction_degree: int
    restriction_is_polynomial: bool


def graded_analysis(f: PolyMap, m) -> GradedReport:
    weights = tuple(int(x) for x in m)
    if len(weights) != f.n:
        raise ValueError("weight vector length must equal the source dimension")
    if not f.vanishes_at_zero():
        raise NonzeroOrigin("the map must vanish at the origin")
    form = polarized_form(f)
    for alpha, beta in form.coupled_pairs():
        pairing = sum(w * d for w, d in zip(weights, alpha.diff(beta)))
        if pairing != 0:
            raise NotInvariant(alpha, beta, pairing)
    positive = tuple(i + 1 for i, w in enumerate(weights) if w > 0)
    pos_set = set(i - 1 for i in positive)
    restricted = [
        a for a in f.terms if all(a[i] == 0 for i in range(f.n) if i not in pos_set)
    ]
    degree = max((a.degree for a in restricted), default=0)
    if positive:
        bound = degree_bound([weights[i - 1] for i in positive], degree)
    else:
        bound = None
    return GradedReport(
        m=weights,
        positive_indices=positive,
        restricted_degree_bound=bound,
        restriction_degree=degree,
        restriction_is_polynomial=True,
    )


# --------------------------------------------------------------------------
# invariant proper monomial solver


@dataclass(frozen=True)
class MonomialSolveResult:
    status: str  # feasible | infeasible | undecided
    weights: tuple[tuple[MultiIndex, Fraction], ...] | None
    map: PolyMap | None
    certificate: str

    def __bool__(self):
        return self.status == "feasible"


def invariant_exponents(n: int, weights, order: int, max_degree: int):
    """Nonconstant exponents of total degree at most max_degree fixed by
    the diagonal cyclic action with the given integer weights."""
    weights = [int(w) for w in weights]
    out = []

    def rec(prefix, remaining):
        if len(prefix) == n:
            alpha = MultiIndex(prefix)
            if alpha.degree >= 1:
                pairing = sum(w * a for w, a in zip(weights, alpha))
                if pairing % order == 0:
                    out.append(alpha)
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v)

    rec([], max_degree)
    return sorted(out, key=grlex_key, reverse=True)


def _rp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v != 0}


def _simplex_expansion(alpha: MultiIndex, n: int) -> dict:
    """x^alpha with x_n replaced by 1 - x_1 - ... - x_{n-1}, as a rational
    polynomial in the first n-1 variables."""
    nv = n - 1
    poly = {tuple([0] * nv): Fraction(1)}
    for i in range(nv):
        if alpha[i]:
            mono = [0] * nv
            mono[i] = 1
            single = {tuple(mono): Fraction(1)}
            for _ in range(alpha[i]):
                poly = _rp_mul(poly, single)
    if alpha[n - 1]:
        last = {tuple([0] * nv): Fraction(1)}
        for i in range(nv):
            mono = [0] * nv
            mono[i] = 1
            last[tuple(mono)] = Fraction(-1)
        for _ in range(alpha[n - 1]):
            poly = _rp_mul(poly, last)
    return poly


def _solve_affine(rows, rhs):
    """Row reduce [A | b]; returns (particular, nullspace_basis, pivots) or
    None when inconsistent."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(n):
        sel = next((i for i in range(r, m) if a[i][c] != 0), None)
        if sel is None:
            continue
        a[r], a[sel] = a[sel], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                fct = a[i][c]
                a[i] = [x - fct * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n] != 0:
            return None
    particular = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        particular[c] = a[i][n]
    free = [c for c in range(n) if c not in pivots]
    null_basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -a[i][fc]
        null_basis.append(vec)
    return particular, null_basis, pivots


def monomial_proper_solve(
    n: int, exponents, group=None, enumeration_limit: int = 200_000
) -> MonomialSolveResult:
    """Find nonnegative rational weights d_alpha with
    sum d_alpha x^alpha = 1 on the simplex sum x_j = 1; the monomial map
    with coefficients sqrt(d_alpha) is then proper.

    `group` optionally restricts the admissible exponents to those fixed
    by a diagonal cyclic action, given as (weights, order).
    """
    exps = sorted({MultiIndex(a) for a in exponents}, key=grlex_key, reverse=True)
    if any(len(a) != n for a in exps):
        raise ValueError("exponent length must equal the dimension")
    if group is not None:
        weights, order = group
        weights = [int(w) for w in weights]
        exps = [
            a
            for a in exps
            if sum(w * x for w, x in zip(weights, a)) % order == 0
        ]
    if not exps:
        return MonomialSolveResult(
            status="infeasible",
            weights=None,
            map=None,
            certificate="no admissible exponents",
        )
    expansions = [_simplex_expansion(a, n) for a in exps]
    monomials = sorted({k for e in expansions for k in e})
    zero_key = tuple([0] * (n - 1))
    if zero_key not in monomials:
        monomials.append(zero_key)
    rows = []
    rhs = []
    for mono in monomials:
        rows.append([e.get(mono, Fraction(0)) for e in expansions])
        rhs.append(Fraction(1) if mono == zero_key else Fraction(0))
    solved = _solve_affine(rows, rhs)
    if solved is None:
        return MonomialSolveResult(
            status="infeasible",
            weights=None,
            map=None,
            certificate="inconsistent linear system: the constant function 1 "
            "is not in the span of the admissible monomials on the simplex",
        )
    particular, null_basis, pivots = solved
    solution = None
    if not null_basis:
        if all(x >= 0 for x in particular):
            solution = particular
        else:
            return MonomialSolveResult(
                status="infeasible",
                weights=None,
                map=None,
                certificate="unique solution has a negative weight",
            )
    else:
        if len(null_basis) > 6:
            return MonomialSolveResult(
                status="undecided",
                weights=None,
                map=None,
                certificate=f"solution space dimension {len(null_basis)} exceeds "
                "the vertex-enumeration limit",
            )
        nvars = len(exps)
        rank = len(pivots)
        total = math.comb(nvars, rank)
        if total > enumeration_limit:
            return MonomialSolveResult(
                status="undecided",
                weights=None,
                map=None,
                certificate="vertex enumeration too large at desk scale",
            )
        for basis_cols in combinations(range(nvars), rank):
            sub_rows = [[rows[i][c] for c in basis_cols] for i in range(len(rows))]
            sub = _solve_affine(sub_rows, rhs)
            if sub is None:
                continue
            part, nb, _ = sub
            if nb:
                continue  # not a vertex of the restricted system
            candidate = [Fraction(0)] * nvars
            ok = True
            for value, c in zip(part, basis_cols):
                if value < 0:
                    ok = False
                    break
                candidate[c] = value
            if ok:
                solution = candidate
                break
        if solution is None:
            return MonomialSolveResult(
                status="infeasible",
                weights=None,
                map=None,
                certificate="vertex enumeration found no nonnegative solution",
            )
    kept = [(a, d) for a, d in zip(exps, solution)]
    support = [(a, d) for a, d in kept if d > 0]
    built = PolyMap.monomial_map(
        n,
        [a for a, _ in support],
        [RadScalar.sqrt_fraction(d) for _, d in support],
    )
    cert = is_proper(built)
    verified = hasattr(cert, "quotient")
    return MonomialSolveResult(
        status="feasible",
        weights=tuple(kept),
        map=built,
        certificate="verified proper by exact division"
        if verified
        else "solver succeeded but properness verification failed",
    )

"""Polarized Hermitian forms, properness certificates, norm-equality
tests, and exact unitary equivalence of maps.

The squared norm of a map f is polarized into the bivariate table
<f(z), f(w)> indexed by pairs of multi-indices (the second slot carrying
conjugated variables).  Properness of a map between balls then becomes an
exact divisibility statement: <p(z), p(w)> - q(z) conj(q)(w) must be a
polynomial multiple of (<z, w> - 1), and the quotient is a certificate
that can be checked by re-multiplication.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .autgroup import UnitaryMatrix
from .polymap import (
    MultiIndex,
    PolyMap,
    RationalMap,
    grlex_key,
    span_rank,
)
from .scalar import RadScalar, UnsupportedScalar


class HermitianError(Exception):
    pass


class ConstantMap(HermitianError):
    pass


class NonPositiveEigenvalue(HermitianError):
    pass


class NonUniqueWarning(UserWarning):
    """A unitary equivalence was determined only up to a choice on the
    orthogonal complement of the coefficient span."""


# --------------------------------------------------------------------------
# bivariate polynomial helpers: keys are (alpha, beta) pairs of MultiIndex


def _bp_add_term(table: dict, key, value: RadScalar):
    if key in table:
        s = table[key] + value
        if s.is_zero():
            del table[key]
        else:
            table[key] = s
    elif not value.is_zero():
        table[key] = value


def _bp_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        _bp_add_term(out, k, -v)
    return out


def _bp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (a1, b1), v1 in a.items():
        for (a2, b2), v2 in b.items():
            _bp_add_term(out, (a1 + a2, b1 + b2), v1 * v2)
    return out


def _bp_key(pair):
    alpha, beta = pair
    return (alpha.degree + beta.degree, tuple(alpha) + tuple(beta))


def _bp_is_zero(a: dict) -> bool:
    return all(v.is_zero() for v in a.values())


def _sphere_divisor(n: int) -> dict:
    """The bivariate polynomial <z, w> - 1."""
    out: dict = {}
    zero = MultiIndex((0,) * n)
    for j in range(n):
        e = [0] * n
        e[j] = 1
        out[(MultiIndex(e), MultiIndex(e))] = RadScalar.one()
    out[(zero, zero)] = RadScalar.of(-1)
    return out


def _divide_by_sphere(h: dict, n: int) -> tuple[dict, dict]:
    """Exact division of a bivariate polynomial by <z,w> - 1.

    Returns (quotient, remainder); the divisor is monic in its graded-lex
    leading term z1*conj(w1), so no coefficient division occurs.
    """
    divisor = _sphere_divisor(n)
    lead = (MultiIndex([1] + [0] * (n - 1)), MultiIndex([1] + [0] * (n - 1)))
    quotient: dict = {}
    remainder: dict = {}
    work = {k: v for k, v in h.items() if not v.is_zero()}
    while work:
        key = max(work, key=_bp_key)
        val = work.pop(key)
        alpha, beta = key
        if alpha[0] >= 1 and beta[0] >= 1:
            qa = MultiIndex([alpha[0] - 1] + list(alpha[1:]))
            qb = MultiIndex([beta[0] - 1] + list(beta[1:]))
            _bp_add_term(quotient, (qa, qb), val)
            for (da, db), dv in divisor.items():
                if (da, db) == lead:
                    continue
                _bp_add_term(work, (qa + da, qb + db), -(val * dv))
        else:
            _bp_add_term(remainder, key, val)
    return quotient, remainder


class PolarizedForm:
    """Gram-indexed table of <f(z), f(w)> over monomial pairs.  For a
    rational map the table covers the numerator and the denominator rides
    along separately."""

    __slots__ = ("n", "entries", "denominator")

    def __init__(self, n: int, entries: dict, denominator=None):
        self.n = n
        self.entries = {k: v for k, v in entries.items() if not v.is_zero()}
        self.denominator = denominator

    def entry(self, alpha, beta) -> RadScalar:
        return self.entries.get(
            (MultiIndex(alpha), MultiIndex(beta)), RadScalar.zero()
        )

    def coupled_pairs(self):
        """Pairs (alpha, beta) with alpha != beta and nonzero Gram entry."""
        return [(a, b) for (a, b) in self.entries if tuple(a) != tuple(b)]

    def __eq__(self, other):
        if not isinstance(other, PolarizedForm):
            return NotImplemented
        return self.n == other.n and _bp_is_zero(_bp_sub(self.entries, other.entries))

    def __repr__(self):
        return f"PolarizedForm(n={self.n}, {len(self.entries)} entries)"


def polarized_form(f) -> PolarizedForm:
    """Polarize the squared norm of a map into its Gram table."""
    if isinstance(f, RationalMap):
        inner = polarized_form(f.numerator)
        return PolarizedForm(f.n, inner.entries, denominator=f.denominator)
    table: dict = {}
    items = list(f.terms.items())
    for i, (alpha, va) in enumerate(items):
        for beta, vb in items:
            g = sum(
                (x * y.conjugate() for x, y in zip(va, vb)), RadScalar.zero()
            )
            if not g.is_zero():
                table[(alpha, beta)] = g
    return PolarizedForm(f.n, table)


@dataclass(frozen=True)
class PropernessCertificate:
    """Quotient r(z, conj(w)) with
    <p(z), p(w)> - q(z) conj(q)(w) = r * (<z, w> - 1); multiplying back
    must reproduce the left side exactly."""

    n: int
    quotient: dict

    def verify(self, f) -> bool:
        lhs = _properness_lhs(f)
        rhs = _bp_mul(self.quotient, _sphere_divisor(self.n))
        return _bp_is_zero(_bp_sub(lhs, rhs))


@dataclass(frozen=True)
class NotProper:
    n: int
    remainder: dict

    def __bool__(self):
        return False


def _properness_lhs(f) -> dict:
    if isinstance(f, PolyMap):
        numerator, denominator = f, None
    else:
        numerator, denominator = f.numerator, f.denominator
    form = polarized_form(numerator)
    lhs = dict(form.entries)
    if denominator is None:
        zero = MultiIndex((0,) * numerator.n)
        _bp_add_term(lhs, (zero, zero), RadScalar.of(-1))
    else:
        qq: dict = {}
        for a, ca in denominator.terms.items():
            for b, cb in denominator.terms.items():
                _bp_add_term(qq, (a, b), ca * cb.conjugate())
        lhs = _bp_sub(lhs, qq)
    return lhs


def is_proper(f):
    """Certify that a map sends the unit sphere to the unit sphere by
    exact polynomial division; returns a PropernessCertificate or a
    NotProper report carrying the nonzero remainder."""
    numerator = f if isinstance(f, PolyMap) else f.numerator
    if numerator.is_constant():
        raise ConstantMap("properness is undefined for constant maps")
    lhs = _properness_lhs(f)
    n = numerator.n
    quotient, remainder = _divide_by_sphere(lhs, n)
    if _bp_is_zero(remainder):
        return PropernessCertificate(n=n, quotient=quotient)
    return NotProper(n=n, remainder=remainder)


def boundary_residual(f, samples: int = 200, seed: int = 11) -> float:
    """Float cross-check: largest | ||f(z)||^2 - 1 | over random sphere
    points (sampling only, not a certificate)."""
    rng = random.Random(seed)
    n = f.n
    worst = 0.0
    for _ in range(samples):
        comps = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]
        norm = math.sqrt(sum(abs(c) ** 2 for c in comps))
        z = [c / norm for c in comps]
        if isinstance(f, RationalMap):
            w = f.evaluate(z, backend="float")
        else:
            w = f.evaluate(z, backend="float")
        val = sum(abs(x) ** 2 for x in w)
        worst = max(worst, abs(val - 1.0))
    return worst


def norm_equal(f, g) -> bool:
    """Squared norms agree identically (denominators cross-multiplied for
    rational maps)."""
    f_num = f if isinstance(f, PolyMap) else f.numerator
    g_num = g if isinstance(g, PolyMap) else g.numerator
    if f_num.n != g_num.n:
        raise ValueError("maps must share the source dimension")
    f_den = None if isinstance(f, PolyMap) else f.denominator
    g_den = None if isinstance(g, PolyMap) else g.denominator
    lhs = polarized_form(f_num).entries
    rhs = polarized_form(g_num).entries
    if f_den is not None or g_den is not None:
        lhs = _bp_mul(lhs, _den_pair(g_den, f_num.n))
        rhs = _bp_mul(rhs, _den_pair(f_den, f_num.n))
    return _bp_is_zero(_bp_sub(lhs, rhs))


def _den_pair(den, n: int) -> dict:
    if den is None:
        zero = MultiIndex((0,) * n)
        return {(zero, zero): RadScalar.one()}
    out: dict = {}
    for a, ca in den.terms.items():
        for b, cb in den.terms.items():
            _bp_add_term(out, (a, b), ca * cb.conjugate())
    return out


@dataclass(frozen=True)
class NoSolution:
    reason: str

    def __bool__(self):
        return False


def gram_unitary_solve(f: PolyMap, g: PolyMap):
    """Find an exact unitary U with g = U o f, when one exists.

    The solve maps an independent set of coefficient columns of f onto the
    matching columns of g and completes unitarily on the orthogonal
    complement (deterministically, graded-lex pivot order).  When the
    coefficient span is a proper subspace the completion is a choice and a
    NonUniqueWarning is emitted.  Returns NoSolution when the Gram data
    rules out any unitary.
    """
    if f.n != g.n or f.N != g.N:
        return NoSolution("dimension mismatch")
    support = f.support()
    if set(support) != set(g.support()):
        # supports may still be compatible if missing vectors are zero,
        # which PolyMap never stores; different supports means no unitary
        return NoSolution("monomial supports differ")
    cols_f = [f.terms[a] for a in support]
    cols_g = [g.terms[a] for a in support]
    ortho_f, norms_f, kept = linalg.orthogonalize(cols_f)
    # orthogonalize the matching columns of g; a unitary can only exist if
    # the pivots line up with identical squared norms
    picked_g = [cols_g[i] for i in kept]
    ortho_g, norms_g, kept_g = linalg.orthogonalize(picked_g)
    if len(kept_g) != len(picked_g) or any(
        norms_g[i] != norms_f[i] for i in range(len(norms_f))
    ):
        return NoSolution("gram matrices differ")
    N = f.N
    comp_f, comp_norms_f = linalg.complement_basis(ortho_f, N)
    comp_g, comp_norms_g = linalg.complement_basis(ortho_g, N)
    if len(comp_f) != len(comp_g):
        return NoSolution("complement dimensions differ")
    if comp_f:
        warnings.warn(
            "coefficient span is a proper subspace; unitary completion chosen "
            "deterministically",
            NonUniqueWarning,
            stacklevel=2,
        )
    # U = sum w'_i w_i^* / d_i over a full orthogonal basis of C^N
    rows = [[RadScalar.zero() for _ in range(N)] for _ in range(N)]
    pairs = list(zip(ortho_g, ortho_f, norms_f)) + [
        (wg, wf, df)
        for wg, wf, df in zip(comp_g, comp_f, comp_norms_f)
    ]
    for wg, wf, d in pairs:
        inv_d = d.inverse()
        for i in range(N):
            if wg[i].is_zero():
                continue
            for j in range(N):
                if wf[j].is_zero():
                    continue
                rows[i][j] = rows[i][j] + wg[i] * wf[j].conjugate() * inv_d
    try:
        U = UnitaryMatrix(tuple(tuple(r) for r in rows))
    except Exception:
        return NoSolution("constructed matrix is not unitary")
    # full verification: U maps every coefficient column of f to g's
    for a in support:
        if linalg.mat_vec(U.entries, f.terms[a]) != g.terms[a]:
            return NoSolution("coefficient matching failed on verification")
    return U


def degree_bound(m, support_degree: int) -> int:
    """Largest total degree a monomial can have while remaining coupled
    to a spanning set of degree at most `support_degree` under a positive
    integer weight vector; above it the weighted difference can never
    vanish."""
    weights = [Fraction(x) for x in m]
    if not weights:
        raise ValueError("weight vector must be nonempty")
    if any(w <= 0 for w in weights):
        raise NonPositiveEigenvalue("weights must all be positive")
    k1, k2 = min(weights), max(weights)
    return math.ceil(k2 / k1 * support_degree)

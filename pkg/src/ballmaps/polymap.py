"""Polynomial and rational maps between complex unit balls.

A PolyMap is a finitely supported table sending a multi-index alpha to the
coefficient vector of z^alpha; a RationalMap pairs a polynomial numerator
with a scalar denominator normalized to take the value 1 at the origin.
Construction helpers cover symmetric tensor powers, partial tensoring of
selected components, scaled orthogonal sums and zero padding, plus
composition with unitaries and with ball automorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .scalar import RadScalar, as_scalar
from . import linalg


class PolyMapError(Exception):
    pass


class DimensionMismatch(PolyMapError):
    pass


class DenominatorZero(PolyMapError):
    pass


class NonUnitary(PolyMapError):
    pass


class EmptySplit(PolyMapError):
    pass


class MultiIndex(tuple):
    """Exponent vector of a monomial: non-negative integers, one per
    source variable."""

    def __new__(cls, entries):
        entries = tuple(int(e) for e in entries)
        if any(e < 0 for e in entries):
            raise ValueError("multi-index entries must be non-negative")
        return super().__new__(cls, entries)

    @property
    def degree(self) -> int:
        return sum(self)

    def diff(self, other) -> tuple[int, ...]:
        """Entrywise difference as a plain integer vector (may be negative)."""
        if len(self) != len(other):
            raise DimensionMismatch("multi-index length mismatch")
        return tuple(a - b for a, b in zip(self, other))

    def __add__(self, other):
        return MultiIndex(a + b for a, b in zip(self, other))


def grlex_key(alpha: MultiIndex):
    return (alpha.degree, tuple(alpha))


def sorted_grlex(indices, reverse: bool = True):
    """Graded-lexicographic ordering, largest term first by default."""
    return sorted(indices, key=grlex_key, reverse=reverse)


def all_multi_indices(n: int, degree: int):
    """All length-n multi-indices of exact total degree, in descending
    graded-lex order."""
    if n == 1:
        return [MultiIndex((degree,))]
    out = []
    for first in range(degree, -1, -1):
        for rest in all_multi_indices(n - 1, degree - first):
            out.append(MultiIndex((first,) + tuple(rest)))
    return out


def multinomial(m: int, alpha) -> int:
    total = 1
    remaining = m
    for a in alpha:
        total *= comb(remaining, a)
        remaining -= a
    return total


# --------------------------------------------------------------------------
# scalar polynomials (used for denominators and intermediate expansions)


def _poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        if k in out:
            s = out[k] + v
            if s.is_zero():
                del out[k]
            else:
                out[k] = s
        else:
            out[k] = v
    return out


def _poly_scale(a: dict, s: RadScalar) -> dict:
    if s.is_zero():
        return {}
    return {k: v * s for k, v in a.items()}


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            prod = va * vb
            if k in out:
                s = out[k] + prod
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            elif not prod.is_zero():
                out[k] = prod
    return out


def _poly_pow(a: dict, k: int, n: int) -> dict:
    result = {MultiIndex((0,) * n): RadScalar.one()}
    base = a
    while k:
        if k & 1:
            result = _poly_mul(result, base)
        base = _poly_mul(base, base)
        k >>= 1
    return result


class ScalarPoly:
    """Scalar polynomial over the source variables, as a sparse
    exponent-to-coefficient table."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        table: dict[MultiIndex, RadScalar] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for alpha, coeff in items:
                alpha = MultiIndex(alpha)
                if len(alpha) != n:
                    raise DimensionMismatch("exponent length mismatch")
                coeff = as_scalar(coeff)
                if alpha in table:
                    coeff = table[alpha] + coeff
                if coeff.is_zero():
                    table.pop(alpha, None)
                else:
                    table[alpha] = coeff
        self.terms = table

    @classmethod
    def constant(cls, n: int, value) -> "ScalarPoly":
        return cls(n, {MultiIndex((0,) * n): as_scalar(value)})

    @classmethod
    def one(cls, n: int) -> "ScalarPoly":
        return cls.constant(n, 1)

    def is_one(self) -> bool:
        zero_idx = MultiIndex((0,) * self.n)
        return set(self.terms) == {zero_idx} and self.terms[zero_idx] == RadScalar.one()

    @property
    def degree(self) -> int:
        return max((a.degree for a in self.terms), default=0)

    def value_at_zero(self) -> RadScalar:
        return self.terms.get(MultiIndex((0,) * self.n), RadScalar.zero())

    def __mul__(self, other):
        if isinstance(other, ScalarPoly):
            return ScalarPoly(self.n, _poly_mul(self.terms, other.terms))
        return ScalarPoly(self.n, _poly_scale(self.terms, as_scalar(other)))

    def __add__(self, other: "ScalarPoly") -> "ScalarPoly":
        return ScalarPoly(self.n, _poly_add(self.terms, other.terms))

    def __pow__(self, k: int) -> "ScalarPoly":
        return ScalarPoly(self.n, _poly_pow(self.terms, k, self.n))

    def conjugated(self) -> "ScalarPoly":
        return ScalarPoly(self.n, {a: c.conjugate() for a, c in self.terms.items()})

    def evaluate(self, z) -> RadScalar:
        z = [as_scalar(x) for x in z]
        total = RadScalar.zero()
        for alpha, coeff in self.terms.items():
            term = coeff
            for zi, e in zip(z, alpha):
                for _ in range(e):
                    term = term * zi
            total = total + term
        return total

    def evaluate_float(self, z, precision=None):
        total = 0j
        for alpha, coeff in self.terms.items():
            term = complex(coeff.to_complex(precision or 53))
            for zi, e in zip(z, alpha):
                term *= complex(zi) ** e
            total += term
        return total

    def __eq__(self, other):
        if not isinstance(other, ScalarPoly):
            return NotImplemented
        return self.n == other.n and _poly_add(
            self.terms, _poly_scale(other.terms, as_scalar(-1))
        ) == {}

    def __repr__(self):
        return f"ScalarPoly(n={self.n}, {len(self.terms)} terms)"


class PolyMap:
    """Finitely supported polynomial map C^n -> C^N."""

    __slots__ = ("n", "N", "terms")

    def __init__(self, n: int, N: int, terms=None):
        if n < 1 or N < 1:
            raise ValueError("dimensions must be positive")
        self.n = n
        self.N = N
        table: dict[MultiIndex, tuple[RadScalar, ...]] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for alpha, vector in items:
                alpha = MultiIndex(alpha)
                if len(alpha) != n:
                    raise DimensionMismatch("exponent length must equal source dimension")
                vector = tuple(as_scalar(x) for x in vector)
                if len(vector) != N:
                    raise DimensionMismatch("coefficient length must equal target dimension")
                if alpha in table:
                    vector = tuple(a + b for a, b in zip(table[alpha], vector))
                if all(x.is_zero() for x in vector):
                    table.pop(alpha, None)
                else:
                    table[alpha] = vector
        self.terms = table

    # constructors -----------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        terms = {}
        for i in range(n):
            alpha = [0] * n
            alpha[i] = 1
            vector = [0] * n
            vector[i] = 1
            terms[MultiIndex(alpha)] = vector
        return cls(n, n, terms)

    @classmethod
    def zero(cls, n: int, N: int) -> "PolyMap":
        return cls(n, N, {})

    @classmethod
    def monomial_map(cls, n: int, exponents, coeffs=None) -> "PolyMap":
        """One component per exponent, each a single scaled monomial."""
        exponents = [MultiIndex(a) for a in exponents]
        if coeffs is None:
            coeffs = [RadScalar.one()] * len(exponents)
        terms = {}
        for i, (alpha, c) in enumerate(zip(exponents, coeffs)):
            vector = [RadScalar.zero()] * len(exponents)
            vector[i] = as_scalar(c)
            if alpha in terms:
                terms[alpha] = tuple(a + b for a, b in zip(terms[alpha], vector))
            else:
                terms[alpha] = tuple(vector)
        return cls(n, len(exponents), terms)

    # basic queries -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return max((a.degree for a in self.terms), default=0)

    def support(self) -> list[MultiIndex]:
        return sorted_grlex(self.terms)

    def coefficient(self, alpha) -> tuple[RadScalar, ...]:
        return self.terms.get(MultiIndex(alpha), tuple([RadScalar.zero()] * self.N))

    def coefficient_columns(self) -> list[tuple[RadScalar, ...]]:
        """Coefficient vectors in descending graded-lex order of exponents."""
        return [self.terms[a] for a in self.support()]

    def component_polys(self) -> list[ScalarPoly]:
        comps = [dict() for _ in range(self.N)]
        for alpha, vector in self.terms.items():
            for i, c in enumerate(vector):
                if not c.is_zero():
                    comps[i][alpha] = c
        return [ScalarPoly(self.n, c) for c in comps]

    @classmethod
    def from_components(cls, n: int, comps: list[ScalarPoly]) -> "PolyMap":
        terms: dict[MultiIndex, list[RadScalar]] = {}
        N = len(comps)
        for i, poly in enumerate(comps):
            for alpha, c in poly.terms.items():
                vec = terms.setdefault(alpha, [RadScalar.zero()] * N)
                vec[i] = vec[i] + c
        return cls(n, N, {a: tuple(v) for a, v in terms.items()})

    def is_constant(self) -> bool:
        return all(a.degree == 0 for a in self.terms)

    def value_at_zero(self) -> tuple[RadScalar, ...]:
        return self.coefficient(MultiIndex((0,) * self.n))

    def vanishes_at_zero(self) -> bool:
        return all(x.is_zero() for x in self.value_at_zero())

    # evaluation ----------------------------------------------------------------

    def evaluate(self, z, backend: str = "exact"):
        if len(z) != self.n:
            raise DimensionMismatch("point length must equal source dimension")
        if backend == "exact":
            z = [as_scalar(x) for x in z]
            out = [RadScalar.zero()] * self.N
            for alpha, vector in self.terms.items():
                mono = RadScalar.one()
                for zi, e in zip(z, alpha):
                    for _ in range(e):
                        mono = mono * zi
                for i, c in enumerate(vector):
                    if not c.is_zero():
                        out[i] = out[i] + c * mono
            return tuple(out)
        if backend == "float":
            zf = [_to_builtin_complex(x) for x in z]
            out = [0j] * self.N
            for alpha, vector in self.terms.items():
                mono = 1 + 0j
                for zi, e in zip(zf, alpha):
                    mono *= zi**e
                for i, c in enumerate(vector):
                    out[i] += complex(c.to_complex(53)) * mono
            return tuple(out)
        raise ValueError("backend must be 'exact' or 'float'")

    # algebra ----------------------------------------------------------------

    def scale(self, s) -> "PolyMap":
        s = as_scalar(s)
        return PolyMap(
            self.n,
            self.N,
            {a: tuple(c * s for c in v) for a, v in self.terms.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        if self.n != other.n or self.N != other.N:
            return False
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            va = self.terms.get(k)
            vb = other.terms.get(k)
            if va is None or vb is None:
                probe = va if va is not None else vb
                if not all(x.is_zero() for x in probe):
                    return False
                continue
            if any(x != y for x, y in zip(va, vb)):
                return False
        return True

    def __repr__(self):
        return f"PolyMap(n={self.n}, N={self.N}, {len(self.terms)} terms, degree {self.degree})"


@dataclass(frozen=True)
class SpanReport:
    rank: int
    basis: tuple

    @property
    def is_minimal_for(self):  # pragma: no cover - convenience only
        return self.rank


class RationalMap:
    """Quotient of a polynomial map by a scalar denominator with q(0) = 1.

    Whether the denominator avoids zeros on the closed ball is only spot
    checked numerically (see `denominator_nonvanishing_residual`); it is
    not certified symbolically.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: PolyMap, denominator: ScalarPoly | None = None):
        if denominator is None:
            denominator = ScalarPoly.one(numerator.n)
        if denominator.n != numerator.n:
            raise DimensionMismatch("denominator over a different source space")
        if denominator.value_at_zero() != RadScalar.one():
            raise ValueError("denominator must equal 1 at the origin")
        self.numerator = numerator
        self.denominator = denominator

    @property
    def n(self) -> int:
        return self.numerator.n

    @property
    def N(self) -> int:
        return self.numerator.N

    def is_polynomial(self) -> bool:
        return self.denominator.is_one()

    def as_polymap(self) -> PolyMap:
        if not self.is_polynomial():
            raise ValueError("denominator is not 1")
        return self.numerator

    def evaluate(self, z, backend: str = "exact"):
        if backend == "exact":
            q = self.denominator.evaluate(z)
            if q.is_zero():
                raise DenominatorZero("denominator vanishes at the point")
            inv_q = q.inverse()
            return tuple(x * inv_q for x in self.numerator.evaluate(z))
        q = self.denominator.evaluate_float([_to_builtin_complex(x) for x in z])
        if abs(q) < 1e-14:
            raise DenominatorZero("denominator vanishes at the point")
        p = self.numerator.evaluate(z, backend="float")
        return tuple(x / q for x in p)

    def value_at_zero(self) -> tuple[RadScalar, ...]:
        return self.numerator.value_at_zero()

    def __eq__(self, other):
        if isinstance(other, PolyMap):
            other = RationalMap(other)
        if not isinstance(other, RationalMap):
            return NotImplemented
        if self.n != other.n or self.N != other.N:
            return False
        # cross-multiplied identity, component by component
        mine = self.numerator.component_polys()
        theirs = other.numerator.component_polys()
        for p_a, p_b in zip(mine, theirs):
            if not (p_a * other.denominator) == (p_b * self.denominator):
                return False
        return True

    def denominator_nonvanishing_residual(self, samples: int = 1000, seed: int = 7):
        """Minimum |q| over random closed-ball boundary points (numeric
        check only, reported as such)."""
        import random

        rng = random.Random(seed)
        smallest = None
        for _ in range(samples):
            z = _random_sphere_point(self.n, rng)
            q = self.denominator.evaluate_float(z)
            mag = abs(q)
            if smallest is None or mag < smallest:
                smallest = mag
        return smallest

    def __repr__(self):
        return (
            f"RationalMap(n={self.n}, N={self.N}, "
            f"denominator degree {self.denominator.degree})"
        )


def _random_sphere_point(n: int, rng):
    import math

    comps = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]
    norm = math.sqrt(sum(abs(c) ** 2 for c in comps))
    return [c / norm for c in comps]


def _to_builtin_complex(x):
    if isinstance(x, complex):
        return x
    if isinstance(x, (int, float, Fraction)):
        return complex(x)
    if isinstance(x, RadScalar):
        return complex(x.to_complex(53))
    return complex(as_scalar(x).to_complex(53))


# --------------------------------------------------------------------------
# operations


def _unitary_entries(U):
    """Accept either an autgroup.UnitaryMatrix or a plain matrix."""
    entries = getattr(U, "entries", U)
    return linalg.mat(entries)


def compose_unitary(f: PolyMap, U) -> PolyMap:
    """f composed with a unitary source change z -> Uz (exact)."""
    rows = _unitary_entries(U)
    if len(rows) != f.n:
        raise DimensionMismatch("unitary dimension must match source")
    if not linalg.is_identity(linalg.mat_mul(linalg.dagger(rows), rows)):
        raise NonUnitary("matrix fails exact U*U = I")
    # linear substitution polynomials: (Uz)_i
    subs = []
    for i in range(f.n):
        table = {}
        for j in range(f.n):
            if not rows[i][j].is_zero():
                alpha = [0] * f.n
                alpha[j] = 1
                table[MultiIndex(alpha)] = rows[i][j]
        subs.append(ScalarPoly(f.n, table))
    one = ScalarPoly.one(f.n)
    out_terms: dict[MultiIndex, list[RadScalar]] = {}
    for alpha, vector in f.terms.items():
        expansion = one
        for i, e in enumerate(alpha):
            if e:
                expansion = expansion * (subs[i] ** e)
        for beta, s in expansion.terms.items():
            vec = out_terms.setdefault(beta, [RadScalar.zero()] * f.N)
            for k, c in enumerate(vector):
                if not c.is_zero():
                    vec[k] = vec[k] + c * s
    return PolyMap(f.n, f.N, {a: tuple(v) for a, v in out_terms.items()})


def compose_automorphism(f: PolyMap, gamma) -> RationalMap:
    """f composed with a ball automorphism of the source, as a rational
    map with denominator normalized to 1 at the origin."""
    m = linalg.mat(getattr(gamma, "matrix"))
    n = f.n
    if len(m) != n + 1:
        raise DimensionMismatch("automorphism dimension must match source")
    deg = f.degree
    # affine rows: numerator components (Az + b)_i and denominator c.z + d
    lin = []
    for i in range(n + 1):
        table = {}
        for j in range(n):
            if not m[i][j].is_zero():
                alpha = [0] * n
                alpha[j] = 1
                table[MultiIndex(alpha)] = m[i][j]
        if not m[i][n].is_zero():
            table[MultiIndex((0,) * n)] = m[i][n]
        lin.append(ScalarPoly(n, table))
    denom = lin[n]
    d0 = denom.value_at_zero()
    if d0.is_zero():
        raise DenominatorZero("automorphism denominator vanishes at the origin")
    inv_d0 = d0.inverse()
    denom_powers = [ScalarPoly.one(n)]
    for _ in range(deg):
        denom_powers.append(denom_powers[-1] * denom)
    comps = [ScalarPoly(n) for _ in range(f.N)]
    for alpha, vector in f.terms.items():
        piece = denom_powers[deg - alpha.degree]
        for i, e in enumerate(alpha):
            if e:
                piece = piece * (lin[i] ** e)
        for k, c in enumerate(vector):
            if not c.is_zero():
                comps[k] = comps[k] + piece * c
    # normalize so the denominator takes value 1 at the origin
    scale = inv_d0**deg
    comps = [p * scale for p in comps]
    q = denom_powers[deg] * scale
    return RationalMap(PolyMap.from_components(n, comps), q)


def apply_target_automorphism(psi, f) -> RationalMap:
    """psi composed after f: psi(f(z)), for psi an automorphism of the
    target ball and f a PolyMap or RationalMap."""
    if isinstance(f, PolyMap):
        f = RationalMap(f)
    m = linalg.mat(getattr(psi, "matrix"))
    N = f.N
    if len(m) != N + 1:
        raise DimensionMismatch("automorphism dimension must match target")
    p = f.numerator.component_polys()
    q = f.denominator
    new_comps = []
    for i in range(N):
        total = q * m[i][N]
        for j in range(N):
            if not m[i][j].is_zero():
                total = total + p[j] * m[i][j]
        new_comps.append(total)
    new_denom = q * m[N][N]
    for j in range(N):
        if not m[N][j].is_zero():
            new_denom = new_denom + p[j] * m[N][j]
    d0 = new_denom.value_at_zero()
    if d0.is_zero():
        raise DenominatorZero("composed denominator vanishes at the origin")
    inv_d0 = d0.inverse()
    new_comps = [c * inv_d0 for c in new_comps]
    new_denom = new_denom * inv_d0
    return RationalMap(PolyMap.from_components(f.n, new_comps), new_denom)


def apply_target_unitary(U, f: PolyMap) -> PolyMap:
    """U composed after f for a unitary U of the target space."""
    rows = _unitary_entries(U)
    if len(rows) != f.N:
        raise DimensionMismatch("unitary dimension must match target")
    return PolyMap(
        f.n,
        f.N,
        {a: linalg.mat_vec(rows, v) for a, v in f.terms.items()},
    )


def tensor_power(n: int, m: int) -> PolyMap:
    """Symmetric m-th tensor power of the identity on C^n: one component
    per degree-m multi-index with coefficient sqrt(m choose alpha)."""
    if n < 1 or m < 1:
        raise ValueError("dimensions must be positive")
    exponents = all_multi_indices(n, m)
    coeffs = [RadScalar.sqrt_fraction(multinomial(m, a)) for a in exponents]
    return PolyMap.monomial_map(n, exponents, coeffs)


def whitney_map() -> PolyMap:
    """The degree-two proper map (z1, z1 z2, z2^2) from the 2-ball to the
    3-ball."""
    return PolyMap(
        2,
        3,
        {
            MultiIndex((1, 0)): (1, 0, 0),
            MultiIndex((1, 1)): (0, 1, 0),
            MultiIndex((0, 2)): (0, 0, 1),
        },
    )


def partial_tensor(f: PolyMap, split) -> PolyMap:
    """Tensor the selected components (1-based indices) with the source
    identity: each selected g_i becomes (g_i z_1, ..., g_i z_n), in place."""
    split = sorted(set(int(s) for s in split))
    if not split:
        raise EmptySplit("the component index set must be nonempty")
    if split[0] < 1 or split[-1] > f.N:
        raise ValueError("component indices out of range")
    selected = set(s - 1 for s in split)
    comps = f.component_polys()
    new_comps: list[ScalarPoly] = []
    for i, g in enumerate(comps):
        if i not in selected:
            new_comps.append(g)
            continue
        for j in range(f.n):
            alpha = [0] * f.n
            alpha[j] = 1
            zj = ScalarPoly(f.n, {MultiIndex(alpha): RadScalar.one()})
            new_comps.append(g * zj)
    return PolyMap.from_components(f.n, new_comps)


def direct_sum(f: PolyMap, g: PolyMap, t) -> PolyMap:
    """Weighted juxtaposition (sqrt(t) f) + (sqrt(1-t) g) into C^(Nf+Ng)."""
    if f.n != g.n:
        raise DimensionMismatch("summands must share the source dimension")
    t = Fraction(t)
    if t < 0 or t > 1:
        raise ValueError("the weight must lie in [0, 1]")
    sf = RadScalar.sqrt_fraction(t)
    sg = RadScalar.sqrt_fraction(1 - t)
    N = f.N + g.N
    terms: dict[MultiIndex, list[RadScalar]] = {}
    for alpha, vector in f.terms.items():
        vec = terms.setdefault(alpha, [RadScalar.zero()] * N)
        for i, c in enumerate(vector):
            vec[i] = vec[i] + c * sf
    for alpha, vector in g.terms.items():
        vec = terms.setdefault(alpha, [RadScalar.zero()] * N)
        for i, c in enumerate(vector):
            vec[f.N + i] = vec[f.N + i] + c * sg
    return PolyMap(f.n, N, {a: tuple(v) for a, v in terms.items()})


def pad(f: PolyMap, k: int) -> PolyMap:
    """Prepend k identically-zero components."""
    if k < 1:
        raise ValueError("padding size must be at least 1")
    zero = RadScalar.zero()
    return PolyMap(
        f.n,
        f.N + k,
        {a: (zero,) * k + v for a, v in f.terms.items()},
    )


def span_rank(f: PolyMap) -> SpanReport:
    """Rank and an independent spanning set of the coefficient column
    space; the map is minimal exactly when the rank equals the target
    dimension."""
    columns = f.coefficient_columns()
    _, _, kept = linalg.orthogonalize(columns)
    return SpanReport(rank=len(kept), basis=tuple(columns[i] for i in kept))

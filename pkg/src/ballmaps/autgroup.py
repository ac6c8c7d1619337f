"""Ball automorphisms, exact finite unitary groups, and the cyclic-kernel
classification.

An automorphism of the unit ball is stored projectively as an
(n+1) x (n+1) matrix M with M* J M = lambda J for J = diag(I_n, -1) and a
positive rational lambda; it acts as the linear fractional transformation
z -> (Az + b) / (<z, conj(c)> + d) read off the block decomposition
M = [[A, b], [c, d]].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .polymap import NonUnitary
from .scalar import (
    CycloScalar,
    RadScalar,
    UnsupportedInverse,
    UnsupportedScalar,
    as_scalar,
    float_eps,
)


class AutGroupError(Exception):
    pass


class PointOnBoundary(AutGroupError):
    pass


class CapExceeded(AutGroupError):
    pass


class NotCyclicError(AutGroupError):
    pass


class NotAutomorphism(AutGroupError):
    pass


class UnitaryMatrix:
    """Exactly unitary matrix over the radical-cyclotomic scalars."""

    __slots__ = ("dim", "entries")

    def __init__(self, entries, check: bool = True):
        rows = linalg.mat(entries)
        if not rows or len(rows) != len(rows[0]):
            raise ValueError("unitary matrices must be square and nonempty")
        if check and not linalg.is_identity(
            linalg.mat_mul(linalg.dagger(rows), rows)
        ):
            raise NonUnitary("matrix fails exact U*U = I")
        self.dim = len(rows)
        self.entries = rows

    @classmethod
    def identity(cls, n: int) -> "UnitaryMatrix":
        return cls(linalg.identity(n), check=False)

    @classmethod
    def diagonal(cls, values) -> "UnitaryMatrix":
        vals = [as_scalar(v) for v in values]
        n = len(vals)
        zero = RadScalar.zero()
        rows = tuple(
            tuple(vals[i] if i == j else zero for j in range(n)) for i in range(n)
        )
        return cls(rows)

    @classmethod
    def diagonal_torus(cls, turns) -> "UnitaryMatrix":
        """Diagonal unitary with entries exp(2 pi i x) for rational turns x."""
        vals = []
        for x in turns:
            x = Fraction(x)
            vals.append(CycloScalar.root_of_unity(x.denominator, x.numerator))
        return cls.diagonal(vals)

    @classmethod
    def permutation(cls, perm) -> "UnitaryMatrix":
        n = len(perm)
        one, zero = RadScalar.one(), RadScalar.zero()
        rows = tuple(
            tuple(one if perm[i] == j else zero for j in range(n)) for i in range(n)
        )
        return cls(rows)

    def __mul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return UnitaryMatrix(linalg.mat_mul(self.entries, other.entries), check=False)

    def inverse(self) -> "UnitaryMatrix":
        return UnitaryMatrix(linalg.dagger(self.entries), check=False)

    def is_identity(self) -> bool:
        return linalg.is_identity(self.entries)

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j].is_zero()
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        )

    def order(self, cap: int = 10_000) -> int:
        power = self
        for k in range(1, cap + 1):
            if power.is_identity():
                return k
            power = power * self
        raise CapExceeded("element order exceeds the cap")

    def __eq__(self, other):
        if not isinstance(other, UnitaryMatrix):
            return NotImplemented
        return self.dim == other.dim and linalg.mat_eq(self.entries, other.entries)

    def __hash__(self):
        return hash((self.dim, self.entries))

    def __repr__(self):
        return f"UnitaryMatrix(dim={self.dim})"


_J_CACHE: dict[int, tuple] = {}


def _j_matrix(n: int):
    if n not in _J_CACHE:
        one, zero = RadScalar.one(), RadScalar.zero()
        rows = []
        for i in range(n + 1):
            rows.append(
                tuple(
                    (one if i < n else -one) if i == j else zero for j in range(n + 1)
                )
            )
        _J_CACHE[n] = tuple(rows)
    return _J_CACHE[n]


class BallAutomorphism:
    """Linear fractional automorphism of the unit ball, stored as an
    indefinite-unitary matrix up to scale."""

    __slots__ = ("dim", "matrix", "lam")

    def __init__(self, dim: int, matrix, check: bool = True, canonicalize: bool = True):
        rows = linalg.mat(matrix)
        if len(rows) != dim + 1 or any(len(r) != dim + 1 for r in rows):
            raise ValueError("automorphism matrix must be (n+1) x (n+1)")
        if canonicalize:
            rows = _canonical_scale(rows)
        self.dim = dim
        self.matrix = rows
        if check:
            self.lam = _indefinite_unitary_factor(rows, dim)
        else:
            self.lam = None

    @classmethod
    def identity(cls, n: int) -> "BallAutomorphism":
        return cls(n, linalg.identity(n + 1), check=False, canonicalize=False)

    @classmethod
    def from_unitary(cls, U: UnitaryMatrix) -> "BallAutomorphism":
        zero, one = RadScalar.zero(), RadScalar.one()
        n = U.dim
        rows = []
        for i in range(n):
            rows.append(tuple(U.entries[i]) + (zero,))
        rows.append(tuple(zero for _ in range(n)) + (one,))
        return cls(n, tuple(rows), check=False, canonicalize=False)

    # block access ----------------------------------------------------------

    def linear_block(self):
        return tuple(r[: self.dim] for r in self.matrix[: self.dim])

    def translation_column(self):
        return tuple(self.matrix[i][self.dim] for i in range(self.dim))

    def denominator_row(self):
        return tuple(self.matrix[self.dim][: self.dim])

    def corner(self) -> RadScalar:
        return self.matrix[self.dim][self.dim]

    def is_unitary_block(self) -> bool:
        return all(x.is_zero() for x in self.translation_column()) and all(
            x.is_zero() for x in self.denominator_row()
        )

    def unitary_part(self) -> UnitaryMatrix:
        """The unitary this automorphism reduces to when it fixes the
        origin (zero translation and denominator blocks)."""
        if not self.is_unitary_block():
            raise NotAutomorphism("automorphism does not fix the origin")
        inv_d = self.corner().inverse()
        rows = tuple(
            tuple(x * inv_d for x in r[: self.dim]) for r in self.matrix[: self.dim]
        )
        return UnitaryMatrix(rows)

    # action ------------------------------------------------------------------

    def act(self, z, backend: str = "exact"):
        if len(z) != self.dim:
            raise ValueError("point length must match the ball dimension")
        if backend == "exact":
            zs = [as_scalar(x) for x in z]
            denom = self.corner()
            for j, zj in enumerate(zs):
                denom = denom + self.matrix[self.dim][j] * zj
            if denom.is_zero():
                raise ZeroDivisionError("automorphism denominator vanishes")
            inv = denom.inverse()
            out = []
            for i in range(self.dim):
                num = self.matrix[i][self.dim]
                for j, zj in enumerate(zs):
                    num = num + self.matrix[i][j] * zj
                out.append(num * inv)
            return tuple(out)
        mat_f = linalg.float_matrix(self.matrix)
        zf = [complex(x) for x in z]
        denom = mat_f[self.dim][self.dim] + sum(
            mat_f[self.dim][j] * zf[j] for j in range(self.dim)
        )
        return tuple(
            (
                mat_f[i][self.dim]
                + sum(mat_f[i][j] * zf[j] for j in range(self.dim))
            )
            / denom
            for i in range(self.dim)
        )

    # group structure -----------------------------------------------------------

    def compose(self, other: "BallAutomorphism") -> "BallAutomorphism":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return BallAutomorphism(
            self.dim, linalg.mat_mul(self.matrix, other.matrix)
        )

    def inverse(self) -> "BallAutomorphism":
        j = _j_matrix(self.dim)
        inv = linalg.mat_mul(j, linalg.mat_mul(linalg.dagger(self.matrix), j))
        return BallAutomorphism(self.dim, inv)

    def __eq__(self, other):
        if not isinstance(other, BallAutomorphism):
            return NotImplemented
        if self.dim != other.dim:
            return False
        a, b = self.matrix, other.matrix
        ref = None
        for i in range(self.dim + 1):
            for j in range(self.dim + 1):
                if not a[i][j].is_zero():
                    if b[i][j].is_zero():
                        return False
                    ref = (i, j)
                    break
            if ref:
                break
        if ref is None:
            return all(x.is_zero() for row in b for x in row)
        ri, rj = ref
        # projective equality by cross multiplication against the reference
        for i in range(self.dim + 1):
            for j in range(self.dim + 1):
                if a[i][j] * b[ri][rj] != b[i][j] * a[ri][rj]:
                    return False
        return True

    def __repr__(self):
        return f"BallAutomorphism(dim={self.dim}, lam={self.lam})"


def _indefinite_unitary_factor(rows, n: int) -> Fraction:
    j = _j_matrix(n)
    prod = linalg.mat_mul(linalg.dagger(rows), linalg.mat_mul(j, rows))
    lam = prod[0][0]
    try:
        lam_q = lam.as_fraction()
    except ValueError as exc:
        raise NotAutomorphism("scale factor is not rational") from exc
    if lam_q <= 0:
        raise NotAutomorphism("scale factor must be positive")
    for i in range(n + 1):
        for c in range(n + 1):
            expect = j[i][c] * lam
            if prod[i][c] != expect:
                raise NotAutomorphism("matrix fails the indefinite-unitary identity")
    return lam_q


def _canonical_scale(rows):
    """Scale by a unit-modulus factor so the lower-right entry is real
    and positive, whenever its squared modulus is rational."""
    n = len(rows) - 1
    d = rows[n][n]
    if d.is_zero():
        return rows
    p = d * d.conjugate()
    try:
        p_q = p.as_fraction()
    except ValueError:
        return rows
    if p_q <= 0:
        return rows
    sqrt_p = RadScalar.sqrt_fraction(p_q)
    if d == sqrt_p:
        return rows
    # u = conj(d) * sqrt(p) / p has unit modulus and u*d = sqrt(p) > 0
    u = d.conjugate() * sqrt_p / RadScalar.of(p_q)
    return tuple(tuple(x * u for x in row) for row in rows)


def aut_from_parts(U: UnitaryMatrix, a) -> BallAutomorphism:
    """The automorphism U o phi_a, where phi_a is the standard involution
    with phi_a(0) = a and phi_a(a) = 0.  Requires |a| < 1 with rational
    squared norm (so the exact square root exists in the fragment)."""
    n = U.dim
    avec = [as_scalar(x) for x in a]
    if len(avec) != n:
        raise ValueError("base point length must match the dimension")
    norm_sq = sum((x * x.conjugate() for x in avec), RadScalar.zero())
    try:
        norm_q = norm_sq.as_fraction()
    except ValueError as exc:
        raise UnsupportedScalar(
            "squared norm of the base point must be rational in exact mode"
        ) from exc
    if norm_q >= 1:
        raise PointOnBoundary("base point must lie strictly inside the ball")
    if norm_q == 0:
        return BallAutomorphism.from_unitary(U)
    s = RadScalar.sqrt_fraction(1 - norm_q)
    inv_norm = RadScalar.of(Fraction(1, 1) / norm_q)
    one = RadScalar.one()
    zero = RadScalar.zero()
    # A = -(P + s(I - P)) = -sI - (1-s) P  with  P[i][j] = a_i conj(a_j) / |a|^2
    amat = []
    for i in range(n):
        row = []
        for j in range(n):
            p_ij = avec[i] * avec[j].conjugate() * inv_norm
            entry = (zero - (one - s) * p_ij) - (s if i == j else zero)
            row.append(entry)
        amat.append(row)
    phi_rows = []
    for i in range(n):
        phi_rows.append(tuple(amat[i]) + (avec[i],))
    phi_rows.append(tuple(-x.conjugate() for x in avec) + (one,))
    u_embed = BallAutomorphism.from_unitary(U)
    phi = BallAutomorphism(n, tuple(phi_rows))
    return u_embed.compose(phi)


def aut_compose(g1: BallAutomorphism, g2: BallAutomorphism) -> BallAutomorphism:
    return g1.compose(g2)


def aut_inverse(g: BallAutomorphism) -> BallAutomorphism:
    return g.inverse()


@dataclass(frozen=True)
class FiniteUnitaryGroup:
    dim: int
    elements: tuple
    generators: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: UnitaryMatrix) -> bool:
        return g in set(self.elements)

    def identity(self) -> UnitaryMatrix:
        return UnitaryMatrix.identity(self.dim)

    def verify_closure(self) -> bool:
        elems = set(self.elements)
        return all(a * b in elems for a in self.elements for b in self.elements)

    @classmethod
    def trivial(cls, dim: int) -> "FiniteUnitaryGroup":
        return cls(dim=dim, elements=(UnitaryMatrix.identity(dim),), generators=())


def group_closure(generators, cap: int = 100_000) -> FiniteUnitaryGroup:
    """Close a generator list under products; raises CapExceeded when the
    element count passes the cap (heuristic signal of an infinite or
    oversized group)."""
    if cap < 1:
        raise ValueError("cap must be positive")
    gens = [g if isinstance(g, UnitaryMatrix) else UnitaryMatrix(g) for g in generators]
    if not gens:
        dim = 1
        return FiniteUnitaryGroup.trivial(dim)
    dim = gens[0].dim
    if any(g.dim != dim for g in gens):
        raise ValueError("generators must share a dimension")
    ident = UnitaryMatrix.identity(dim)
    seen: dict[UnitaryMatrix, None] = {ident: None}
    queue = [ident]
    while queue:
        current = queue.pop(0)
        for g in gens:
            product = current * g
            if product not in seen:
                if len(seen) >= cap:
                    raise CapExceeded(f"group closure exceeded {cap} elements")
                seen[product] = None
                queue.append(product)
    return FiniteUnitaryGroup(
        dim=dim, elements=tuple(seen.keys()), generators=tuple(gens)
    )


@dataclass(frozen=True)
class FixedPointFreeResult:
    is_free: bool
    witness: UnitaryMatrix | None


def is_fixed_point_free(group: FiniteUnitaryGroup) -> FixedPointFreeResult:
    """A finite unitary group acts freely away from the origin exactly
    when no non-identity element has eigenvalue 1; the test is exact via
    the determinant of g - I."""
    ident = linalg.identity(group.dim)
    for g in group.elements:
        if g.is_identity():
            continue
        diff = linalg.mat_sub(g.entries, ident)
        if linalg.determinant(diff).is_zero():
            return FixedPointFreeResult(is_free=False, witness=g)
    return FixedPointFreeResult(is_free=True, witness=None)


def is_cyclic(group: FiniteUnitaryGroup) -> UnitaryMatrix | None:
    """A generator of maximal order when the group is cyclic, else None.
    The trivial group reports its identity."""
    target = group.order
    for g in group.elements:
        if g.order(cap=target + 1) == target:
            return g
    return None


@dataclass(frozen=True)
class KernelClass:
    tag: str  # TypeI | TypeII | TypeIII | NotInList
    params: dict
    conjugating: dict | None = None

    def __str__(self):
        if self.tag == "TypeI":
            return f"TypeI(m={self.params['m']})"
        if self.tag == "TypeII":
            p = self.params
            return f"TypeII(m={p['m']}, j={p['j']}, k={p['k']})"
        if self.tag == "TypeIII":
            p = self.params
            return f"TypeIII(j={p['j']}, k={p['k']}, l={p['l']})"
        return "NotInList"


def _diagonal_root_exponents(g: UnitaryMatrix, m: int) -> list[int] | None:
    out = []
    for i in range(g.dim):
        entry = g.entries[i][i]
        found = None
        for k in range(m):
            if entry == RadScalar.of(CycloScalar.root_of_unity(m, k)):
                found = k
                break
        if found is None:
            return None
        out.append(found)
    return out


def _float_root_exponents(g: UnitaryMatrix, m: int) -> list[int]:
    import cmath

    import numpy as np

    mat_f = np.array(linalg.float_matrix(g.entries), dtype=complex)
    eigs = np.linalg.eigvals(mat_f)
    out = []
    tol = max(float_eps(), 1e-8)
    for e in eigs:
        angle = cmath.phase(complex(e))
        k = round(angle * m / (2 * cmath.pi)) % m
        root = cmath.exp(2j * cmath.pi * k / m)
        if abs(complex(e) - root) > tol * 10:
            raise NotCyclicError("eigenvalue does not cluster to a root of unity")
        out.append(k)
    return out


def classify_cyclic_kernel(group: FiniteUnitaryGroup) -> KernelClass:
    """Match a cyclic group's generator eigenvalues, up to generator
    replacement and coordinate permutation, against the short list of
    representations available to fixing groups of smooth proper maps."""
    gen = is_cyclic(group)
    if gen is None:
        raise NotCyclicError("group is not cyclic")
    m = group.order
    if m == 1:
        return KernelClass(tag="TypeI", params={"m": 1}, conjugating={"generator_power": 1})
    diagonal = gen.is_diagonal()
    if diagonal:
        exponents = _diagonal_root_exponents(gen, m)
        if exponents is None:
            raise NotCyclicError("diagonal entries are not order-dividing roots of unity")
    else:
        exponents = _float_root_exponents(gen, m)
    units = [t for t in range(1, m) if _gcd(t, m) == 1]
    for t in units:
        scaled = sorted((t * e) % m for e in exponents)
        if all(e == 1 for e in scaled):
            conj = _conjugating_data(diagonal, exponents, t, m)
            return KernelClass(tag="TypeI", params={"m": m}, conjugating=conj)
    if m % 2 == 1:
        for t in units:
            scaled = sorted((t * e) % m for e in exponents)
            j = scaled.count(1)
            k = scaled.count(2)
            if j >= 1 and k >= 1 and j + k == len(scaled):
                conj = _conjugating_data(diagonal, exponents, t, m)
                return KernelClass(
                    tag="TypeII", params={"m": m, "j": j, "k": k}, conjugating=conj
                )
    if m == 7:
        for t in units:
            scaled = sorted((t * e) % m for e in exponents)
            j = scaled.count(1)
            k = scaled.count(2)
            ell = scaled.count(4)
            if min(j, k, ell) >= 1 and j + k + ell == len(scaled):
                conj = _conjugating_data(diagonal, exponents, t, m)
                return KernelClass(
                    tag="TypeIII", params={"j": j, "k": k, "l": ell}, conjugating=conj
                )
    return KernelClass(tag="NotInList", params={"m": m}, conjugating=None)


def _conjugating_data(diagonal: bool, exponents, t: int, m: int):
    if not diagonal:
        return None
    order = sorted(range(len(exponents)), key=lambda i: (t * exponents[i]) % m)
    return {"generator_power": t, "coordinate_order": tuple(order)}


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a

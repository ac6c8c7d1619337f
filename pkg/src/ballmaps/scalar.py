"""Exact scalar arithmetic.

Values live in cyclotomic fields Q(zeta_L) extended by formal square roots
of square-free positive integers, so that quantities like sqrt(2) * zeta_8
or sqrt(6)/3 are represented and compared exactly.  An arbitrary-precision
complex backend (mpmath) is provided for numeric cross-checks.

Two classes carry the exact arithmetic:

* ``CycloScalar`` -- an element of Q(zeta_L), stored as a rational
  coefficient vector reduced modulo the L-th cyclotomic polynomial and
  then pushed down to the smallest cyclotomic field containing the value
  (its conductor).  This makes the stored form canonical: equal values
  have identical order and coefficients no matter how they were built.
* ``RadScalar`` -- a finite sum  sum_r q_r * sqrt(r)  with square-free
  integer radicands r and cyclotomic coefficients q_r.

A radicand's square root may itself be cyclotomic (sqrt(2) lies in
Q(zeta_8), for instance), so a term map with several entries can still
represent zero.  Zero tests therefore fall back to a full rewrite into a
single cyclotomic field whenever the radicands are not provably
independent of the coefficient fields; hashing always uses that rewritten
canonical form.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath


class ScalarError(Exception):
    """Base class for exact-arithmetic failures."""


class DivisionByZero(ScalarError, ZeroDivisionError):
    """Inverse of zero requested."""


class UnsupportedInverse(ScalarError):
    """Inverse requested for a multi-radicand element (outside the
    supported fragment); callers may fall back to the float backend."""


class UnsupportedScalar(ScalarError):
    """A value required by an exact operation does not lie in the
    supported scalar fragment."""


# --------------------------------------------------------------------------
# session float configuration

_float_precision = 53
_float_eps = 1e-9


def configure_floats(precision: int | None = None, eps: float | None = None) -> None:
    """Set the session-wide float backend precision (bits) and comparison
    tolerance.  Precision must be at least 53."""
    global _float_precision, _float_eps
    if precision is not None:
        if precision < 53:
            raise ValueError("float precision must be at least 53 bits")
        _float_precision = precision
    if eps is not None:
        if eps <= 0:
            raise ValueError("tolerance must be positive")
        _float_eps = eps


def float_precision() -> int:
    return _float_precision


def float_eps() -> float:
    return _float_eps


# --------------------------------------------------------------------------
# dense polynomial helpers over Fraction (used only for cyclotomic reduction)


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj != 0:
                out[i + j] += ai * bj
    return _trim(out)


def _poly_sub(a: list, b: list) -> list:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] += ai
    for i, bi in enumerate(b):
        out[i] -= bi
    return _trim(out)


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in a]
    quo = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = Fraction(b[-1])
    while len(rem) >= len(b):
        c = rem[-1] / lead
        d = len(rem) - len(b)
        quo[d] = c
        for i, bi in enumerate(b):
            rem[i + d] -= c * bi
        _trim(rem)
        if not rem:
            break
    return _trim(quo), rem


def _poly_rem(a: list, b: list) -> list:
    return _poly_divmod(a, b)[1]


def _poly_inverse_mod(a: list, mod: list) -> list:
    """Inverse of a modulo mod, for mod irreducible over Q and a nonzero."""
    r0, r1 = [Fraction(c) for c in mod], [Fraction(c) for c in a]
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if len(r0) != 1:
        raise ArithmeticError("gcd with the cyclotomic polynomial is not constant")
    g = r0[0]
    return _poly_rem([c / g for c in s0], mod)


# --------------------------------------------------------------------------
# cyclotomic polynomial machinery


@lru_cache(maxsize=None)
def _divisors(n: int) -> tuple[int, ...]:
    divs = [d for d in range(1, n + 1) if n % d == 0]
    return tuple(divs)


@lru_cache(maxsize=None)
def _euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> tuple[int, ...]:
    """Integer coefficients of the order-th cyclotomic polynomial,
    lowest degree first."""
    if order < 1:
        raise ValueError("order must be positive")
    if order == 1:
        return (-1, 1)
    # divide x^order - 1 by the cyclotomic polynomials of proper divisors
    num = [Fraction(0)] * (order + 1)
    num[0] = Fraction(-1)
    num[order] = Fraction(1)
    for d in _divisors(order)[:-1]:
        quo, rem = _poly_divmod(num, [Fraction(c) for c in cyclotomic_polynomial(d)])
        if rem:
            raise ArithmeticError("cyclotomic division left a remainder")
        num = quo
    return tuple(int(c) for c in num)


@lru_cache(maxsize=None)
def _units(order: int) -> tuple[int, ...]:
    return tuple(t for t in range(1, order + 1) if math.gcd(t, order) == 1)


def _reduce_exponents(order: int, sparse: dict[int, Fraction]) -> tuple[Fraction, ...]:
    """Reduce sum c_j zeta^j (arbitrary j) modulo the cyclotomic polynomial."""
    dense = [Fraction(0)] * order
    for j, c in sparse.items():
        dense[j % order] += c
    phi = [Fraction(c) for c in cyclotomic_polynomial(order)]
    return tuple(_poly_rem(_trim(dense), phi))


def _solve_rational(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve a consistent dense rational linear system; None if inconsistent."""
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots = []
    row = 0
    for col in range(ncols):
        sel = None
        for r in range(row, m):
            if a[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        a[row], a[sel] = a[sel], a[row]
        pv = a[row][col]
        a[row] = [x / pv for x in a[row]]
        for r in range(m):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if a[r][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        sol[col] = a[i][ncols]
    return sol


class CycloScalar:
    """Element of the cyclotomic field generated by a primitive order-th
    root of unity, in canonical reduced form.

    The stored order is always the conductor of the value, so equal values
    compare equal coefficientwise regardless of construction history.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs, _canonical: bool = False):
        if order < 1:
            raise ValueError("order must be a positive integer")
        if _canonical:
            self.order = order
            self.coeffs = coeffs
            return
        sparse = {}
        for j, c in enumerate(coeffs):
            c = Fraction(c)
            if c != 0:
                sparse[j] = sparse.get(j, Fraction(0)) + c
        reduced = _reduce_exponents(order, sparse) if sparse else ()
        self.order, self.coeffs = _conductor_reduce(order, reduced)

    # construction ---------------------------------------------------------

    @classmethod
    def from_fraction(cls, q) -> "CycloScalar":
        q = Fraction(q)
        return cls(1, (q,) if q != 0 else (), _canonical=True)

    @classmethod
    def zero(cls) -> "CycloScalar":
        return cls(1, (), _canonical=True)

    @classmethod
    def one(cls) -> "CycloScalar":
        return cls.from_fraction(1)

    @classmethod
    def root_of_unity(cls, order: int, power: int = 1) -> "CycloScalar":
        if order < 1:
            raise ValueError("order must be a positive integer")
        return cls(order, {}, _canonical=True)._from_sparse(order, {power % order: Fraction(1)})

    @staticmethod
    def _from_sparse(order: int, sparse: dict[int, Fraction]) -> "CycloScalar":
        reduced = _reduce_exponents(order, sparse) if sparse else ()
        order, reduced = _conductor_reduce(order, reduced)
        return CycloScalar(order, reduced, _canonical=True)

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return self.order == 1

    def as_fraction(self) -> Fraction:
        if self.order != 1:
            raise ValueError("value is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    # arithmetic -----------------------------------------------------------

    def _lift_sparse(self, target: int) -> dict[int, Fraction]:
        step = target // self.order
        return {j * step: c for j, c in enumerate(self.coeffs) if c != 0}

    def __add__(self, other):
        other = _as_cyclo(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return CycloScalar.from_fraction(self.as_fraction() + other.as_fraction())
        target = math.lcm(self.order, other.order)
        sparse = self._lift_sparse(target)
        for j, c in other._lift_sparse(target).items():
            sparse[j] = sparse.get(j, Fraction(0)) + c
        return CycloScalar._from_sparse(target, sparse)

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(self.order, tuple(-c for c in self.coeffs), _canonical=True)

    def __sub__(self, other):
        other = _as_cyclo(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_cyclo(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_cyclo(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return CycloScalar.from_fraction(self.as_fraction() * other.as_fraction())
        if self.is_zero() or other.is_zero():
            return CycloScalar.zero()
        target = math.lcm(self.order, other.order)
        a = self._lift_sparse(target)
        b = other._lift_sparse(target)
        sparse = {}
        for i, ci in a.items():
            for j, cj in b.items():
                k = (i + j) % target
                sparse[k] = sparse.get(k, Fraction(0)) + ci * cj
        return CycloScalar._from_sparse(target, sparse)

    __rmul__ = __mul__

    def inverse(self) -> "CycloScalar":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.order == 1:
            return CycloScalar.from_fraction(1 / self.as_fraction())
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        inv = _poly_inverse_mod(list(self.coeffs), phi)
        order, coeffs = _conductor_reduce(self.order, tuple(inv))
        return CycloScalar(order, coeffs, _canonical=True)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloScalar.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, t: int) -> "CycloScalar":
        """Field automorphism sending the basis root zeta to zeta^t
        (t coprime to the order)."""
        if self.order == 1:
            return self
        if math.gcd(t, self.order) != 1:
            raise ValueError("galois exponent must be coprime to the order")
        sparse = {(j * t) % self.order: c for j, c in enumerate(self.coeffs) if c != 0}
        return CycloScalar._from_sparse(self.order, sparse)

    def conjugate(self) -> "CycloScalar":
        if self.order <= 2:
            return self
        return self.galois(self.order - 1)

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        other = _as_cyclo(other)
        if other is NotImplemented:
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    # numerics -------------------------------------------------------------

    def to_complex(self, precision: int | None = None) -> mpmath.mpc:
        prec = precision or _float_precision
        with mpmath.workprec(prec + 16):
            total = mpmath.mpc(0)
            for j, c in enumerate(self.coeffs):
                if c != 0:
                    root = mpmath.expjpi(mpmath.mpf(2 * j) / self.order)
                    total += mpmath.mpf(c.numerator) / c.denominator * root
        return total

    def __repr__(self):
        if self.is_zero():
            return "CycloScalar(0)"
        if self.order == 1:
            return f"CycloScalar({self.coeffs[0]})"
        terms = " + ".join(
            f"{c}*z{self.order}^{j}" for j, c in enumerate(self.coeffs) if c != 0
        )
        return f"CycloScalar({terms})"


def _as_cyclo(x):
    if isinstance(x, CycloScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return CycloScalar.from_fraction(x)
    return NotImplemented


def _conductor_reduce(order: int, coeffs: tuple) -> tuple[int, tuple]:
    """Push a reduced coefficient vector down to the smallest cyclotomic
    field containing the value."""
    if not coeffs:
        return 1, ()
    if order == 1:
        return 1, coeffs
    if len(coeffs) == 1:
        return 1, coeffs  # only the zeta^0 component: rational
    for d in _divisors(order)[:-1]:
        fixing = [t for t in _units(order) if (t - 1) % d == 0 and t != 1]
        fixed = True
        for t in fixing:
            sparse = {(j * t) % order: c for j, c in enumerate(coeffs) if c != 0}
            if _reduce_exponents(order, sparse) != coeffs:
                fixed = False
                break
        if not fixed:
            continue
        # value lies in Q(zeta_d); solve for its coordinates there
        step = order // d
        deg = _euler_phi(order)
        cols = []
        for i in range(_euler_phi(d)):
            vec = _reduce_exponents(order, {(step * i) % order: Fraction(1)})
            cols.append(list(vec) + [Fraction(0)] * (deg - len(vec)))
        rows = [[cols[c][r] for c in range(len(cols))] for r in range(deg)]
        rhs = list(coeffs) + [Fraction(0)] * (deg - len(coeffs))
        sol = _solve_rational(rows, rhs)
        if sol is None:
            raise ArithmeticError("subfield representation solve failed")
        reduced = tuple(_trim(list(sol)))
        if d == 1 or len(reduced) == 1:
            return 1, reduced
        return d, reduced
    return order, coeffs


def cyclo_make(order: int, raw) -> CycloScalar:
    """Build the canonical representative of sum raw[j] * zeta_order^j."""
    if order < 1:
        raise ValueError("order must be a positive integer")
    return CycloScalar(order, tuple(Fraction(c) for c in raw))


# --------------------------------------------------------------------------
# square-free radicand utilities


@lru_cache(maxsize=None)
def _squarefree_decompose(x: int) -> tuple[int, int]:
    """x = s*s*r with r square-free; returns (s, r)."""
    if x < 1:
        raise ValueError("radicand must be a positive integer")
    s, r = 1, 1
    m = x
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                r *= p
        p += 1
    if m > 1:
        r *= m
    return s, r


@lru_cache(maxsize=None)
def _prime_factors(x: int) -> tuple[int, ...]:
    out = []
    m = x
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return tuple(out)


def _sqrt_conductor(r: int) -> int:
    """Smallest cyclotomic order whose field contains sqrt(r), for
    square-free positive r."""
    if r == 1:
        return 1
    return r if r % 4 == 1 else 4 * r


@lru_cache(maxsize=None)
def _sqrt_prime_cyclo(p: int) -> CycloScalar:
    if p == 2:
        return cyclo_make(8, (0, 1, 0, 0, 0, 0, 0, 1))
    coeffs = [Fraction(0)] * p
    for t in range(1, p):
        coeffs[t] = Fraction(1) if pow(t, (p - 1) // 2, p) == 1 else Fraction(-1)
    gauss = cyclo_make(p, coeffs)
    if p % 4 == 1:
        return gauss
    # quadratic Gauss sum equals i*sqrt(p) here, so divide by i
    return cyclo_make(4, (0, -1)) * gauss


@lru_cache(maxsize=None)
def _sqrt_as_cyclo(r: int) -> CycloScalar:
    """sqrt(r) written as an exact cyclotomic value (square-free r)."""
    value = CycloScalar.one()
    for p in _prime_factors(r):
        value = value * _sqrt_prime_cyclo(p)
    return value


class RadScalar:
    """Finite sum of cyclotomic multiples of square roots of square-free
    positive integers: the working scalar of the library.

    Internally a sorted tuple of (radicand, CycloScalar) pairs with
    nonzero coefficients; the radicand 1 carries the plain cyclotomic or
    rational part.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        merged: dict[int, CycloScalar] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for rad, coeff in items:
                coeff = _as_cyclo(coeff)
                if coeff is NotImplemented:
                    raise TypeError("coefficients must be cyclotomic or rational")
                if coeff.is_zero():
                    continue
                s, r = _squarefree_decompose(int(rad))
                if s != 1:
                    coeff = coeff * Fraction(s)
                if r in merged:
                    merged[r] = merged[r] + coeff
                else:
                    merged[r] = coeff
        self._terms = tuple(sorted((r, c) for r, c in merged.items() if not c.is_zero()))
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def of(cls, x) -> "RadScalar":
        if isinstance(x, RadScalar):
            return x
        if isinstance(x, CycloScalar):
            return cls([(1, x)])
        if isinstance(x, (int, Fraction)):
            return cls([(1, CycloScalar.from_fraction(x))])
        raise TypeError(f"cannot interpret {x!r} as an exact scalar")

    @classmethod
    def zero(cls) -> "RadScalar":
        return cls()

    @classmethod
    def one(cls) -> "RadScalar":
        return cls.of(1)

    @classmethod
    def sqrt_fraction(cls, q) -> "RadScalar":
        """Exact square root of a non-negative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("square roots of negative rationals are unsupported")
        if q == 0:
            return cls.zero()
        s, r = _squarefree_decompose(q.numerator * q.denominator)
        return cls([(r, CycloScalar.from_fraction(Fraction(s, q.denominator)))])

    @property
    def terms(self) -> dict[int, CycloScalar]:
        return dict(self._terms)

    # predicates -----------------------------------------------------------

    def _entangled(self) -> bool:
        """True when a radicand combination may collapse into the
        coefficients' cyclotomic fields, so term emptiness is no longer a
        trustworthy zero test."""
        rads = [r for r, _ in self._terms if r > 1]
        if not rads:
            return False
        order_lcm = 1
        for _, c in self._terms:
            order_lcm = math.lcm(order_lcm, c.order)
        if len(rads) > 6:
            return True
        for mask in range(1, 1 << len(rads)):
            prod = 1
            for i, r in enumerate(rads):
                if mask & (1 << i):
                    prod *= r
            _, t = _squarefree_decompose(prod)
            if t == 1 or order_lcm % _sqrt_conductor(t) == 0:
                return True
        return False

    def is_zero(self) -> bool:
        if not self._terms:
            return True
        if len(self._terms) == 1:
            return False
        if not self._entangled():
            return False
        return self.to_cyclotomic().is_zero()

    def is_rational(self) -> bool:
        if not self._terms:
            return True
        if len(self._terms) == 1 and self._terms[0][0] == 1 and self._terms[0][1].is_rational():
            return True
        return self._entangled() and self.to_cyclotomic().is_rational()

    def as_fraction(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and self._terms[0][0] == 1:
            return self._terms[0][1].as_fraction()
        if self._entangled():
            return self.to_cyclotomic().as_fraction()
        raise ValueError("value is not rational")

    def is_real(self) -> bool:
        return (self - self.conjugate()).is_zero()

    # canonical cyclotomic rewrite ------------------------------------------

    def to_cyclotomic(self) -> CycloScalar:
        """Rewrite the value inside a single cyclotomic field (every
        square root of a positive integer is cyclotomic)."""
        total = CycloScalar.zero()
        for r, c in self._terms:
            total = total + (c if r == 1 else c * _sqrt_as_cyclo(r))
        return total

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce_rad(other)
        if other is NotImplemented:
            return NotImplemented
        merged = dict(self._terms)
        for r, c in other._terms:
            if r in merged:
                merged[r] = merged[r] + c
            else:
                merged[r] = c
        return RadScalar(merged)

    __radd__ = __add__

    def __neg__(self):
        out = RadScalar()
        out._terms = tuple((r, -c) for r, c in self._terms)
        out._hash = None
        return out

    def __sub__(self, other):
        other = _coerce_rad(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_rad(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_rad(other)
        if other is NotImplemented:
            return NotImplemented
        merged: dict[int, CycloScalar] = {}
        for r1, c1 in self._terms:
            for r2, c2 in other._terms:
                s, r = _squarefree_decompose(r1 * r2)
                coeff = c1 * c2
                if s != 1:
                    coeff = coeff * Fraction(s)
                if r in merged:
                    merged[r] = merged[r] + coeff
                else:
                    merged[r] = coeff
        return RadScalar(merged)

    __rmul__ = __mul__

    def conjugate(self) -> "RadScalar":
        out = RadScalar()
        out._terms = tuple((r, c.conjugate()) for r, c in self._terms)
        out._hash = None
        return out

    def inverse(self) -> "RadScalar":
        if not self._terms:
            raise DivisionByZero("inverse of zero")
        if len(self._terms) != 1:
            raise UnsupportedInverse(
                "inverse supported only for single-radicand values"
            )
        r, c = self._terms[0]
        coeff = c.inverse()
        if r == 1:
            return RadScalar([(1, coeff)])
        return RadScalar([(r, coeff * Fraction(1, r))])

    def __truediv__(self, other):
        other = _coerce_rad(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = RadScalar.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def abs_squared(self) -> "RadScalar":
        return self * self.conjugate()

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        other = _coerce_rad(other)
        if other is NotImplemented:
            return NotImplemented
        if self._terms == other._terms:
            return True
        return (self - other).is_zero()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.to_cyclotomic())
        return self._hash

    # numerics -------------------------------------------------------------

    def to_complex(self, precision: int | None = None) -> mpmath.mpc:
        prec = precision or _float_precision
        with mpmath.workprec(prec + 16):
            total = mpmath.mpc(0)
            for r, c in self._terms:
                val = c.to_complex(prec + 16)
                if r != 1:
                    val *= mpmath.sqrt(mpmath.mpf(r))
                total += val
        return total

    def __repr__(self):
        if not self._terms:
            return "RadScalar(0)"
        parts = []
        for r, c in self._terms:
            if r == 1:
                parts.append(repr(c))
            else:
                parts.append(f"({c!r})*sqrt({r})")
        return "RadScalar(" + " + ".join(parts) + ")"


def _coerce_rad(x):
    if isinstance(x, RadScalar):
        return x
    if isinstance(x, (int, Fraction, CycloScalar)):
        return RadScalar.of(x)
    return NotImplemented


def as_scalar(x) -> RadScalar:
    """Coerce ints, Fractions and cyclotomic values into RadScalar."""
    return RadScalar.of(x)


def rad_arith(a: RadScalar, b: RadScalar | None, op: str) -> RadScalar:
    """Uniform entry point for the four supported field operations."""
    a = RadScalar.of(a)
    if op == "add":
        return a + RadScalar.of(b)
    if op == "mul":
        return a * RadScalar.of(b)
    if op == "conj":
        return a.conjugate()
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {op!r}")


# --------------------------------------------------------------------------
# float backend


class FloatComplex:
    """Complex value at a fixed binary precision with an explicit
    comparison tolerance."""

    __slots__ = ("re", "im", "prec", "eps")

    def __init__(self, re, im, prec: int | None = None, eps: float | None = None):
        self.prec = prec or _float_precision
        self.eps = eps if eps is not None else _float_eps
        with mpmath.workprec(self.prec):
            self.re = mpmath.mpf(re)
            self.im = mpmath.mpf(im)

    @classmethod
    def from_mpc(cls, z, prec=None, eps=None) -> "FloatComplex":
        return cls(z.real, z.imag, prec, eps)

    def to_mpc(self) -> mpmath.mpc:
        return mpmath.mpc(self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def _binary(self, other, fn):
        prec = max(self.prec, other.prec)
        with mpmath.workprec(prec + 8):
            z = fn(self.to_mpc(), other.to_mpc())
        return FloatComplex.from_mpc(z, prec, max(self.eps, other.eps))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def conjugate(self) -> "FloatComplex":
        return FloatComplex(self.re, -self.im, self.prec, self.eps)

    def abs(self) -> mpmath.mpf:
        with mpmath.workprec(self.prec + 8):
            return mpmath.sqrt(self.re * self.re + self.im * self.im)

    def approx_eq(self, other, eps: float | None = None) -> bool:
        tol = eps if eps is not None else max(self.eps, other.eps)
        with mpmath.workprec(max(self.prec, other.prec) + 8):
            return abs(self.to_mpc() - other.to_mpc()) <= tol

    def __eq__(self, other):
        if not isinstance(other, FloatComplex):
            return NotImplemented
        return self.approx_eq(other)

    def __repr__(self):
        return f"FloatComplex({self.re}, {self.im}, prec={self.prec})"


def to_float(a, precision: int | None = None) -> FloatComplex:
    """Evaluate an exact scalar on the float backend."""
    prec = precision or _float_precision
    if prec < 53:
        raise ValueError("float precision must be at least 53 bits")
    if isinstance(a, (int, Fraction)):
        a = RadScalar.of(a)
    if isinstance(a, (CycloScalar, RadScalar)):
        z = a.to_complex(prec)
        return FloatComplex.from_mpc(z, prec)
    raise TypeError(f"cannot convert {a!r} to the float backend")

"""Exact dense linear algebra over the radical-cyclotomic scalars.

Matrices are tuples of row tuples of RadScalar.  Inner products follow the
convention <x, y> = sum x_i * conj(y_i), linear in the first argument.

Divisions happen only through RadScalar.inverse(), which is exact but
restricted to single-radicand values; operations that would need a wider
inverse raise UnsupportedScalar so callers can fall back to floats.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import RadScalar, UnsupportedInverse, UnsupportedScalar, as_scalar

Matrix = tuple
Vector = tuple


def vec(entries) -> Vector:
    return tuple(as_scalar(x) for x in entries)


def mat(rows) -> Matrix:
    out = tuple(vec(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> Matrix:
    one, zero = RadScalar.one(), RadScalar.zero()
    return tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )


def zeros(m: int, n: int) -> Matrix:
    zero = RadScalar.zero()
    return tuple(tuple(zero for _ in range(n)) for _ in range(m))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return ()
    inner_dim = len(a[0])
    if inner_dim != len(b):
        raise ValueError("dimension mismatch in matrix product")
    bt = list(zip(*b))
    out = []
    for row in a:
        out.append(
            tuple(
                sum((row[k] * col[k] for k in range(inner_dim)), RadScalar.zero())
                for col in bt
            )
        )
    return tuple(out)


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(
        sum((row[k] * v[k] for k in range(len(v))), RadScalar.zero()) for row in a
    )


def dagger(a: Matrix) -> Matrix:
    return tuple(
        tuple(a[i][j].conjugate() for i in range(len(a))) for j in range(len(a[0]))
    ) if a else ()


def mat_scale(a: Matrix, s) -> Matrix:
    s = as_scalar(s)
    return tuple(tuple(x * s for x in row) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def mat_eq(a: Matrix, b: Matrix) -> bool:
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        return False
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_identity(a: Matrix) -> bool:
    return mat_eq(a, identity(len(a)))


def inner(x: Vector, y: Vector) -> RadScalar:
    return sum((xi * yi.conjugate() for xi, yi in zip(x, y)), RadScalar.zero())


def norm_squared(x: Vector) -> RadScalar:
    return inner(x, x)


def vec_sub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(x: Vector, s) -> Vector:
    s = as_scalar(s)
    return tuple(a * s for a in x)


def is_zero_vector(x: Vector) -> bool:
    return all(a.is_zero() for a in x)


def determinant(a: Matrix) -> RadScalar:
    """Exact determinant via Laplace expansion memoized on column subsets
    (division free; fine for the small dimensions used here)."""
    n = len(a)
    if n == 0:
        return RadScalar.one()
    cache: dict[tuple[int, ...], RadScalar] = {}

    def minor(row: int, cols: tuple[int, ...]) -> RadScalar:
        if not cols:
            return RadScalar.one()
        key = cols
        if row == n - len(cols) and key in cache:
            return cache[key]
        total = RadScalar.zero()
        sign = 1
        for idx, c in enumerate(cols):
            entry = a[row][c]
            if not entry.is_zero():
                rest = cols[:idx] + cols[idx + 1 :]
                term = entry * minor(row + 1, rest)
                total = total + (term if sign > 0 else -term)
            sign = -sign
        if row == n - len(cols):
            cache[key] = total
        return total

    return minor(0, tuple(range(n)))


def orthogonalize(vectors: list[Vector]):
    """Unnormalized Gram-Schmidt.

    Returns (ortho, norms_sq, kept): orthogonal vectors spanning the same
    space, their squared norms, and the indices of the input vectors that
    were linearly independent.  No square roots are taken.
    """
    ortho: list[Vector] = []
    norms: list[RadScalar] = []
    inv_norms: list[RadScalar] = []
    kept: list[int] = []
    for idx, v in enumerate(vectors):
        w = v
        for u, inv_n in zip(ortho, inv_norms):
            coef = inner(w, u) * inv_n
            if not coef.is_zero():
                w = vec_sub(w, vec_scale(u, coef))
        if is_zero_vector(w):
            continue
        d = norm_squared(w)
        try:
            inv_d = d.inverse()
        except UnsupportedInverse as exc:
            raise UnsupportedScalar(
                "orthogonalization pivot is outside the invertible fragment"
            ) from exc
        ortho.append(w)
        norms.append(d)
        inv_norms.append(inv_d)
        kept.append(idx)
    return ortho, norms, kept


def complement_basis(vectors: list[Vector], dim: int):
    """Orthogonal vectors spanning the orthogonal complement of the span
    of `vectors` inside C^dim (unnormalized, exact)."""
    ortho, norms, _ = orthogonalize(list(vectors))
    basis = identity(dim)
    comp: list[Vector] = []
    comp_norms: list[RadScalar] = []
    current = list(ortho)
    inv_norms = [d.inverse() for d in norms]
    for e in basis:
        w = e
        for u, inv_n in zip(current, inv_norms):
            coef = inner(w, u) * inv_n
            if not coef.is_zero():
                w = vec_sub(w, vec_scale(u, coef))
        if is_zero_vector(w):
            continue
        d = norm_squared(w)
        try:
            inv_d = d.inverse()
        except UnsupportedInverse as exc:
            raise UnsupportedScalar(
                "complement pivot is outside the invertible fragment"
            ) from exc
        current.append(w)
        inv_norms.append(inv_d)
        comp.append(w)
        comp_norms.append(d)
    return comp, comp_norms


def solve_exact(rows: list[Vector], rhs: list[Vector]):
    """Solve A x = b column-by-column for possibly several right-hand
    sides; rhs is a list of vectors (one per equation) of width w.

    Returns the solution rows (len(cols) x w) or None when inconsistent.
    Raises UnsupportedScalar when no invertible pivot is available.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    w = len(rhs[0]) if rhs else 0
    a = [list(r) + list(rhs[i]) for i, r in enumerate(rows)]
    piv_cols: list[int] = []
    r = 0
    for c in range(n):
        pivot_row = None
        for rr in range(r, m):
            if not a[rr][c].is_zero():
                try:
                    a[rr][c].inverse()
                except UnsupportedInverse:
                    continue
                pivot_row = rr
                break
        if pivot_row is None:
            if any(not a[rr][c].is_zero() for rr in range(r, m)):
                raise UnsupportedScalar("no invertible pivot in column")
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv_p = a[r][c].inverse()
        a[r] = [x * inv_p for x in a[r]]
        for rr in range(m):
            if rr != r and not a[rr][c].is_zero():
                f = a[rr][c]
                a[rr] = [x - f * y for x, y in zip(a[rr], a[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    zero = RadScalar.zero()
    for rr in range(r, m):
        if any(not a[rr][n + k].is_zero() for k in range(w)):
            return None
    sol = [[zero] * w for _ in range(n)]
    for i, c in enumerate(piv_cols):
        for k in range(w):
            sol[c][k] = a[i][n + k]
    return tuple(tuple(row) for row in sol)


def float_matrix(a: Matrix, precision: int | None = None):
    """Matrix of python complex numbers for numeric fallbacks."""
    out = []
    for row in a:
        out.append([complex(x.to_complex(precision or 53)) for x in row])
    return out

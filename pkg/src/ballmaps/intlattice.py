"""Integer lattice computations: Smith normal form with unimodular
transforms, verified by re-multiplication."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SmithNormalForm:
    """D = U A V with U, V unimodular and D diagonal with a divisibility
    chain on its nonzero entries."""

    diagonal: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    rank: int

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 0)


def _identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _mat_mul_int(a, b):
    if not a or not b:
        return []
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def int_determinant(a) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(rows, n_cols: int | None = None) -> SmithNormalForm:
    """Compute the Smith normal form of an integer matrix given by rows.

    Handles the empty matrix (no rows); `n_cols` must then supply the
    column count.  The result is verified by multiplying the transforms
    back together.
    """
    a = [list(int(x) for x in r) for r in rows]
    m = len(a)
    if m == 0:
        if n_cols is None:
            raise ValueError("column count required for an empty matrix")
        n = n_cols
        return SmithNormalForm(
            diagonal=(),
            left=(),
            right=tuple(tuple(r) for r in _identity(n)),
            rank=0,
        )
    n = len(a[0])
    if any(len(r) != n for r in a):
        raise ValueError("ragged matrix")
    original = [row[:] for row in a]
    u = _identity(m)
    v = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(m):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def add_row(i, j, c):
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]

    def add_col(i, j, c):
        for r in range(m):
            a[r][i] += c * a[r][j]
        for r in range(n):
            v[r][i] += c * v[r][j]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(m, n)
    while t < limit:
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (
                    best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])
                ):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            restart = False
            for i in range(m):
                if i == t or a[i][t] == 0:
                    continue
                q = a[i][t] // a[t][t]
                add_row(i, t, -q)
                if a[i][t] != 0:
                    swap_rows(i, t)
                    restart = True
                    break
            if restart:
                continue
            for j in range(n):
                if j == t or a[t][j] == 0:
                    continue
                q = a[t][j] // a[t][t]
                add_col(j, t, -q)
                if a[t][j] != 0:
                    swap_cols(j, t)
                    restart = True
                    break
            if restart:
                continue
            # pivot must divide the remaining block for the chain property
            fix = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t] != 0:
                        fix = i
                        break
                if fix is not None:
                    break
            if fix is not None:
                add_row(t, fix, 1)
                continue
            break
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    diagonal = tuple(a[i][i] for i in range(limit))
    rank = sum(1 for d in diagonal if d != 0)
    result = SmithNormalForm(
        diagonal=diagonal,
        left=tuple(tuple(r) for r in u),
        right=tuple(tuple(r) for r in v),
        rank=rank,
    )
    # verification: U A V must reproduce the diagonal matrix exactly
    product = _mat_mul_int(_mat_mul_int(u, original), v)
    for i in range(m):
        for j in range(n):
            expect = diagonal[i] if i == j and i < limit else 0
            if product[i][j] != expect:
                raise ArithmeticError("Smith normal form verification failed")
    if abs(int_determinant(u)) != 1 or abs(int_determinant(v)) != 1:
        raise ArithmeticError("Smith transforms are not unimodular")
    return result

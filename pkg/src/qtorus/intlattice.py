"""Integer lattice routines: Hermite normal form, saturation, integral solving.

Matrices are lists of lists of Python ints (arbitrary precision). Lattices are
row spans.
"""
from __future__ import annotations

from fractions import Fraction


def _xgcd(a: int, b: int):
    """Return (g, x, y) with a*x + b*y = g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(rows) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped. Pivots are positive; entries above a pivot lie in
    ``[0, pivot)``.
    """
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        for i in range(r + 1, len(m)):
            if m[i][c] == 0:
                continue
            a, b = m[r][c], m[i][c]
            g, x, y = _xgcd(a, b)
            ua, ub = a // g, b // g
            row_r, row_i = m[r], m[i]
            m[r] = [x * p + y * q for p, q in zip(row_r, row_i)]
            m[i] = [ua * q - ub * p for p, q in zip(row_r, row_i)]
        if m[r][c] == 0:
            continue
        if m[r][c] < 0:
            m[r] = [-v for v in m[r]]
        piv = m[r][c]
        for i in range(r):
            q = m[i][c] // piv
            if q:
                m[i] = [p - q * v for p, v in zip(m[i], m[r])]
        r += 1
    return [row for row in m[:r] if any(row)]


def column_echelon(rows):
    """Unimodular column reduction.

    Returns ``(E, C, Cinv, rank)`` with ``rows @ C == E``, ``E`` lower
    echelon with its nonzero columns first, and ``C @ Cinv == I``.
    """
    A = [list(map(int, r)) for r in rows]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    C = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    Cinv = [row[:] for row in C]

    def colop(i, j, x, y, u, v):
        # new col i = x*col_i + y*col_j ; new col j = u*col_i + v*col_j (det 1)
        for M in (A, C):
            for row in M:
                a, b = row[i], row[j]
                row[i], row[j] = x * a + y * b, u * a + v * b
        # inverse acts on rows of Cinv: [[v, -u], [-y, x]] applied to rows i, j
        ri, rj = Cinv[i], Cinv[j]
        Cinv[i] = [v * p - u * q for p, q in zip(ri, rj)]
        Cinv[j] = [-y * p + x * q for p, q in zip(ri, rj)]

    col = 0
    for r in range(nrows):
        if col == ncols:
            break
        for j in range(col + 1, ncols):
            b = A[r][j]
            if b == 0:
                continue
            a = A[r][col]
            g, x, y = _xgcd(a, b)
            colop(col, j, x, y, -b // g, a // g)
        if A[r][col] != 0:
            if A[r][col] < 0:
                _negate_col(A, C, Cinv, col)
            col += 1
    return A, C, Cinv, col


def _negate_col(A, C, Cinv, i):
    for M in (A, C):
        for row in M:
            row[i] = -row[i]
    Cinv[i] = [-v for v in Cinv[i]]


def saturation(rows, ncols: int) -> list[list[int]]:
    """HNF basis of (Q-span of rows) intersected with Z^ncols."""
    rows = [list(map(int, r)) for r in rows if any(r)]
    if not rows:
        return []
    _, _, Cinv, rank = column_echelon(rows)
    return hnf(Cinv[:rank])


def in_lattice(basis_hnf, v) -> bool:
    """Membership of integer vector ``v`` in the lattice with HNF basis."""
    v = list(map(int, v))
    for row in basis_hnf:
        c = next(i for i, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def solve_integer(K, t):
    """Find integer y with ``K @ y == t`` or return None.

    ``K`` is an integer matrix (s x n), ``t`` an integer vector of length s.
    """
    K = [list(map(int, r)) for r in K]
    t = list(map(int, t))
    if not K:
        return None if any(t) else []
    n = len(K[0])
    E, C, _, rank = column_echelon(K)
    # Solve E z = t with E lower echelon; columns >= rank are zero.
    z = [0] * n
    col = 0
    for r, row in enumerate(E):
        acc = t[r] - sum(row[j] * z[j] for j in range(col))
        if col < rank and row[col] != 0:
            if acc % row[col]:
                return None
            z[col] = acc // row[col]
            col += 1
        elif acc != 0:
            return None
    return [sum(C[i][j] * z[j] for j in range(n)) for i in range(n)]


def integer_kernel(K, n: int | None = None) -> list[list[int]]:
    """HNF basis of the integer right kernel of ``K``."""
    K = [list(map(int, r)) for r in K]
    if n is None:
        n = len(K[0]) if K else 0
    if not K:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    _, C, _, rank = column_echelon(K)
    return hnf([[C[i][j] for i in range(n)] for j in range(rank, n)])


def rational_to_integer_rows(rows):
    """Scale each Fraction row to a primitive integer row (sign kept)."""
    from math import gcd, lcm

    out = []
    for r in rows:
        r = [Fraction(x) for x in r]
        d = lcm(*(x.denominator for x in r)) if r else 1
        ints = [int(x * d) for x in r]
        g = 0
        for x in ints:
            g = gcd(g, x)
        out.append([x // g for x in ints] if g else ints)
    return out

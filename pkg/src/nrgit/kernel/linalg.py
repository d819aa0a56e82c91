"""Exact linear algebra over Q and determinants of polynomial matrices."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def rref(rows):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of {v : rows · v = 0} as a list of vectors."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ncols = len(rows[0])
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        out.append(v)
    return out


def inverse(rows):
    n = len(rows)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in m]


def det_rational(rows):
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def matmul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def det_poly(rows, one=None):
    """Determinant of a square matrix of polynomials by Laplace expansion.

    Sub-determinants are memoized on (first row, column set), so the cost is
    O(n 2^n) products rather than n!.
    """
    n = len(rows)
    if n == 0:
        if one is None:
            raise ValueError("empty determinant needs an explicit one")
        return one
    memo = {}

    def sub(r, cols):
        if r == n:
            return None  # stands for 1
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc = None
        sign = 1
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            if entry:
                rest = sub(r + 1, cols[:pos] + cols[pos + 1:])
                term = entry if rest is None else entry * rest
                if rest is None or rest:
                    term = term if sign > 0 else -term
                    acc = term if acc is None else acc + term
            sign = -sign
        if acc is None:
            acc = rows[0][0] * 0
        memo[key] = acc
        return acc

    return sub(0, tuple(range(n)))


def minors(rows, size, one=None):
    """All size×size minors as a list of (row tuple, column tuple, value)."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    out = []
    for rs in combinations(range(nr), size):
        for cs in combinations(range(nc), size):
            sub = [[rows[i][j] for j in cs] for i in rs]
            out.append((rs, cs, det_poly(sub, one)))
    return out


def adjugate_column(rows, i, one):
    """Column ``i`` of the adjugate: entries (-1)^(i+j) det(M without row i, col j), j ranging over rows."""
    n = len(rows)
    out = []
    for j in range(n):
        sub = [[rows[a][b] for b in range(n) if b != j] for a in range(n) if a != i]
        d = det_poly(sub, one)
        out.append(d if (i + j) % 2 == 0 else -d)
    return out

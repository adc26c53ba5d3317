"""Small dense matrices over exact rational scalars.

A matrix is a tuple of row tuples whose entries are Python ints or
fractions.Fraction; mixed arithmetic stays exact.  Callers keep track of
shapes themselves (a 0-row or 0-column matrix cannot carry its other
dimension), so the graded-map layer only stores blocks whose shapes are
nonzero on both sides.
"""

from __future__ import annotations

from fractions import Fraction


def mat(rows):
    return tuple(tuple(v for v in row) for row in rows)


def zeros(r, c):
    return tuple((0,) * c for _ in range(r))


def eye(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def shape(a):
    return (len(a), len(a[0]) if a else 0)


def transpose(a):
    return tuple(zip(*a))


def mmul(a, b):
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {shape(a)} * {shape(b)}")
    if not b or not b[0]:
        return tuple(() for _ in a)
    cols = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def madd(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def msub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def smul(c, a):
    return tuple(tuple(c * x for x in row) for row in a)


def is_zero(a):
    return all(x == 0 for row in a for x in row)


def kron(a, b):
    """Kronecker product; index (i,j) of the product means i*rows(b)+j."""
    return tuple(
        tuple(x * y for x in arow for y in brow)
        for arow in a
        for brow in b
    )


def rank(a):
    """Row-reduce over the rationals; exact, no pivot tolerance."""
    rows = [[Fraction(x) for x in row] for row in a if any(x != 0 for x in row)]
    r = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = 1 / prow[col]
        rows[r] = [v * inv for v in prow]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r

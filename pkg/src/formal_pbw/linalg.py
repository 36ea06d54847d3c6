"""Exact linear algebra over the rationals.

Small and self-contained: reduced row echelon form over Fraction for span
arithmetic (membership, coordinates, complements) and a fraction-free
Bareiss elimination over cleared-denominator integer rows for ranks.
Vectors are tuples of Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

ZERO = Fraction(0)
ONE = Fraction(1)

Vector = tuple[Fraction, ...]


def vec(values) -> Vector:
    return tuple(Fraction(v) for v in values)


def zero_vec(n: int) -> Vector:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vector:
    """i is 1-based."""
    return tuple(ONE if j == i - 1 else ZERO for j in range(n))


def vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a: Vector) -> Vector:
    c = Fraction(c)
    return tuple(c * x for x in a)


def is_zero_vec(a: Vector) -> bool:
    return all(x == 0 for x in a)


class RowSpace:
    """A subspace kept in reduced row echelon form; rows can be added one at
    a time, which makes span closures and basis completion cheap."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[Vector] = []
        self.pivots: list[int] = []

    def reduce(self, v: Vector) -> Vector:
        """Remainder of v after elimination against the stored rows."""
        v = tuple(v)
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                c = v[p]
                v = tuple(x - c * y for x, y in zip(v, row))
        return v

    def add(self, v: Vector) -> bool:
        """Insert v into the span; returns True if the rank grew."""
        r = self.reduce(v)
        p = next((i for i, x in enumerate(r) if x), None)
        if p is None:
            return False
        r = vec_scale(ONE / r[p], r)
        # back-eliminate so the basis stays fully reduced
        for k in range(len(self.rows)):
            if self.rows[k][p]:
                self.rows[k] = tuple(x - self.rows[k][p] * y
                                     for x, y in zip(self.rows[k], r))
        pos = next((k for k, q in enumerate(self.pivots) if q > p), len(self.pivots))
        self.rows.insert(pos, r)
        self.pivots.insert(pos, p)
        return True

    def extend(self, vectors) -> None:
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, v: Vector) -> bool:
        return is_zero_vec(self.reduce(v))

    def coordinates(self, v: Vector) -> list[Fraction] | None:
        """Coefficients of v over the stored basis rows, or None."""
        v = tuple(v)
        coords = [ZERO] * len(self.rows)
        for k, (row, p) in enumerate(zip(self.rows, self.pivots)):
            if v[p]:
                coords[k] = v[p]
                v = tuple(x - coords[k] * y for x, y in zip(v, row))
        return coords if is_zero_vec(v) else None


def rank(rows) -> int:
    """Rank by fraction-free Bareiss elimination on denominator-cleared rows."""
    mat = []
    for r in rows:
        ints = [Fraction(x) for x in r]
        if all(x == 0 for x in ints):
            continue
        lcm = 1
        for x in ints:
            lcm = lcm * x.denominator // gcd(lcm, x.denominator)
        mat.append([int(x * lcm) for x in ints])
    if not mat:
        return 0
    ncols = len(mat[0])
    rk = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rk, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rk], mat[piv] = mat[piv], mat[rk]
        for i in range(rk + 1, len(mat)):
            if all(x == 0 for x in mat[i]):
                continue
            for j in range(col + 1, ncols):
                mat[i][j] = (mat[rk][col] * mat[i][j] - mat[i][col] * mat[rk][j]) // prev
            mat[i][col] = 0
        prev = mat[rk][col]
        rk += 1
        if rk == len(mat):
            break
    return rk


def solve(columns: list[Vector], target: Vector) -> list[Fraction] | None:
    """Solve sum_j x_j * columns[j] = target exactly; None if inconsistent."""
    n = len(target)
    m = len(columns)
    aug = [[columns[j][i] for j in range(m)] + [target[i]] for i in range(n)]
    piv_of_col: dict[int, int] = {}
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = ONE / aug[r][c]
        aug[r] = [inv * x for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_of_col[c] = r
        r += 1
    for i in range(r, n):
        if aug[i][m]:
            return None
    x = [ZERO] * m
    for c, i in piv_of_col.items():
        x[c] = aug[i][m]
    return x


def invert(columns: list[Vector]) -> list[Vector] | None:
    """Inverse of the square matrix with the given columns; None if singular.

    Returns the inverse as a list of rows, so coordinates of a vector v in
    the column basis are [dot(row, v) for row in inverse].
    """
    n = len(columns)
    if any(len(c) != n for c in columns):
        raise ValueError("matrix must be square")
    aug = [[columns[j][i] for j in range(n)] + [ONE if k == i else ZERO for k in range(n)]
           for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = ONE / aug[c][c]
        aug[c] = [inv * x for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [tuple(row[n:]) for row in aug]

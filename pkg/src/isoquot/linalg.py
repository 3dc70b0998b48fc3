"""Exact square matrices over cyclotomic fields."""
from __future__ import annotations

import math
from fractions import Fraction

from .exactnum import Cyclotomic, as_cyclotomic, root_of_unity


class DimensionMismatch(ValueError):
    pass


class CMatrix:
    """A DxD matrix whose entries share one (lifted) conductor."""

    __slots__ = ("dim", "rows", "M", "_key")

    def __init__(self, rows, M=None):
        rows = [[as_cyclotomic(x) for x in row] for row in rows]
        D = len(rows)
        if D == 0 or any(len(r) != D for r in rows):
            raise DimensionMismatch("matrix must be square and nonempty")
        if M is None:
            M = 1
            for r in rows:
                for x in r:
                    M = math.lcm(M, x.M)
        self.dim = D
        self.M = M
        self.rows = tuple(tuple(x.lift(M) for x in r) for r in rows)
        self._key = None

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def key(self):
        if self._key is None:
            self._key = (self.M, tuple(x.coeffs for r in self.rows for x in r))
        return self._key

    def __eq__(self, other):
        return mat_eq(self, other)

    def __hash__(self):
        return hash(tuple(hash(x) for r in self.rows for x in r))

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __mul__(self, c):
        return CMatrix([[x * c for x in r] for r in self.rows])

    __rmul__ = __mul__

    def __neg__(self):
        return CMatrix([[-x for x in r] for r in self.rows], self.M)

    def __add__(self, other):
        _same(self, other)
        return CMatrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        _same(self, other)
        return CMatrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __pow__(self, e):
        if e < 0:
            return inverse(self) ** (-e)
        result = identity(self.dim)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def trace(self):
        t = as_cyclotomic(0)
        for i in range(self.dim):
            t = t + self.rows[i][i]
        return t

    def galois(self, t):
        return CMatrix([[x.galois(t) for x in r] for r in self.rows], self.M)

    def to_text(self):
        return [x.to_text() for r in self.rows for x in r]

    @classmethod
    def from_text(cls, items):
        D = math.isqrt(len(items))
        if D * D != len(items):
            raise ValueError("serialized matrix must have a square number of entries")
        vals = [Cyclotomic.from_text(s) for s in items]
        return cls([vals[i * D:(i + 1) * D] for i in range(D)])

    def to_modp(self, p, root_of):
        """Entries mapped to F_p; root_of(M) returns an element of order M."""
        w = root_of(self.M)
        return [[x.to_modp(p, w) for x in r] for r in self.rows]

    def approx(self):
        return [[x.approx() for x in r] for r in self.rows]

    def __repr__(self):
        return "CMatrix(" + repr([[x.approx() for x in r] for r in self.rows]) + ")"


def _same(a, b):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim} differ")


def identity(D: int) -> CMatrix:
    return CMatrix([[1 if i == j else 0 for j in range(D)] for i in range(D)])


def scalar(D, c) -> CMatrix:
    return CMatrix([[c if i == j else 0 for j in range(D)] for i in range(D)])


def diag(entries) -> CMatrix:
    D = len(entries)
    return CMatrix([[entries[i] if i == j else 0 for j in range(D)] for i in range(D)])


def zero_matrix(D):
    return CMatrix([[0] * D for _ in range(D)])


def mat_mul(a: CMatrix, b: CMatrix) -> CMatrix:
    _same(a, b)
    M = math.lcm(a.M, b.M)
    A = [[x.lift(M) for x in r] for r in a.rows]
    B = [[x.lift(M) for x in r] for r in b.rows]
    D = a.dim
    cols = list(zip(*B))
    out = []
    for r in A:
        row = []
        for c in cols:
            acc = None
            for x, y in zip(r, c):
                if x and y:
                    t = x * y
                    acc = t if acc is None else acc + t
            row.append(acc if acc is not None else Cyclotomic.rational(0, M))
        out.append(row)
    return CMatrix(out, M)


def mat_eq(a: CMatrix, b: CMatrix) -> bool:
    if not isinstance(b, CMatrix):
        return NotImplemented
    if a.dim != b.dim:
        return False
    return all(x == y for r, s in zip(a.rows, b.rows) for x, y in zip(r, s))


def _eliminate(a: CMatrix):
    """Row-reduce a copy; returns (rank, det) using first-nonzero pivots."""
    D = a.dim
    m = [list(r) for r in a.rows]
    det = Cyclotomic.rational(1, a.M)
    rank = 0
    for col in range(D):
        piv = next((i for i in range(rank, D) if m[i][col]), None)
        if piv is None:
            det = Cyclotomic.rational(0, a.M)
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
            det = -det
        p = m[rank][col]
        det = det * p
        pinv = p.inv()
        for i in range(rank + 1, D):
            if m[i][col]:
                f = m[i][col] * pinv
                m[i] = [x - f * y if y else x for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank, det


def det(a: CMatrix) -> Cyclotomic:
    return _eliminate(a)[1]


def rank(a: CMatrix) -> int:
    return _eliminate(a)[0]


def inverse(a: CMatrix) -> CMatrix:
    D = a.dim
    m = [list(r) + [Cyclotomic.rational(1 if i == j else 0, a.M) for j in range(D)]
         for i, r in enumerate(a.rows)]
    for col in range(D):
        piv = next((i for i in range(col, D) if m[i][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        pinv = m[col][col].inv()
        m[col] = [x * pinv for x in m[col]]
        for i in range(D):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return CMatrix([r[D:] for r in m], a.M)


def has_eigenvalue_one(g: CMatrix) -> bool:
    return det(g - identity(g.dim)).is_zero()


def is_quasireflection(g: CMatrix) -> bool:
    I = identity(g.dim)
    if mat_eq(g, I):
        raise ValueError("the identity is not a quasireflection")
    return rank(g - I) == 1


def kron(x: CMatrix, y: CMatrix) -> CMatrix:
    D1, D2 = x.dim, y.dim
    rows = [[x.rows[i1][j1] * y.rows[i2][j2] for j1 in range(D1) for j2 in range(D2)]
            for i1 in range(D1) for i2 in range(D2)]
    return CMatrix(rows)


def block_diag(*blocks: CMatrix) -> CMatrix:
    D = sum(b.dim for b in blocks)
    rows = [[0] * D for _ in range(D)]
    off = 0
    for b in blocks:
        for i in range(b.dim):
            for j in range(b.dim):
                rows[off + i][off + j] = b.rows[i][j]
        off += b.dim
    return CMatrix(rows)


def block2(a, b, c, d) -> CMatrix:
    """[[a, b], [c, d]] from four equal-size blocks."""
    n = a.dim
    rows = []
    for top, bot in ((a, b), (c, d)):
        for i in range(n):
            rows.append(list(top.rows[i]) + list(bot.rows[i]))
    return CMatrix(rows)


def zeta_diag(exps, M) -> CMatrix:
    return diag([root_of_unity(e, M) for e in exps])


def rational_matrix(rows) -> CMatrix:
    return CMatrix([[Fraction(x) for x in r] for r in rows])

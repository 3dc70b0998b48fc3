"""Exact arithmetic in cyclotomic fields Q(zeta_M).

Elements are stored in the power basis of Q[x]/(Phi_M), so structural
equality is field equality.  Conductors are never minimized; binary
operations lift both operands to the lcm of their conductors.
"""
from __future__ import annotations

import cmath
import json
import math
import os
import re
import threading
from fractions import Fraction
from functools import lru_cache

CONDUCTOR_CAP = 10 ** 5


class InvalidConductor(ValueError):
    pass


class ConductorTooLarge(ValueError):
    pass


_lock = threading.Lock()
_phi_cache: dict[int, tuple[int, ...]] = {1: (-1, 1)}


@lru_cache(maxsize=None)
def _mobius(n):
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_divexact(num, den):
    # integer polynomials, den monic, low degree first
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dc in enumerate(den):
                num[i + j] -= c * dc
    assert not any(num), "inexact cyclotomic division"
    return out


CACHE_ENV = "ISOQUOT_CACHE_DIR"
_DISK_MIN = 200  # smaller polynomials are cheaper to recompute than to read


def _disk_path(M):
    root = os.environ.get(CACHE_ENV)
    return os.path.join(root, f"phi_{M}.json") if root else None


def cyclotomic_poly(M: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_M, low degree first.

    Large ones are also cached on disk when ISOQUOT_CACHE_DIR is set.
    """
    _check_conductor(M)
    got = _phi_cache.get(M)
    if got is not None:
        return got
    path = _disk_path(M) if M >= _DISK_MIN else None
    if path and os.path.exists(path):
        with open(path) as fh:
            res = tuple(json.load(fh))
    else:
        poly = [-1] + [0] * (M - 1) + [1]
        for e in _divisors(M)[:-1]:
            poly = _poly_divexact(poly, cyclotomic_poly(e))
        res = tuple(poly)
        if path:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            tmp = f"{path}.{os.getpid()}"
            with open(tmp, "w") as fh:
                json.dump(list(res), fh)
            os.replace(tmp, path)
    with _lock:
        _phi_cache[M] = res
    return res


def _check_conductor(M):
    if not isinstance(M, int) or M < 1:
        raise InvalidConductor(f"conductor must be a positive integer, got {M!r}")
    if M > CONDUCTOR_CAP:
        raise ConductorTooLarge(f"conductor {M} exceeds cap {CONDUCTOR_CAP}")


@lru_cache(maxsize=None)
def totient(M: int) -> int:
    return len(cyclotomic_poly(M)) - 1


@lru_cache(maxsize=4096)
def _power_table(M: int) -> tuple[tuple[int, ...], ...]:
    """x^j mod Phi_M for j in [0, M) as integer coefficient tuples."""
    phi = cyclotomic_poly(M)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg else []
    for _ in range(M):
        rows.append(tuple(cur))
        # multiply by x
        top = cur[-1] if deg else 0
        cur = [0] + cur[:-1] if deg else []
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


def _reduce(M, poly):
    """Reduce a Fraction/int polynomial of any degree mod Phi_M."""
    deg = totient(M)
    out = [Fraction(0)] * deg
    table = _power_table(M)
    for j, c in enumerate(poly):
        if c:
            row = table[j % M]
            for i, t in enumerate(row):
                if t:
                    out[i] += c * t
    return tuple(out)


class Cyclotomic:
    """An element of Q(zeta_M) in the power basis mod Phi_M.

    Monomials c*zeta_M^j are kept in that form until an addition forces
    the dense power-basis vector; products of monomials stay cheap, which
    covers the monomial matrices most representations are built from.
    """

    __slots__ = ("M", "_c", "_mono", "_hash")

    def __init__(self, M: int, coeffs):
        _check_conductor(M)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != totient(M):
            raise ValueError("coefficient vector length must equal deg Phi_M")
        self.M = M
        self._c = coeffs
        self._mono = None
        self._hash = None

    # constructors
    @classmethod
    def from_poly(cls, M, poly):
        _check_conductor(M)
        return _raw(M, _reduce(M, poly))

    @classmethod
    def monomial(cls, c, j, M):
        """c * zeta_M^j for rational c."""
        _check_conductor(M)
        c = Fraction(c)
        j %= M
        if c == 0:
            return _raw(M, (Fraction(0),) * totient(M))
        if M % 2 == 0 and c < 0:
            c, j = -c, (j + M // 2) % M
        obj = Cyclotomic.__new__(Cyclotomic)
        obj.M = M
        obj._c = None
        obj._mono = (c, j)
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q, M=1):
        return cls.monomial(q, 0, M)

    @property
    def coeffs(self):
        if self._c is None:
            c, j = self._mono
            self._c = tuple(c * t for t in _power_table(self.M)[j])
        return self._c

    # conversions
    def lift(self, M2: int) -> "Cyclotomic":
        if M2 == self.M:
            return self
        if M2 % self.M:
            raise ValueError(f"cannot lift conductor {self.M} to {M2}")
        step = M2 // self.M
        if self._mono is not None:
            c, j = self._mono
            return Cyclotomic.monomial(c, j * step, M2)
        poly = [Fraction(0)] * (step * len(self.coeffs) or 1)
        for i, c in enumerate(self.coeffs):
            poly[i * step] = c
        return Cyclotomic.from_poly(M2, poly)

    def _common(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.M)
        if other.M == self.M:
            return self, other
        L = math.lcm(self.M, other.M)
        return self.lift(L), other.lift(L)

    def is_zero(self):
        if self._mono is not None:
            return False
        return not any(self._c)

    def is_rational(self):
        if self._mono is not None:
            c, j = self._mono
            return j == 0 or 2 * j == self.M
        return not any(self._c[1:])

    def as_monomial(self):
        """(c, j) with self == c*zeta_M^j, or None if not a monomial."""
        if self._mono is None and not self.is_zero():
            nz = [i for i, x in enumerate(self._c) if x]
            if len(nz) == 1:
                self._mono = Cyclotomic.monomial(self._c[nz[0]], nz[0], self.M)._mono
        return self._mono

    def __bool__(self):
        return not self.is_zero()

    # arithmetic
    def __add__(self, other):
        a, b = self._common(other)
        if b.is_zero():
            return a
        if a.is_zero():
            return b
        return _raw(a.M, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        if self._mono is not None:
            c, j = self._mono
            return Cyclotomic.monomial(-c, j, self.M)
        return _raw(self.M, tuple(-x for x in self._c))

    def __sub__(self, other):
        a, b = self._common(other)
        if b.is_zero():
            return a
        return _raw(a.M, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyclotomic):
            q = Fraction(other)
            if self._mono is not None:
                c, j = self._mono
                return Cyclotomic.monomial(c * q, j, self.M)
            return _raw(self.M, tuple(x * q for x in self._c))
        a, b = self._common(other)
        am, bm = a._mono, b._mono
        if am is not None and bm is not None:
            return Cyclotomic.monomial(am[0] * bm[0], am[1] + bm[1], a.M)
        if a.is_zero() or b.is_zero():
            return _raw(a.M, (Fraction(0),) * totient(a.M))
        if am is not None or bm is not None:
            (c, j), dense = (am, b) if am is not None else (bm, a)
            poly = [Fraction(0)] * j + [c * x for x in dense.coeffs]
            return Cyclotomic.from_poly(a.M, poly)
        n = len(a.coeffs)
        prod = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic.from_poly(a.M, prod)

    __rmul__ = __mul__

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        mono = self.as_monomial()
        if mono is not None:
            return Cyclotomic.monomial(1 / mono[0], -mono[1], self.M)
        phi = [Fraction(c) for c in cyclotomic_poly(self.M)]
        s = _poly_inverse(list(self._c), phi)
        return Cyclotomic.from_poly(self.M, s)

    def __truediv__(self, other):
        if not isinstance(other, Cyclotomic):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / q)
        a, b = self._common(other)
        return a * b.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        if self._mono is not None:
            c, j = self._mono
            return Cyclotomic.monomial(c ** e, j * e, self.M)
        result = Cyclotomic.rational(1, self.M)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def galois(self, t: int) -> "Cyclotomic":
        """Apply the automorphism zeta_M -> zeta_M^t, gcd(t, M) = 1."""
        if math.gcd(t, self.M) != 1:
            raise ValueError("Galois exponent must be a unit mod the conductor")
        if self._mono is not None:
            c, j = self._mono
            return Cyclotomic.monomial(c, j * t, self.M)
        poly = [Fraction(0)] * self.M
        for j, c in enumerate(self._c):
            poly[(j * t) % self.M] += c
        return Cyclotomic.from_poly(self.M, poly)

    def conj(self):
        return self.galois(-1)

    # comparison
    def __eq__(self, other):
        if not isinstance(other, Cyclotomic):
            try:
                other = Cyclotomic.rational(other, self.M)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._common(other)
        if a._mono is not None and b._mono is not None:
            return a._mono == b._mono
        return a.coeffs == b.coeffs

    def __hash__(self):
        # the normalized trace to Q is invariant under lifting
        if self._hash is None:
            self._hash = hash(self.normalized_trace())
        return self._hash

    def normalized_trace(self) -> Fraction:
        """Tr(a) / [Q(zeta_M):Q], independent of the conductor used."""
        M = self.M
        if self._mono is not None:
            c, j = self._mono
            e = M // math.gcd(j, M)
            return c * Fraction(_mobius(e), totient(e))
        acc = Fraction(0)
        for j, c in enumerate(self._c):
            if c:
                e = M // math.gcd(j, M)
                acc += c * Fraction(_mobius(e), totient(e))
        return acc

    def approx(self) -> complex:
        """Floating embedding zeta_M -> exp(2 pi i / M); diagnostics only."""
        if self._mono is not None:
            c, j = self._mono
            return float(c) * cmath.exp(2j * math.pi * j / self.M)
        w = cmath.exp(2j * math.pi / self.M)
        return sum(complex(float(c)) * w ** j for j, c in enumerate(self._c))

    def to_modp(self, p: int, w: int) -> int:
        """Image under zeta_M -> w in F_p, where w has order M mod p."""
        if self._mono is not None:
            c, j = self._mono
            return c.numerator * pow(c.denominator, -1, p) * pow(w, j, p) % p
        acc = 0
        wj = 1
        for c in self._c:
            if c:
                acc += c.numerator * pow(c.denominator, -1, p) * wj
            wj = wj * w % p
        return acc % p

    def to_text(self) -> str:
        return f"c[{self.M}]:(" + ",".join(_qstr(c) for c in self.coeffs) + ")"

    @classmethod
    def from_text(cls, s: str) -> "Cyclotomic":
        mt = _TEXT_RE.fullmatch(s.strip())
        if not mt:
            raise ValueError(f"bad cyclotomic literal {s!r}")
        M = int(mt.group(1))
        body = mt.group(2).strip()
        parts = [Fraction(x) for x in body.split(",")] if body else []
        return cls(M, parts)

    def __repr__(self):
        return self.to_text()


_TEXT_RE = re.compile(r"c\[(\d+)\]:\((.*)\)")


def _qstr(q: Fraction):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _raw(M, coeffs):
    obj = Cyclotomic.__new__(Cyclotomic)
    obj.M = M
    obj._c = coeffs
    obj._mono = None
    obj._hash = None
    return obj


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bc in enumerate(b):
                a[i + j] -= c * bc
    return _trim(q), _trim(a[: len(b) - 1])


def _poly_sub_mul(a, q, b):
    # a - q*b
    out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, x in enumerate(q):
        for j, y in enumerate(b):
            out[i + j] -= x * y
    return _trim(out)


def _poly_inverse(a, mod):
    """Inverse of a modulo the irreducible polynomial mod (extended Euclid)."""
    r0, r1 = _trim(list(mod)), _trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub_mul(s0, q, s1)
    c = r1[0]
    return [x / c for x in s1]


def root_of_unity(j: int, M: int) -> Cyclotomic:
    """zeta_M^j in canonical form."""
    if M == 0:
        raise InvalidConductor("conductor must be positive")
    return Cyclotomic.monomial(1, j, M)


def zero(M=1):
    return Cyclotomic.rational(0, M)


def one(M=1):
    return Cyclotomic.rational(1, M)


def as_cyclotomic(x) -> Cyclotomic:
    return x if isinstance(x, Cyclotomic) else Cyclotomic.rational(x)


def sqrt2() -> Cyclotomic:
    return root_of_unity(1, 8) + root_of_unity(7, 8)


def sqrt5() -> Cyclotomic:
    e = root_of_unity
    return 1 + 2 * (e(1, 5) + e(4, 5))

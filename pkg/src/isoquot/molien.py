"""Molien series of finite matrix groups, Stanley symmetry and the
Shephard-Todd smoothness test.

Every denominator det(I - t g) is a product of factors 1 - zeta t, so the
series has a rational denominator that is a product of cyclotomic
polynomials known in advance from the eigenvalue orders.  The numerator is
then recovered exactly from power-series coefficients, which are computed
modulo several primes and lifted by the Chinese remainder theorem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import isprime, primitive_root
from sympy.ntheory.modular import crt

from . import kernel
from .exactnum import cyclotomic_poly
from .groups import MatrixGroup, _subgroup_closure
from .kernel import BoundExceeded
from .modp import Field

DEFAULT_BOUND = 2000


# ---------------------------------------------------------------- integer polynomials

def _trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def pdivmod(a, b):
    """Division by a polynomial with leading coefficient +-1."""
    a = list(a)
    b = _trim(b)
    lead = b[-1]
    if abs(lead) != 1:
        raise ValueError("divisor must have unit leading coefficient")
    q = [0] * max(len(a) - len(b) + 1, 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return _trim(q), _trim(a[:len(b) - 1] or [0])


def _phi_star(o):
    """Cyclotomic factor normalized to constant term 1."""
    c = list(cyclotomic_poly(o))
    return [-x for x in c] if c[0] < 0 else c


def _fmt_poly(a):
    terms = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if mono and abs(c) == 1:
            coef = "-" if c < 0 else "+"
        else:
            coef = f"{c:+d}"
            if mono:
                coef += "*"
        terms.append(coef + mono)
    if not terms:
        return "0"
    s = "".join(terms)
    return s[1:] if s[0] == "+" else s


# ---------------------------------------------------------------- rational functions

@dataclass(frozen=True)
class RationalFunction:
    """num(t)/den(t) over the integers, lowest terms, den(0) = 1.

    Coefficient lists run from the constant term upwards.
    """
    num: tuple
    den: tuple

    def __call__(self, t):
        return (sum(c * t ** i for i, c in enumerate(self.num))
                / sum(c * t ** i for i, c in enumerate(self.den)))

    def series(self, degree: int = 12) -> list:
        """Power-series coefficients up to t^degree by long division."""
        if self.den[0] != 1:
            raise ValueError("denominator must have constant term 1")
        out = []
        for s in range(degree + 1):
            c = self.num[s] if s < len(self.num) else 0
            for k in range(1, min(s, len(self.den) - 1) + 1):
                c -= self.den[k] * out[s - k]
            out.append(c)
        return out

    def denominator_factors(self):
        """(numerator, [k, ...]) with den = prod (1 - t^k) after padding."""
        rem = {}
        den = list(self.den)
        for o in range(1, len(den) + 1):
            phi = _phi_star(o)
            while len(den) > 1:
                q, r = pdivmod(den, phi)
                if any(r):
                    break
                den = q
                rem[o] = rem.get(o, 0) + 1
        num = list(self.num)
        ks = []
        while any(v > 0 for v in rem.values()):
            k = max(o for o, v in rem.items() if v > 0)
            ks.append(k)
            for dvs in range(1, k + 1):
                if k % dvs == 0:
                    rem[dvs] = rem.get(dvs, 0) - 1
                    if rem[dvs] < 0:
                        num = pmul(num, _phi_star(dvs))
                        rem[dvs] = 0
        return num, sorted(ks)

    def to_text(self) -> str:
        num, ks = self.denominator_factors()
        ntext = _fmt_poly(num)
        if sum(1 for c in num if c) > 1:
            ntext = f"({ntext})"
        if not ks:
            return ntext
        parts = []
        for k in sorted(set(ks), reverse=True):
            e = ks.count(k)
            f = "(1-t)" if k == 1 else f"(1-t^{k})"
            parts.append(f if e == 1 else f"{f}^{e}")
        return f"{ntext}/{''.join(parts)}"

    def __str__(self):
        return self.to_text()


def _reduce(num, den_factors):
    """Cancel common cyclotomic factors; den_factors maps order -> multiplicity."""
    num = list(num)
    for o in sorted(den_factors):
        phi = _phi_star(o)
        while den_factors[o] > 0 and any(num):
            q, r = pdivmod(num, phi)
            if any(r):
                break
            num = q
            den_factors[o] -= 1
    den = [1]
    for o in sorted(den_factors):
        for _ in range(den_factors[o]):
            den = pmul(den, _phi_star(o))
    return RationalFunction(tuple(_trim(num)), tuple(den))


# ---------------------------------------------------------------- eigenvalues

def _charpolys(elems, D, p):
    """Coefficients e_1..e_D of prod (x - lambda) in elementary-symmetric form."""
    pt = kernel.power_traces(elems, D, p, D + 1)[:, 1:]
    N = len(elems)
    e = np.zeros((N, D + 1), dtype=np.int64)
    e[:, 0] = 1
    for k in range(1, D + 1):
        acc = np.zeros(N, dtype=np.int64)
        for i in range(1, k + 1):
            term = e[:, k - i] * pt[:, i - 1] % p
            acc = (acc + term) % p if i % 2 else (acc - term) % p
        e[:, k] = acc * pow(k, p - 2, p) % p
    return e


def _eigen_classes(G: MatrixGroup, E: int):
    """{sorted eigenvalue exponents mod E: element count}."""
    K = math.lcm(G.field.K, E)
    F = Field(K)
    D = G.dim
    rows = np.array([F.matrix(g) for g in G.gens.values()], dtype=np.int64)
    elems = kernel.eval_tree(rows, G.parent, G.via, D, F.p)
    e = _charpolys(elems, D, F.p)
    uniq, counts = np.unique(e, axis=0, return_counts=True)
    w = F.root_of(E)
    pw = [pow(w, j, F.p) for j in range(E)]
    out = {}
    for row, cnt in zip(uniq, counts):
        # x^D - e1 x^(D-1) + e2 x^(D-2) - ...
        poly = [int(row[k]) * (-1) ** k % F.p for k in range(D + 1)]
        roots = []
        for j in range(E):
            x = pw[j]
            while len(poly) > 1:
                acc = 0
                quo = []
                for c in poly:
                    acc = (acc * x + c) % F.p
                    quo.append(acc)
                if acc:
                    break
                roots.append(j)
                poly = quo[:-1]
        if len(roots) != D:
            raise ArithmeticError("eigenvalues are not E-th roots of unity")
        key = tuple(sorted(roots))
        out[key] = out.get(key, 0) + int(cnt)
    return out


@lru_cache(maxsize=None)
def _crt_primes(E: int, count: int):
    out = []
    q = ((1 << 31) // E) * E + 1
    while len(out) < count:
        q -= E
        if q < 1 << 20:
            raise ValueError("ran out of primes")
        if isprime(q):
            out.append(q)
    return tuple(out)


def _series_mod(classes, order, E, q, S):
    """Molien coefficients h_0..h_S modulo q."""
    w = pow(primitive_root(q), (q - 1) // E, q)
    keys = list(classes)
    N = len(keys[0])
    lam = np.array([[pow(w, a, q) for a in k] for k in keys], dtype=np.int64)
    cnt = np.array([classes[k] % q for k in keys], dtype=np.int64)
    C = len(keys)
    e = np.zeros((C, N + 1), dtype=np.int64)
    e[:, 0] = 1
    for i in range(N):
        for k in range(i + 1, 0, -1):
            e[:, k] = (e[:, k] + e[:, k - 1] * lam[:, i]) % q
    coef = [((-1) ** (k + 1) * e[:, k]) % q for k in range(1, N + 1)]
    h = np.zeros((S + 1, C), dtype=np.int64)
    h[0] = 1
    for s in range(1, S + 1):
        acc = np.zeros(C, dtype=np.int64)
        for k in range(1, min(s, N) + 1):
            acc = (acc + coef[k - 1] * h[s - k]) % q
        h[s] = acc
    tot = (h * cnt) % q
    tot = tot.sum(axis=1) % q
    return tot * pow(order, q - 2, q) % q


def molien_series(G: MatrixGroup, bound: int = DEFAULT_BOUND) -> RationalFunction:
    """H(t) = (1/|G|) sum_g 1/det(I - t g), exactly."""
    if G.order > bound:
        raise BoundExceeded(f"group order {G.order} exceeds {bound}")
    E = G.exponent
    N = G.dim
    classes = _eigen_classes(G, E)
    mult = {}
    for key in classes:
        local = {}
        for a in key:
            o = E // math.gcd(a, E)
            local[o] = local.get(o, 0) + 1
        for o, c in local.items():
            mult[o] = max(mult.get(o, 0), c)
    Q = [1]
    for o in sorted(mult):
        for _ in range(mult[o]):
            Q = pmul(Q, _phi_star(o))
    degQ = len(Q) - 1
    S = degQ + 2
    bound_h = math.comb(S + N - 1, N - 1)
    primes = []
    prod = 1
    count = 1
    while prod <= 2 * bound_h:
        primes = _crt_primes(E, count)
        prod = math.prod(primes)
        count += 1
    residues = [_series_mod(classes, G.order, E, q, S) for q in primes]
    h = []
    for s in range(S + 1):
        v, _ = crt(primes, [int(r[s]) for r in residues])
        h.append(int(v))
    P = [sum(h[s - i] * Q[i] for i in range(min(s, degQ) + 1)) for s in range(S + 1)]
    if any(P[degQ - N + 1:]):
        raise ArithmeticError("numerator degree exceeds the expected bound")
    return _reduce(P[:max(degQ - N + 1, 1)], dict(mult))


def _reverse(a, deg):
    a = list(a) + [0] * (deg + 1 - len(a))
    return a[::-1]


def gorenstein_symmetry(H: RationalFunction, N: int) -> bool:
    """H(1/t) == (-1)^N t^N H(t) as rational functions."""
    a = len(H.num) - 1
    b = len(H.den) - 1
    # H(1/t) = t^(b-a) num*(t) / den*(t)
    lhs = pmul(_reverse(H.num, a), list(H.den))
    rhs = pmul(list(H.num), _reverse(H.den, b))
    shift = N + a - b
    if shift >= 0:
        rhs = [0] * shift + rhs
    else:
        lhs = [0] * (-shift) + lhs
    rhs = [(-1) ** N * c for c in rhs]
    return _trim(lhs) == _trim(rhs)


def shephard_todd_smooth(G: MatrixGroup, bound: int = DEFAULT_BOUND) -> bool:
    """True iff the quasireflections of G generate G."""
    if G.order > bound:
        raise BoundExceeded(f"group order {G.order} exceeds {bound}")
    seeds = [int(i) for i in np.nonzero(G.quasireflection_flags)[0]]
    sub = _subgroup_closure(G, seeds, G.order)
    return sub is not None and len(sub) == G.order

"""Finite-field images of cyclotomic matrices.

A prime p = 1 (mod K) splits completely in Q(zeta_K), so zeta_K can be
sent to an element of order K in F_p.  The kernel of reduction on a finite
matrix group is a pro-p group and is torsion free for unramified p > 2,
so reduction is injective on every finite group we build.  Matrix entries
stay below 2^25, which keeps int64 dot products of length < 2^13 exact.
"""
from __future__ import annotations

from functools import lru_cache

from sympy import isprime, primitive_root

PRIME_LO = 1 << 24
PRIME_HI = 1 << 25


@lru_cache(maxsize=None)
def prime_for(K: int) -> int:
    """Smallest prime p = 1 (mod K) with 2^24 < p < 2^25 and p > 5."""
    step = 2 * K if K % 2 else K
    p = (PRIME_LO // step + 1) * step + 1
    while p < PRIME_HI:
        if isprime(p):
            return p
        p += step
    raise ValueError(f"no suitable prime for modulus {K}")


class Field:
    """F_p together with a compatible choice of roots of unity."""

    def __init__(self, K: int):
        self.K = K
        self.p = prime_for(K)
        self.g = primitive_root(self.p)
        self.zeta_K = pow(self.g, (self.p - 1) // K, self.p)

    def root_of(self, M: int) -> int:
        """Image of zeta_M for M | K, compatible across divisors of K."""
        if self.K % M:
            raise ValueError(f"conductor {M} does not divide {self.K}")
        return pow(self.zeta_K, self.K // M, self.p)

    def matrix(self, a):
        """Flat list image of a CMatrix."""
        p = self.p
        w = self.root_of(a.M)
        return [x.to_modp(p, w) for r in a.rows for x in r]

    def scalar(self, x):
        return x.to_modp(self.p, self.root_of(x.M))

    def __repr__(self):
        return f"Field(K={self.K}, p={self.p})"

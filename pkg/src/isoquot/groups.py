"""Group specifications of types I-VI and finite matrix groups.

Closure runs in F_p (see modp) through the selected kernel; exact
matrices are materialized lazily along the breadth-first tree.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from sympy import factorint

from . import kernel
from .kernel import BoundExceeded
from .linalg import CMatrix, has_eigenvalue_one, identity, is_quasireflection, mat_eq
from .modp import Field

KINDS = ("I", "II", "III", "IV", "V", "VI", "Q2a", "Tstar_v", "Ostar_v", "Istar")
DEFAULT_BOUND = 500


class InvalidSpec(ValueError):
    pass


def mult_order(r: int, m: int) -> int:
    """Multiplicative order of r modulo m (1 when m = 1)."""
    if m == 1:
        return 1
    r %= m
    if math.gcd(r, m) != 1:
        raise ValueError(f"{r} is not a unit mod {m}")
    d, x = 1, r
    while x != 1:
        x = x * r % m
        d += 1
    return d


def val3(n: int) -> int:
    v = 0
    while n % 3 == 0:
        n //= 3
        v += 1
    return v


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    m: Optional[int] = None
    n: Optional[int] = None
    r: Optional[int] = None
    l: Optional[int] = None
    k: Optional[int] = None
    v: Optional[int] = None
    a: Optional[int] = None

    # derived data
    @property
    def d(self) -> int:
        if self.kind in ("Q2a", "Tstar_v", "Ostar_v", "Istar"):
            return 1
        return mult_order(self.r, self.m)

    @property
    def v3(self) -> int:
        """3-adic valuation of n (types III/IV)."""
        return val3(self.n)

    @property
    def n2(self) -> int:
        """n'' = n / 3^v."""
        return self.n // 3 ** self.v3

    @property
    def case(self) -> Optional[str]:
        """Case split of types III/IV: '1' (9 does not divide n), '2', '3' (3 | d)."""
        if self.kind not in ("III", "IV"):
            return None
        if self.n % 9:
            return "1"
        return "3" if self.d % 3 == 0 else "2"

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, obj):
        return cls(**{k: obj.get(k) for k in ("kind", "m", "n", "r", "l", "k", "v", "a")})

    def label(self):
        parts = [f"{k}={v}" for k, v in asdict(self).items() if k != "kind" and v is not None]
        return f"{self.kind}(" + ",".join(parts) + ")"


def _type_i_violations(m, n, r):
    out = []
    if m is None or n is None or r is None:
        return ["m, n and r are required"]
    if m < 1:
        out.append("m >= 1")
    if n < 1:
        out.append("n >= 1")
    if out:
        return out
    if math.gcd(n * (r - 1), m) != 1:
        out.append("(n(r-1), m) = 1")
    if math.gcd(r, m) != 1:
        out.append("r must be a unit mod m")
        return out
    if pow(r, n, m) != 1 % m:
        out.append("r^n = 1 (mod m)")
        return out
    d = mult_order(r, m)
    for q in factorint(d):
        if (n // d) % q:
            out.append("every prime divisor of d divides n/d")
            break
    return out


def validate_spec(s: GroupSpec) -> list[str]:
    """Violated conditions (empty list means valid)."""
    if s.kind not in KINDS:
        return [f"unknown kind {s.kind!r}"]
    if s.kind == "Q2a":
        return [] if s.a is not None and s.a >= 3 else ["a >= 3"]
    if s.kind in ("Tstar_v", "Ostar_v"):
        return [] if s.v is not None and s.v >= 1 else ["v >= 1"]
    if s.kind == "Istar":
        return []
    out = _type_i_violations(s.m, s.n, s.r)
    if out:
        return out
    m, n, r, l, k = s.m, s.n, s.r, s.l, s.k
    needs_lk = s.kind in ("II", "IV", "VI")
    if needs_lk and (l is None or k is None):
        return ["l and k are required"]
    if s.kind == "II":
        u = (n & -n).bit_length() - 1
        if u < 2:
            out.append("n = 2^u v with u >= 2")
        elif (k + 1) % (1 << u):
            out.append("k = -1 (mod 2^u)")
        if (k * k - 1) % n:
            out.append("k^2 = 1 (mod n)")
        if (l * l - 1) % m:
            out.append("l^2 = 1 (mod m)")
        if m > 1 and _neg_pow_check(r, k - 1, m):
            out.append("r^(k-1) = 1 (mod m)")
    if s.kind in ("III", "IV"):
        if n % 2 == 0:
            out.append("n must be odd")
        if n % 3:
            out.append("n = 0 (mod 3)")
    if s.kind == "IV":
        if (k * k - 1) % n:
            out.append("k^2 = 1 (mod n)")
        if (k + 1) % 3:
            out.append("k = -1 (mod 3)")
        if m > 1 and _neg_pow_check(r, k - 1, m):
            out.append("r^(k-1) = 1 (mod m)")
        if (l * l - 1) % m:
            out.append("l^2 = 1 (mod m)")
    if s.kind in ("V", "VI"):
        if math.gcd(m * n, 30) != 1:
            out.append("order of K coprime with 30")
    if s.kind == "VI":
        if (l * l - 1) % m:
            out.append("l^2 = 1 (mod m)")
        if (k * k - 1) % n:
            out.append("k^2 = 1 (mod n)")
        if m > 1 and _neg_pow_check(r, k - 1, m):
            out.append("r^(k-1) = 1 (mod m)")
    if needs_lk and m > 1 and math.gcd(l, m) != 1:
        out.append("l must be a unit mod m")
    if needs_lk and math.gcd(k, n) != 1:
        out.append("k must be a unit mod n")
    return out


def _neg_pow_check(r, e, m):
    """True when r^e != 1 (mod m); e may be negative."""
    return pow(r, e % mult_order(r, m), m) != 1


def is_valid(s: GroupSpec) -> bool:
    return not validate_spec(s)


def abstract_order(s: GroupSpec) -> int:
    bad = validate_spec(s)
    if bad:
        raise InvalidSpec(f"{s.label()}: " + "; ".join(bad))
    if s.kind == "Q2a":
        return 2 ** s.a
    if s.kind == "Tstar_v":
        return 8 * 3 ** s.v
    if s.kind == "Ostar_v":
        return 16 * 3 ** s.v
    if s.kind == "Istar":
        return 120
    mult = {"I": 1, "II": 2, "III": 8, "IV": 16, "V": 120, "VI": 240}[s.kind]
    return mult * s.m * s.n


def is_trivial(s: GroupSpec) -> bool:
    return s.kind == "I" and s.m == 1 and s.n == 1


# ---------------------------------------------------------------- matrix groups

@dataclass
class MatrixGroup:
    """Finite matrix group stored as its F_p image plus a word tree."""

    dim: int
    gens: dict
    field: Field
    elems: np.ndarray
    parent: np.ndarray
    via: np.ndarray
    _exact: dict = field(default_factory=dict, repr=False)
    _index: Optional[dict] = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.elems)

    def __len__(self):
        return len(self.elems)

    @property
    def labels(self):
        return list(self.gens)

    @property
    def p(self):
        return self.field.p

    def exact(self, i: int) -> CMatrix:
        """Exact matrix of element i, rebuilt along the tree."""
        if i == 0:
            return identity(self.dim)
        got = self._exact.get(i)
        if got is None:
            chain = []
            j = i
            while j > 0 and j not in self._exact:
                chain.append(j)
                j = int(self.parent[j])
            cur = identity(self.dim) if j == 0 else self._exact[j]
            gens = list(self.gens.values())
            for j in reversed(chain):
                cur = cur @ gens[int(self.via[j])]
                self._exact[j] = cur
            got = cur
        return got

    def elements(self):
        return [self.exact(i) for i in range(self.order)]

    def word(self, i: int) -> list:
        labels = self.labels
        out = []
        while i > 0:
            out.append(labels[int(self.via[i])])
            i = int(self.parent[i])
        return out[::-1]

    def index_of_modp(self, row) -> Optional[int]:
        if self._index is None:
            self._index = {r.tobytes(): i for i, r in enumerate(self.elems)}
        return self._index.get(np.asarray(row, dtype=np.int64).tobytes())

    def index_of(self, g: CMatrix) -> Optional[int]:
        i = self.index_of_modp(self.field.matrix(g))
        if i is None or not mat_eq(self.exact(i), g):
            return None
        return i

    def __contains__(self, g: CMatrix) -> bool:
        return self.index_of(g) is not None

    def mul_index(self, i: int, j: int) -> int:
        D, p = self.dim, self.p
        prod = self.elems[i].reshape(D, D) @ self.elems[j].reshape(D, D) % p
        return self.index_of_modp(prod.reshape(-1))

    def _batch_pow(self, exps) -> np.ndarray:
        """elems[i] ** exps[i] for all i, flattened rows."""
        D, p, N = self.dim, self.p, self.order
        out = np.broadcast_to(np.eye(D, dtype=np.int64), (N, D, D)).copy()
        base = self.elems.reshape(N, D, D).copy()
        e = np.asarray(exps, dtype=np.int64).copy()
        while e.any():
            odd = (e & 1).astype(bool)
            if odd.any():
                out[odd] = np.matmul(out[odd], base[odd]) % p
            e >>= 1
            if e.any():
                base = np.matmul(base, base) % p
        return out.reshape(N, D * D)

    @cached_property
    def element_orders(self) -> np.ndarray:
        N = self.order
        ident = np.eye(self.dim, dtype=np.int64).reshape(-1)
        orders = np.full(N, N, dtype=np.int64)
        for q in _primes(N) if N > 1 else []:
            while True:
                cand = np.where(orders % q == 0, orders // q, orders)
                hit = (self._batch_pow(cand) == ident).all(axis=1) & (cand != orders)
                if not hit.any():
                    break
                orders[hit] = cand[hit]
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    @cached_property
    def eigen_one_flags(self) -> np.ndarray:
        """flags[i] is True iff element i has eigenvalue 1 (exactly confirmed)."""
        dets = kernel.det_minus_identity(self.elems, self.dim, self.p)
        flags = dets == 0
        for i in np.nonzero(flags)[0]:
            if i and not has_eigenvalue_one(self.exact(int(i))):
                flags[i] = False
        return flags

    @cached_property
    def quasireflection_flags(self) -> np.ndarray:
        ranks = kernel.rank_minus_identity(self.elems, self.dim, self.p)
        flags = ranks == 1
        for i in np.nonzero(ranks <= 1)[0]:
            if i:
                flags[i] = is_quasireflection(self.exact(int(i)))
        flags[0] = False
        return flags

    def traces_modp(self) -> np.ndarray:
        D = self.dim
        return self.elems[:, :: D + 1].sum(axis=1) % self.p

    @cached_property
    def inverse_index(self) -> np.ndarray:
        """inv[i] is the index of the inverse of element i.

        With h_i = (g_i^-1)^T the tree recursion g_i = g_parent s becomes
        h_i = h_parent (s^-1)^T, which the kernel evaluates directly.
        """
        D, p = self.dim, self.p
        gi = []
        for g in self.gens.values():
            rows = np.array(self.field.matrix(g), dtype=np.int64).reshape(D, D)
            gi.append(_inv_modp(rows, p).T.reshape(-1))
        H = kernel.eval_tree(np.array(gi), self.parent, self.via, D, p)
        H = H.reshape(-1, D, D).transpose(0, 2, 1).reshape(-1, D * D)
        return np.array([self.index_of_modp(np.ascontiguousarray(r)) for r in H], dtype=np.int64)

    def evaluate_on_tree(self, gens: dict) -> "MatrixGroup":
        """Same abstract elements under other generator images (same labels, same field)."""
        gens = dict(gens)
        if list(gens) != self.labels:
            raise ValueError("generator labels must match")
        mats = list(gens.values())
        D = mats[0].dim
        rows = np.array([self.field.matrix(g) for g in mats], dtype=np.int64)
        elems = kernel.eval_tree(rows, self.parent, self.via, D, self.p)
        return MatrixGroup(D, gens, self.field, elems, self.parent, self.via)


def _inv_modp(a, p):
    D = len(a)
    m = [[int(x) % p for x in row] + [1 if i == j else 0 for j in range(D)]
         for i, row in enumerate(a)]
    for c in range(D):
        piv = next(i for i in range(c, D) if m[i][c])
        m[c], m[piv] = m[piv], m[c]
        iv = pow(m[c][c], p - 2, p)
        m[c] = [x * iv % p for x in m[c]]
        for i in range(D):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return np.array([r[D:] for r in m], dtype=np.int64)


def _field_for(gens, extra=1):
    K = extra
    for g in gens:
        K = math.lcm(K, g.M)
    return Field(math.lcm(K, 2))


def generate(gens, max_order: int = 5000, extra_conductor: int = 1,
             field: Optional[Field] = None) -> MatrixGroup:
    """Closure of labeled generators (dict label -> CMatrix or list of pairs)."""
    gens = dict(gens)
    mats = list(gens.values())
    if not mats:
        raise ValueError("need at least one generator")
    D = mats[0].dim
    if any(g.dim != D for g in mats):
        raise ValueError("generators must share one dimension")
    F = field if field is not None else _field_for(mats, extra_conductor)
    rows = np.array([F.matrix(g) for g in mats], dtype=np.int64)
    elems, parent, via = kernel.closure(rows, D, F.p, max_order)
    return MatrixGroup(D, gens, F, elems, parent, via)


def generate_exact(gens, max_order: int = 2000) -> list:
    """Plain exact closure; slow, used as an independent check."""
    mats = list(dict(gens).values())
    D = mats[0].dim
    I = identity(D)
    seen = {I: None}
    out = [I]
    head = 0
    while head < len(out):
        g = out[head]
        head += 1
        for h in mats:
            x = g @ h
            if x not in seen:
                seen[x] = None
                out.append(x)
                if len(out) > max_order:
                    raise BoundExceeded(f"closure exceeded {max_order} elements")
    return out


def is_fixed_point_free(G: MatrixGroup) -> bool:
    return not G.eigen_one_flags[1:].any()


def fpf_flags_of_sum(groups) -> np.ndarray:
    """Eigenvalue-1 flags of a direct sum evaluated on one shared tree."""
    flags = np.zeros(groups[0].order, dtype=bool)
    for G in groups:
        flags |= G.eigen_one_flags
    return flags


# ---------------------------------------------------------------- subgroups

def _subgroup_closure(G: MatrixGroup, seeds, limit):
    """Index set of <seeds>, or None once it exceeds limit elements."""
    members = [0]
    seen = {0}
    head = 0
    while head < len(members):
        x = members[head]
        head += 1
        for s in seeds:
            y = G.mul_index(x, s)
            if y not in seen:
                seen.add(y)
                members.append(y)
                if len(members) > limit:
                    return None
    return seen


def _primes(n):
    return sorted(factorint(n))


def pq_conditions_hold(G: MatrixGroup, bound: int = DEFAULT_BOUND) -> bool:
    """Every subgroup of order pq (p, q primes) is cyclic."""
    if G.order > bound:
        raise BoundExceeded(f"group order {G.order} exceeds bound {bound}")
    orders = G.element_orders
    N = G.order
    primes = _primes(N)
    # one generator per subgroup of prime order
    reps = {}
    for p in primes:
        found = []
        covered = set()
        for i in np.nonzero(orders == p)[0]:
            i = int(i)
            if i in covered:
                continue
            cyc = _subgroup_closure(G, [i], p)
            covered |= cyc
            found.append(i)
        reps[p] = found
    for a, p in enumerate(primes):
        for q in primes[a:]:
            if N % (p * q):
                continue
            target = p * q
            gs = reps[p]
            hs = reps[q]
            for x_i, x in enumerate(gs):
                for y in (gs[x_i + 1:] if p == q else hs):
                    H = _subgroup_closure(G, [x, y], target)
                    if H is not None and len(H) == target:
                        if not any(orders[h] == target for h in H):
                            return False
    return True


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def sylow_subgroup(G: MatrixGroup, p: int):
    """Index set of one Sylow p-subgroup (greedy normalizer growth)."""
    N = G.order
    target = 1
    while N % (target * p) == 0:
        target *= p
    orders = G.element_orders
    pel = [int(i) for i in np.nonzero([_is_p_power(int(o), p) and o > 1 for o in orders])[0]]
    if target == 1:
        return {0}
    pel.sort(key=lambda i: -int(orders[i]))
    S = _subgroup_closure(G, [pel[0]], target)
    gens = [pel[0]]
    while len(S) < target:
        grown = False
        for y in pel:
            if y in S:
                continue
            T = _subgroup_closure(G, gens + [y], target)
            if T is not None and _is_p_power(len(T), p):
                S, gens, grown = T, gens + [y], True
                break
        if not grown:
            raise RuntimeError("Sylow growth stalled")
    return S


def classify_p_group(G: MatrixGroup, S) -> str:
    n = len(S)
    orders = G.element_orders
    if any(orders[s] == n for s in S):
        return "cyclic"
    if n >= 8 and n & (n - 1) == 0:
        half = n // 2
        Qs = [s for s in S if orders[s] == half]
        for q in Qs:
            qpow = 0
            for _ in range(half // 2):
                qpow = G.mul_index(qpow, q)
            qinv = 0
            for _ in range(half - 1):
                qinv = G.mul_index(qinv, q)
            for x in S:
                if G.mul_index(x, x) != qpow:
                    continue
                # P Q P^-1 = Q^-1  <=>  P Q = Q^-1 P
                if G.mul_index(x, q) == G.mul_index(qinv, x):
                    return "generalized-quaternion"
    return "other"


def sylow_shape(G: MatrixGroup, bound: int = DEFAULT_BOUND) -> dict:
    if G.order > bound:
        raise BoundExceeded(f"group order {G.order} exceeds bound {bound}")
    return {p: classify_p_group(G, sylow_subgroup(G, p)) for p in _primes(G.order)} if G.order > 1 else {}


# ---------------------------------------------------------------- sweeps

def _residues(M):
    return [1] if M == 1 else [x for x in range(1, M) if math.gcd(x, M) == 1]


def valid_specs(max_order: int, kinds=KINDS):
    """Every valid spec with abstract order <= max_order, in a fixed order.

    Residues r, l (mod m) and k (mod n) are taken in [1, modulus); the
    trivial modulus 1 uses the value 1.
    """
    mult = {"I": 1, "II": 2, "III": 8, "IV": 16, "V": 120, "VI": 240}
    out = []
    for kind in kinds:
        if kind == "Q2a":
            a = 3
            while 2 ** a <= max_order:
                out.append(GroupSpec("Q2a", a=a))
                a += 1
            continue
        if kind in ("Tstar_v", "Ostar_v"):
            base = 8 if kind == "Tstar_v" else 16
            v = 1
            while base * 3 ** v <= max_order:
                out.append(GroupSpec(kind, v=v))
                v += 1
            continue
        if kind == "Istar":
            if max_order >= 120:
                out.append(GroupSpec("Istar"))
            continue
        limit = max_order // mult[kind]
        for m in range(1, limit + 1):
            for n in range(1, limit // m + 1):
                for r in _residues(m):
                    if kind in ("II", "IV", "VI"):
                        cands = [GroupSpec(kind, m, n, r, l, k)
                                 for l in _residues(m) for k in _residues(n)]
                    else:
                        cands = [GroupSpec(kind, m, n, r)]
                    out.extend(s for s in cands if is_valid(s))
    return out

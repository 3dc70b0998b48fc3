"""Reference implementation of the F_p matrix kernels (numpy + Python).

Matrices are flat int64 rows of length D*D with entries in [0, p).
"""
import numpy as np


class BoundExceeded(RuntimeError):
    pass


def _batch_mul(a, g, D, p):
    # a: (N, D*D), g: (D*D,) -> a @ g for each row
    A = a.reshape(-1, D, D)
    G = g.reshape(D, D)
    return (np.matmul(A, G) % p).reshape(-1, D * D)


def closure(gens, D, p, max_order):
    """Breadth-first closure under right multiplication by the generators.

    Returns (elements, parent, via): element i equals
    elements[parent[i]] @ gens[via[i]]; element 0 is the identity.
    """
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, D * D)
    ident = np.eye(D, dtype=np.int64).reshape(D * D)
    elems = [ident]
    parent = [-1]
    via = [-1]
    seen = {ident.tobytes(): 0}
    frontier = np.array([0])
    while len(frontier):
        block = np.stack([elems[i] for i in frontier])
        new = []
        prods = [_batch_mul(block, g, D, p) for g in gens]
        # element-major order, matching the compiled kernel
        for j, src in enumerate(frontier):
            for gi in range(len(gens)):
                row = prods[gi][j]
                key = row.tobytes()
                if key not in seen:
                    seen[key] = len(elems)
                    new.append(len(elems))
                    elems.append(row)
                    parent.append(int(src))
                    via.append(gi)
                    if len(elems) > max_order:
                        raise BoundExceeded(f"closure exceeded {max_order} elements")
        frontier = np.array(new, dtype=np.int64)
    return (np.stack(elems), np.array(parent, dtype=np.int32),
            np.array(via, dtype=np.int32))


def eval_tree(gens, parent, via, D, p):
    """Evaluate other generator images along a closure tree."""
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, D * D)
    N = len(parent)
    out = np.empty((N, D * D), dtype=np.int64)
    out[0] = np.eye(D, dtype=np.int64).reshape(D * D)
    for i in range(1, N):
        out[i] = (out[parent[i]].reshape(D, D) @ gens[via[i]].reshape(D, D) % p).reshape(-1)
    return out


def _det_rank(m, D, p):
    m = [list(map(int, m[i * D:(i + 1) * D])) for i in range(D)]
    det, r = 1, 0
    for col in range(D):
        piv = next((i for i in range(r, D) if m[i][col]), None)
        if piv is None:
            det = 0
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            det = -det
        pv = m[r][col]
        det = det * pv % p
        inv = pow(pv, p - 2, p)
        for i in range(r + 1, D):
            f = m[i][col] * inv % p
            if f:
                mr = m[r]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], mr)]
        r += 1
    return det % p, r


def det_minus_identity(elems, D, p):
    elems = np.asarray(elems, dtype=np.int64)
    shifted = elems.copy()
    shifted[:, :: D + 1] = (shifted[:, :: D + 1] - 1) % p
    return np.array([_det_rank(row, D, p)[0] for row in shifted], dtype=np.int64)


def rank_minus_identity(elems, D, p):
    elems = np.asarray(elems, dtype=np.int64)
    shifted = elems.copy()
    shifted[:, :: D + 1] = (shifted[:, :: D + 1] - 1) % p
    return np.array([_det_rank(row, D, p)[1] for row in shifted], dtype=np.int32)


def power_traces(elems, D, p, L):
    """traces[i, j] = tr(g_i^j) mod p for 0 <= j < L."""
    elems = np.asarray(elems, dtype=np.int64)
    N = len(elems)
    G = elems.reshape(N, D, D)
    cur = np.broadcast_to(np.eye(D, dtype=np.int64), (N, D, D)).copy()
    out = np.empty((N, L), dtype=np.int64)
    for j in range(L):
        out[:, j] = np.trace(cur, axis1=1, axis2=2) % p
        cur = np.matmul(cur, G) % p
    return out

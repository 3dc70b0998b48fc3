"""Compare the compiled F_p kernel with the numpy fallback.

    python benchmarks/bench_kernel.py --repeat 3

Both kernels run on identical inputs; outputs are checked for equality.
"""
import argparse
import statistics
import time

import numpy as np

from isoquot import _kernel_py
from isoquot.groups import GroupSpec, generate
from isoquot.reps import build, rep_classes, spec_field

try:
    from isoquot import _ckernel
except ImportError:
    _ckernel = None

CASES = [
    # (label, spec)
    ("cyclic order 997, dim 1", GroupSpec("I", 1, 997, 1)),
    ("type I order 1100, dim 5", GroupSpec("I", 11, 100, 3)),
    ("T* x C_11, dim 2", GroupSpec("III", 1, 33, 1)),
    ("I* x C_7, dim 2", GroupSpec("V", 1, 7, 1)),
    ("type VI order 1680, dim 4", GroupSpec("VI", 1, 7, 1, 1, 6)),
]


def _timed(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times), out


def bench(repeat):
    rows = []
    for label, spec in CASES:
        rep = rep_classes(spec).reps[0]
        F = spec_field(spec)
        gens = np.array([F.matrix(g) for g in rep.images.values()], dtype=np.int64)
        D, p = rep.dim, F.p
        order = generate(rep.images, field=F).order
        for name, call in (
            ("closure", lambda k: k.closure(gens, D, p, order + 1)),
            ("det_minus_identity", None),
            ("power_traces", None),
        ):
            if call is None:
                elems = _kernel_py.closure(gens, D, p, order + 1)[0]
                if name == "det_minus_identity":
                    call = lambda k, e=elems: k.det_minus_identity(e, D, p)
                else:
                    call = lambda k, e=elems: k.power_traces(e, D, p, D + 1)
            tp, op = _timed(lambda: call(_kernel_py), repeat)
            if _ckernel is not None:
                tc, oc = _timed(lambda: call(_ckernel), repeat)
                a = op[0] if isinstance(op, tuple) else op
                b = oc[0] if isinstance(oc, tuple) else oc
                if not np.array_equal(a, b):
                    raise AssertionError(f"kernels disagree on {name} for {label}")
            else:
                tc = float("nan")
            rows.append((label, order, name, tp, tc))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernel is None:
        print("compiled kernel not built; timing the fallback only")
    print(f"{'group':28} {'|G|':>6} {'op':20} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, order, name, tp, tc in bench(args.repeat):
        sp = tp / tc if tc == tc and tc > 0 else float("nan")
        print(f"{label:28} {order:6d} {name:20} {tp:10.4f} {tc:10.4f} {sp:8.1f}")


if __name__ == "__main__":
    main()

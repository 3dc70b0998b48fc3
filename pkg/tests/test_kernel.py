"""The compiled kernel and the numpy fallback must agree exactly."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isoquot import _kernel_py, kernel
from isoquot.groups import GroupSpec
from isoquot.reps import rep_classes, spec_field

ck = pytest.importorskip("isoquot._ckernel")

SPECS = [GroupSpec("I", 1, 12, 1), GroupSpec("I", 5, 4, 4), GroupSpec("II", 1, 4, 1, 1, 3),
         GroupSpec("III", 1, 3, 1), GroupSpec("Istar"), GroupSpec("I", 7, 9, 2)]


def _gens(spec):
    rep = rep_classes(spec).reps[0]
    F = spec_field(spec)
    return np.array([F.matrix(g) for g in rep.images.values()], dtype=np.int64), rep.dim, F.p


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label())
def test_kernels_agree(spec):
    g, D, p = _gens(spec)
    a = _kernel_py.closure(g, D, p, 5000)
    b = ck.closure(g, D, p, 5000)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)
    E = a[0]
    assert np.array_equal(_kernel_py.eval_tree(g, a[1], a[2], D, p), ck.eval_tree(g, a[1], a[2], D, p))
    assert np.array_equal(_kernel_py.det_minus_identity(E, D, p), ck.det_minus_identity(E, D, p))
    assert np.array_equal(_kernel_py.rank_minus_identity(E, D, p), ck.rank_minus_identity(E, D, p))
    assert np.array_equal(_kernel_py.power_traces(E, D, p, D + 2), ck.power_traces(E, D, p, D + 2))


def test_bound_exceeded_both():
    g, D, p = _gens(GroupSpec("Istar"))
    for impl in (_kernel_py, ck):
        with pytest.raises(kernel.BoundExceeded):
            impl.closure(g, D, p, 50)


def test_selected_implementation():
    assert kernel.IMPLEMENTATION in ("cython", "python")


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.lists(st.integers(0, 96), min_size=16, max_size=16))
def test_det_rank_random(D, entries):
    p = 97
    E = np.array(entries[: D * D] * 3, dtype=np.int64).reshape(3, D * D) % p
    assert np.array_equal(_kernel_py.det_minus_identity(E, D, p), ck.det_minus_identity(E, D, p))
    assert np.array_equal(_kernel_py.rank_minus_identity(E, D, p), ck.rank_minus_identity(E, D, p))

"""Select the compiled kernel when available, else the numpy fallback.

Set ISOQUOT_PURE_PYTHON=1 to force the fallback.
"""
import os

from ._kernel_py import BoundExceeded

if os.environ.get("ISOQUOT_PURE_PYTHON") == "1":
    from . import _kernel_py as _impl
else:
    try:
        from . import _ckernel as _impl
    except ImportError:  # extension not built
        from . import _kernel_py as _impl

IMPLEMENTATION = "cython" if _impl.__name__.endswith("_ckernel") else "python"

closure = _impl.closure
eval_tree = _impl.eval_tree
det_minus_identity = _impl.det_minus_identity
rank_minus_identity = _impl.rank_minus_identity
power_traces = _impl.power_traces

__all__ = ["BoundExceeded", "IMPLEMENTATION", "closure", "eval_tree",
           "det_minus_identity", "rank_minus_identity", "power_traces"]

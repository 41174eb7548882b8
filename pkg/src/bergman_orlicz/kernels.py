"""Hot-kernel dispatch: compiled extension when available, numpy otherwise.

Both backends implement the same contracts; within one backend results are
deterministic run-to-run. The backends may differ by a few ulp (different
float summation orders), which every caller tolerates.
"""

from . import _kernels_py

try:
    from . import _speedups as _impl

    BACKEND = "compiled"
except ImportError:  # extension not built; pure Python remains fully functional
    _impl = _kernels_py
    BACKEND = "python"

atom_sum_eval = _impl.atom_sum_eval
min_separation = _impl.min_separation
cover_counts = _impl.cover_counts

python_backend = _kernels_py

"""Kernel selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` is used.  Set ``TORIC_GENERA_KERNELS=python`` to
force the fallback (the benchmark and the parity tests do this).
"""

import os

from . import _kernels_py

if os.environ.get("TORIC_GENERA_KERNELS", "").lower() == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND

poly_add = _impl.poly_add
poly_sub = _impl.poly_sub
poly_scale = _impl.poly_scale
poly_mul = _impl.poly_mul
poly_mul_acc = _impl.poly_mul_acc
prune = _impl.prune
conv_degree = _impl.conv_degree
graded_mul = _impl.graded_mul

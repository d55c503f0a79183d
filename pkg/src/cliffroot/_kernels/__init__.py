"""Kernel backend selection.

The compiled extension is used when it imported cleanly; otherwise the numpy
fallback takes over.  Set ``CLIFFROOT_PURE=1`` to force the fallback (useful
for benchmarking and for debugging the extension).
"""

import os

from . import pure

if os.environ.get("CLIFFROOT_PURE"):
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]

        BACKEND = "fast"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

make_product_table = _impl.make_product_table
geometric_product = _impl.geometric_product
quad_values = _impl.quad_values
quad_values_and_jacobian = _impl.quad_values_and_jacobian

__all__ = [
    "BACKEND",
    "geometric_product",
    "make_product_table",
    "pure",
    "quad_values",
    "quad_values_and_jacobian",
]

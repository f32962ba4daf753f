"""Kernel selection: compiled extension when importable, pure Python otherwise.

``THOMSTEM_PURE=1`` forces the pure kernel (used by the benchmark and the
cross-checking tests). The compiled kernel packs masks into 64-bit words,
so ranks above 64 generators always go through the pure kernel.
"""

import os

from . import _kernel_py

COMPILED_MASK_BITS = 64

if os.environ.get("THOMSTEM_PURE") == "1":
    kernel = _kernel_py
else:
    try:
        from . import _kernel_c as kernel  # type: ignore[no-redef]
    except ImportError:
        kernel = _kernel_py

BACKEND = kernel.BACKEND


def kernel_for_rank(rank: int):
    """Return the kernel module usable for masks of `rank` bits."""
    if kernel is not _kernel_py and rank > COMPILED_MASK_BITS:
        return _kernel_py
    return kernel

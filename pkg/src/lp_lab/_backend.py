"""Kernel selection.

The compiled extension is used when it imports; setting
``LP_LAB_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _fallback

fallback = _fallback

if os.environ.get("LP_LAB_PURE_PYTHON", "") not in ("", "0"):
    kernels = _fallback
    NAME = "python"
else:
    try:
        from . import _kernels as kernels
        NAME = "cython"
    except ImportError:  # extension not built
        kernels = _fallback
        NAME = "python"

compiled = None
if NAME == "cython":
    compiled = kernels
else:
    try:
        from . import _kernels as compiled
    except ImportError:
        pass

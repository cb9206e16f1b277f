"""Pick the compiled kernels when importable, else the pure-Python ones.

Set ``XISTRONG_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _fallback

BACKEND = "python"
kernels = _fallback

if not os.environ.get("XISTRONG_PURE_PYTHON"):
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

component_labels = kernels.component_labels
ba_edges = kernels.ba_edges

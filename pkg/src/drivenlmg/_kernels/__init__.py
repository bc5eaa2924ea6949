"""Landscape kernel backend selection.

The compiled extension is used when it imported successfully; set the
environment variable ``DRIVENLMG_PURE=1`` (before import) to force the
pure numpy/scipy fallback.  Both backends expose the same functions:
``qel_value``, ``qel_grad``, ``qel_hess``, ``qel_grid``, ``newton_refine``
and a ``BACKEND`` name tag.
"""

import os

if os.environ.get("DRIVENLMG_PURE"):
    from . import pure as kernel
else:
    try:
        from . import _fast as kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import pure as kernel

BACKEND = kernel.BACKEND
qel_value = kernel.qel_value
qel_grad = kernel.qel_grad
qel_hess = kernel.qel_hess
qel_grid = kernel.qel_grid
newton_refine = kernel.newton_refine

"""Select the compiled pair-sum core, falling back to NumPy.

``fraceig.backend.core`` is the module in use; ``backend_name()`` reports
which one was picked.  Set FRACEIG_BACKEND=numpy to force the fallback.
"""

from __future__ import annotations

import os

if os.environ.get("FRACEIG_BACKEND", "").lower() == "numpy":
    from . import _corenp as core
else:
    try:
        from . import _corecy as core  # type: ignore[no-redef]
    except ImportError:
        from . import _corenp as core  # type: ignore[no-redef]


def backend_name() -> str:
    return core.BACKEND_NAME

"""Select the compiled kernel extension, falling back to pure Python.

Set ``HELISPHERE_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("HELISPHERE_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _kernels_py as kernels

from . import _kernels_py as pure

KIND_CONSTANT = pure.KIND_CONSTANT
KIND_LINEAR = pure.KIND_LINEAR
KIND_CATENARY = pure.KIND_CATENARY
KIND_MINIMAL = pure.KIND_MINIMAL

BACKEND = kernels.BACKEND


def thread_count():
    """Worker cap from ``HELISPHERE_THREADS`` (default 1, i.e. serial)."""
    raw = os.environ.get("HELISPHERE_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)

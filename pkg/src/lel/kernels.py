"""Backend selection for the numeric kernels.

The compiled ``lel._core`` extension is used when importable; otherwise,
or when ``LEL_PURE_PYTHON=1`` is set, the pure-Python ``lel._pycore``
versions take over.  Both expose the same two functions.
"""

import os

from . import _pycore

if os.environ.get("LEL_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pycore
else:
    try:
        from . import _core as _impl
    except ImportError:  # extension not built
        _impl = _pycore

BACKEND = "compiled" if _impl is not _pycore else "python"

integrate_radial = _impl.integrate_radial
stencil_derivative = _impl.stencil_derivative

OK = _pycore.OK
ZERO = _pycore.ZERO
NONFINITE = _pycore.NONFINITE
UNDERFLOW = _pycore.UNDERFLOW
MAX_STEPS = _pycore.MAX_STEPS

"""Select the polynomial core implementation at import time.

The compiled extension (built from _polycore.pyx) is preferred; the
pure-Python module is the fallback and the reference implementation.
Set SYMKAWA_PURE_PYTHON=1 to force the fallback.
"""

import os

if os.environ.get("SYMKAWA_PURE_PYTHON") == "1":
    from . import _polycore_py as _impl
else:
    try:
        from . import _polycore as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _polycore_py as _impl

globals().update({k: v for k, v in vars(_impl).items() if not k.startswith("__")})

IMPLEMENTATION = _impl.IMPLEMENTATION

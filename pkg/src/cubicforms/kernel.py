"""Backend selection for the polynomial product kernel.

The compiled extension is used when it was built; otherwise, or when
``CUBICFORMS_PURE_PYTHON`` is set to a non-empty value, the pure-Python
implementation is used.  Both share one signature::

    mul_terms(a, b, nvars, bits) -> dict
"""

import os

from . import _kernel_py

BACKEND = "python"
mul_terms = _kernel_py.mul_terms

if not os.environ.get("CUBICFORMS_PURE_PYTHON"):
    try:
        from . import _kernel as _compiled
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        mul_terms = _compiled.mul_terms

python_mul_terms = _kernel_py.mul_terms


def compiled_mul_terms():
    """Return the compiled kernel, or ``None`` if the extension is unavailable."""
    try:
        from . import _kernel
    except ImportError:
        return None
    return _kernel.mul_terms

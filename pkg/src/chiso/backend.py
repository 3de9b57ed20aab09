"""Select the eigenvalue kernel at import time.

The compiled Cython kernel is preferred; the numpy fallback carries the
same contract.  Set ``CHISO_PURE_PYTHON=1`` to force the fallback (useful
for benchmarking and for debugging suspected kernel issues).
"""

import os

if os.environ.get("CHISO_PURE_PYTHON"):
    from chiso import _qr_fallback as _impl

    USING_COMPILED = False
else:
    try:
        from chiso import _qr as _impl  # type: ignore[attr-defined]

        USING_COMPILED = True
    except ImportError:  # extension not built
        from chiso import _qr_fallback as _impl

        USING_COMPILED = False


def eigvals(m, sweep_cap=60):
    """Eigenvalues of a small square complex matrix (selected backend)."""
    return _impl.eigvals(m, sweep_cap)


def backend_name():
    return "compiled" if USING_COMPILED else "fallback"

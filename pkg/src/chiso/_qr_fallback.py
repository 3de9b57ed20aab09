"""Pure-Python eigenvalue kernel with the same contract as ``chiso._qr``.

Used when the compiled extension is unavailable (or forced off via the
``CHISO_PURE_PYTHON`` environment variable).  LAPACK's ``zgeev`` runs the
same family of algorithm, so the two backends are interchangeable up to
eigenvalue ordering.
"""

import numpy as np

from chiso.errors import EigenConvergenceError

NMAX = 32


def eigvals(m, sweep_cap=60):
    """All eigenvalues of a square complex matrix, in no particular order."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (a.shape,))
    if a.shape[0] == 0:
        return np.empty(0, dtype=np.complex128)
    if a.shape[0] > NMAX:
        raise ValueError("kernel supports sizes up to %d, got %d" % (NMAX, a.shape[0]))
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix contains non-finite entries")
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise EigenConvergenceError(str(exc)) from exc

# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Eigenvalues of small dense complex matrices via shifted Hessenberg QR.

The matrices handled by this package are tiny ((n+1) x (n+1) with n the
hyperbolic dimension, so 3x3 to a dozen or so), non-Hermitian and often
non-normal.  A hand-rolled single-shift QR iteration with deflation beats
the per-call overhead of a general LAPACK driver at these sizes; the
numpy-based fallback in ``chiso._qr_fallback`` implements the identical
contract and is used when this extension is not built.
"""

import numpy as np

from chiso.errors import EigenConvergenceError

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double cabs(double complex)

from libc.math cimport sqrt

# stack buffers below assume this bound
DEF NMAX = 32


cdef void _hessenberg(double complex[:, ::1] h, int n) noexcept nogil:
    """Unitary reduction to upper Hessenberg form, in place (Householder)."""
    cdef int k, i, j
    cdef double complex alpha, w
    cdef double nrm, vnrm, tiny = 1e-300
    cdef double complex v[NMAX]
    for k in range(n - 2):
        nrm = 0.0
        for i in range(k + 1, n):
            nrm += h[i, k].real * h[i, k].real + h[i, k].imag * h[i, k].imag
        nrm = sqrt(nrm)
        if nrm <= tiny:
            continue
        if cabs(h[k + 1, k]) > tiny:
            alpha = -(h[k + 1, k] / cabs(h[k + 1, k])) * nrm
        else:
            alpha = -nrm
        vnrm = 0.0
        for i in range(k + 1, n):
            v[i] = h[i, k]
        v[k + 1] = v[k + 1] - alpha
        for i in range(k + 1, n):
            vnrm += v[i].real * v[i].real + v[i].imag * v[i].imag
        vnrm = sqrt(vnrm)
        if vnrm <= tiny:
            continue
        for i in range(k + 1, n):
            v[i] = v[i] / vnrm
        # rows: H <- (I - 2 v v*) H
        for j in range(k, n):
            w = 0
            for i in range(k + 1, n):
                w = w + v[i].conjugate() * h[i, j]
            w = 2 * w
            for i in range(k + 1, n):
                h[i, j] = h[i, j] - v[i] * w
        # columns: H <- H (I - 2 v v*)
        for i in range(n):
            w = 0
            for j in range(k + 1, n):
                w = w + h[i, j] * v[j]
            w = 2 * w
            for j in range(k + 1, n):
                h[i, j] = h[i, j] - w * v[j].conjugate()
        # entries below the new subdiagonal are zero by construction
        for i in range(k + 2, n):
            h[i, k] = 0


cdef inline void _givens(double complex f, double complex g,
                         double *c, double complex *s) noexcept nogil:
    """Rotation [[c, s], [-conj(s), c]] (c real) sending (f, g) to (r, 0)."""
    cdef double af = cabs(f), ag = cabs(g), r
    if ag == 0.0:
        c[0] = 1.0
        s[0] = 0
        return
    if af == 0.0:
        c[0] = 0.0
        s[0] = g.conjugate() / ag
        return
    r = sqrt(af * af + ag * ag)
    c[0] = af / r
    s[0] = (f / af) * (g.conjugate() / r)


cdef void _eig2(double complex a, double complex b,
                double complex c, double complex d,
                double complex *r1, double complex *r2) noexcept nogil:
    """Both roots of the 2x2 block [[a, b], [c, d]]."""
    cdef double complex tr = a + d
    cdef double complex det = a * d - b * c
    cdef double complex disc = csqrt((a - d) * (a - d) + 4 * b * c)
    cdef double complex x1 = (tr + disc) / 2
    cdef double complex x2 = (tr - disc) / 2
    # recompute the smaller root from the determinant for accuracy
    if cabs(x1) >= cabs(x2):
        r1[0] = x1
        r2[0] = det / x1 if cabs(x1) > 0 else x2
    else:
        r1[0] = det / x2 if cabs(x2) > 0 else x1
        r2[0] = x2


cdef int _qr_values(double complex[:, ::1] h, int n, double complex[::1] w,
                    int sweep_cap) noexcept nogil:
    """Deflating single-shift QR on an upper Hessenberg matrix.

    Eigenvalues land in ``w``.  Returns 0 on success, 1 on stagnation.
    Only the active window is updated: coupling blocks outside it do not
    influence the spectrum, so eigenvalue-only iteration may skip them.
    """
    cdef int hi = n - 1, lo, k, i, j, jlo, ihi
    cdef int iters = 0, total = 0
    cdef double eps = 2.220446049250313e-16
    cdef double c, scale
    cdef double complex s, sh, f, g, a, b, r1, r2
    while hi >= 0:
        if hi == 0:
            w[0] = h[0, 0]
            hi -= 1
            continue
        lo = hi
        while lo > 0:
            scale = cabs(h[lo - 1, lo - 1]) + cabs(h[lo, lo])
            if scale == 0.0:
                scale = cabs(h[lo, lo - 1])
            if cabs(h[lo, lo - 1]) <= eps * scale:
                h[lo, lo - 1] = 0
                break
            lo -= 1
        if lo == hi:
            w[hi] = h[hi, hi]
            hi -= 1
            iters = 0
            continue
        if lo == hi - 1:
            _eig2(h[lo, lo], h[lo, hi], h[hi, lo], h[hi, hi], &r1, &r2)
            w[hi] = r1
            w[hi - 1] = r2
            hi -= 2
            iters = 0
            continue
        iters += 1
        total += 1
        if total > sweep_cap * n:
            return 1
        if iters % 10 == 0:
            # exceptional shift to break symmetric stagnation
            sh = h[hi, hi] + 0.75 * cabs(h[hi, hi - 1])
        else:
            # Wilkinson: root of the trailing 2x2 closest to h[hi, hi]
            _eig2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi],
                  &r1, &r2)
            sh = r1 if cabs(r1 - h[hi, hi]) <= cabs(r2 - h[hi, hi]) else r2
        f = h[lo, lo] - sh
        g = h[lo + 1, lo]
        for k in range(lo, hi):
            _givens(f, g, &c, &s)
            jlo = k - 1 if k - 1 > lo else lo
            for j in range(jlo, hi + 1):
                a = h[k, j]
                b = h[k + 1, j]
                h[k, j] = c * a + s * b
                h[k + 1, j] = -s.conjugate() * a + c * b
            if k > lo:
                h[k + 1, k - 1] = 0  # bulge annihilated exactly
            ihi = k + 2 if k + 2 < hi else hi
            for i in range(lo, ihi + 1):
                a = h[i, k]
                b = h[i, k + 1]
                h[i, k] = c * a + s.conjugate() * b
                h[i, k + 1] = -s * a + c * b
            if k < hi - 1:
                f = h[k + 1, k]
                g = h[k + 2, k]
    return 0


def eigvals(m, int sweep_cap=60):
    """All eigenvalues of a square complex matrix, in no particular order.

    Raises :class:`chiso.errors.EigenConvergenceError` if the iteration
    stagnates (``sweep_cap * size`` QR sweeps).
    """
    a = np.array(m, dtype=np.complex128, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (a.shape,))
    cdef int n = a.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.complex128)
    if n > NMAX:
        raise ValueError("kernel supports sizes up to %d, got %d" % (NMAX, n))
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix contains non-finite entries")
    w = np.empty(n, dtype=np.complex128)
    cdef double complex[:, ::1] hv = a
    cdef double complex[::1] wv = w
    cdef int status
    with nogil:
        _hessenberg(hv, n)
        status = _qr_values(hv, n, wv, sweep_cap)
    if status:
        raise EigenConvergenceError(
            "QR iteration did not converge within %d sweeps" % (sweep_cap * n)
        )
    return w

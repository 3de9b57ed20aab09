"""Ball and Siegel-domain coordinates on complex hyperbolic space.

Points of the space and its boundary are nonzero vectors up to a complex
scalar.  The sign of <v, v> splits them into time-like (interior),
light-like (boundary) and space-like (outside) classes; horospherical
coordinates (zeta, v, u) chart the Siegel model with a single extra point
at infinity.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from chiso.errors import GroupMembershipError
from chiso.linalg import (
    MEMBERSHIP_TOL,
    GroupElement,
    HermitianForm,
    first_form,
    form_defect,
    second_form,
)

SIGNATURE_TOL = 1e-9


class PointSignature(enum.Enum):
    TIME_LIKE = "time-like"
    LIGHT_LIKE = "light-like"
    SPACE_LIKE = "space-like"


@dataclass(frozen=True, eq=False)
class ProjectiveVector:
    """A nonzero vector considered up to a nonzero complex scalar."""

    v: np.ndarray
    form: HermitianForm

    def __post_init__(self):
        a = np.asarray(self.v, dtype=complex).reshape(-1)
        if a.shape[0] != self.form.size:
            raise ValueError("vector length does not match the form")
        if not np.any(np.abs(a) > 0):
            raise ValueError("projective vectors must be nonzero")
        if not np.all(np.isfinite(a)):
            raise ValueError("projective vectors must be finite")
        object.__setattr__(self, "v", a)

    def apply(self, g: GroupElement) -> "ProjectiveVector":
        if g.form != self.form:
            raise ValueError("element and vector use different forms")
        return ProjectiveVector(g.m @ self.v, self.form)


def projectively_equal(a: ProjectiveVector, b: ProjectiveVector, tol: float = 1e-9) -> bool:
    """Equality up to a nonzero complex scalar."""
    if a.form != b.form:
        return False
    x, y = a.v, b.v
    na, nb = np.linalg.norm(x), np.linalg.norm(y)
    return 1.0 - abs(np.vdot(x, y)) / (na * nb) <= tol


def signature(v: ProjectiveVector, tol: float = SIGNATURE_TOL) -> PointSignature:
    """Sign class of <v, v> with a scalar-invariant zero band tol * |v|^2."""
    q = v.form.inner(v.v, v.v).real
    band = tol * float(np.linalg.norm(v.v)) ** 2
    if q < -band:
        return PointSignature.TIME_LIKE
    if q > band:
        return PointSignature.SPACE_LIKE
    return PointSignature.LIGHT_LIKE


class _Infinity:
    """The single point compactifying the Heisenberg boundary."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


@dataclass(frozen=True, eq=False)
class HoroPoint:
    """Horospherical coordinates (zeta, v, u); u = 0 on the boundary."""

    zeta: np.ndarray
    v: float
    u: float = 0.0

    def __post_init__(self):
        z = np.asarray(self.zeta, dtype=complex).reshape(-1)
        object.__setattr__(self, "zeta", z)
        if self.u < 0:
            raise ValueError("height u must be >= 0")

    @property
    def n(self) -> int:
        return self.zeta.shape[0] + 1

    def is_boundary(self) -> bool:
        return self.u == 0.0


def horo_origin(n: int) -> HoroPoint:
    return HoroPoint(np.zeros(n - 1, dtype=complex), 0.0, 0.0)


def psi(p, n: int | None = None) -> ProjectiveVector:
    """Chart from horospherical coordinates into the second-form model.

    (zeta, v, u) maps to ((-|zeta|^2 - u + iv)/2, zeta, 1); INFINITY maps to
    e_1.  The image is light-like exactly when u = 0 and time-like when
    u > 0.  ``n`` is only needed for INFINITY, whose coordinates carry no
    dimension.
    """
    if p is INFINITY:
        if n is None:
            raise ValueError("psi(INFINITY) needs the dimension n")
        vec = np.zeros(n + 1, dtype=complex)
        vec[0] = 1.0
        return ProjectiveVector(vec, second_form(n))
    dim = p.n
    vec = np.empty(dim + 1, dtype=complex)
    zeta = p.zeta
    vec[0] = (-float(np.vdot(zeta, zeta).real) - p.u + 1j * p.v) / 2.0
    vec[1:dim] = zeta
    vec[dim] = 1.0
    return ProjectiveVector(vec, second_form(dim))


def psi_inverse(v: ProjectiveVector, tol: float = 1e-9):
    """Invert :func:`psi` on time-like and light-like second-form vectors."""
    if v.form.kind != "second":
        raise ValueError("horospherical coordinates live on the second form")
    sig = signature(v, tol)
    if sig is PointSignature.SPACE_LIKE:
        raise ValueError("space-like vectors have no horospherical coordinates")
    a = v.v
    size = a.shape[0]
    if np.linalg.norm(a[1:]) <= tol * np.linalg.norm(a):
        return INFINITY
    w = a / a[size - 1]
    zeta = w[1 : size - 1]
    u = -2.0 * w[0].real - float(np.vdot(zeta, zeta).real)
    vv = 2.0 * w[0].imag
    return HoroPoint(zeta, vv, max(u, 0.0) if abs(u) <= tol else u)


@dataclass(frozen=True, eq=False)
class BallPoint:
    """Affine chart of the ball model; interior iff sum |zeta_i|^2 < 1."""

    zeta: np.ndarray = field()

    def __post_init__(self):
        z = np.asarray(self.zeta, dtype=complex).reshape(-1)
        object.__setattr__(self, "zeta", z)

    def radius_sq(self) -> float:
        return float(np.vdot(self.zeta, self.zeta).real)

    def is_interior(self, tol: float = 1e-12) -> bool:
        return self.radius_sq() < 1.0 - tol


def to_ball(v: ProjectiveVector) -> BallPoint:
    """Ball coordinates zeta_i = v_i / v_0 of a first-form time-like vector."""
    if v.form.kind != "first":
        raise ValueError("ball coordinates live on the first form")
    if signature(v) is PointSignature.SPACE_LIKE:
        raise ValueError("space-like vectors do not project into the ball")
    return BallPoint(v.v[1:] / v.v[0])


def cayley_matrix(n: int) -> np.ndarray:
    """A fixed matrix C with C* J2 C = J1, carrying ball to Siegel geometry.

    The contract is the displayed identity, checked in the tests; the
    entries themselves are a choice.  C is real orthogonal, so its inverse
    is its transpose.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    c = np.eye(n + 1, dtype=complex)
    r = 1.0 / np.sqrt(2.0)
    c[0, 0] = r
    c[0, n] = r
    c[n, 0] = -r
    c[n, n] = r
    return c


def convert_element(
    g: GroupElement, target: HermitianForm, tol: float = MEMBERSHIP_TOL
) -> GroupElement:
    """Move an element between the two forms through the Cayley transform."""
    if g.form == target:
        return g
    if g.form.n != target.n:
        raise ValueError("cannot convert between different dimensions")
    c = cayley_matrix(g.form.n)
    if g.form.kind == "first" and target.kind == "second":
        m = c @ g.m @ c.T
    elif g.form.kind == "second" and target.kind == "first":
        m = c.T @ g.m @ c
    else:
        raise ValueError("unsupported conversion %r -> %r" % (g.form.kind, target.kind))
    defect = form_defect(m, target)
    if defect > tol:
        raise GroupMembershipError(
            "conversion produced form defect %.3e > %.1e" % (defect, tol)
        )
    return GroupElement(target, m)


def convert_vector(v: ProjectiveVector, target: HermitianForm) -> ProjectiveVector:
    if v.form == target:
        return v
    c = cayley_matrix(v.form.n)
    if v.form.kind == "first" and target.kind == "second":
        return ProjectiveVector(c @ v.v, target)
    return ProjectiveVector(c.T @ v.v, target)


def restricted_gram(form: HermitianForm, basis: np.ndarray) -> np.ndarray:
    """Gram matrix B* J B of the form restricted to span(columns of B)."""
    return basis.conj().T @ form.gram @ basis


def subspace_signature(form: HermitianForm, basis: np.ndarray, tol: float = 1e-9):
    """Counts (negative, zero, positive) of the restricted form's eigenvalues."""
    if basis.shape[1] == 0:
        return (0, 0, 0)
    evs = np.linalg.eigvalsh(restricted_gram(form, basis))
    band = tol * max(1.0, float(np.max(np.abs(evs))))
    neg = int(np.sum(evs < -band))
    zero = int(np.sum(np.abs(evs) <= band))
    pos = int(np.sum(evs > band))
    return (neg, zero, pos)


__all__ = [
    "PointSignature",
    "ProjectiveVector",
    "projectively_equal",
    "signature",
    "INFINITY",
    "HoroPoint",
    "horo_origin",
    "psi",
    "psi_inverse",
    "BallPoint",
    "to_ball",
    "cayley_matrix",
    "convert_element",
    "convert_vector",
    "restricted_gram",
    "subspace_signature",
    "first_form",
    "second_form",
]

"""Classification of group elements and their Jordan decomposition.

The decision procedure works on eigenvalue clusters: an element is
hyperbolic when its cluster moduli leave the common circle, elliptic when
it is diagonalizable, parabolic otherwise.  Every tolerance-based branch
either decides cleanly or raises AmbiguityError; nothing is guessed.
"""

import enum
from dataclasses import dataclass

import numpy as np

from chiso.errors import AmbiguityError, GroupMembershipError
from chiso.heisenberg import decompose_stabilizer, is_vertical
from chiso.linalg import (
    CLUSTER_TOL,
    EigenData,
    GroupElement,
    eigen_decompose,
    form_defect,
    identity_element,
)
from chiso.models import ProjectiveVector, restricted_gram, subspace_signature

CLASSIFY_TOL = 1e-7
CLASSIFY_MEMBERSHIP_TOL = 1e-6


class Kind(enum.Enum):
    ELLIPTIC_REGULAR = "elliptic-regular"
    ELLIPTIC_BOUNDARY = "elliptic-boundary"
    ELLIPTIC_OTHER = "elliptic-other"
    HYPERBOLIC_STRICT = "hyperbolic-strict"
    HYPERBOLIC_LOXODROMIC = "hyperbolic-loxodromic"
    PARABOLIC_VERTICAL = "parabolic-vertical-translation"
    PARABOLIC_NONVERTICAL = "parabolic-nonvertical-translation"
    PARABOLIC_ELLIPTO = "ellipto-parabolic"


@dataclass(frozen=True, eq=False)
class IsometryClass:
    """Classification of an element, with the unit scalar that normalized it.

    ``eigen`` carries the cluster data the decision was made from, so later
    stages (commutation, centralizers) never have to recompute it.
    """

    kind: Kind
    scalar: complex
    eigen: EigenData

    @property
    def is_elliptic(self) -> bool:
        return self.kind in (
            Kind.ELLIPTIC_REGULAR,
            Kind.ELLIPTIC_BOUNDARY,
            Kind.ELLIPTIC_OTHER,
        )

    @property
    def is_hyperbolic(self) -> bool:
        return self.kind in (Kind.HYPERBOLIC_STRICT, Kind.HYPERBOLIC_LOXODROMIC)

    @property
    def is_parabolic(self) -> bool:
        return self.kind in (
            Kind.PARABOLIC_VERTICAL,
            Kind.PARABOLIC_NONVERTICAL,
            Kind.PARABOLIC_ELLIPTO,
        )

    @property
    def is_unipotent_translation(self) -> bool:
        return self.kind in (Kind.PARABOLIC_VERTICAL, Kind.PARABOLIC_NONVERTICAL)

    @property
    def is_semisimple(self) -> bool:
        return self.is_elliptic or self.is_hyperbolic


def negative_cluster(g: GroupElement, eigen: EigenData, tol: float = 1e-7):
    """The unique cluster whose eigenspace meets the negative cone."""
    hits = [
        c
        for c in eigen.clusters
        if subspace_signature(g.form, c.eigen_basis, tol)[0] > 0
    ]
    if len(hits) != 1:
        raise AmbiguityError(
            "expected exactly one negative eigenvalue cluster, found %d" % len(hits)
        )
    return hits[0]


def classify(
    g: GroupElement,
    tol: float = CLASSIFY_TOL,
    cluster_tol: float = CLUSTER_TOL,
) -> IsometryClass:
    """Full classification of a group element.

    Hyperbolic when the cluster moduli split off a common circle (strictly
    hyperbolic iff all eigenvalues are real after dividing out the phase of
    the largest one); elliptic when diagonalizable, split into regular /
    boundary / other by eigenvalue multiplicities; parabolic otherwise,
    split into vertical / non-vertical translations (minimal polynomial
    exponent 2 / 3 after dividing out a unit scalar) and ellipto-parabolic.
    """
    defect = form_defect(g.m, g.form)
    if defect > CLASSIFY_MEMBERSHIP_TOL:
        raise GroupMembershipError(
            "cannot classify: form defect %.3e exceeds %.1e"
            % (defect, CLASSIFY_MEMBERSHIP_TOL)
        )
    eigen = eigen_decompose(g, cluster_tol)
    moduli = np.array([abs(c.value) for c in eigen.clusters])
    if moduli.max() / moduli.min() > 1.0 + 2.0 * cluster_tol:
        # hyperbolic: normalize by the phase of the expanding eigenvalue
        lam = eigen.clusters[int(np.argmax(moduli))].value
        mu = lam / abs(lam)
        rotated = [c.value / mu for c in eigen.clusters]
        strict = all(abs(v.imag) <= 10.0 * cluster_tol * abs(v) for v in rotated)
        kind = Kind.HYPERBOLIC_STRICT if strict else Kind.HYPERBOLIC_LOXODROMIC
        return IsometryClass(kind=kind, scalar=mu, eigen=eigen)
    if eigen.is_semisimple:
        neg = negative_cluster(g, eigen, tol)
        if neg.multiplicity >= 2:
            kind = Kind.ELLIPTIC_BOUNDARY
        elif all(c.multiplicity == 1 for c in eigen.clusters):
            kind = Kind.ELLIPTIC_REGULAR
        else:
            kind = Kind.ELLIPTIC_OTHER
        return IsometryClass(kind=kind, scalar=1.0 + 0j, eigen=eigen)
    if len(eigen.clusters) == 1:
        # unipotent up to the unit scalar carried by the single cluster
        value = eigen.clusters[0].value
        mu = value / abs(value)
        exponent = eigen.clusters[0].exponent
        if exponent == 2:
            kind = Kind.PARABOLIC_VERTICAL
        elif exponent == 3:
            kind = Kind.PARABOLIC_NONVERTICAL
        else:
            raise AmbiguityError(
                "unipotent part with minimal polynomial exponent %d; group "
                "members only admit exponents 2 and 3" % exponent
            )
        return IsometryClass(kind=kind, scalar=mu, eigen=eigen)
    return IsometryClass(kind=Kind.PARABOLIC_ELLIPTO, scalar=1.0 + 0j, eigen=eigen)


@dataclass(frozen=True, eq=False)
class JordanParts:
    """Multiplicative Jordan decomposition g = s u = u s."""

    s: GroupElement
    u: GroupElement


def _interpolating_spectral_poly(clusters, size: int) -> np.ndarray:
    """Coefficients of p with p = value mod (x - value)^mult per cluster.

    p(g) is then the semisimple part of g.  The confluent linear system is
    solved in the monomial basis; at these sizes, with cluster values on or
    near the unit circle, its conditioning is harmless.
    """
    rows = []
    rhs = []
    for c in clusters:
        for k in range(c.multiplicity):
            row = np.zeros(size, dtype=complex)
            for j in range(k, size):
                fall = 1.0
                for i in range(k):
                    fall *= j - i
                row[j] = fall * c.value ** (j - k)
            rows.append(row)
            rhs.append(c.value if k == 0 else 0.0)
    return np.linalg.solve(np.array(rows), np.array(rhs, dtype=complex))


def jordan_decompose(
    g: GroupElement,
    tol: float = 1e-8,
    cluster_tol: float = CLUSTER_TOL,
) -> JordanParts:
    """Split g into commuting semisimple and unipotent parts.

    The additive splitting g = S + N comes from evaluating the interpolating
    polynomial of the eigenvalue clusters at g; then s = S and u = S^{-1} g.
    Semisimple input returns u = I exactly.
    """
    eigen = eigen_decompose(g, cluster_tol)
    if eigen.is_semisimple:
        return JordanParts(s=g, u=identity_element(g.form))
    coeffs = _interpolating_spectral_poly(eigen.clusters, eigen.size)
    s_mat = np.zeros((eigen.size, eigen.size), dtype=complex)
    acc = np.eye(eigen.size, dtype=complex)
    for a in coeffs:
        s_mat = s_mat + a * acc
        acc = acc @ g.m
    try:
        u_mat = np.linalg.solve(s_mat, g.m)
    except np.linalg.LinAlgError as exc:
        raise AmbiguityError(
            "semisimple part is numerically singular; this cannot happen for "
            "a genuine group member"
        ) from exc
    s = GroupElement(g.form, s_mat)
    u = GroupElement(g.form, u_mat)
    err = float(np.max(np.abs(s_mat @ u_mat - g.m)))
    if err > 10.0 * tol * max(1.0, float(np.max(np.abs(g.m)))):
        raise AmbiguityError(
            "Jordan parts failed to reproduce the element (error %.3e)" % err
        )
    return JordanParts(s=s, u=u)


@dataclass(frozen=True, eq=False)
class FixedBoundarySet:
    """Isolated fixed boundary points, plus light-cone continua if present.

    Parabolic elements contribute exactly one point, hyperbolic ones two.
    A boundary elliptic fixes a whole sphere: that continuum is reported as
    the spanning eigenspace basis in ``cone_bases`` instead of points.
    """

    points: tuple
    cone_bases: tuple


def fixed_boundary_points(
    g: GroupElement,
    tol: float = CLASSIFY_TOL,
    cluster_tol: float = CLUSTER_TOL,
) -> FixedBoundarySet:
    """All light-like eigenlines of g, isolated ones as projective points."""
    eigen = eigen_decompose(g, cluster_tol)
    points = []
    cones = []
    for c in eigen.clusters:
        basis = c.eigen_basis
        neg, zero, pos = subspace_signature(g.form, basis, tol)
        if zero == 0 and (neg == 0 or pos == 0):
            continue  # definite eigenspace: no light-like directions
        if neg > 0 and pos > 0:
            cones.append(basis)
            continue
        if neg > 0 and zero > 0:
            raise AmbiguityError(
                "eigenspace restriction mixes negative and null directions; "
                "signature (n,1) forbids this for true members"
            )
        # positive semidefinite restriction: light-like lines = its kernel
        gram = restricted_gram(g.form, basis)
        evs, vecs = np.linalg.eigh(gram)
        band = tol * max(1.0, float(np.max(np.abs(evs))))
        for i in range(evs.shape[0]):
            if abs(evs[i]) <= band:
                vec = basis @ vecs[:, i]
                points.append(ProjectiveVector(vec / np.linalg.norm(vec), g.form))
    return FixedBoundarySet(points=tuple(points), cone_bases=tuple(cones))


class ScrewType(enum.Enum):
    VERTICAL_PART = "vertical-part"
    NONVERTICAL_PART = "nonvertical-part"
    NOT_SCREW = "not-screw"


def screw_unipotent_type(g: GroupElement, tol: float = 1e-8) -> ScrewType:
    """Type of the translation part of a Heisenberg isometry R_U T_(tau,t).

    For U tau = tau the answer (tau zero or not) is a conjugation invariant
    in dimensions n >= 3: no conjugation turns one type into the other.
    """
    sim = decompose_stabilizer(g, tol)
    if not sim.is_heisenberg_isometry(max(tol, 1e-9)):
        raise ValueError("element has a dilation part; not a Heisenberg isometry")
    tau = sim.trans.tau
    moved = float(np.linalg.norm(sim.u @ tau - tau))
    if moved > tol * (1.0 + float(np.linalg.norm(tau))):
        return ScrewType.NOT_SCREW
    return (
        ScrewType.VERTICAL_PART
        if is_vertical(sim.trans)
        else ScrewType.NONVERTICAL_PART
    )

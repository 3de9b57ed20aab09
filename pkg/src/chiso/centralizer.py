"""Centralizer structure, dimensions, and z-class comparison.

Each class of element gets a symbolic product / semidirect-product
descriptor whose real dimension is computable atom by atom; the numerical
commutant oracle (nullspace of the linearized commutation equations inside
the Lie algebra) certifies the dimensions independently.
"""

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from chiso.classify import Kind, classify, jordan_decompose, negative_cluster
from chiso.errors import AmbiguityError
from chiso.linalg import CLUSTER_TOL, RANK_TOL, GroupElement

# ---------------------------------------------------------------------------
# descriptor atoms


@dataclass(frozen=True)
class IndefUnitary:
    """The group U(p-1, 1) acting on the time-like summand; dimension p^2."""

    p: int

    @property
    def dim(self) -> int:
        return self.p * self.p

    def label(self) -> str:
        return "U(%d,1)" % (self.p - 1)


@dataclass(frozen=True)
class Unitary:
    """U(k); dimension k^2."""

    k: int

    @property
    def dim(self) -> int:
        return self.k * self.k

    def label(self) -> str:
        return "U(%d)" % self.k


@dataclass(frozen=True)
class Circle:
    @property
    def dim(self) -> int:
        return 1

    def label(self) -> str:
        return "S1"


@dataclass(frozen=True)
class RealLine:
    @property
    def dim(self) -> int:
        return 1

    def label(self) -> str:
        return "R"


@dataclass(frozen=True)
class HeisenbergGroup:
    """The full Heisenberg group C^{n-1} x R; dimension 2n - 1."""

    n: int

    @property
    def dim(self) -> int:
        return 2 * self.n - 1

    def label(self) -> str:
        return "Heis(%d)" % self.n


@dataclass(frozen=True)
class IsotropicSubgroup:
    """Translations isotropic with a fixed non-vertical one; dimension 2n - 2."""

    n: int

    @property
    def dim(self) -> int:
        return 2 * self.n - 2

    def label(self) -> str:
        return "Iso(%d)" % self.n


class Structure(enum.Enum):
    DIRECT_PRODUCT = "direct"
    SEMIDIRECT_OVER_NILPOTENT = "semidirect"


@dataclass(frozen=True)
class CentralizerDescriptor:
    """Symbolic structure of Z(T).

    For semisimple elements and translations the atoms and structure are
    closed-form.  Ellipto-parabolic centralizers are intersections
    Z(T_s) & Z(T_u): they carry the two part descriptors and delegate their
    dimension to the commutant oracle.
    """

    factors: tuple
    structure: Structure
    parts: tuple | None = None
    oracle_dim: int | None = None

    def label(self) -> str:
        if self.parts is not None:
            return "intersection[%s & %s; dim=%d]" % (
                self.parts[0].label(),
                self.parts[1].label(),
                self.oracle_dim,
            )
        names = sorted(a.label() for a in self.factors)
        return "%s(%s)" % (self.structure.value, " x ".join(names))


def descriptor_dimension(d: CentralizerDescriptor) -> int:
    """Real dimension; semidirect structure adds, never multiplies."""
    if d.parts is not None:
        return int(d.oracle_dim)
    return sum(a.dim for a in d.factors)


def centralizer_descriptor(
    t: GroupElement,
    tol: float = 1e-7,
    cluster_tol: float = CLUSTER_TOL,
) -> CentralizerDescriptor:
    """Symbolic centralizer of t from its classification.

    Elliptic: U(r1-1, 1) times U(r_j) over the space-like multiplicities.
    Hyperbolic: S^1 x R times U(r_j).  Vertical translation:
    [S^1 x U(n-1)] over the Heisenberg group; non-vertical translation:
    [S^1 x U(n-2)] over the isotropic subgroup.  Ellipto-parabolic:
    intersection of the part descriptors.
    """
    cls = classify(t, tol, cluster_tol)
    n = t.form.n
    if cls.is_elliptic:
        neg = negative_cluster(t, cls.eigen, tol)
        factors = [IndefUnitary(neg.multiplicity)]
        for c in cls.eigen.clusters:
            if c is not neg:
                factors.append(Unitary(c.multiplicity))
        return CentralizerDescriptor(tuple(factors), Structure.DIRECT_PRODUCT)
    if cls.is_hyperbolic:
        moduli = [abs(c.value) for c in cls.eigen.clusters]
        expanding = int(np.argmax(moduli))
        contracting = int(np.argmin(moduli))
        factors = [Circle(), RealLine()]
        for i, c in enumerate(cls.eigen.clusters):
            if i not in (expanding, contracting):
                factors.append(Unitary(c.multiplicity))
        return CentralizerDescriptor(tuple(factors), Structure.DIRECT_PRODUCT)
    if cls.kind is Kind.PARABOLIC_VERTICAL:
        return CentralizerDescriptor(
            (Circle(), Unitary(n - 1), HeisenbergGroup(n)),
            Structure.SEMIDIRECT_OVER_NILPOTENT,
        )
    if cls.kind is Kind.PARABOLIC_NONVERTICAL:
        return CentralizerDescriptor(
            (Circle(), Unitary(n - 2), IsotropicSubgroup(n)),
            Structure.SEMIDIRECT_OVER_NILPOTENT,
        )
    parts = jordan_decompose(t, max(tol, 1e-8), cluster_tol)
    part_s = centralizer_descriptor(parts.s, tol, cluster_tol)
    part_u = centralizer_descriptor(parts.u, tol, cluster_tol)
    return CentralizerDescriptor(
        factors=(),
        structure=Structure.DIRECT_PRODUCT,
        parts=(part_s, part_u),
        oracle_dim=commutant_dimension(t, RANK_TOL),
    )


def _commutant_system(t: GroupElement) -> np.ndarray:
    """Real matrix of X -> (XT - TX, X*J + JX) over X = A + iB."""
    m = t.form.size
    p, q = t.m.real, t.m.imag
    j = t.form.gram.real
    cols = []
    for part in range(2):  # 0: A slot, 1: B slot
        for r in range(m):
            for c in range(m):
                a = np.zeros((m, m))
                b = np.zeros((m, m))
                (a if part == 0 else b)[r, c] = 1.0
                comm_re = a @ p - b @ q - p @ a + q @ b
                comm_im = a @ q + b @ p - q @ a - p @ b
                herm_re = a.T @ j + j @ a
                herm_im = j @ b - b.T @ j
                cols.append(
                    np.concatenate(
                        [w.ravel() for w in (comm_re, comm_im, herm_re, herm_im)]
                    )
                )
    return np.array(cols).T


def commutant_dimension(t: GroupElement, tol: float = RANK_TOL) -> int:
    """Real dimension of {X in u(n,1) : XT = TX} by SVD nullity.

    Singular values below tol times the largest count as zero.  A thin gap
    between retained and discarded values is reported as a warning: the
    returned dimension would then be sensitive to the threshold.
    """
    system = _commutant_system(t)
    svals = np.linalg.svd(system, compute_uv=False)
    cutoff = tol * float(svals[0])
    rank = int(np.sum(svals > cutoff))
    kept = svals[rank - 1] if rank > 0 else np.inf
    dropped = svals[rank] if rank < svals.size else 0.0
    if kept < 10.0 * cutoff or dropped > 0.1 * cutoff:
        warnings.warn(
            "commutant rank decision is ill-conditioned "
            "(kept %.3e / cutoff %.3e / dropped %.3e)" % (kept, cutoff, dropped),
            RuntimeWarning,
            stacklevel=2,
        )
    return system.shape[1] - rank


def commutant_basis(t: GroupElement, tol: float = RANK_TOL):
    """Complex matrices spanning the commutant inside the Lie algebra."""
    system = _commutant_system(t)
    _, svals, vh = np.linalg.svd(system)
    cutoff = tol * float(svals[0])
    rank = int(np.sum(svals > cutoff))
    m = t.form.size
    out = []
    for row in vh[rank:]:
        a = row[: m * m].reshape(m, m)
        b = row[m * m :].reshape(m, m)
        out.append(a + 1j * b)
    return out


def z_class_label(t: GroupElement, tol: float = 1e-7) -> str:
    """Canonical serialization of the centralizer descriptor."""
    return centralizer_descriptor(t, tol).label()


def z_class_equal(a: GroupElement, b: GroupElement, tol: float = 1e-7) -> bool:
    """Whether two elements have conjugate centralizers (equal descriptors)."""
    if a.form.n != b.form.n:
        raise ValueError("z-classes are only comparable at equal dimension")
    try:
        la = z_class_label(a, tol)
        lb = z_class_label(b, tol)
    except AmbiguityError:
        raise
    return la == lb

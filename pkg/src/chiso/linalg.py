"""Linear algebra over the indefinite unitary group U(n,1).

Everything here works on small dense complex matrices (numpy complex128).
A matrix ``g`` belongs to the group of a Hermitian form with Gram matrix
``J`` when ``g* J g = J``; its inverse is then ``J^{-1} g* J`` and never
needs a general solver.  The paper-exact predicates all take explicit
tolerances; the defaults below are the package-wide profile.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from chiso import backend
from chiso.errors import AmbiguityError, GroupMembershipError

MEMBERSHIP_TOL = 1e-9
EIGEN_RESIDUAL_TOL = 1e-7
CLUSTER_TOL = 1e-6
RANK_TOL = 1e-8
MINPOLY_TOL = 1e-8

# ratio between retained and discarded singular values below which a rank
# decision is refused rather than guessed
RANK_GAP_FACTOR = 10.0


@lru_cache(maxsize=None)
def _gram(kind: str, n: int) -> np.ndarray:
    size = n + 1
    if kind == "first":
        j = np.eye(size, dtype=complex)
        j[0, 0] = -1.0
    elif kind == "second":
        j = np.zeros((size, size), dtype=complex)
        j[0, size - 1] = 1.0
        j[size - 1, 0] = 1.0
        for i in range(1, size - 1):
            j[i, i] = 1.0
    else:
        raise ValueError("unknown form kind %r" % (kind,))
    j.setflags(write=False)
    return j


@dataclass(frozen=True)
class HermitianForm:
    """Hermitian form of signature (n,1) on C^{n+1}.

    ``first`` is the diagonal form diag(-1, 1, ..., 1) (ball model);
    ``second`` is the anti-diagonal-block form used at the Siegel domain.
    Both Gram matrices are involutions, so J^{-1} = J throughout.
    """

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("first", "second"):
            raise ValueError("form kind must be 'first' or 'second'")
        if self.n < 1:
            raise ValueError("hyperbolic dimension must be >= 1")

    @property
    def size(self) -> int:
        return self.n + 1

    @property
    def gram(self) -> np.ndarray:
        return _gram(self.kind, self.n)

    def inner(self, z, w) -> complex:
        """<z, w> = w* J z; conjugate-linear in w, so <v, v> is real."""
        return complex(np.vdot(np.asarray(w), self.gram @ np.asarray(z)))


def first_form(n: int) -> HermitianForm:
    return HermitianForm("first", n)


def second_form(n: int) -> HermitianForm:
    return HermitianForm("second", n)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A matrix tagged with the Hermitian form it preserves."""

    form: HermitianForm
    m: np.ndarray

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if self.form != other.form:
            raise ValueError("cannot compose elements of different forms")
        return GroupElement(self.form, self.m @ other.m)

    def inverse(self) -> "GroupElement":
        return inverse_by_form(self)

    def conjugated_by(self, h: "GroupElement") -> "GroupElement":
        """h g h^{-1}."""
        return h @ self @ h.inverse()

    @property
    def n(self) -> int:
        return self.form.n


@dataclass(frozen=True, eq=False)
class LieAlgebraElement:
    """Tangent vector at the identity: x* J + J x = 0."""

    form: HermitianForm
    x: np.ndarray


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError("expected a matrix, got ndim=%d" % a.ndim)
    return a


def form_defect(m, form: HermitianForm) -> float:
    """max-norm of m* J m - J (zero exactly on group members)."""
    a = _as_matrix(m)
    if a.shape != (form.size, form.size):
        raise ValueError(
            "matrix shape %r does not match form size %d" % (a.shape, form.size)
        )
    j = form.gram
    return float(np.max(np.abs(a.conj().T @ j @ a - j)))


def is_group_member(m, form: HermitianForm, tol: float = MEMBERSHIP_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return form_defect(m, form) <= tol


def as_member(m, form: HermitianForm, tol: float = MEMBERSHIP_TOL) -> GroupElement:
    """Validated constructor; raises GroupMembershipError on defect > tol."""
    a = _as_matrix(m)
    defect = form_defect(a, form)
    if defect > tol:
        raise GroupMembershipError(
            "form defect %.3e exceeds tolerance %.1e" % (defect, tol)
        )
    return GroupElement(form, a)


def identity_element(form: HermitianForm) -> GroupElement:
    return GroupElement(form, np.eye(form.size, dtype=complex))


def inverse_by_form(g: GroupElement, tol: float = MEMBERSHIP_TOL) -> GroupElement:
    """g^{-1} = J^{-1} g* J, using that both Gram matrices are involutions."""
    defect = form_defect(g.m, g.form)
    if defect > tol:
        raise GroupMembershipError(
            "refusing to invert: form defect %.3e exceeds %.1e" % (defect, tol)
        )
    j = g.form.gram
    return GroupElement(g.form, j @ g.m.conj().T @ j)


def matrix_exp(x) -> np.ndarray:
    """exp(x) by scaling-and-squaring on the Taylor series.

    Accurate to ~1e-14 relative for the norms seen here (<= 10); the series
    terminates early for nilpotent input.
    """
    a = _as_matrix(x)
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix_exp needs a square matrix")
    nrm = float(np.linalg.norm(a, ord=np.inf))
    squarings = 0
    if nrm > 0.5:
        squarings = int(np.ceil(np.log2(nrm / 0.5)))
        a = a / (2.0**squarings)
    size = a.shape[0]
    result = np.eye(size, dtype=complex)
    term = np.eye(size, dtype=complex)
    for k in range(1, 40):
        term = term @ a / k
        result = result + term
        if np.max(np.abs(term)) < 1e-18 * max(1.0, np.max(np.abs(result))):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def project_to_lie_algebra(x, form: HermitianForm) -> np.ndarray:
    """Project onto {x : x* J + J x = 0} via x -> (x - J x* J) / 2."""
    a = _as_matrix(x)
    j = form.gram
    return (a - j @ a.conj().T @ j) / 2.0


def is_lie_algebra_member(x, form: HermitianForm, tol: float = MEMBERSHIP_TOL) -> bool:
    a = _as_matrix(x)
    j = form.gram
    return float(np.max(np.abs(a.conj().T @ j + j @ a))) <= tol


def random_lie_element(
    form: HermitianForm, scale: float, rng: np.random.Generator
) -> LieAlgebraElement:
    size = form.size
    raw = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    return LieAlgebraElement(form, scale * project_to_lie_algebra(raw, form))


def random_element(form: HermitianForm, scale: float, seed: int) -> GroupElement:
    """exp of a seeded random tangent vector; deterministic per seed."""
    if scale < 0:
        raise ValueError("scale must be >= 0")
    rng = np.random.default_rng(seed)
    x = random_lie_element(form, scale, rng)
    return GroupElement(form, matrix_exp(x.x))


def nullspace(a, tol: float = RANK_TOL):
    """Orthonormal basis of the (right) nullspace by SVD thresholding.

    Returns ``(basis, gap)`` where basis columns span the nullspace and
    ``gap`` is the ratio between the smallest retained and largest
    discarded singular value (inf when one side is empty).  Raises
    AmbiguityError when the gap is below RANK_GAP_FACTOR, i.e. when the
    rank decision would be a guess.
    """
    a = _as_matrix(a)
    _, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(a.shape[1], dtype=complex), float("inf")
    cutoff = tol * s[0]
    rank = int(np.sum(s > cutoff))
    kept = s[rank - 1] if rank > 0 else None
    dropped = s[rank] if rank < s.size else None
    if kept is not None and dropped is not None and dropped > 0:
        gap = float(kept / dropped)
        if gap < RANK_GAP_FACTOR:
            raise AmbiguityError(
                "singular value gap %.2f at cutoff %.3e is too small to fix a rank"
                % (gap, cutoff)
            )
    else:
        gap = float("inf")
    basis = vh[rank:].conj().T
    return basis, gap


def _single_linkage(values: np.ndarray, tol: float):
    """Group indices of values whose chain-wise distance stays within tol."""
    k = len(values)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(values[i] - values[j]) <= tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


@dataclass(frozen=True, eq=False)
class EigenCluster:
    """One eigenvalue cluster of a group element.

    ``basis`` spans the generalized eigenspace (orthonormal columns),
    ``eigen_basis`` the true eigenspace; ``exponent`` is the nilpotency
    index of (g - value I) on the cluster, i.e. the cluster's exponent in
    the minimal polynomial.
    """

    value: complex
    multiplicity: int
    raw_values: tuple
    basis: np.ndarray
    eigen_basis: np.ndarray
    exponent: int

    @property
    def geometric_multiplicity(self) -> int:
        return self.eigen_basis.shape[1]


@dataclass(frozen=True, eq=False)
class EigenData:
    matrix: np.ndarray
    clusters: tuple

    @property
    def values(self):
        """(value, multiplicity) pairs, largest modulus first."""
        return [(c.value, c.multiplicity) for c in self.clusters]

    @property
    def is_semisimple(self) -> bool:
        return all(c.exponent == 1 for c in self.clusters)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def _null_at_resolution(power: np.ndarray, cutoff: float):
    """Nullspace with an absolute singular-value cutoff."""
    scale = float(np.linalg.norm(power, 2))
    if scale <= cutoff:
        return np.eye(power.shape[1], dtype=complex)
    basis, _ = nullspace(power, cutoff / scale)
    return basis


def _cluster_spaces(m: np.ndarray, value: complex, mult: int, cluster_tol: float):
    """Eigen and generalized-eigen bases for one cluster, plus its exponent.

    The cutoff is absolute at 10x the cluster resolution: true null
    directions of a shifted member sit far below it, directions belonging
    to other clusters far above (separations below cluster_tol were merged).
    """
    size = m.shape[0]
    cutoff = cluster_tol * 10.0
    shifted = m - value * np.eye(size, dtype=complex)
    power = shifted
    eigen_basis = None
    for e in range(1, mult + 1):
        basis = _null_at_resolution(power, cutoff)
        if e == 1:
            eigen_basis = basis
        if basis.shape[1] == mult:
            return eigen_basis, basis, e
        if basis.shape[1] > mult:
            raise AmbiguityError(
                "cluster at %r: nullity %d overshoots algebraic multiplicity %d"
                % (value, basis.shape[1], mult)
            )
        power = power @ shifted
    raise AmbiguityError(
        "cluster at %r: generalized eigenspace did not reach multiplicity %d"
        % (value, mult)
    )


def eigen_decompose(g: GroupElement, cluster_tol: float = CLUSTER_TOL) -> EigenData:
    """Eigenvalues of ``g`` merged into clusters at ``cluster_tol``.

    Cluster values are the means of the raw eigenvalues they merge (the
    perturbations of a defective eigenvalue nearly cancel in the mean), and
    the per-cluster spaces come from SVD nullspaces of shifted powers so
    that the result does not depend on the eigenvalue backend.
    """
    if cluster_tol <= 0:
        raise ValueError("cluster_tol must be positive")
    m = _as_matrix(g.m)
    w = backend.eigvals(m)
    groups = _single_linkage(w, cluster_tol)
    clusters = []
    for grp in groups:
        vals = w[grp]
        value = complex(np.mean(vals))
        eigen_basis, basis, exponent = _cluster_spaces(
            m, value, len(grp), cluster_tol
        )
        clusters.append(
            EigenCluster(
                value=value,
                multiplicity=len(grp),
                raw_values=tuple(complex(v) for v in vals),
                basis=basis,
                eigen_basis=eigen_basis,
                exponent=exponent,
            )
        )
    clusters.sort(key=lambda c: (-abs(c.value), -np.angle(c.value), -c.multiplicity))
    return EigenData(matrix=m, clusters=tuple(clusters))


def minimal_polynomial(
    g: GroupElement,
    tol: float = MINPOLY_TOL,
    cluster_tol: float = CLUSTER_TOL,
):
    """(root, exponent) pairs of the minimal polynomial over the clusters.

    Verifies that the product of (g - root I)^exponent over all clusters is
    small; a product norm stuck between ``tol`` and 1e4*tol is reported as
    ambiguous rather than rounded either way.
    """
    data = eigen_decompose(g, cluster_tol)
    size = data.size
    prod = np.eye(size, dtype=complex)
    for c in data.clusters:
        shifted = data.matrix - c.value * np.eye(size, dtype=complex)
        prod = prod @ np.linalg.matrix_power(shifted, c.exponent)
    residual = float(np.max(np.abs(prod)))
    if residual > tol:
        if residual <= 1e4 * tol:
            raise AmbiguityError(
                "minimal polynomial residual %.3e sits near tolerance %.1e"
                % (residual, tol)
            )
        raise AmbiguityError(
            "minimal polynomial residual %.3e far exceeds tolerance %.1e; "
            "clusters are unreliable at cluster_tol=%.1e"
            % (residual, tol, cluster_tol)
        )
    return [(c.value, c.exponent) for c in data.clusters]

"""Decide whether two isometries commute, by class-based criteria.

The geometric criteria (eigenspace preservation for semisimple targets,
fixed points plus isotropy for parabolic ones, Jordan splitting for the
non-semisimple cases) are implemented as an if-and-only-if test; the raw
matrix commutator ``commutes_oracle`` is the ground truth it is certified
against.
"""

from dataclasses import dataclass, field

import numpy as np

from chiso.classify import (
    CLASSIFY_TOL,
    IsometryClass,
    Kind,
    classify,
    fixed_boundary_points,
    jordan_decompose,
    negative_cluster,
)
from chiso.heisenberg import decompose_stabilizer, element_moving_to_infinity, fixes_infinity
from chiso.linalg import CLUSTER_TOL, EigenData, GroupElement, eigen_decompose
from chiso.models import convert_element, projectively_equal, second_form

VERDICT_TOL = 1e-7
_INFINITY_FIX_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class CommuteVerdict:
    """Outcome of the criteria-based test with the rule that decided it."""

    commutes: bool
    rule: str
    witnesses: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.commutes


def commutes_oracle(s: GroupElement, t: GroupElement, tol: float = VERDICT_TOL) -> bool:
    """Ground truth: max-norm of st - ts against tol * (1 + |s||t|)."""
    if s.form != t.form:
        raise ValueError("elements live on different forms")
    comm = s.m @ t.m - t.m @ s.m
    scale = 1.0 + float(np.linalg.norm(s.m)) * float(np.linalg.norm(t.m))
    return float(np.max(np.abs(comm))) <= tol * scale


def _subspace_invariant(m: np.ndarray, basis: np.ndarray, tol: float) -> bool:
    """Whether m maps span(basis) into itself: |(I - B B*) m B| small."""
    if basis.shape[1] == 0:
        return True
    image = m @ basis
    residual = image - basis @ (basis.conj().T @ image)
    return float(np.linalg.norm(residual, 2)) <= tol * (
        1.0 + float(np.linalg.norm(m, 2))
    )


def preserves_eigenspaces(
    s: GroupElement,
    t: GroupElement,
    tol: float = VERDICT_TOL,
    cluster_tol: float = CLUSTER_TOL,
    eigen: EigenData | None = None,
) -> bool:
    """Whether every eigenspace of semisimple t is invariant under s."""
    if eigen is None:
        eigen = eigen_decompose(t, cluster_tol)
    if not eigen.is_semisimple:
        raise ValueError("eigenspace preservation requires a semisimple element")
    return all(_subspace_invariant(s.m, c.eigen_basis, tol) for c in eigen.clusters)


def preserves_fixed_set(
    s: GroupElement,
    t: GroupElement,
    tol: float = CLASSIFY_TOL,
    cluster_tol: float = CLUSTER_TOL,
) -> bool:
    """Whether s maps the fixed boundary set of t onto itself.

    Isolated fixed points must be permuted; for a boundary elliptic t the
    fixed sphere is checked as invariance of its spanning eigenspace.
    """
    fixed = fixed_boundary_points(t, tol, cluster_tol)
    ptol = max(10.0 * tol, 1e-8)
    for p in fixed.points:
        image = p.apply(s)
        if not any(projectively_equal(image, q, ptol) for q in fixed.points):
            return False
    return all(_subspace_invariant(s.m, b, tol) for b in fixed.cone_bases)


def _axis_restriction(s: GroupElement, cls_t: IsometryClass, tol: float):
    """Eigenvalues (a, d) of s restricted to the axis span of hyperbolic t.

    Returns None when s does not preserve the two light-like eigenlines.
    """
    clusters = sorted(cls_t.eigen.clusters, key=lambda c: abs(c.value))
    lo, hi = clusters[0], clusters[-1]
    out = []
    for line in (hi.eigen_basis, lo.eigen_basis):
        if not _subspace_invariant(s.m, line, tol):
            return None
        v = line[:, 0]
        out.append(complex(np.vdot(v, s.m @ v)))
    return out[0], out[1]


def _axis_action_allowed(a: complex, d: complex, tol: float, cluster_tol: float) -> bool:
    """Identity or strictly hyperbolic, up to a common unit scalar.

    Central means a = d with |a| = 1; strictly hyperbolic means the pair is
    mu * (r, 1/r) with r real, r != +-1, equivalently d = 1 / conj(a) with
    |a| != 1.  Form preservation on the axis forces one of the two.
    """
    if abs(abs(a) - 1.0) <= 10.0 * cluster_tol:
        return abs(a - d) <= tol * (1.0 + abs(a))
    return abs(d - 1.0 / np.conj(a)) <= tol * (1.0 + 1.0 / abs(a))


def _verdict(ok: bool, rule: str, **witnesses) -> CommuteVerdict:
    return CommuteVerdict(commutes=ok, rule=rule, witnesses=witnesses)


def _translation_branch(
    s: GroupElement,
    t_elem: GroupElement,
    tol: float,
    cluster_tol: float,
) -> CommuteVerdict:
    """Cases against a unipotent translation t fixing infinity.

    ``s`` may be anything; the branch classifies it and applies the fixed
    point, isotropy and Jordan-splitting criteria.
    """
    if not fixes_infinity(s, _INFINITY_FIX_TOL):
        return _verdict(False, "translation:moved-fixed-point")
    cls_s = classify(s, tol, cluster_tol)
    if cls_s.is_hyperbolic:
        return _verdict(False, "translation:excluded-hyperbolic")
    if cls_s.is_elliptic:
        if cls_s.kind is not Kind.ELLIPTIC_BOUNDARY:
            return _verdict(
                False, "translation:excluded-elliptic", elliptic_kind=cls_s.kind.value
            )
        fix_basis = negative_cluster(s, cls_s.eigen, tol).eigen_basis
        ok = _subspace_invariant(t_elem.m, fix_basis, tol)
        return _verdict(ok, "translation:boundary-elliptic-fixed-sets")
    if cls_s.is_unipotent_translation:
        sim_t = decompose_stabilizer(t_elem, max(tol, 1e-8))
        sim_s = decompose_stabilizer(s, max(tol, 1e-8))
        pairing = complex(np.vdot(sim_t.trans.tau, sim_s.trans.tau)).imag
        scale = 1.0 + float(
            np.linalg.norm(sim_t.trans.tau) * np.linalg.norm(sim_s.trans.tau)
        )
        ok = abs(pairing) <= tol * scale
        return _verdict(ok, "translation:isotropy", isotropy_defect=pairing)
    parts = jordan_decompose(s, max(tol, 1e-8), cluster_tol)
    semi = _translation_branch(parts.s, t_elem, tol, cluster_tol)
    if not semi.commutes:
        return _verdict(False, "translation:jordan-split", failed_part="semisimple")
    unip = _translation_branch(parts.u, t_elem, tol, cluster_tol)
    if not unip.commutes:
        return _verdict(False, "translation:jordan-split", failed_part="unipotent")
    return _verdict(True, "translation:jordan-split")


def _move_pair_to_infinity(
    s: GroupElement, t: GroupElement, tol: float, cluster_tol: float
):
    """Send the fixed boundary point of parabolic t to infinity (second form)."""
    target = second_form(t.form.n)
    s2 = convert_element(s, target, tol=1e-6)
    t2 = convert_element(t, target, tol=1e-6)
    fixed = fixed_boundary_points(t2, tol, cluster_tol)
    if len(fixed.points) != 1:
        raise ValueError(
            "parabolic element should fix exactly one boundary point, found %d"
            % len(fixed.points)
        )
    mover = element_moving_to_infinity(fixed.points[0])
    inv = mover.inverse()
    return mover @ s2 @ inv, mover @ t2 @ inv


def commutes_by_theorem(
    s: GroupElement,
    t: GroupElement,
    tol: float = VERDICT_TOL,
    cluster_tol: float = CLUSTER_TOL,
) -> CommuteVerdict:
    """Commutation verdict from the class-based criteria.

    Dispatch on the class of t: eigenspace preservation for elliptic;
    additionally the axis action for hyperbolic; common fixed point plus
    per-class conditions against a unipotent translation; Jordan splitting
    for ellipto-parabolic.  Certified against :func:`commutes_oracle` by
    the acceptance suite.
    """
    if s.form != t.form:
        raise ValueError("elements live on different forms")
    cls_t = classify(t, tol, cluster_tol)
    if cls_t.is_elliptic:
        ok = preserves_eigenspaces(s, t, tol, cluster_tol, eigen=cls_t.eigen)
        return _verdict(ok, "elliptic:eigenspaces")
    if cls_t.is_hyperbolic:
        if not preserves_eigenspaces(s, t, tol, cluster_tol, eigen=cls_t.eigen):
            return _verdict(False, "hyperbolic:eigenspaces")
        pair = _axis_restriction(s, cls_t, tol)
        if pair is None:
            return _verdict(False, "hyperbolic:axis-lines-moved")
        ok = _axis_action_allowed(pair[0], pair[1], tol, cluster_tol)
        return _verdict(
            ok, "hyperbolic:eigenspaces+axis", axis_action=(pair[0], pair[1])
        )
    s_inf, t_inf = _move_pair_to_infinity(s, t, tol, cluster_tol)
    if cls_t.is_unipotent_translation:
        return _translation_branch(s_inf, t_inf, tol, cluster_tol)
    # ellipto-parabolic: commuting with t means commuting with both parts
    parts = jordan_decompose(t_inf, max(tol, 1e-8), cluster_tol)
    if not preserves_eigenspaces(s_inf, parts.s, tol, cluster_tol):
        return _verdict(False, "ellipto-parabolic:semisimple-eigenspaces")
    sub = _translation_branch(s_inf, parts.u, tol, cluster_tol)
    if not sub.commutes:
        return _verdict(
            False, "ellipto-parabolic:unipotent-part", inner_rule=sub.rule
        )
    return _verdict(True, "ellipto-parabolic:split")

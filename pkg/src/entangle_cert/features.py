"""Reduced feature matrices and the first-move criterion for local measurements.

For a group ``G`` of parties, ``Pi_ij = Tr_{not G}(|psi_i><psi_j|)``. A party
group can start a nontrivial orthogonality-preserving measurement exactly
when the ``Pi_ij`` fail to span all ``d_G**2 - 1`` traceless directions.
A measurement counts as *nontrivial* when some outcome operator is not a
scalar multiple of the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .certificate import Certificate, Verdict
from .exact import ZERO
from .linalg import Matrix, adjoint, columns_to_matrix, exact_rank, vec
from .states import Bipartition, InvariantViolation, PureState, StateSet

__all__ = [
    "NotOrthogonal",
    "ReducedFeatureMatrix",
    "reduced_feature",
    "partial_outer",
    "vectorization_map",
    "feature_span_rank",
    "no_go_first_move",
    "joint_groups",
    "certify_strong_nonlocality",
]


class NotOrthogonal(InvariantViolation):
    pass


def _complement(spec, group: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(p for p in range(spec.n_parties) if p not in group)


def partial_outer(a: PureState, b: PureState, group) -> Matrix:
    """``Tr_{not group}(|a><b|)`` with rows/cols indexed by the group's digits."""
    spec = a.spec
    group = spec.group(group)
    rest = _complement(spec, group)
    if not rest:
        raise ValueError("group must leave at least one party to trace out")
    bp = Bipartition(spec, group, rest)
    dg = bp.dims[0]
    gdims = [spec.dims[p] for p in group]
    rdims = [spec.dims[p] for p in rest]

    def split(state):
        # complement index -> list of (group index, amplitude)
        out: dict[int, list] = {}
        for idx, amp in state.amplitudes.items():
            g = 0
            for p, d in zip(group, gdims):
                g = g * d + idx[p]
            r = 0
            for p, d in zip(rest, rdims):
                r = r * d + idx[p]
            out.setdefault(r, []).append((g, amp))
        return out

    sa, sb = split(a), split(b)
    m = [[ZERO] * dg for _ in range(dg)]
    for r, col_a in sa.items():
        col_b = sb.get(r)
        if not col_b:
            continue
        for p, x in col_a:
            row = m[p]
            for q, y in col_b:
                row[q] = row[q] + x * y.conj()
    return m


@dataclass(frozen=True)
class ReducedFeatureMatrix:
    i: int
    j: int
    group: tuple[int, ...]
    entries: tuple[tuple, ...]

    @property
    def matrix(self) -> Matrix:
        return [list(row) for row in self.entries]

    def adjoint(self) -> "ReducedFeatureMatrix":
        return ReducedFeatureMatrix(self.j, self.i, self.group, tuple(map(tuple, adjoint(self.matrix))))


def reduced_feature(ss: StateSet, i: int, j: int, group) -> ReducedFeatureMatrix:
    n = len(ss)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"state index out of range for a set of {n}")
    if i == j:
        raise ValueError("reduced feature matrices are defined for i != j")
    g = ss.spec.group(group)
    m = partial_outer(ss[i], ss[j], g)
    return ReducedFeatureMatrix(i, j, g, tuple(map(tuple, m)))


def vectorization_map(matrices: list[Matrix]) -> Matrix:
    """``d^2 x count`` matrix whose columns are the column-stacked inputs."""
    return columns_to_matrix([vec(m) for m in matrices])


def _feature_matrices(ss: StateSet, group) -> list[Matrix]:
    mats = []
    for i in range(len(ss)):
        for j in range(i + 1, len(ss)):
            m = reduced_feature(ss, i, j, group).matrix
            mats.append(m)
            mats.append(adjoint(m))
    return mats


def feature_span_rank(ss: StateSet, group) -> int:
    """Dimension of ``span{Pi_ij, Pi_ij^dagger : i < j}`` over the group."""
    mats = _feature_matrices(ss, group)
    if not mats:
        return 0
    return exact_rank(vectorization_map(mats))


def _require_orthogonal(ss: StateSet):
    if not ss.is_orthogonal():
        raise NotOrthogonal(f"set {ss.name!r} is not pairwise orthogonal")


def no_go_first_move(ss: StateSet, group) -> Certificate:
    """Holds when the group cannot go first with a nontrivial orthogonality-preserving measurement."""
    _require_orthogonal(ss)
    g = ss.spec.group(group)
    d = 1
    for p in g:
        d *= ss.spec.dims[p]
    rank = feature_span_rank(ss, g)
    bound = d * d - 1
    return Certificate(
        "no-first-move",
        Verdict.HOLDS if rank == bound else Verdict.FAILS,
        scope={"group": ss.spec.group_label(g)},
        summary={"rank": rank, "bound": bound},
        evidence={"d": d, "pairs": len(ss) * (len(ss) - 1) // 2},
    )


def joint_groups(spec) -> list[tuple[int, ...]]:
    """All ``(n-1)``-party groups in cyclic order: ``AB, BC, CA`` for three parties."""
    n = spec.n_parties
    return [tuple((start + k) % n for k in range(n - 1)) for start in range(n)]


def certify_strong_nonlocality(ss: StateSet, witness=None) -> Certificate:
    """Rank test over every ``(n-1)``-party group.

    ``holds`` when every group is blocked. A ``fails`` verdict needs an
    explicit eliminating measurement passed as ``witness`` (an
    :class:`~entangle_cert.certify.OpmWitness`); otherwise the rank data is
    reported as ``inconclusive``.
    """
    if ss.spec.n_parties < 3:
        raise ValueError("strong nonlocality needs at least three parties")
    _require_orthogonal(ss)
    per_group = [no_go_first_move(ss, g) for g in joint_groups(ss.spec)]
    ranks = {c.scope["group"]: c.summary["rank"] for c in per_group}
    bounds = {c.scope["group"]: c.summary["bound"] for c in per_group}
    evidence = {"ranks": ranks, "bounds": bounds}
    if all(c.holds for c in per_group):
        verdict = Verdict.HOLDS
    elif witness is not None and witness.verified and witness.eliminating:
        verdict = Verdict.FAILS
        evidence["witness"] = witness
    else:
        verdict = Verdict.INCONCLUSIVE
        evidence["open_groups"] = [c.scope["group"] for c in per_group if not c.holds]
    return Certificate(
        "strong-nonlocality",
        verdict,
        scope={"set": ss.name},
        summary={"groups": list(ranks)},
        evidence=evidence,
    )

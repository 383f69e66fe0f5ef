"""Product-forming matrices and the quadratic systems they define.

A vector ``sum_i x_i |psi_i>`` is a product state across a cut exactly when
every mixed 2x2 minor of its coefficient matrix vanishes, i.e. ``X^T P X = 0``
for each product-forming matrix ``P``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .exact import ZERO
from .linalg import Matrix
from .poly import LEX, MultiPoly, default_gens, format_system
from .states import Bipartition, InvariantViolation, StateSet, all_bipartitions, reshape_bipartite, single_party_cuts

__all__ = [
    "ProductFormingMatrix",
    "QuadraticSystem",
    "PerturbedSystem",
    "SpanDeficient",
    "product_forming",
    "quadratic_system",
    "perturb",
    "extended_stability_system",
    "resolve_scope",
]


class SpanDeficient(InvariantViolation):
    pass


@dataclass(frozen=True)
class ProductFormingMatrix:
    bipartition: Bipartition
    rows: tuple[int, int]
    cols: tuple[int, int]
    entries: tuple[tuple, ...]

    @property
    def matrix(self) -> Matrix:
        return [list(r) for r in self.entries]

    def quadratic_form(self, gens) -> MultiPoly:
        """``X^T P X`` with symmetrised cross coefficients."""
        n = len(self.entries)
        terms = {}
        for i in range(n):
            for j in range(i, n):
                c = self.entries[i][i] if i == j else self.entries[i][j] + self.entries[j][i]
                if c.is_zero():
                    continue
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = c
        return MultiPoly(gens, terms)


def product_forming(ss: StateSet, b: Bipartition) -> list[ProductFormingMatrix]:
    """One matrix per choice of row pair ``k < p`` and column pair ``l < r``."""
    if len(ss) < 1:
        raise ValueError("need at least one state")
    coeffs = [reshape_bipartite(s, b) for s in ss]
    dl, dr = b.dims
    out = []
    for k, p in combinations(range(dl), 2):
        for l, r in combinations(range(dr), 2):
            ent = tuple(
                tuple(ai[k][l] * aj[p][r] - ai[k][r] * aj[p][l] for aj in coeffs) for ai in coeffs
            )
            out.append(ProductFormingMatrix(b, (k, p), (l, r), ent))
    return out


def resolve_scope(spec, scope) -> list[Bipartition]:
    """``"all"`` means every single-party cut; ``"every"`` every bipartition; also a label like ``"A|BC"``."""
    if isinstance(scope, Bipartition):
        return [scope]
    if scope in (None, "all"):
        return single_party_cuts(spec)
    if scope == "every":
        return all_bipartitions(spec)
    if isinstance(scope, str) and "," in scope:
        return [resolve_scope(spec, part)[0] for part in scope.split(",")]
    if isinstance(scope, str):
        left, _, right = scope.partition("|")
        return [Bipartition.of(spec, left, right or None)]
    return [s if isinstance(s, Bipartition) else resolve_scope(spec, s)[0] for s in scope]


@dataclass
class QuadraticSystem:
    gens: tuple[str, ...]
    polys: list[MultiPoly]
    scope: list[str]
    matrices: list[ProductFormingMatrix] = field(default_factory=list, repr=False)
    source: str = ""

    def __len__(self):
        return len(self.polys)

    def is_homogeneous(self) -> bool:
        return all(p.is_homogeneous() for p in self.polys)

    def evaluate(self, point) -> list[complex]:
        return [p.evaluate(point) for p in self.polys]

    def residual(self, point) -> float:
        return max((abs(v) for v in self.evaluate(point)), default=0.0)

    def to_text(self) -> str:
        return format_system(self.polys, LEX)


@dataclass
class PerturbedSystem(QuadraticSystem):
    base: QuadraticSystem | None = field(default=None, repr=False)
    pinned: int = 0

    def full_point(self, free_values) -> list:
        """Insert the pinned coordinate 1 into a point given over the free variables."""
        vals = list(free_values)
        return vals[: self.pinned] + [1] + vals[self.pinned :]


def quadratic_system(ss: StateSet, scope="all") -> QuadraticSystem:
    """Homogeneous system whose common zeros are the product vectors of the span (zero polynomials dropped)."""
    gens = default_gens(len(ss))
    cuts = resolve_scope(ss.spec, scope)
    mats, polys = [], []
    for b in cuts:
        for m in product_forming(ss, b):
            mats.append(m)
            q = m.quadratic_form(gens)
            if not q.is_zero():
                polys.append(q)
    return QuadraticSystem(gens, polys, [b.label for b in cuts], mats, ss.name)


def perturb(sys: QuadraticSystem, k: int) -> PerturbedSystem:
    """Set ``x_k = 1``; the remaining variables keep their names."""
    n = len(sys.gens)
    if not 0 <= k < n:
        raise IndexError(f"pinned index {k} out of range for {n} variables")
    polys = []
    for p in sys.polys:
        q = p.substitute({k: 1})
        if not q.is_zero():
            polys.append(q)
    gens = tuple(g for i, g in enumerate(sys.gens) if i != k)
    return PerturbedSystem(gens, polys, list(sys.scope), sys.matrices, sys.source, base=sys, pinned=k)


def extended_stability_system(core: StateSet, complement: StateSet, pinned: int, scope="all") -> PerturbedSystem:
    """Product vectors of ``span(core + complement)`` with the stopper coordinate pinned to 1."""
    combined = core.union(complement, f"{core.name}+{complement.name}") if len(complement) else core
    if len(complement) and combined.rank() < core.spec.total_dim:
        raise SpanDeficient(
            f"core and complement span {combined.rank()} of {core.spec.total_dim} dimensions"
        )
    if not 0 <= pinned < len(core):
        raise IndexError("pinned must index a state of the core set")
    return perturb(quadratic_system(combined, scope), pinned)

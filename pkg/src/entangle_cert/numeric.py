"""Floating-point root finding, back-substitution and Gram checks."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .poly import MultiPoly
from .states import StateSet

__all__ = [
    "NonConvergence",
    "ResidualTooLarge",
    "UnivariatePoly",
    "ProductStateSolution",
    "find_roots",
    "order_roots",
    "back_substitute",
    "gram_nonorthogonality",
    "hermitian_eigenvalues",
    "RESIDUAL_BAR",
]

RESIDUAL_BAR = 1e-8
ITERATION_CAP = 500


class NonConvergence(RuntimeError):
    pass


class ResidualTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class UnivariatePoly:
    """Complex coefficients ``c_0..c_deg`` (ascending powers)."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in cs))

    @classmethod
    def from_multipoly(cls, p: MultiPoly, var=None) -> "UnivariatePoly":
        var = var if var is not None else (p.variables() or p.gens)[0]
        return cls(tuple(complex(c) for c in p.univariate_coeffs(var)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self.coeffs)

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def with_derivative(self, z: complex) -> tuple[complex, complex]:
        p, dp = 0j, 0j
        for c in reversed(self.coeffs):
            dp = dp * z + p
            p = p * z + c
        return p, dp

    def scale(self) -> float:
        """Coefficient 1-norm, the yardstick for residuals."""
        return sum(abs(c) for c in self.coeffs)


def find_roots(p, tol: float = 1e-12) -> list[complex]:
    """All roots with multiplicity by Aberth-Ehrlich iteration.

    Start points sit on a circle of Cauchy-bound radius, slightly rotated to
    avoid symmetric stalls. For real-coefficient input the returned multiset
    is made exactly closed under conjugation.
    """
    if isinstance(p, MultiPoly):
        p = UnivariatePoly.from_multipoly(p)
    elif not isinstance(p, UnivariatePoly):
        p = UnivariatePoly(tuple(p))
    n = p.degree
    if n < 1:
        raise ValueError("need degree >= 1")
    lead = p.coeffs[-1]
    radius = 1 + max(abs(c / lead) for c in p.coeffs[:-1])
    z = [radius * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]
    for _ in range(ITERATION_CAP):
        worst = 0.0
        for k in range(n):
            val, der = p.with_derivative(z[k])
            if val == 0:
                continue
            ratio = val / der if der != 0 else complex(radius)
            repel = sum(1 / (z[k] - z[j]) for j in range(n) if j != k and z[k] != z[j])
            w = ratio / (1 - ratio * repel)
            z[k] -= w
            worst = max(worst, abs(w) / max(1.0, abs(z[k])))
        if worst <= tol:
            break
    else:
        raise NonConvergence(f"Aberth iteration did not converge in {ITERATION_CAP} steps")
    if p.is_real():
        z = _conjugate_close(z, max(tol, 1e-12) * 1e3)
    return order_roots(z)


def _conjugate_close(roots: list[complex], eps: float) -> list[complex]:
    left = list(roots)
    out = []
    while left:
        r = left.pop(0)
        if abs(r.imag) <= eps * max(1.0, abs(r)):
            out.append(complex(r.real, 0.0))
            continue
        j = min(range(len(left)), key=lambda i: abs(left[i] - r.conjugate()), default=None)
        if j is None:
            out.append(r)
            continue
        s = left.pop(j)
        m = (r + s.conjugate()) / 2
        out.extend([m, m.conjugate()])
    return out


def order_roots(roots: Sequence[complex], eps: float = 1e-9) -> list[complex]:
    """Real roots ascending, then complex roots by real part with the upper half-plane member first."""
    real = sorted((r for r in roots if abs(r.imag) <= eps), key=lambda r: r.real)
    cplx = sorted((r for r in roots if abs(r.imag) > eps), key=lambda r: (round(r.real, 9), -r.imag))
    return real + cplx


@dataclass
class ProductStateSolution:
    root: complex
    coordinates: dict[str, complex]
    residual: float

    def vector(self, order: Sequence[str]) -> list[complex]:
        return [self.coordinates[v] for v in order]

    def to_dict(self) -> dict:
        return {
            "root": [round(self.root.real, 6), round(self.root.imag, 6)],
            "coordinates": {k: [round(v.real, 6), round(v.imag, 6)] for k, v in self.coordinates.items()},
            "residual": self.residual,
        }


def back_substitute(
    roots: Sequence[complex],
    back_subst: Mapping[str, MultiPoly],
    keep: str,
    system: Sequence[MultiPoly] = (),
    gens: Sequence[str] | None = None,
    bar: float = RESIDUAL_BAR,
) -> list[ProductStateSolution]:
    """Evaluate ``x_j = h_j(keep)`` at each root; residual is the max |f| over ``system``."""
    out = []
    for r in roots:
        coords = {v: h.evaluate({h.gens[0]: r}) for v, h in back_subst.items()}
        coords[keep] = complex(r)
        residual = 0.0
        if system:
            names = gens or system[0].gens
            point = [coords[v] for v in names]
            residual = max(abs(f.evaluate(point)) for f in system)
        if residual > bar:
            raise ResidualTooLarge(f"residual {residual:.3e} at root {r}")
        out.append(ProductStateSolution(complex(r), coords, residual))
    return out


def gram_nonorthogonality(
    solutions: Sequence[ProductStateSolution],
    states: StateSet,
    variables: Sequence[str],
    pinned: int | None = None,
    threshold: float = 1e-6,
) -> tuple[np.ndarray, bool]:
    """Gram matrix of the product vectors ``sum_i x_i |psi_i>``.

    ``variables`` names the coordinate attached to each state; the pinned
    state (if any) has coefficient 1. Weights come from the states'
    exact Gram matrix, so non-orthogonal inputs are handled too.
    """
    g = np.array([[complex(x) for x in row] for row in states.gram()])
    vecs = []
    for s in solutions:
        v = []
        names = iter(variables)
        for i in range(len(states)):
            v.append(1.0 + 0j if i == pinned else s.coordinates[next(names)])
        vecs.append(np.array(v))
    m = np.array([[np.vdot(a, g @ b) for b in vecs] for a in vecs])
    off = [abs(m[i, j]) for i in range(len(vecs)) for j in range(len(vecs)) if i != j]
    return m, all(x > threshold for x in off)


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending eigenvalues of a hermitian matrix (exact entries accepted)."""
    a = np.array([[complex(x) for x in row] for row in m])
    return np.linalg.eigvalsh(a)

"""Unnormalized multipartite pure states with exact amplitudes.

States are sparse maps from multi-indices to :class:`GaussianRational`.
Normalization is never applied: every certificate in this package is
invariant under rescaling individual states.
"""

from __future__ import annotations

import itertools
import json
import string
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

from .exact import ONE, ZERO, GaussianRational, ParseError, format_gr, gr, parse_gr
from .linalg import Matrix, exact_rank

__all__ = [
    "PartySpec",
    "PureState",
    "StateSet",
    "Bipartition",
    "SpecMismatch",
    "InvariantViolation",
    "inner_product",
    "reshape_bipartite",
    "single_party_cuts",
    "all_bipartitions",
    "load_state_set",
    "dump_state_set",
]


class SpecMismatch(ValueError):
    """States live on different party layouts."""


class InvariantViolation(ValueError):
    """An asserted structural property does not hold."""


@dataclass(frozen=True)
class PartySpec:
    dims: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) < 2:
            raise ValueError("need at least two parties")
        if any(d < 2 for d in dims):
            raise ValueError(f"local dimensions must be >= 2, got {dims}")
        labels = tuple(self.labels) or tuple(string.ascii_uppercase[: len(dims)])
        if len(labels) != len(dims):
            raise ValueError("one label per party required")
        object.__setattr__(self, "labels", labels)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def party_index(self, label: str) -> int:
        return self.labels.index(label)

    def group(self, spec) -> tuple[int, ...]:
        """Resolve ``"CA"``, ``"BC"`` or an index sequence into party indices."""
        if isinstance(spec, str):
            return tuple(self.party_index(ch) for ch in spec)
        return tuple(int(i) for i in spec)

    def group_label(self, parties: Sequence[int]) -> str:
        return "".join(self.labels[p] for p in parties)

    def indices(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.dims))


@dataclass(frozen=True)
class Bipartition:
    """Ordered split of the parties; digit order follows ``left`` and ``right``."""

    spec: PartySpec
    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left, right = tuple(self.left), tuple(self.right)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        n = self.spec.n_parties
        if not left or not right:
            raise ValueError("both sides of a bipartition must be nonempty")
        if set(left) & set(right):
            raise ValueError("bipartition sides overlap")
        if sorted(left + right) != list(range(n)):
            raise ValueError("bipartition must cover every party exactly once")

    @classmethod
    def of(cls, spec: PartySpec, left, right=None) -> "Bipartition":
        left = spec.group(left)
        if right is None:
            # complement in cyclic order starting after the last left party
            n = spec.n_parties
            start = (max(left) + 1) % n if len(left) == 1 else 0
            right = tuple(p for p in ((start + k) % n for k in range(n)) if p not in left)
        else:
            right = spec.group(right)
        return cls(spec, left, right)

    @property
    def dims(self) -> tuple[int, int]:
        return (
            prod(self.spec.dims[p] for p in self.left),
            prod(self.spec.dims[p] for p in self.right),
        )

    def swapped(self) -> "Bipartition":
        return Bipartition(self.spec, self.right, self.left)

    @property
    def label(self) -> str:
        return f"{self.spec.group_label(self.left)}|{self.spec.group_label(self.right)}"

    def __str__(self):
        return self.label


def _encode(digits: Sequence[int], dims: Sequence[int]) -> int:
    idx = 0
    for digit, d in zip(digits, dims):
        idx = idx * d + digit
    return idx


class PureState:
    """A sparse, unnormalized pure state."""

    __slots__ = ("spec", "amplitudes", "label")

    def __init__(self, spec: PartySpec, amplitudes: dict, label: str = ""):
        clean: dict[tuple[int, ...], GaussianRational] = {}
        for idx, amp in amplitudes.items():
            idx = tuple(int(k) for k in idx)
            if len(idx) != spec.n_parties or any(not 0 <= k < d for k, d in zip(idx, spec.dims)):
                raise ValueError(f"multi-index {idx} outside dims {spec.dims}")
            amp = gr(amp)
            if not amp.is_zero():
                clean[idx] = clean.get(idx, ZERO) + amp
                if clean[idx].is_zero():
                    del clean[idx]
        if not clean:
            raise ValueError("a pure state needs at least one nonzero amplitude")
        self.spec = spec
        self.amplitudes = dict(sorted(clean.items()))
        self.label = label

    @classmethod
    def from_kets(cls, spec: PartySpec, kets: dict[str, object], label: str = "") -> "PureState":
        """Build from ``{"011": -2, ...}`` style bit-string keys."""
        return cls(spec, {tuple(int(ch) for ch in k): v for k, v in kets.items()}, label)

    @classmethod
    def product(cls, spec: PartySpec, factors: Sequence[Sequence], label: str = "") -> "PureState":
        """Tensor product of local vectors (one list of amplitudes per party)."""
        amps = {}
        for idx in spec.indices():
            val = ONE
            for party, k in enumerate(idx):
                val = val * gr(factors[party][k])
                if val.is_zero():
                    break
            if not val.is_zero():
                amps[idx] = val
        return cls(spec, amps, label)

    def __getitem__(self, idx) -> GaussianRational:
        return self.amplitudes.get(tuple(idx), ZERO)

    def scaled(self, s) -> "PureState":
        s = gr(s)
        return PureState(self.spec, {k: v * s for k, v in self.amplitudes.items()}, self.label)

    def vector(self) -> list[GaussianRational]:
        out = [ZERO] * self.spec.total_dim
        for idx, amp in self.amplitudes.items():
            out[_encode(idx, self.spec.dims)] = amp
        return out

    def norm2(self) -> GaussianRational:
        return inner_product(self, self)

    def __eq__(self, other):
        return (
            isinstance(other, PureState)
            and self.spec == other.spec
            and self.amplitudes == other.amplitudes
        )

    def __hash__(self):
        return hash((self.spec, tuple(self.amplitudes.items())))

    def __repr__(self):
        terms = " ".join(f"{format_gr(v)}|{''.join(map(str, k))}>" for k, v in self.amplitudes.items())
        return f"PureState({self.label or '?'}: {terms})"


@dataclass
class StateSet:
    spec: PartySpec
    states: list[PureState]
    name: str = ""
    orthogonal: bool = field(default=False)

    def __post_init__(self):
        for s in self.states:
            if s.spec != self.spec:
                raise SpecMismatch(f"state {s.label!r} has dims {s.spec.dims}, set has {self.spec.dims}")
        if self.orthogonal and not self.is_orthogonal():
            raise InvariantViolation(f"set {self.name!r} asserted orthogonal but is not")

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i):
        return self.states[i]

    @property
    def labels(self) -> list[str]:
        return [s.label or str(i) for i, s in enumerate(self.states)]

    def is_orthogonal(self) -> bool:
        return all(
            inner_product(a, b).is_zero() for a, b in itertools.combinations(self.states, 2)
        )

    def gram(self) -> Matrix:
        return [[inner_product(a, b) for b in self.states] for a in self.states]

    def subset(self, indices: Iterable[int], name: str | None = None) -> "StateSet":
        idx = list(indices)
        return StateSet(self.spec, [self.states[i] for i in idx], name or self.name)

    def without(self, k: int) -> "StateSet":
        return self.subset([i for i in range(len(self)) if i != k], f"{self.name}\\{self.labels[k]}")

    def union(self, other: "StateSet", name: str | None = None) -> "StateSet":
        if other.spec != self.spec:
            raise SpecMismatch("cannot join sets on different party layouts")
        return StateSet(self.spec, self.states + other.states, name or f"{self.name}+{other.name}")

    def coefficient_matrix(self) -> Matrix:
        """One row per state, columns in row-major multi-index order."""
        return [s.vector() for s in self.states]

    def rank(self) -> int:
        return exact_rank(self.coefficient_matrix())


def inner_product(a: PureState, b: PureState) -> GaussianRational:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.spec != b.spec:
        raise SpecMismatch("inner product of states on different layouts")
    if len(a.amplitudes) > len(b.amplitudes):
        small, large, flip = b.amplitudes, a.amplitudes, True
    else:
        small, large, flip = a.amplitudes, b.amplitudes, False
    total = ZERO
    for idx, x in small.items():
        y = large.get(idx)
        if y is not None:
            total = total + (x * y.conj() if flip else x.conj() * y)
    return total


def reshape_bipartite(s: PureState, b: Bipartition) -> Matrix:
    """Coefficient matrix ``d_L x d_R``; digits encoded most-significant first."""
    dl, dr = b.dims
    ldims = [s.spec.dims[p] for p in b.left]
    rdims = [s.spec.dims[p] for p in b.right]
    m = [[ZERO] * dr for _ in range(dl)]
    for idx, amp in s.amplitudes.items():
        row = _encode([idx[p] for p in b.left], ldims)
        col = _encode([idx[p] for p in b.right], rdims)
        m[row][col] = amp
    return m


def single_party_cuts(spec: PartySpec) -> list[Bipartition]:
    """``A|BC, B|CA, C|AB`` style cuts: each party against the rest in cyclic order."""
    if spec.n_parties == 2:
        return [Bipartition(spec, (0,), (1,))]
    return [Bipartition.of(spec, (p,)) for p in range(spec.n_parties)]


def all_bipartitions(spec: PartySpec) -> list[Bipartition]:
    """Every unordered bipartition, each listed once with party 0 on the left."""
    n = spec.n_parties
    out = []
    for size in range(1, n):
        for left in itertools.combinations(range(n), size):
            if 0 not in left:
                continue
            right = tuple(p for p in range(n) if p not in left)
            out.append(Bipartition(spec, left, right))
    # single-party cuts in the conventional cyclic form come first
    singles = single_party_cuts(spec)
    seen = {frozenset(b.left) for b in singles} | {frozenset(b.right) for b in singles}
    rest = [b for b in out if frozenset(b.left) not in seen]
    return singles + rest


def is_product_across(s: PureState, b: Bipartition) -> bool:
    return exact_rank(reshape_bipartite(s, b)) == 1


def is_biseparable(s: PureState) -> bool:
    return any(is_product_across(s, b) for b in all_bipartitions(s.spec))


# --------------------------------------------------------------------------
# JSON document


def dump_state_set(ss: StateSet) -> str:
    """Canonical JSON text; byte-identical for equal sets."""
    doc = {
        "dims": list(ss.spec.dims),
        "name": ss.name,
        "states": [
            {
                "label": s.label,
                "terms": [
                    {"index": list(idx), "amp": format_gr(amp)} for idx, amp in s.amplitudes.items()
                ],
            }
            for s in ss.states
        ],
    }
    if ss.spec.labels != tuple(string.ascii_uppercase[: ss.spec.n_parties]):
        doc["labels"] = list(ss.spec.labels)
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _where(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def load_state_set(text: str) -> StateSet:
    """Parse a state-set document; errors carry line/column when available."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise ParseError("state-set document must be a JSON object")
    try:
        dims = doc["dims"]
        states = doc["states"]
    except KeyError as exc:
        raise ParseError(f"missing required key {exc.args[0]!r}") from exc
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise ParseError("'dims' must be a list of integers")
    try:
        spec = PartySpec(tuple(dims), tuple(doc.get("labels", ())))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if not isinstance(states, list):
        raise ParseError("'states' must be a list")
    out = []
    for n, st in enumerate(states):
        if not isinstance(st, dict) or "terms" not in st:
            raise ParseError(f"state #{n} must be an object with 'terms'")
        amps = {}
        for t in st["terms"]:
            try:
                idx = tuple(t["index"])
                amp = parse_gr(t["amp"])
            except (KeyError, TypeError) as exc:
                raise ParseError(f"state #{n}: malformed term {t!r}") from exc
            except ParseError as exc:
                pos = text.find(json.dumps(t.get("amp")))
                line, col = _where(text, pos) if pos >= 0 else (None, None)
                raise ParseError(f"state #{n}: {exc.message}", line=line, column=col) from exc
            amps[idx] = amps.get(idx, ZERO) + amp
        try:
            out.append(PureState(spec, amps, st.get("label", "")))
        except ValueError as exc:
            raise ParseError(f"state #{n}: {exc}") from exc
    return StateSet(spec, out, doc.get("name", ""), orthogonal=bool(doc.get("orthogonal", False)))

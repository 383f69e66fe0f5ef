"""Named three-qubit state families built from cross-L tiles.

All amplitudes are exact. Labels follow the tile naming: ``phi00-`` is the
``A=0`` tile state, ``phi01-`` the ``C=0`` one, ``psi10-``/``psi11-`` their
``A=1``/``C=1`` counterparts, ``tau`` the product stopper and ``kappa`` the
biseparable stopper entangled across ``C`` and ``A``.
"""

from __future__ import annotations

from .exact import ONE, GaussianRational, gr
from .linalg import Matrix
from .states import PartySpec, PureState, StateSet

__all__ = [
    "FAMILIES",
    "ParamConstraintViolated",
    "UnknownFamily",
    "make_family",
    "sz_witness_matrix",
    "sz_witness_eigenvalues",
]

QUBITS3 = PartySpec((2, 2, 2))


class ParamConstraintViolated(ValueError):
    """Family parameters violate the construction's constraints."""


class UnknownFamily(KeyError):
    pass


def _ket(kets: dict, label: str) -> PureState:
    return PureState.from_kets(QUBITS3, kets, label)


def _tiles(a1, b1, a0=ONE, b0=ONE, plus: bool = True) -> dict[str, PureState]:
    a0, a1, b0, b1 = gr(a0), gr(a1), gr(b0), gr(b1)
    if a0 * a0 == a1 * a1:
        raise ParamConstraintViolated(f"a0^2 == a1^2 (a0={a0}, a1={a1})")
    if b0 * b0 == b1 * b1:
        raise ParamConstraintViolated(f"b0^2 == b1^2 (b0={b0}, b1={b1})")
    return _tile_states(a0, a1, b0, b1, plus)


def _tile_states(a0, a1, b0, b1, plus: bool) -> dict[str, PureState]:
    ca0, ca1, cb0, cb1 = a0.conj(), a1.conj(), b0.conj(), b1.conj()
    out = {
        # |0>_A (a0|00> + a1|10> - (a0+a1)|11>)_BC
        "phi00-": _ket({"000": a0, "010": a1, "011": -(a0 + a1)}, "phi00-"),
        # (conj a0 |01> - conj a1 |00> - (conj a0 - conj a1)|10>)_AB |0>_C
        "phi01-": _ket({"010": ca0, "000": -ca1, "100": -(ca0 - ca1)}, "phi01-"),
        "psi10-": _ket({"101": b0, "111": b1, "110": -(b0 + b1)}, "psi10-"),
        "psi11-": _ket({"111": cb0, "101": -cb1, "001": -(cb0 - cb1)}, "psi11-"),
    }
    if plus:
        na = a0.abs2() + a1.abs2()
        nb = b0.abs2() + b1.abs2()
        out["phi00+"] = _ket({"000": a0, "010": a1, "011": gr(na) / (ca0 + ca1)}, "phi00+")
        out["phi01+"] = _ket({"010": ca0, "000": -ca1, "100": gr(na) / (a0 - a1)}, "phi01+")
        out["psi10+"] = _ket({"101": b0, "111": b1, "110": gr(nb) / (cb0 + cb1)}, "psi10+")
        out["psi11+"] = _ket({"111": cb0, "101": -cb1, "001": gr(nb) / (b0 - b1)}, "psi11+")
    return out


def tau() -> PureState:
    """The product stopper ``|0+1>|0+1>|0+1>``."""
    return PureState.product(QUBITS3, [[1, 1]] * 3, "tau")


def kappa() -> PureState:
    """``|0+1>_B (|00>+|01>+|10>-|11>)_CA``: every amplitude 1 except ``a=c=1``."""
    amps = {}
    for a in range(2):
        for b in range(2):
            for c in range(2):
                amps[(a, b, c)] = -1 if (a == 1 and c == 1) else 1
    return PureState(QUBITS3, amps, "kappa")


def basis_b(a1, b1) -> StateSet:
    t = _tiles(a1, b1)
    order = ["phi00-", "phi00+", "phi01-", "phi01+", "psi10-", "psi10+", "psi11-", "psi11+"]
    return StateSet(QUBITS3, [t[k] for k in order], f"B(a1={gr(a1)},b1={gr(b1)})")


def set_s(a1, b1) -> StateSet:
    t = _tiles(a1, b1, plus=False)
    states = [t["phi00-"], t["phi01-"], t["psi10-"], t["psi11-"], tau()]
    return StateSet(QUBITS3, states, f"S(a1={gr(a1)},b1={gr(b1)})")


def set_sz(z) -> StateSet:
    z = gr(z)
    t = _tile_states(ONE, gr(-2), ONE, z, plus=False)
    states = [t["phi00-"], t["phi01-"], t["psi10-"], t["psi11-"], tau()]
    return StateSet(QUBITS3, states, f"S_z(z={z})")


def set_s0() -> StateSet:
    """The real point ``z = 0`` written with the sign convention ``|00-11>|1>``."""
    states = [
        _ket({"000": 1, "010": -2, "011": 1}, "phi00-"),
        _ket({"010": 1, "000": 2, "100": -3}, "phi01-"),
        _ket({"101": 1, "110": -1}, "psi10-"),
        _ket({"001": 1, "111": -1}, "psi11-"),
        tau(),
    ]
    return StateSet(QUBITS3, states, "S_0")


def ubb_u() -> StateSet:
    states = [
        _ket({"000": 1, "010": -2, "011": 1}, "phi00-"),
        _ket({"010": 1, "000": 2, "100": -3}, "phi01-"),
        _ket({"101": 1, "110": 1}, "psi10+"),
        _ket({"001": 1, "111": 1}, "psi11+"),
        kappa(),
    ]
    return StateSet(QUBITS3, states, "U")


def omega() -> StateSet:
    """Explicit basis of the orthogonal complement of :func:`ubb_u`."""
    states = [
        # |0>(|00> - 2|10> - 5|11>) - 3|1>(|01> - |10>)
        _ket({"000": 1, "010": -2, "011": -5, "101": -3, "110": 3}, "omega0"),
        # (6|00> + 3|01> + 5|10>)|0> + 7|1>(|01> - |10>)
        _ket({"000": 6, "010": 3, "100": 5, "101": 7, "110": -7}, "omega1"),
        # (|00> - |11>)|1> + |1>(|01> - |10>)
        _ket({"001": 1, "111": -1, "101": 1, "110": -1}, "omega2"),
    ]
    return StateSet(QUBITS3, states, "Omega")


def _single(state: PureState) -> StateSet:
    return StateSet(QUBITS3, [state], state.label)


FAMILIES = {
    "basis-B": lambda p: basis_b(_req(p, "a1"), _req(p, "b1")),
    "set-S": lambda p: set_s(_req(p, "a1"), _req(p, "b1")),
    "set-Sz": lambda p: set_sz(_req(p, "z")),
    "set-S0": lambda p: set_s0(),
    "ubb-U": lambda p: ubb_u(),
    "omega": lambda p: omega(),
    "tau": lambda p: _single(tau()),
    "kappa": lambda p: _single(kappa()),
}

_ALIASES = {
    "basis": "basis-B",
    "b": "basis-B",
    "set-s": "set-S",
    "s": "set-S",
    "set-sz": "set-Sz",
    "sz": "set-Sz",
    "set-s0": "set-S0",
    "s0": "set-S0",
    "ubb": "ubb-U",
    "ubb-u": "ubb-U",
    "u": "ubb-U",
    "omega": "omega",
    "tau": "tau",
    "kappa": "kappa",
}


def _req(params: dict, name: str):
    if params.get(name) is None:
        raise ParamConstraintViolated(f"parameter {name!r} is required")
    return params[name]


def canonical_family(family: str) -> str:
    if family in FAMILIES:
        return family
    key = _ALIASES.get(family.lower())
    if key is None:
        raise UnknownFamily(family)
    return key


def make_family(family: str, params: dict | None = None) -> StateSet:
    """Build a named state set; ``params`` values may be strings or exact scalars."""
    return FAMILIES[canonical_family(family)](params or {})


def sz_witness_matrix(z) -> Matrix:
    """Hermitian operator on ``BC`` that preserves orthogonality of ``S_z`` for real ``z``."""
    z = gr(z)
    z2, z3 = z * z, z * z * z
    e01 = -z2 + 2 * z + 2
    e02 = -z3 + 4 * z2 - 2 * z + 2
    e03 = -z3 + 3 * z2 + 3 * z - 2
    e12 = 2 * z2 - z + 2
    e13 = 5 * z2 - 4 * z + 2
    e23 = -z3 + 2 * z2 + 2
    return [
        [4 * z2 - 4 * z, e01, e02, e03],
        [e01, -2 * z3 + 4 * z2 + 2 * z - 4, e12, e13],
        [e02, e12, 2 * z2 + 2 * z - 4, e23],
        [e03, e13, e23, gr(0)],
    ]


def sz_witness_eigenvalues(z) -> tuple[GaussianRational, GaussianRational, GaussianRational]:
    """Closed-form eigenvalues ``(l0, l1, l2)``; ``l0`` is doubly degenerate."""
    z = gr(z)
    z2, z3 = z * z, z * z * z
    return (
        z3 - z2 + 3 * z - 6,
        -2 * z3 + 10 * z2 - z + 2,
        -2 * z3 + 2 * z2 - 5 * z + 2,
    )

"""Shipped golden state-set documents."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .families import make_family
from .states import StateSet, dump_state_set, load_state_set

# file stem -> (family, params)
EXAMPLES: dict[str, tuple[str, dict]] = {
    "B_a1=-2_b1=2": ("basis-B", {"a1": "-2", "b1": "2"}),
    "B_a1=3_b1=i": ("basis-B", {"a1": "3", "b1": "i"}),
    "Sz_z=0": ("set-Sz", {"z": "0"}),
    "Sz_z=1": ("set-Sz", {"z": "1"}),
    "Sz_z=i": ("set-Sz", {"z": "i"}),
    "Sz_z=1+i": ("set-Sz", {"z": "1+i"}),
    "Sz_z=-2": ("set-Sz", {"z": "-2"}),
    "S0": ("set-S0", {}),
    "U": ("ubb-U", {}),
    "Omega": ("omega", {}),
}


def data_dir() -> Path:
    return Path(str(resources.files("entangle_cert") / "data"))


def example_path(name: str) -> Path:
    return data_dir() / f"{name}.json"


def load_example(name: str) -> StateSet:
    return load_state_set(example_path(name).read_text())


def regenerate(target: Path | None = None) -> list[Path]:
    """Rewrite every golden document from its family definition."""
    target = target or data_dir()
    target.mkdir(parents=True, exist_ok=True)
    out = []
    for name, (family, params) in EXAMPLES.items():
        p = target / f"{name}.json"
        p.write_text(dump_state_set(make_family(family, params)))
        out.append(p)
    return out

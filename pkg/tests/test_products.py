import random

import pytest

from entangle_cert.families import set_s0
from entangle_cert.linalg import exact_rank
from entangle_cert.products import SpanDeficient, extended_stability_system, perturb, product_forming, quadratic_system, resolve_scope
from entangle_cert.states import Bipartition, reshape_bipartite


def test_product_forming_count_and_symmetry(U):
    b = Bipartition.of(U.spec, "A")
    mats = product_forming(U, b)
    assert len(mats) == 1 * 6
    assert all(len(m.entries) == len(U) for m in mats)


def test_quadratic_forms_vanish_exactly_on_product_combinations():
    ss = set_s0()
    sys = quadratic_system(ss)
    tau_only = [0, 0, 0, 0, 1]
    assert all(p.evaluate_exact(tau_only).is_zero() for p in sys.polys)
    rng = random.Random(3)
    for _ in range(20):
        x = [rng.randint(-3, 3) for _ in range(len(ss))]
        v = {}
        for c, s in zip(x, ss):
            for idx, a in s.amplitudes.items():
                v[idx] = v.get(idx, 0) + a * c
        product = all(
            exact_rank(reshape_bipartite(type(ss[0])(ss.spec, v), b)) <= 1 for b in resolve_scope(ss.spec, "all")
        )
        vanishes = all(p.evaluate_exact(x).is_zero() for p in sys.polys)
        assert product == vanishes


def test_scope_resolution(U):
    assert [b.label for b in resolve_scope(U.spec, "all")] == ["A|BC", "B|CA", "C|AB"]
    assert [b.label for b in resolve_scope(U.spec, "B|CA,A|BC")] == ["B|CA", "A|BC"]
    assert quadratic_system(U, "A|BC").scope == ["A|BC"]


def test_perturb_pins_and_renames(U):
    ps = perturb(quadratic_system(U), 4)
    assert ps.gens == ("x0", "x1", "x2", "x3") and ps.pinned == 4
    assert ps.full_point([1, 2, 3, 4]) == [1, 2, 3, 4, 1]
    with pytest.raises(IndexError):
        perturb(quadratic_system(U), 5)


def test_extended_system_requires_full_span(U, Omega):
    ext = extended_stability_system(U, Omega, 4)
    assert len(ext.gens) == 7
    with pytest.raises(SpanDeficient):
        extended_stability_system(U, Omega.subset([0]), 4)

import json

import pytest

from entangle_cert import load_state_set, make_family
from entangle_cert.examples import EXAMPLES, example_path, load_example
from entangle_cert.exact import ParseError, gr
from entangle_cert.families import ParamConstraintViolated, UnknownFamily, kappa, tau
from entangle_cert.states import (
    Bipartition,
    InvariantViolation,
    PartySpec,
    PureState,
    SpecMismatch,
    StateSet,
    all_bipartitions,
    dump_state_set,
    inner_product,
    is_biseparable,
    is_product_across,
    single_party_cuts,
)

Q3 = PartySpec((2, 2, 2))


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_shipped_documents_round_trip_byte_identical(name):
    text = example_path(name).read_text()
    assert dump_state_set(load_state_set(text)) == text


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_shipped_documents_match_family_definitions(name):
    family, params = EXAMPLES[name]
    assert dump_state_set(make_family(family, params)) == example_path(name).read_text()


@pytest.mark.parametrize("name", [n for n in EXAMPLES if n != "Omega"])
def test_shipped_sets_are_orthogonal(name):
    assert load_example(name).is_orthogonal()


def test_basis_family_is_a_full_orthogonal_basis():
    b = make_family("basis-B", {"a1": "3", "b1": "i"})
    assert len(b) == 8 and b.is_orthogonal() and b.rank() == 8


def test_basis_parameter_constraint():
    with pytest.raises(ParamConstraintViolated):
        make_family("basis", {"a1": "-2", "b1": "1"})
    with pytest.raises(ParamConstraintViolated):
        make_family("set-Sz", {})
    with pytest.raises(UnknownFamily):
        make_family("nope")


def test_tau_is_product_and_kappa_biseparable():
    assert all(is_product_across(tau(), b) for b in single_party_cuts(Q3))
    assert is_biseparable(kappa())
    assert not is_product_across(kappa(), Bipartition.of(Q3, "A"))


def test_bipartitions():
    assert [b.label for b in single_party_cuts(Q3)] == ["A|BC", "B|CA", "C|AB"]
    assert len(all_bipartitions(Q3)) == 3
    assert len(all_bipartitions(PartySpec((2, 2, 2, 2)))) == 7
    b = Bipartition.of(Q3, "B")
    assert b.dims == (2, 4)


def test_inner_product_is_sesquilinear():
    a = PureState(Q3, {(0, 0, 0): gr("i")})
    b = PureState(Q3, {(0, 0, 0): gr(1)})
    assert inner_product(a, b) == gr("-i")
    assert inner_product(b, a) == gr("i")


def test_spec_mismatch():
    other = PureState(PartySpec((2, 3)), {(0, 2): 1})
    with pytest.raises(SpecMismatch):
        StateSet(Q3, [tau(), other])


def test_invalid_amplitude_index():
    with pytest.raises(ValueError):
        PureState(Q3, {(0, 0, 2): 1})


def test_load_reports_line_and_column():
    text = '{\n  "dims": [2, 2],\n  "states": [{"terms": [{"index": [0, 0], "amp": "1+"}]}]\n}\n'
    with pytest.raises(ParseError) as info:
        load_state_set(text)
    assert info.value.line == 3
    with pytest.raises(ParseError) as info:
        load_state_set('{"dims": [2,2],\n  ')
    assert info.value.line == 2


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"states": []},
        {"dims": [2], "states": []},
        {"dims": [2, 2], "states": [{"label": "x"}]},
        {"dims": [2, 2], "states": [{"terms": [{"amp": "1"}]}]},
    ],
)
def test_malformed_documents(doc):
    with pytest.raises(ParseError):
        load_state_set(json.dumps(doc))


def test_asserted_orthogonality_is_checked():
    doc = {
        "dims": [2, 2],
        "orthogonal": True,
        "states": [
            {"terms": [{"index": [0, 0], "amp": "1"}]},
            {"terms": [{"index": [0, 0], "amp": "1"}, {"index": [1, 1], "amp": "1"}]},
        ],
    }
    with pytest.raises(InvariantViolation):
        load_state_set(json.dumps(doc))

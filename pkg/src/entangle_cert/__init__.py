"""Exact certification of entanglement and local irreducibility for small multipartite state sets."""

from .certificate import Certificate, Verdict
from .certify import (
    build_opm_witness,
    certify_ces,
    certify_distillable,
    certify_ges,
    certify_opm,
    certify_qces,
    certify_split,
    certify_stability,
    certify_ubb,
    orthogonal_complement,
    run_report,
)
from .exact import GaussianRational, ParseError, gr, gr_arith, parse_gr
from .families import make_family
from .features import certify_strong_nonlocality, no_go_first_move, reduced_feature
from .groebner import buchberger, contains_one, eliminate_to_univariate, reduce
from .poly import MultiPoly, parse_poly
from .products import perturb, product_forming, quadratic_system
from .states import Bipartition, PartySpec, PureState, StateSet, dump_state_set, load_state_set

__version__ = "0.1.0"

__all__ = [
    "Bipartition",
    "Certificate",
    "GaussianRational",
    "MultiPoly",
    "ParseError",
    "PartySpec",
    "PureState",
    "StateSet",
    "Verdict",
    "build_opm_witness",
    "buchberger",
    "certify_ces",
    "certify_distillable",
    "certify_ges",
    "certify_opm",
    "certify_qces",
    "certify_split",
    "certify_stability",
    "certify_strong_nonlocality",
    "certify_ubb",
    "contains_one",
    "dump_state_set",
    "eliminate_to_univariate",
    "gr",
    "gr_arith",
    "load_state_set",
    "make_family",
    "no_go_first_move",
    "orthogonal_complement",
    "parse_gr",
    "parse_poly",
    "perturb",
    "product_forming",
    "quadratic_system",
    "reduce",
    "reduced_feature",
    "run_report",
]

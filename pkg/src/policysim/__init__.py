"""Similarity analysis of XACML policies through SePL terms and boolean rings."""
from .errors import PolicyError
from .model import (
    AttributeSchema, ConstraintTuple, Decision, Request, TriBool, Verdict,
    classify_decision, show_term, tuple_complement,
)
from .semantics import absolute_semantics, eval_request, expand_abbreviations
from .atomizer import atomize
from .ring import algebra_to_ring, is_contradiction, is_tautology, normalize, sempair_to_terms
from .rewrite import rewrite
from .similarity import Relation, SimilarityReport, classify, classify_terms, compare_terms, find_witness
from .xacml import build_schema, encode_combiner, parse_xacml, to_sepl, to_xml

__version__ = "0.1.0"

__all__ = [
    "PolicyError", "AttributeSchema", "ConstraintTuple", "Decision", "Request", "TriBool",
    "Verdict", "classify_decision", "show_term", "tuple_complement", "absolute_semantics",
    "eval_request", "expand_abbreviations", "atomize", "algebra_to_ring", "is_contradiction",
    "is_tautology", "normalize", "sempair_to_terms", "rewrite", "Relation", "SimilarityReport",
    "classify", "classify_terms", "compare_terms", "find_witness", "build_schema",
    "encode_combiner", "parse_xacml", "to_sepl", "to_xml",
]

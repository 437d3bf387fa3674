"""Canonical sequent calculi with (n,k)-ary quantifiers.

Coherence checking, the characteristic two-valued Nmatrix, proof checking
and bounded proof search, and finite countermodel search.
"""

from .calculus import Calculus, CanonicalRule, check_simple, dual_pairs, rnm, validate
from .coherence import is_coherent
from .frontend import (ParseError, parse_calculus, parse_formula, parse_proof,
                       parse_sequent, render)
from .nmatrix import ConflictWitness, TwoNmatrix, build_mg
from .proof import check_proof, cut_analysis, search_proof
from .semantics import find_countermodel

__all__ = [
    "Calculus", "CanonicalRule", "ConflictWitness", "ParseError", "TwoNmatrix",
    "build_mg", "check_proof", "check_simple", "cut_analysis", "dual_pairs",
    "find_countermodel", "is_coherent", "parse_calculus", "parse_formula",
    "parse_proof", "parse_sequent", "render", "rnm", "search_proof", "validate",
]

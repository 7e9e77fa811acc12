"""Exact computation with finitely generated multiplicative groups of rationals.

Exponents live in a field K (Q, Q(t) or Q[t]/(p)); the package covers linear
dimensions, basic K-tori, coset constraint calculus, bounded Mann-equation
solving, Mordell-Lang covers of linear varieties and axiom instance audits.
"""
from .audit import a3_index_check, a4_emptiness, density_check, schanuel_audit
from .cosets import And, CosetConstraint, CosetUnion, Not, Or, coset_member, coset_normalize, parse_constraints
from .errors import QTorusError
from .kfield import FORMAL_TAU, RATIONAL, FieldMode, KScalar, parse_scalar
from .mann import MannProblem, enumerate_solutions, nondegeneracy_check, stabilization_report
from .mlcover import VarietySpec, compute_ml_cover, emit_ml_axiom, special_pair_check, verify_cover
from .multgroup import (
    GroupElement,
    GroupPresentation,
    ldim_k,
    lfo,
    purity_closure,
    subgroup_index,
    validate_basis,
)
from .torus import TorusSpec, is_q_torus, minimal_torus, torus_dim, torus_fiber

__version__ = "0.1.0"

__all__ = [
    "And", "CosetConstraint", "CosetUnion", "FORMAL_TAU", "FieldMode", "GroupElement",
    "GroupPresentation", "KScalar", "MannProblem", "Not", "Or", "QTorusError", "RATIONAL",
    "TorusSpec", "VarietySpec", "a3_index_check", "a4_emptiness", "compute_ml_cover",
    "coset_member", "coset_normalize", "density_check", "emit_ml_axiom", "enumerate_solutions",
    "is_q_torus", "ldim_k", "lfo", "minimal_torus", "nondegeneracy_check", "parse_constraints",
    "parse_scalar", "purity_closure", "schanuel_audit", "special_pair_check",
    "stabilization_report", "subgroup_index", "torus_dim", "torus_fiber", "validate_basis",
    "verify_cover",
]

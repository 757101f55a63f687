"""Automated theorem proving for plane geometry constructions.

Constructions are translated into polynomial hypotheses over the rationals
and statements are decided by Gröbner basis elimination.
"""

from .dsl import DSLError, format_construction, parse_construction, parse_file
from .geomodel import Construction, ConstructionError, Statement
from .polycore import MonomialOrder, Polynomial, Variable
from .prover import ProofTask, ProverConfig, ProverResult, prove

__all__ = [
    "Construction", "ConstructionError", "DSLError", "MonomialOrder", "Polynomial", "ProofTask",
    "ProverConfig", "ProverResult", "Statement", "Variable", "format_construction",
    "parse_construction", "parse_file", "prove",
]
__version__ = "0.1.0"

"""
Domain Models Package
---------------------
Immutable formulas, sequents, proof trees, deduction trees and result values.
"""
from app.models.formula import Atom, Imp, Fusion, Truth, TRUTH, Formula, SubformulaTable, subformulas
from app.models.sequent import Sequent, FocusSequent
from app.models.proof import LrProof, FrProof
from app.models.derivation import Configuration, DeductionTree, VectorTree, DerivableSet
from app.models.results import ProofResult, SolveResult, NOT_PROVABLE, NOT_PROVABLE_WITHIN_DEPTH

__all__ = [
    'Atom', 'Imp', 'Fusion', 'Truth', 'TRUTH', 'Formula', 'SubformulaTable', 'subformulas',
    'Sequent', 'FocusSequent',
    'LrProof', 'FrProof',
    'Configuration', 'DeductionTree', 'VectorTree', 'DerivableSet',
    'ProofResult', 'SolveResult', 'NOT_PROVABLE', 'NOT_PROVABLE_WITHIN_DEPTH',
]

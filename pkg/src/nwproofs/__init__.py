"""A proof kernel for regular non-wellfounded sequent proofs.

Proofs live at rest as finite coalgebras (states destructing to a
labelled fragment plus links), are checked fragment by fragment against
a local-progress calculus, and are translated corecursively one
fragment at a time.  The bundled instance is the box-modal calculus of
Grzegorczyk logic with full cut elimination.
"""

from .trees import STAR, TreeNW, Truncation, validate_tree_nw
from .coalgebra import (
    Coalgebra,
    UnfoldBudget,
    Unfolding,
    bisim_minimize,
    canonical_form,
    unfold,
)
from .fftree import FFTree, construct, validate_fftree
from .calculus import (
    CheckReport,
    LocalProgressCalculus,
    ProofGraph,
    check_proof_fragment,
    check_proof_graph,
    check_pre_proof,
    compute_fragmentation,
    progressing,
    subproof,
)
from .translate import (
    StagedStep,
    StepContractViolation,
    TranslationStep,
    extend,
    extend_staged,
    identity_step,
    validate_step,
)
from .search import SearchBudget, generate_corpus, search

__all__ = [
    "STAR",
    "TreeNW",
    "Truncation",
    "validate_tree_nw",
    "Coalgebra",
    "UnfoldBudget",
    "Unfolding",
    "bisim_minimize",
    "canonical_form",
    "unfold",
    "FFTree",
    "construct",
    "validate_fftree",
    "CheckReport",
    "LocalProgressCalculus",
    "ProofGraph",
    "check_proof_fragment",
    "check_proof_graph",
    "check_pre_proof",
    "compute_fragmentation",
    "progressing",
    "subproof",
    "StagedStep",
    "StepContractViolation",
    "TranslationStep",
    "extend",
    "extend_staged",
    "identity_step",
    "validate_step",
    "SearchBudget",
    "generate_corpus",
    "search",
]
